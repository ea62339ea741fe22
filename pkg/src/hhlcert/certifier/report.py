"""Certification report records and their JSON-lines / CSV serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

CSV_COLUMNS = (
    "inequality", "case", "kappa", "t0", "sup", "claimed", "margin",
    "rigor", "lambda1", "lambda2", "samples", "status",
)

SAMPLED = "sampled"
PROVED = "interval-proved"

PASS, FAIL, INDETERMINATE = "PASS", "FAIL", "INDETERMINATE"


@dataclass(frozen=True)
class CertificationReport:
    inequality: str
    case: str  # "1".."9" or "global"
    kappa: float
    t0: float | None
    sup: float
    claimed: float
    rigor: str
    samples: int
    lambda1: float | None
    lambda2: float | None
    status: str
    tol: float = 1e-6

    @property
    def margin(self) -> float:
        return self.claimed - self.sup

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        d = asdict(self)
        d["margin"] = self.margin
        return d

    def row(self) -> list:
        d = self.to_dict()
        return [_fmt(d[c]) for c in CSV_COLUMNS]


def judge(sup: float, claimed: float, tol: float) -> str:
    """PASS iff sup <= claimed * (1 + tol); a zero constant must be met exactly."""
    if math.isnan(sup):
        return FAIL
    return PASS if sup <= claimed * (1.0 + tol) else FAIL


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_jsonl(reports) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in reports)


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def from_jsonl(text: str) -> list[CertificationReport]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        d.pop("margin", None)
        out.append(CertificationReport(**d))
    return out
