"""Batch front-end: ``hhlcert {certify,simulate,sweep,prove,gap-demo}``.

Settings come from built-in defaults, then an optional flat ``key = value``
config file, then command-line flags.  Reports are written as
``<command>-<hash>.csv`` and ``.jsonl`` where the hash is taken over the
effective configuration, so reruns overwrite rather than accumulate.

Exit status: 0 all checks pass, 2 some check failed or was left
undecided, 1 usage/configuration error, 3 numerical-engine failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from dataclasses import dataclass

from . import certifier, sim
from .certifier import prover
from .certifier.report import PASS
from .errors import ConfigurationError, HHLCertError, NumericalError
from .plotting import write_plot
from .qpe import KernelKind

COMMANDS = ("certify", "simulate", "sweep", "prove", "gap-demo")
EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_NUMERIC = 0, 1, 2, 3
GAP_THRESHOLD = 0.2499


@dataclass(frozen=True)
class RunConfig:
    command: str
    kappa: tuple = (2.0,)
    t0: tuple = (1000.0,)
    kernel: str = "nearest"
    grid: int = 2000
    seeds: int = 1
    jobs: int = 1
    out: str = "."
    tol: float = 1e-6
    n: int = 4
    budget: int = 10**6
    family: str = "well"
    radius: int = 4
    lo: float = 1e-3
    plot: bool = True

    def __post_init__(self):
        def need(ok, msg):
            if not ok:
                raise ConfigurationError(msg)

        need(self.command in COMMANDS, f"unknown command {self.command!r}")
        need(len(self.kappa) > 0 and all(1.0 <= k <= 1e6 for k in self.kappa),
             "kappa values must lie in [1, 1e6]")
        need(len(self.t0) > 0 and all(0.0 < t <= 1e9 for t in self.t0),
             "t0 values must lie in (0, 1e9]")
        KernelKind.parse(self.kernel)
        need(2 <= self.grid <= 20000, "grid must lie in [2, 20000]")
        need(1 <= self.seeds <= 10**6, "seeds must lie in [1, 1e6]")
        need(1 <= self.jobs <= 256, "jobs must lie in [1, 256]")
        need(0.0 <= self.tol < 1.0, "tol must lie in [0, 1)")
        need(1 <= self.n <= 512, "n must lie in [1, 512]")
        need(self.budget >= 1, "budget must be positive")
        need(self.family in sim.FAMILIES, f"family must be one of {sim.FAMILIES}")
        need(0 <= self.radius <= 64, "radius must lie in [0, 64]")
        need(0.0 < self.lo < 1.0, "lo must lie in (0, 1)")

    def digest(self) -> str:
        """Hash of everything that affects results (not the output dir or worker count)."""
        d = dataclasses.asdict(self)
        for k in ("out", "jobs", "plot"):
            d.pop(k)
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:10]


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in str(text).split(",") if x.strip())


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_PARSERS = {
    "command": str, "kappa": _floats, "t0": _floats, "kernel": str, "grid": int,
    "seeds": int, "jobs": int, "out": str, "tol": float, "n": int, "budget": int,
    "family": str, "radius": int, "lo": float, "plot": _bool,
}


def _typed(key: str, value):
    if key not in _PARSERS:
        raise ConfigurationError(f"unknown config key {key!r}")
    try:
        return _PARSERS[key](value)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad value for {key}: {value!r} ({exc})") from None


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = _typed(key, value)
    return out


def load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hhlcert", description="Certify the HHL filter inequalities and "
                "check the state-error bound on simulated instances.",
                argument_default=argparse.SUPPRESS)
    p.add_argument("command", nargs="?", choices=COMMANDS, default=None)
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--kappa", help="comma-separated condition-number parameters")
    p.add_argument("--t0", help="comma-separated evolution times")
    p.add_argument("--kernel", choices=[k.value for k in KernelKind])
    p.add_argument("--grid", help="lambda samples for the sampled certifier")
    p.add_argument("--seeds", help="number of random instances per setting")
    p.add_argument("--jobs", help="worker threads")
    p.add_argument("--out", help="output directory")
    p.add_argument("--tol", help="relative slack when comparing against a claimed constant")
    p.add_argument("--n", help="matrix dimension for simulate/sweep")
    p.add_argument("--budget", help="box budget for prove")
    p.add_argument("--family", choices=sim.FAMILIES)
    p.add_argument("--radius", help="kernel support radius in bins")
    p.add_argument("--lo", help="lower end of the proved lambda square")
    p.add_argument("--plot", help="write SVG plots (true/false)")
    return p


def resolve_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    merged = {}
    if "config" in ns:
        merged.update(load_config_file(ns.pop("config")))
    for key, value in ns.items():
        if value is not None:
            merged[key] = _typed(key, value)
    if "command" not in merged:
        raise _UsageError("no command given")
    return RunConfig(**merged)


# -- commands ---------------------------------------------------------------

def _certify(cfg: RunConfig) -> list:
    reps = []
    for kap in cfg.kappa:
        reps.append(certifier.certify_lipschitz(kap, cfg.grid, cfg.tol, cfg.jobs))
        reps += certifier.certify_lemma2(kap, cfg.grid, cfg.tol, cfg.jobs)
        for t0 in cfg.t0:
            reps += certifier.certify_lemma3(kap, t0, cfg.grid, cfg.tol, cfg.jobs)
    return reps


def _prove(cfg: RunConfig) -> list:
    reps = []
    for kap in cfg.kappa:
        for ineq in ("lemma1", "lemma2"):
            reps += prover.prove_square(ineq, kap, cfg.lo, 1.0, cfg.budget, slack=max(cfg.tol, 1e-12))
        reps += prover.prove_square("lemma3", kap, cfg.lo, 1.0, cfg.budget, t0=cfg.t0[0],
                                    slack=max(cfg.tol, 1e-12))
    return reps


def _reports_out(cfg, reps, stem) -> tuple[int, list]:
    path = os.path.join(cfg.out, stem)
    with open(path + ".csv", "w") as fh:
        fh.write(certifier.to_csv(reps))
    with open(path + ".jsonl", "w") as fh:
        fh.write(certifier.to_jsonl(reps))
    files = [path + ".csv", path + ".jsonl"]
    if cfg.plot and reps:
        rows = [{"inequality": r.inequality, "case": r.case, "sup": r.sup, "claimed": r.claimed}
                for r in reps if r.kappa == cfg.kappa[0]]
        files.append(write_plot(path + ".svg", rows, "sup-ratio",
                                title=f"{cfg.command}: sup ratio per case, kappa={cfg.kappa[0]:g}"))
    ok = all(r.status == PASS for r in reps)
    return (EXIT_OK if ok else EXIT_FAIL), files


def _simulate(cfg: RunConfig) -> sim.SweepTable:
    return sim.scaling_sweep(cfg.kappa, cfg.t0, cfg.kernel, range(cfg.seeds), cfg.n,
                             cfg.family, radius=cfg.radius, jobs=cfg.jobs)


def _table_out(cfg, table: sim.SweepTable, stem, plot: bool) -> tuple[int, list]:
    path = os.path.join(cfg.out, stem)
    with open(path + ".csv", "w") as fh:
        fh.write(table.to_csv())
    with open(path + ".jsonl", "w") as fh:
        for r in table.rows:
            fh.write(json.dumps(r.row(), sort_keys=True) + "\n")
        fits = {"slopes_t0": {repr(k): v for k, v in table.slopes_t0.items()},
                "slopes_kappa": {repr(k): v for k, v in table.slopes_kappa.items()}}
        fh.write(json.dumps({"fits": fits}, sort_keys=True) + "\n")
    files = [path + ".csv", path + ".jsonl"]
    if plot:
        rows = [r.row() for r in table.rows if r.overlap.error_norm > 0]
        if rows:
            files.append(write_plot(path + ".svg", rows, "scaling",
                                    title=f"worst-case state error, kernel={cfg.kernel}"))
    return (EXIT_OK if table.all_pass else EXIT_FAIL), files


def _gap(cfg: RunConfig) -> tuple[int, list]:
    path = os.path.join(cfg.out, f"gap-demo-{cfg.digest()}")
    reps = []
    for kap in cfg.kappa:
        reps += certifier.demonstrate_original_gap(kap, cfg.grid)
    cols = ["case", "kappa", "max_contribution", "max_fraction", "lambda", "lambda_tilde",
            "samples"]
    with open(path + ".csv", "w") as fh:
        fh.write(",".join(cols) + "\n")
        for r in reps:
            d = r.to_dict()
            fh.write(",".join("" if d[c] is None else repr(d[c]) if isinstance(d[c], float)
                              else str(d[c]) for c in cols) + "\n")
    with open(path + ".jsonl", "w") as fh:
        for r in reps:
            fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    ok = all(r.max_contribution >= GAP_THRESHOLD for r in reps if r.case == 3)
    return (EXIT_OK if ok else EXIT_FAIL), [path + ".csv", path + ".jsonl"]


def run(cfg: RunConfig) -> tuple[int, list]:
    """Execute ``cfg`` and return ``(exit status, written files)``."""
    os.makedirs(cfg.out, exist_ok=True)
    stem = f"{cfg.command}-{cfg.digest()}"
    if cfg.command == "certify":
        return _reports_out(cfg, _certify(cfg), stem)
    if cfg.command == "prove":
        return _reports_out(cfg, _prove(cfg), stem)
    if cfg.command == "simulate":
        return _table_out(cfg, _simulate(cfg), stem, plot=False)
    if cfg.command == "sweep":
        return _table_out(cfg, _simulate(cfg), stem, plot=cfg.plot)
    return _gap(cfg)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = resolve_config(argv)
    except _UsageError as exc:
        build_parser().print_help(sys.stderr)
        print(f"hhlcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"hhlcert: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        status, files = run(cfg)
    except NumericalError as exc:
        print(f"hhlcert: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (HHLCertError, ValueError) as exc:
        print(f"hhlcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for f in files:
        print(f)
    print("PASS" if status == EXIT_OK else "FAIL")
    return status


if __name__ == "__main__":
    sys.exit(main())
