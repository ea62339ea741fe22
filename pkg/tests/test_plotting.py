import re

import pytest

from hhlcert.errors import ConfigurationError, InputError
from hhlcert.plotting import emit_plot, write_plot
from hhlcert.sim import scaling_sweep


def _rows():
    t = scaling_sweep([2.0, 10.0], [300.0, 3000.0, 30000.0], seeds=range(3), n=3)
    return [r.row() for r in t.rows]


def test_scaling_plot_deterministic_with_slopes():
    rows = _rows()
    a, b = emit_plot(rows, "scaling"), emit_plot(_rows(), "scaling")
    assert a == b
    assert a.startswith("<svg") and a.rstrip().endswith("</svg>")
    assert len(re.findall(r"slope -?\d", a)) == 2
    assert a.count("<circle") == len(rows)


def test_single_row_gets_margin():
    svg = emit_plot([{"t0": 100.0, "error_norm": 0.01, "kappa": 2.0}], "scaling")
    assert svg.count("<circle") == 1 and "slope" not in svg
    cx, cy = map(float, re.search(r'circle cx="([\d.]+)" cy="([\d.]+)"', svg).groups())
    # the lone marker sits at the centre of the padded frame
    assert cx == pytest.approx((72 + 616) / 2) and cy == pytest.approx((364 + 40) / 2)


def test_sup_ratio_plot():
    rows = [{"inequality": "lemma3", "case": str(c), "sup": s, "claimed": 8.0}
            for c, s in ((3, 7.9), (7, 9.0))]
    svg = emit_plot(rows, "sup-ratio")
    assert svg.count("<rect") == 2 + 2  # background, frame, two bars
    assert "#d62728" in svg  # the bar above its claim is highlighted


def test_errors_and_no_file(tmp_path):
    p = tmp_path / "x.svg"
    with pytest.raises(InputError):
        write_plot(str(p), [], "scaling")
    assert not p.exists()
    with pytest.raises(ConfigurationError):
        emit_plot([{"t0": 1.0, "error_norm": 1.0}], "pie")
    with pytest.raises(InputError):
        emit_plot([{"t0": 1.0, "error_norm": 0.0}], "scaling")
