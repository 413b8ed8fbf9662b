import json
import math

import numpy as np
import pytest

from ghz_noise.analytic_dynamics import FGM, PLM, PURE_FG, PURE_PL, witness_crossing
from ghz_noise.monte_carlo import McConfig
from ghz_noise.noise_kernels import FgKernel, PlKernel
from ghz_noise.sweeps import (
    PRESETS,
    ConfigError,
    ResultTable,
    SweepSpec,
    default_tau_max,
    emit_csv,
    parse_config,
    preset_spec,
    run_sweep,
    table_to_csv,
)

MINIMAL_FG = """
noise = pure-fg   # fractional Gaussian
hurst = 0.5
tau_max = 3
tau_steps = 50
"""


def test_parse_minimal_fg():
    spec = parse_config(MINIMAL_FG)
    assert spec.config.kind == PURE_FG
    assert spec.config.kernels == (FgKernel(0.5),) * 3
    assert spec.tau_max == 3.0 and spec.tau_steps == 50 and spec.r == 1.0
    assert spec.mc is None
    assert spec.grid[0] == 0.0 and spec.grid[-1] == 3.0 and spec.grid.size == 50


def test_parse_json_equivalent():
    text = json.dumps({"noise": "pure-fg", "hurst": 0.5, "tau_max": 3, "tau_steps": 50})
    assert parse_config(text) == parse_config(MINIMAL_FG)


def test_parse_preset_fig2():
    spec = parse_config("preset = fig2")
    assert spec.config.kind == PURE_PL
    assert spec.config.kernels[0] == PlKernel(1e-2, 2.1)


def test_parse_mc_and_seed():
    spec = parse_config(MINIMAL_FG + "mc_trajectories = 5000\nseed = 42\nout = x.csv\n")
    assert spec.mc == McConfig(n_trajectories=5000, seed=42)
    assert spec.output_path == "x.csv"


@pytest.mark.parametrize(
    "text, key",
    [
        ("noise = pure-fg\nhurst = 1.5", "hurst"),
        ("noise = pure-fg", "hurst"),
        ("noise = pure-pl\ng = 1\nalpha = 1.9", "alpha"),
        ("noise = pure-pl\ng = -1\nalpha = 3", "g"),
        ("noise = pure-fg\nhurst = 0.5\ncolour = red", "colour"),
        ("noise = pink\nhurst = 0.5", "noise"),
        ("preset = fig10", "preset"),
        ("preset = fig2\nhurst = 0.3", "hurst"),
        ("noise = pure-fg\nhurst = 0.5\ng = 1", "g"),
        ("noise = pure-fg\nhurst = 0.5\nr = 2", "r"),
        ("noise = pure-fg\nhurst = 0.5\ntau_steps = 1", "tau_steps"),
        ("noise = pure-fg\nhurst = 0.5\ntau_max = abc", "tau_max"),
        ("noise = pure-fg\nhurst = 0.5\nmc_trajectories = 10", "mc_trajectories"),
        ("noise = pure-fg\nhurst = 0.5\nhurst = 0.4", "hurst"),
        ("hurst = 0.5", "noise"),
    ],
)
def test_parse_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key == key
    assert key in str(info.value)


def test_parse_malformed_line():
    with pytest.raises(ConfigError):
        parse_config("noise pure-fg")
    with pytest.raises(ConfigError):
        parse_config("{not json")


def test_preset_table_parameters():
    assert PRESETS["fig3"][0][1].kernels == (FgKernel(0.5),) * 3
    assert PRESETS["fig4"][0][1].kernels == (PlKernel(1.0, 3.0), PlKernel(1.0, 3.0), FgKernel(0.1))
    assert PRESETS["fig5"][0][1].kernels == (FgKernel(0.9), FgKernel(0.9), PlKernel(0.1, 3.0))
    assert [c.kernels[2].hurst for _, c in PRESETS["fig8"]] == [0.1] * 4
    assert [c.kernels[0].g for _, c in PRESETS["fig8"]] == [1e-2, 1e-1, 1.0, 10.0]
    assert [c.kernels[0].hurst for _, c in PRESETS["fig9"]] == [1e-2, 0.2, 0.5, 0.9]
    assert all(c.kernels[2] == PlKernel(1e-3, 3.0) for _, c in PRESETS["fig9"])
    assert {c.kind for _, c in PRESETS["fig7"]} == {PLM, FGM}
    assert all(len(v) == 4 for k, v in PRESETS.items() if k in ("fig6", "fig7", "fig8", "fig9"))


def test_default_tau_max_reaches_asymptote():
    variants = PRESETS["fig3"]
    tau_max = default_tau_max(variants)
    assert tau_max == pytest.approx(witness_crossing(variants[0][1], -0.25 + 1e-3))
    spec = preset_spec("fig3")
    assert spec.tau_max == tau_max
    assert spec.tau_steps == 200


def test_fig3_first_row():
    table = run_sweep(preset_spec("fig3"))
    assert table.header == ["tau", "E_analytic", "P_analytic", "D_analytic"]
    assert table.rows[0] == pytest.approx((0.0, 0.5, 1.0, 0.0), abs=1e-12)
    e = [row[1] for row in table.rows]
    assert all(b <= a for a, b in zip(e, e[1:]))
    assert e[-1] == pytest.approx(-0.25, abs=1.1e-3)


def test_fig9_has_four_sub_sweeps():
    table = run_sweep(preset_spec("fig9", tau_steps=5))
    assert table.header[0] == "variant"
    labels = [row[0] for row in table.rows]
    assert sorted(set(labels)) == sorted(["H=0.01", "H=0.2", "H=0.5", "H=0.9"])
    assert len(table.rows) == 20


def test_werner_sweep_initial_row():
    spec = parse_config(MINIMAL_FG + "r = 0.5\n")
    table = run_sweep(spec)
    # E(0) = r + (1 - r)/8 - 1/2
    assert table.rows[0][1] == pytest.approx(0.5 + 0.5 / 8 - 0.5, abs=1e-12)
    # P(0) = r^2 + (1 - r^2)/8
    assert table.rows[0][2] == pytest.approx(0.25 + 0.75 / 8, abs=1e-12)


def test_mc_columns():
    spec = SweepSpec(PRESETS["fig3"], tau_max=1.0, tau_steps=4, mc=McConfig(2000, seed=1))
    table = run_sweep(spec)
    assert table.header[-4:] == ["E_mc", "P_mc", "D_mc", "max_entry_stderr"]
    first = table.rows[0]
    assert first[4:7] == pytest.approx((0.5, 1.0, 0.0), abs=1e-12)
    for row in table.rows:
        assert abs(row[1] - row[4]) < 0.05


def test_csv_format(tmp_path):
    table = ResultTable(["tau", "E"], [(0.0, 1 / 3), (1.0, -0.0)])
    path = tmp_path / "t.csv"
    emit_csv(table, path)
    data = path.read_bytes()
    assert data == b"tau,E\n0,0.333333333333\n1,0\n"
    assert len(data.decode().splitlines()) == 3
    emit_csv(table, path)
    assert path.read_bytes() == data


def test_fig2_csv_first_line(tmp_path):
    path = tmp_path / "fig2.csv"
    emit_csv(run_sweep(preset_spec("fig2", tau_steps=3)), path)
    lines = path.read_text().split("\n")
    assert lines[0] == "tau,E_analytic,P_analytic,D_analytic"
    assert lines[1] == "0,0.5,1,0"


def test_csv_values_round_trip():
    table = run_sweep(preset_spec("fig4", tau_steps=20))
    parsed = [list(map(float, line.split(","))) for line in table_to_csv(table).splitlines()[1:]]
    np.testing.assert_allclose(parsed, [list(r) for r in table.rows], rtol=1e-11, atol=1e-300)


def test_emit_csv_reports_path(tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError) as info:
        emit_csv(ResultTable(["tau"], [(0.0,)]), bad)
    assert str(bad) in str(info.value)


def test_mc_csv_identical_across_workers():
    spec = SweepSpec(PRESETS["fig4"], tau_max=2.0, tau_steps=5, mc=McConfig(9000, seed=3))
    texts = {table_to_csv(run_sweep(spec, workers=w)) for w in (1, 3)}
    assert len(texts) == 1


def test_spec_validation():
    with pytest.raises(ConfigError):
        SweepSpec(())
    with pytest.raises(ConfigError):
        SweepSpec(PRESETS["fig3"], tau_max=-1)
    assert math.isfinite(preset_spec("fig6").tau_max)
