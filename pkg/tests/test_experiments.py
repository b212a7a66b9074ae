import json

import pytest

from spectrum_split import analytic, experiments
from spectrum_split.experiments import Figure, SweepGrid, SweepSpec
from spectrum_split.params import NetworkParams
from spectrum_split.simulator import SimConfig


def fig2(n_max=20, mc=False, trials=5000, utils=(0.25, 0.5)):
    return SweepSpec(Figure.FIG2, SweepGrid(utils=utils, n_max=n_max), SimConfig(trials=trials), monte_carlo=mc)


def test_fig1_rows():
    rows = experiments.run_fig1([2.01, 3.0, 4.0])
    assert rows[0]["b_star"] < 0.05
    assert rows[1]["b_star"] == pytest.approx(1.26, abs=0.01)
    assert rows[2]["b_star"] == pytest.approx(2.30, abs=0.01)


def test_fig2_analytic_columns():
    rows = experiments.run_fig2(fig2())
    assert [r["n"] for r in rows] == list(range(1, 21)) * 2
    assert experiments.argmax_n(rows, "analytic_lambda", 0.25) == 9
    assert experiments.argmax_n(rows, "analytic_lambda", 0.5) == 5
    for util, n_star, penalty in ((0.25, 9, 2.0), (0.5, 5, 1.5)):
        col = {r["n"]: r["analytic_lambda"] for r in rows if r["util"] == util}
        assert col[n_star] / col[1] == pytest.approx(penalty, rel=0.1)
    # exact agreement with the analytic module
    p = NetworkParams.from_util(alpha=4.0, d=10.0, util=0.25)
    assert rows[8]["analytic_lambda"] == analytic.capacity_interference_limited(p, 9, 0.1).lam
    assert rows[0]["mc_inf_lambda"] is None


def test_ds_rows():
    spec = SweepSpec(Figure.DS_COMPARE, SweepGrid(utils=(0.25,), n_max=64))
    rows = experiments.run_ds_compare(spec)
    assert rows[0]["fh_over_ds"] == 1.0
    assert rows[8]["fh_over_ds"] == pytest.approx(9 ** 0.5, rel=1e-12)
    assert rows[15]["ds_lambda"] < rows[0]["ds_lambda"]


def test_ds_flat_at_low_rate():
    spec = SweepSpec(Figure.DS_COMPARE, SweepGrid(utils=(0.001,), n_max=10))
    rows = experiments.run_ds_compare(spec)
    assert rows[-1]["ds_lambda"] / rows[0]["ds_lambda"] == pytest.approx(1.0, rel=0.02)


def test_bounds_rows():
    rows = experiments.run_bounds_compare(SweepSpec(Figure.BOUNDS_COMPARE, SweepGrid(alphas=(3.0, 4.0))))
    assert [r["random_over_upper"] for r in rows] == pytest.approx([0.1, 0.1], rel=1e-14)
    assert 1.0 <= rows[1]["upper_over_lattice"] <= 3.0


def test_grid_validation():
    with pytest.raises(ValueError):
        SweepGrid(alphas=())
    with pytest.raises(ValueError):
        SweepGrid(n_max=257)
    with pytest.raises(ValueError):
        SweepGrid(alphas=(2.0,))


def test_spec_roundtrip():
    spec = fig2(mc=True)
    assert SweepSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec


def test_csv_and_sidecar(tmp_path):
    spec = fig2(n_max=3, mc=True, trials=4000, utils=(0.5,))
    rows = experiments.run_sweep(spec)
    path = experiments.write_sweep(spec, rows, tmp_path / "fig2.csv")
    text = path.read_text()
    assert text.splitlines()[0] == "n,util,analytic_lambda,mc_inf_lambda,mc_inf_stderr,mc_20db_lambda,mc_20db_stderr"
    side = json.loads(experiments.sidecar_path(path).read_text())
    assert side["seed"] == 0 and side["version"]
    again = experiments.load_sidecar(experiments.sidecar_path(path))
    rows2 = experiments.run_sweep(again)
    assert experiments.table_to_csv(rows2, experiments.FIG2_COLUMNS) == text


def test_write_needs_path():
    with pytest.raises(ValueError):
        experiments.write_sweep(fig2(), [])
