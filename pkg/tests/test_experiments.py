import math

import pytest

from qzeno import analytic
from qzeno.analytic import Branch
from qzeno.core import InvalidParameterError, SweepIOError, SystemParams
from qzeno.experiments import (
    Experiment,
    SweepSpec,
    emit,
    run_bell_prep,
    run_free_evolution,
    run_single_measurement,
    run_sweep,
    run_zeno_sweep,
)


def zeno_spec(**kwargs):
    kwargs.setdefault("c0_grid", (0.8,))
    return SweepSpec(Experiment.ZENO_SWEEP, **kwargs)


def test_zeno_sweep_rows():
    table = run_zeno_sweep(zeno_spec(n_max=100))
    assert table.columns == ("N", "C_N_minus", "C_N_plus")
    assert table.rows[0] == (1, 0.0, 0.0)
    assert table.rows[1][2] == pytest.approx(0.8, abs=1e-12)
    assert table.column("N") == list(range(1, 101))


def test_zeno_sweep_shape():
    table = run_zeno_sweep(zeno_spec(n_max=100))
    assert all(c <= 0.8 + 1e-12 for c in table.column("C_N_minus"))
    assert max(table.column("C_N_plus")) > 0.99


def test_zeno_sweep_freezes_at_large_n():
    last = run_zeno_sweep(zeno_spec(n_max=10 ** 4)).rows[-1]
    assert last[0] == 10 ** 4
    assert last[1] == pytest.approx(0.8, abs=1e-3)
    assert last[2] == pytest.approx(0.8, abs=1e-3)


def test_zeno_sweep_from_explicit_amplitudes():
    spec = zeno_spec(params=SystemParams(math.sqrt(0.8), math.sqrt(0.2)), n_max=4)
    assert run_zeno_sweep(spec).rows[3][2] == pytest.approx(0.9982, abs=1e-3)


def test_zeno_sweep_needs_single_c0():
    with pytest.raises(InvalidParameterError):
        run_zeno_sweep(zeno_spec(c0_grid=(0.2, 0.8)))


def test_free_evolution_rows():
    spec = SweepSpec(Experiment.FREE_EVOLUTION, c0_grid=(0.8,), time_points=3)
    table = run_free_evolution(spec)
    assert table.columns == ("gt", "c0", "C_f_plus", "C_f_plus_oracle")
    (gt0, _, c_start, _), (gt1, _, c_mid, _), (gt2, _, c_end, _) = table.rows
    assert (gt0, gt1, gt2) == (0.0, math.pi / 4, math.pi / 2)
    assert c_start == pytest.approx(0.8, abs=1e-12)
    assert c_mid == pytest.approx(0.0, abs=1e-12)
    assert c_end == 0.0


def test_free_evolution_oracle_column_agrees():
    spec = SweepSpec(Experiment.FREE_EVOLUTION, time_points=41)
    table = run_free_evolution(spec)
    assert len(table.rows) == 41 * 9
    for _, c0, expected, observed in table.rows:
        assert abs(expected - observed) <= 1e-8


def test_free_evolution_rows_sorted_by_time_then_c0():
    spec = SweepSpec(Experiment.FREE_EVOLUTION, c0_grid=(0.5, 0.1, 0.3), time_points=4)
    keys = [(gt, c0) for gt, c0, _, _ in run_free_evolution(spec).rows]
    assert keys == sorted(keys)


def test_free_evolution_minus_branch_column():
    spec = SweepSpec(Experiment.FREE_EVOLUTION, c0_grid=(0.6,), branch=Branch.MINUS, time_points=5)
    table = run_free_evolution(spec)
    assert table.columns[2] == "C_f_minus"
    assert all(c > 0 for c in table.column("C_f_minus")[:-1])


def test_single_measurement_rows():
    spec = SweepSpec(Experiment.SINGLE_MEASUREMENT, c0_grid=(0.8,), time_points=3)
    rows = run_single_measurement(spec).rows
    assert rows[0][2] == pytest.approx(0.8, abs=1e-12)
    assert rows[1][2] == pytest.approx(1.0, abs=1e-9)
    assert rows[1][3] == pytest.approx(1.0, abs=1e-9)
    assert rows[2][2] == 0.0
    assert rows[2][3] == pytest.approx(0.0, abs=1e-9)


def test_single_measurement_resurrection_region():
    spec = SweepSpec(Experiment.SINGLE_MEASUREMENT, time_points=51)
    for gt, c0, expected, observed in run_single_measurement(spec).rows:
        assert abs(expected - observed) <= 1e-8
        if analytic.sudden_death_time(c0) < gt < math.pi / 2:
            assert observed > 0


def test_single_measurement_rejects_minus_branch():
    spec = SweepSpec(Experiment.SINGLE_MEASUREMENT, branch=Branch.MINUS)
    with pytest.raises(InvalidParameterError):
        run_single_measurement(spec)


@pytest.mark.parametrize("alpha2, beta2", [(0.8, 0.2), (0.9, 0.1)])
def test_bell_prep(alpha2, beta2):
    report = run_bell_prep(SystemParams(math.sqrt(alpha2), math.sqrt(beta2)))
    assert report.final_concurrence == pytest.approx(1.0, abs=1e-9)
    assert report.survival_probability == pytest.approx(2 * beta2, abs=1e-9)
    if alpha2 == 0.8:
        assert report.t_star == pytest.approx(math.pi / 4, abs=1e-12)


def test_bell_prep_rejects_balanced_state():
    with pytest.raises(InvalidParameterError):
        run_bell_prep(SystemParams(1 / math.sqrt(2), 1 / math.sqrt(2)))


def test_run_sweep_dispatches_bell_prep():
    table = run_sweep(SweepSpec(Experiment.BELL_PREP, c0_grid=(0.8,)))
    assert table.columns == ("t_star", "gt_star", "survival_probability", "final_concurrence")
    assert table.rows[0][3] == pytest.approx(1.0, abs=1e-9)


def test_run_sweep_rejects_validate():
    with pytest.raises(InvalidParameterError):
        run_sweep(SweepSpec(Experiment.VALIDATE))


@pytest.mark.parametrize("kwargs", [
    {"c0_grid": ()},
    {"c0_grid": (0.0,)},
    {"c0_grid": (1.2,)},
    {"n_max": 0},
    {"time_points": 1},
    {"g": -1.0},
    {"workers": 0},
])
def test_sweep_spec_invariants(kwargs):
    with pytest.raises(InvalidParameterError):
        SweepSpec(Experiment.FREE_EVOLUTION, **kwargs)


def test_output_is_deterministic(tmp_path):
    paths = []
    for workers in (1, 1, 4):
        path = tmp_path / f"free_{len(paths)}.csv"
        spec = SweepSpec(Experiment.FREE_EVOLUTION, time_points=21, workers=workers,
                         output_path=str(path))
        emit(run_sweep(spec), spec.output_path)
        paths.append(path)
    first = paths[0].read_bytes()
    assert all(p.read_bytes() == first for p in paths[1:])


def test_csv_format(tmp_path):
    path = tmp_path / "zeno.csv"
    assert emit(run_zeno_sweep(zeno_spec(n_max=2)), str(path)) == 2
    lines = path.read_text().split("\n")
    assert lines[0] == "N,C_N_minus,C_N_plus"
    assert lines[1] == "1,0,0"
    n, minus, plus = lines[2].split(",")
    assert n == "2"
    assert float(plus) == pytest.approx(0.8, abs=1e-12)
    assert lines[-1] == ""


def test_emit_reports_unwritable_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(SweepIOError) as excinfo:
        emit(run_zeno_sweep(zeno_spec(n_max=2)), str(target))
    assert str(target) in str(excinfo.value)


def test_sweeps_accept_rounded_bell_state():
    bell = SystemParams(0.7071067811865476, 0.7071067811865476)
    zeno = run_zeno_sweep(zeno_spec(params=bell, n_max=2))
    assert zeno.rows[0] == (1, 0.0, 0.0)
    free = run_free_evolution(SweepSpec(Experiment.FREE_EVOLUTION, params=bell, time_points=2))
    assert free.column("c0") == [1.0, 1.0]
