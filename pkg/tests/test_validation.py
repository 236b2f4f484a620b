import math

import pytest

from qzeno import oracle
from qzeno.validation import CHECKS, run_validate


@pytest.fixture(scope="module")
def report():
    return run_validate()


def test_full_suite_passes(report):
    assert [c.name for c in report.failures] == []
    assert report.passed
    assert len(report.checks) == len(CHECKS)


def test_report_rows(report):
    rows = report.as_rows()
    assert all(status == "pass" for _, _, _, status, _ in rows)
    assert report.check("swap_fidelity").max_deviation <= 1e-9
    assert report.check("free_evolution_oracle").max_deviation <= 1e-8


def flipped_b_coupling(g):
    h = (g * oracle.exchange(oracle.QUBIT_A_SMALL, oracle.QUBIT_A_BIG)
         - g * oracle.exchange(oracle.QUBIT_B_SMALL, oracle.QUBIT_B_BIG))
    return oracle.Hamiltonian16(h)


def test_flipped_coupling_fails_swap_check():
    result = run_validate(hamiltonian_factory=flipped_b_coupling,
                          only=["hamiltonian", "swap_fidelity"])
    assert result.check("hamiltonian").passed
    assert not result.check("swap_fidelity").passed
    assert not result.passed


def test_coarse_integrator_fails_closed_form_check():
    result = run_validate(evolve_method="rk4", step=0.1, only=["oracle_vs_closed_form"])
    check = result.check("oracle_vs_closed_form")
    assert not check.passed
    assert check.max_deviation > 1e-9


def test_analytic_checks_ignore_oracle_configuration():
    result = run_validate(hamiltonian_factory=flipped_b_coupling,
                          only=["branch_consistency", "freezing", "sudden_death"])
    assert result.passed


def test_unknown_check_name():
    with pytest.raises(ValueError):
        run_validate(only=["no_such_check"])


def test_failed_check_records_exception():
    result = run_validate(evolve_method="rk4", step=0.1, only=["unitarity"])
    check = result.check("unitarity")
    assert not check.passed
    assert check.max_deviation == math.inf
    assert "InvalidStateError" in check.detail
