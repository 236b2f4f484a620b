import itertools
import math

import numpy as np
import pytest

from qzeno.core import (
    InvalidParameterError,
    InvalidStateError,
    PureState16,
    SystemParams,
    TwoQubitDensity,
    TwoQubitPure,
    ZenoOutcome,
    basis_index,
    basis_labels,
)


@pytest.mark.parametrize("label, index", [
    ((0, 0, 0, 0), 0),
    ((1, 1, 0, 0), 12),
    ((1, 0, 0, 1), 9),
    ((0, 0, 1, 1), 3),
])
def test_basis_index_examples(label, index):
    assert basis_index(*label) == index


def test_basis_index_is_bijection():
    indices = [basis_index(*bits) for bits in itertools.product((0, 1), repeat=4)]
    assert sorted(indices) == list(range(16))
    assert [basis_index(*label) for label in basis_labels()] == list(range(16))


def test_system_params_accepts_complex_amplitudes():
    p = SystemParams(0.6j, -0.8)
    assert p.abs_alpha == pytest.approx(0.6)
    assert p.c0 == pytest.approx(0.96)
    assert p.g == 1.0


def test_system_params_c0_of_rounded_bell_state_is_one():
    p = SystemParams(0.7071067811865476, 0.7071067811865476)
    assert 2.0 * p.abs_alpha * p.abs_beta > 1.0
    assert p.c0 == 1.0


@pytest.mark.parametrize("alpha, beta", [(0.6, 0.6), (1.0, 1e-3), (0.0, 0.0)])
def test_system_params_rejects_unnormalized(alpha, beta):
    with pytest.raises(InvalidParameterError):
        SystemParams(alpha, beta)


@pytest.mark.parametrize("g", [0.0, -1.0, math.inf])
def test_system_params_rejects_bad_coupling(g):
    with pytest.raises(InvalidParameterError):
        SystemParams(0.6, 0.8, g)


def test_with_phases_keeps_moduli():
    p = SystemParams(0.6, 0.8).with_phases(1.0, -2.5)
    assert p.abs_alpha == pytest.approx(0.6)
    assert p.abs_beta == pytest.approx(0.8)
    assert p.alpha0 != 0.6


def test_pure_state16_is_immutable():
    psi = PureState16.from_labels({(0, 0, 0, 0): 1.0})
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0.5


def test_pure_state16_norm_checked_unless_flagged():
    amps = np.zeros(16)
    amps[0] = 0.5
    with pytest.raises(InvalidStateError):
        PureState16(amps)
    assert PureState16(amps, normalized=False).norm() == pytest.approx(0.5)


def test_pure_state16_rejects_wrong_shape():
    with pytest.raises(InvalidStateError):
        PureState16(np.ones(8) / math.sqrt(8))


def test_two_qubit_pure_amplitude_lookup():
    psi = TwoQubitPure([0.6, 0, 0, 0.8])
    assert psi.amplitude(1, 1) == pytest.approx(0.8)
    with pytest.raises(InvalidStateError):
        TwoQubitPure([1, 1, 0, 0])


def test_density_invariants():
    TwoQubitDensity(np.eye(4) / 4)
    with pytest.raises(InvalidStateError):
        TwoQubitDensity(np.eye(4) / 2)                     # trace 2
    m = np.eye(4) / 4
    m[0, 1] = 0.1
    with pytest.raises(InvalidStateError):
        TwoQubitDensity(m)                                 # not Hermitian
    with pytest.raises(InvalidStateError):
        TwoQubitDensity(np.diag([0.5, 0.5, 0.1, -0.1]))    # negative eigenvalue


def test_density_factor_must_match():
    w = np.array([[1.0], [0.0], [0.0], [0.0]])
    rho = TwoQubitDensity.from_factor(w)
    assert rho.entries[0, 0] == pytest.approx(1.0)
    with pytest.raises(InvalidStateError):
        TwoQubitDensity(np.eye(4) / 4, factor=w)


def test_zeno_outcome_validates_counts():
    ab = TwoQubitPure([1, 0, 0, 0])
    with pytest.raises(InvalidParameterError):
        ZenoOutcome(ab, 0.5, 0.0, 0, 0.1)
    with pytest.raises(InvalidStateError):
        ZenoOutcome(ab, 1.5, 0.0, 1, 0.1)


def test_two_qubit_pure_concurrence():
    assert TwoQubitPure(np.array([1, 0, 0, 1]) / np.sqrt(2)).concurrence() == pytest.approx(1.0)
    assert TwoQubitPure([0, 1, 0, 0]).concurrence() == 0.0


def test_zeno_outcome_checks_concurrence():
    bell = TwoQubitPure(np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert ZenoOutcome(bell, 0.4, 1.0, 1, 0.1).concurrence == 1.0
    with pytest.raises(InvalidStateError):
        ZenoOutcome(bell, 0.4, 0.3, 1, 0.1)
    with pytest.raises(InvalidStateError):
        ZenoOutcome(bell, 0.4, 1.5, 1, 0.1)
    with pytest.raises(InvalidStateError):
        ZenoOutcome(TwoQubitPure([1, 0, 0, 0]), 0.4, -0.1, 1, 0.1)
