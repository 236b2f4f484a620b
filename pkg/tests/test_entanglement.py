import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from qzeno.core import InvalidStateError, TwoQubitDensity, TwoQubitPure
from qzeno.entanglement import (
    density_from_pure,
    is_x_state,
    pure_concurrence,
    wootters_concurrence,
    x_state_concurrence,
)

BELL = TwoQubitPure([1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])


def random_pure(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return TwoQubitPure(v / np.linalg.norm(v))


def random_density(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return TwoQubitDensity(0.5 * (rho + rho.conj().T))


def test_pure_concurrence_examples():
    assert pure_concurrence(BELL) == pytest.approx(1.0)
    assert pure_concurrence(TwoQubitPure([0, 0, 1, 0])) == 0.0
    psi = TwoQubitPure([math.sqrt(0.2), 0, 0, math.sqrt(0.8)])
    assert pure_concurrence(psi) == pytest.approx(0.8, abs=1e-12)


def test_wootters_maximally_mixed_is_zero():
    assert wootters_concurrence(TwoQubitDensity(np.eye(4) / 4)) == 0.0


def test_wootters_bell_density():
    assert wootters_concurrence(density_from_pure(BELL)) == pytest.approx(1.0, abs=1e-12)
    entries_only = TwoQubitDensity(np.outer(BELL.amplitudes, BELL.amplitudes.conj()))
    assert wootters_concurrence(entries_only) == pytest.approx(1.0, abs=1e-8)


def test_wootters_matches_pure_concurrence_on_random_states(rng):
    for _ in range(1000):
        psi = random_pure(rng)
        assert abs(wootters_concurrence(density_from_pure(psi)) - pure_concurrence(psi)) < 1e-9


def test_wootters_local_unitary_invariance(rng):
    states = [random_density(rng) for _ in range(50)]
    states += [density_from_pure(random_pure(rng)) for _ in range(50)]
    for rho in states:
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        assert abs(wootters_concurrence(rho.conjugated(u)) - wootters_concurrence(rho)) < 1e-9


def test_wootters_output_in_unit_interval(rng):
    for _ in range(200):
        c = wootters_concurrence(random_density(rng))
        assert 0.0 <= c <= 1.0


def test_werner_state_threshold():
    # p |Bell><Bell| + (1 - p) I/4 is entangled only for p > 1/3, C = (3p - 1)/2
    bell = np.outer(BELL.amplitudes, BELL.amplitudes.conj())
    for p in (0.2, 1 / 3, 0.5, 0.9):
        rho = TwoQubitDensity(p * bell + (1 - p) * np.eye(4) / 4)
        assert wootters_concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-10)
        assert x_state_concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)


def test_x_state_closed_form_agrees_with_wootters():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = 0.4, 0.1, 0.1, 0.4
    rho[0, 3] = rho[3, 0] = 0.3
    density = TwoQubitDensity(rho)
    assert is_x_state(density)
    assert x_state_concurrence(density) == pytest.approx(0.4, abs=1e-12)
    assert wootters_concurrence(density) == pytest.approx(0.4, abs=1e-10)


def test_x_state_rejects_general_density(rng):
    rho = random_density(rng)
    assert not is_x_state(rho)
    with pytest.raises(InvalidStateError):
        x_state_concurrence(rho)
