"""
Core types, basis conventions and tolerances shared by every qzeno module
"""
import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

# Closed forms are exact up to roundoff; the oracle carries integrator error.
EXACT_TOL = 1e-12
ORACLE_TOL = 1e-9
HERMITIAN_TOL = 1e-14
PSD_CLAMP = 1e-10
IMPOSSIBLE_PROBABILITY = 1e-15

DIM = 16
AB_DIM = 4


class ZenoError(Exception):
    """Base class for qzeno errors"""


class InvalidParameterError(ZenoError, ValueError):
    """A precondition on an input parameter was violated"""


class InvalidStateError(ZenoError, ValueError):
    """A state, density matrix or Hamiltonian broke its invariants"""


class ImpossibleOutcomeError(ZenoError):
    """Post-selection on an outcome with vanishing probability"""


class SweepIOError(ZenoError):
    """Writing experiment output failed"""

    def __init__(self, path: str, reason: str):
        super().__init__(f"Could not write {path}: {reason}")
        self.path = path


def basis_index(n_a: int, n_b: int, n_A: int, n_B: int) -> int:
    """
    Index of the basis ket |n_a, n_b>_ab |n_A, n_B>_AB in a 16-vector

    Args:
        n_a, n_b: excitations of the ab qubits
        n_A, n_B: excitations of the AB qubits

    Returns:
        8*n_a + 4*n_b + 2*n_A + n_B
    """
    return 8 * n_a + 4 * n_b + 2 * n_A + n_B


def basis_labels():
    """All (n_a, n_b, n_A, n_B) labels in index order"""
    return list(itertools.product((0, 1), repeat=4))


def ab_index(n_1: int, n_2: int) -> int:
    """Index of |n_1, n_2> in a two-qubit 4-vector"""
    return 2 * n_1 + n_2


def _frozen_array(values, shape, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.shape != shape:
        raise InvalidStateError(f"Expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidStateError("Non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SystemParams:
    """Initial amplitudes of alpha0|11> + beta0|00> on ab, and the coupling g"""

    alpha0: complex
    beta0: complex
    g: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        object.__setattr__(self, "beta0", complex(self.beta0))
        object.__setattr__(self, "g", float(self.g))

        if not (self.g > 0 and math.isfinite(self.g)):
            raise InvalidParameterError(f"Coupling g must be positive, got {self.g}")

        norm = abs(self.alpha0) ** 2 + abs(self.beta0) ** 2
        if abs(norm - 1.0) > EXACT_TOL:
            raise InvalidParameterError(
                f"|alpha0|^2 + |beta0|^2 must be 1, got {norm!r}"
            )

    @property
    def abs_alpha(self) -> float:
        return abs(self.alpha0)

    @property
    def abs_beta(self) -> float:
        return abs(self.beta0)

    @property
    def c0(self) -> float:
        """Initial concurrence 2|alpha0||beta0|, capped at 1 against roundoff"""
        return min(1.0, 2.0 * self.abs_alpha * self.abs_beta)

    def with_phases(self, phase_alpha: float, phase_beta: float) -> "SystemParams":
        """Same moduli, amplitudes rotated by the given phases (radians)"""
        return SystemParams(
            self.alpha0 * cmath.exp(1j * phase_alpha),
            self.beta0 * cmath.exp(1j * phase_beta),
            self.g,
        )


@dataclass(frozen=True, eq=False)
class PureState16:
    """State vector of the (a, b, A, B) register, ordered by basis_index"""

    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        arr = _frozen_array(self.amplitudes, (DIM,))
        object.__setattr__(self, "amplitudes", arr)
        if self.normalized:
            norm = float(np.vdot(arr, arr).real)
            if abs(norm - 1.0) > EXACT_TOL:
                raise InvalidStateError(f"State norm^2 is {norm!r}, expected 1")

    def amplitude(self, n_a: int, n_b: int, n_A: int, n_B: int) -> complex:
        return complex(self.amplitudes[basis_index(n_a, n_b, n_A, n_B)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def from_labels(cls, terms: dict) -> "PureState16":
        """Build a state from {(n_a, n_b, n_A, n_B): amplitude}"""
        amps = np.zeros(DIM, dtype=complex)
        for label, value in terms.items():
            amps[basis_index(*label)] += value
        return cls(amps)


@dataclass(frozen=True, eq=False)
class TwoQubitPure:
    """Pure two-qubit state, ordered by ab_index"""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.amplitudes, (AB_DIM,))
        object.__setattr__(self, "amplitudes", arr)
        norm = float(np.vdot(arr, arr).real)
        if abs(norm - 1.0) > EXACT_TOL:
            raise InvalidStateError(f"Two-qubit state norm^2 is {norm!r}, expected 1")

    def amplitude(self, n_1: int, n_2: int) -> complex:
        return complex(self.amplitudes[ab_index(n_1, n_2)])

    def concurrence(self) -> float:
        """2|a00 a11 - a01 a10|"""
        a00, a01, a10, a11 = self.amplitudes
        return min(1.0, float(2.0 * abs(a00 * a11 - a01 * a10)))


@dataclass(frozen=True, eq=False)
class TwoQubitDensity:
    """
    Hermitian, unit-trace, positive semidefinite 4x4 matrix

    factor, when known, is any 4xk matrix W with entries = W W^dagger (the
    purification amplitudes for a partial trace, the ket for a pure state).
    """

    entries: np.ndarray
    factor: Optional[np.ndarray] = None

    def __post_init__(self):
        rho = _frozen_array(self.entries, (AB_DIM, AB_DIM))
        object.__setattr__(self, "entries", rho)

        if np.max(np.abs(rho - rho.conj().T)) > EXACT_TOL:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > EXACT_TOL:
            raise InvalidStateError(f"Density matrix trace is {trace!r}, expected 1")
        lowest = float(np.linalg.eigvalsh(rho)[0])
        if lowest < -PSD_CLAMP:
            raise InvalidStateError(
                f"Density matrix has negative eigenvalue {lowest!r}"
            )

        if self.factor is not None:
            w = np.array(self.factor, dtype=complex)
            if w.ndim != 2 or w.shape[0] != AB_DIM:
                raise InvalidStateError(f"Factor must be 4xk, got shape {w.shape}")
            if np.max(np.abs(w @ w.conj().T - rho)) > EXACT_TOL:
                raise InvalidStateError("Factor does not reproduce the density matrix")
            w.setflags(write=False)
            object.__setattr__(self, "factor", w)

    @classmethod
    def from_factor(cls, w) -> "TwoQubitDensity":
        w = np.asarray(w, dtype=complex)
        rho = w @ w.conj().T
        return cls(0.5 * (rho + rho.conj().T), w)

    def conjugated(self, u: np.ndarray) -> "TwoQubitDensity":
        """u rho u^dagger for a 4x4 unitary u"""
        if self.factor is not None:
            return TwoQubitDensity.from_factor(u @ self.factor)
        m = u @ self.entries @ u.conj().T
        return TwoQubitDensity(0.5 * (m + m.conj().T))


@dataclass(frozen=True)
class ZenoOutcome:
    """Result of post-selecting n null measurements at spacing tau"""

    ab_state: TwoQubitPure
    survival_probability: float
    concurrence: float
    n_measurements: int
    tau: float

    def __post_init__(self):
        if self.n_measurements < 1:
            raise InvalidParameterError(
                f"n_measurements must be >= 1, got {self.n_measurements}"
            )
        if not -EXACT_TOL <= self.survival_probability <= 1.0 + EXACT_TOL:
            raise InvalidStateError(
                f"Survival probability {self.survival_probability!r} outside [0, 1]"
            )
        if not 0.0 <= self.concurrence <= 1.0:
            raise InvalidStateError(f"Concurrence {self.concurrence!r} outside [0, 1]")
        actual = self.ab_state.concurrence()
        if abs(self.concurrence - actual) > ORACLE_TOL:
            raise InvalidStateError(
                f"Concurrence {self.concurrence!r} does not match the ab state ({actual!r})"
            )
