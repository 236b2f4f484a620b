"""
Brute-force state-vector simulator for the four-qubit register

Builds the exchange Hamiltonian explicitly, evolves by exact
eigendecomposition (or fixed-step RK4), applies the null-result projector on
AB and traces AB out. Nothing here uses the closed forms of qzeno.analytic.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from .core import (
    DIM,
    HERMITIAN_TOL,
    IMPOSSIBLE_PROBABILITY,
    ImpossibleOutcomeError,
    InvalidParameterError,
    InvalidStateError,
    PureState16,
    SystemParams,
    TwoQubitDensity,
    TwoQubitPure,
    ZenoOutcome,
    ab_index,
    basis_index,
    basis_labels,
)
from .entanglement import pure_concurrence

logger = logging.getLogger(__name__)

# Single-qubit operators in the {|0>, |1>} basis
IDENTITY = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = SIGMA_PLUS.conj().T
NUMBER = np.diag([0.0, 1.0]).astype(complex)

# Qubit positions, most significant first (matches basis_index)
QUBIT_A_SMALL, QUBIT_B_SMALL, QUBIT_A_BIG, QUBIT_B_BIG = range(4)

DEFAULT_RK4_STEP = 1e-4


def embed(operators: dict) -> np.ndarray:
    """Tensor product placing {position: 2x2 operator} on the register"""
    factors = [operators.get(q, IDENTITY) for q in range(4)]
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def exchange(q1: int, q2: int) -> np.ndarray:
    """sigma+_q1 sigma-_q2 + sigma-_q1 sigma+_q2"""
    return (
        embed({q1: SIGMA_PLUS, q2: SIGMA_MINUS})
        + embed({q1: SIGMA_MINUS, q2: SIGMA_PLUS})
    )


def excitation_number_operator() -> np.ndarray:
    """Total number of excitations on a, b, A and B"""
    return sum(embed({q: NUMBER}) for q in range(4))


@dataclass(frozen=True, eq=False)
class Hamiltonian16:
    """16x16 Hermitian generator (hbar = 1, units of rate)"""

    entries: np.ndarray

    def __post_init__(self):
        h = np.array(self.entries, dtype=complex)
        if h.shape != (DIM, DIM):
            raise InvalidStateError(f"Hamiltonian must be 16x16, got {h.shape}")
        if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("Hamiltonian is not Hermitian")
        h.setflags(write=False)
        object.__setattr__(self, "entries", h)

    @cached_property
    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors, computed once per Hamiltonian"""
        return linalg.eigh(self.entries)

    def commutator_with(self, op: np.ndarray) -> np.ndarray:
        return self.entries @ op - op @ self.entries


def build_hamiltonian(g: float = 1.0) -> Hamiltonian16:
    """
    Resonant exchange coupling a<->A and b<->B with equal strength g

    Returns:
        H = g (s+_a s-_A + h.c.) + g (s+_b s-_B + h.c.)
    """
    if not g > 0:
        raise InvalidParameterError(f"Coupling g must be positive, got {g}")

    h = g * exchange(QUBIT_A_SMALL, QUBIT_A_BIG) + g * exchange(QUBIT_B_SMALL, QUBIT_B_BIG)
    return Hamiltonian16(h)


def initial_state(params: SystemParams) -> PureState16:
    """(alpha0|11> + beta0|00>)_ab |00>_AB"""
    return PureState16.from_labels({
        (1, 1, 0, 0): params.alpha0,
        (0, 0, 0, 0): params.beta0,
    })


def _rk4(psi: np.ndarray, h: np.ndarray, t: float, step: float) -> np.ndarray:
    """Fixed-step RK4 on d psi/dt = -i H psi; the last step is shortened to land on t"""
    n_steps = int(np.ceil(t / step)) if t > 0 else 0
    if n_steps == 0:
        return psi
    dt = t / n_steps
    gen = -1j * h
    for _ in range(n_steps):
        k1 = gen @ psi
        k2 = gen @ (psi + 0.5 * dt * k1)
        k3 = gen @ (psi + 0.5 * dt * k2)
        k4 = gen @ (psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def evolve(
    state: PureState16,
    h: Hamiltonian16,
    t: float,
    method: str = "eigh",
    step: Optional[float] = None,
) -> PureState16:
    """
    exp(-iHt)|state>

    Args:
        state: normalized 16-vector
        h: generator
        t: evolution time (may be negative for the eigh method)
        method: "eigh" (exact, default) or "rk4"
        step: RK4 step size; defaults to 1e-4 / ||H||, the step at which
            the global error stays below 1e-12 over t <= 10/g

    Returns:
        Evolved state; raises InvalidStateError if the integrator lost
        normalization beyond 1e-12
    """
    psi = np.asarray(state.amplitudes)

    if method == "eigh":
        w, v = h.spectrum
        out = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi))
    elif method == "rk4":
        if t < 0:
            raise InvalidParameterError("RK4 evolution only runs forward in time")
        if step is None:
            scale = float(np.max(np.abs(h.entries))) or 1.0
            step = DEFAULT_RK4_STEP / scale
        if not step > 0:
            raise InvalidParameterError(f"RK4 step must be positive, got {step}")
        out = _rk4(psi, np.asarray(h.entries), t, step)
    else:
        raise InvalidParameterError(f"Unknown evolution method: {method}")

    return PureState16(out)


def null_ab_mask() -> np.ndarray:
    """Boolean mask of basis states with n_A = n_B = 0"""
    return np.array([n_A == 0 and n_B == 0 for (_, _, n_A, n_B) in basis_labels()])


_NULL_MASK = null_ab_mask()


def project_null_AB(state: PureState16) -> Tuple[PureState16, float]:
    """
    Null-result measurement on AB ("no excitation in AB")

    Returns:
        (renormalized projected state, probability of the null result)

    Raises:
        ImpossibleOutcomeError: if the null result has probability below 1e-15
    """
    psi = np.asarray(state.amplitudes)
    projected = np.where(_NULL_MASK, psi, 0.0)
    probability = float(np.vdot(projected, projected).real)

    if probability < IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(
            f"Null result on AB has probability {probability!r}"
        )
    return PureState16(projected / np.sqrt(probability)), min(1.0, probability)


def ab_factor(state: PureState16) -> TwoQubitPure:
    """ab amplitudes of a state lying in the n_A = n_B = 0 subspace"""
    psi = np.asarray(state.amplitudes)
    leak = float(np.sum(np.abs(psi[~_NULL_MASK]) ** 2))
    if leak > IMPOSSIBLE_PROBABILITY:
        raise InvalidStateError(f"State has weight {leak!r} outside n_A = n_B = 0")

    amps = np.zeros(4, dtype=complex)
    for n_a in (0, 1):
        for n_b in (0, 1):
            amps[ab_index(n_a, n_b)] = psi[basis_index(n_a, n_b, 0, 0)]
    return TwoQubitPure(amps)


def run_zeno_protocol(
    params: SystemParams,
    n: int,
    total_time: Optional[float] = None,
    h: Optional[Hamiltonian16] = None,
    method: str = "eigh",
    step: Optional[float] = None,
) -> ZenoOutcome:
    """
    Evolve for tau = total_time / n and project on null AB, n times

    Args:
        params: initial amplitudes and coupling
        n: number of measurements, >= 1
        total_time: defaults to the swap time pi/(2g)
        h: Hamiltonian to use; built from params.g when omitted
        method, step: passed to evolve

    Returns:
        ZenoOutcome whose survival probability is the product of the n
        null-result probabilities
    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"Number of measurements must be >= 1, got {n}")
    if total_time is None:
        total_time = np.pi / (2.0 * params.g)
    if total_time <= 0:
        raise InvalidParameterError(f"Total time must be positive, got {total_time}")
    if h is None:
        h = build_hamiltonian(params.g)

    tau = total_time / n
    state = initial_state(params)
    survival = 1.0
    for k in range(n):
        state = evolve(state, h, tau, method=method, step=step)
        state, p = project_null_AB(state)
        survival *= p
        logger.debug(f"Measurement {k + 1}/{n}: null probability {p:.17g}")

    ab_state = ab_factor(state)
    return ZenoOutcome(
        ab_state=ab_state,
        survival_probability=survival,
        concurrence=pure_concurrence(ab_state),
        n_measurements=n,
        tau=tau,
    )


def reduce_to_ab(state: PureState16) -> TwoQubitDensity:
    """Partial trace over A and B"""
    psi = np.asarray(state.amplitudes).reshape(4, 4)   # rows: ab, columns: AB
    rho = psi @ psi.conj().T
    return TwoQubitDensity(0.5 * (rho + rho.conj().T), factor=psi)


def fidelity(psi: PureState16, phi: PureState16) -> float:
    """|<psi|phi>|^2, blind to global phase"""
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)


def phase_aligned_deviation(psi: PureState16, reference: PureState16) -> float:
    """Max amplitude difference after removing the global phase of psi relative to reference"""
    a = np.asarray(psi.amplitudes)
    b = np.asarray(reference.amplitudes)
    overlap = np.vdot(a, b)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(a * phase - b)))
