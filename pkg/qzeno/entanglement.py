"""
Concurrence of pure and mixed two-qubit states
"""
import logging

import numpy as np
from scipy import linalg

from .core import (
    EXACT_TOL,
    PSD_CLAMP,
    InvalidStateError,
    TwoQubitDensity,
    TwoQubitPure,
)

logger = logging.getLogger(__name__)

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)


def pure_concurrence(state: TwoQubitPure) -> float:
    """
    Concurrence 2|a00*a11 - a01*a10| of a pure two-qubit state

    TwoQubitPure is normalized within 1e-12 on construction.
    """
    return state.concurrence()


def density_from_pure(state: TwoQubitPure) -> TwoQubitDensity:
    """|psi><psi| as a TwoQubitDensity"""
    return TwoQubitDensity.from_factor(np.asarray(state.amplitudes).reshape(4, 1))


def _factor(rho: TwoQubitDensity) -> np.ndarray:
    """A W with rho = W W^dagger; sqrt(rho) when rho carries no factor"""
    if rho.factor is not None:
        return np.asarray(rho.factor)

    w, v = linalg.eigh(np.asarray(rho.entries))
    if w[0] < -PSD_CLAMP:
        raise InvalidStateError(f"Density matrix has negative eigenvalue {w[0]!r}")
    if w[0] < 0:
        logger.debug(f"Clamping eigenvalue {w[0]:.3e} to zero")
    return v * np.sqrt(np.clip(w, 0.0, None))


def wootters_concurrence(rho: TwoQubitDensity) -> float:
    """
    Wootters concurrence max(0, l1 - l2 - l3 - l4)

    The l_i are the square roots, in decreasing order, of the eigenvalues of
    rho (sy x sy) rho^* (sy x sy), i.e. of the Hermitian sqrt(rho) rho~ sqrt(rho).
    They are computed directly as the singular values of W^T (sy x sy) W for
    any factor rho = W W^dagger, so no square root of a roundoff-sized
    eigenvalue is ever taken.

    Args:
        rho: two-qubit density matrix

    Returns:
        Concurrence in [0, 1]

    Raises:
        InvalidStateError: if rho has an eigenvalue below -1e-10
    """
    w = _factor(rho)
    m = w.T @ SIGMA_YY @ w
    lambdas = np.zeros(4)
    values = linalg.svdvals(m)[:4]
    lambdas[:len(values)] = values
    c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]
    return float(min(1.0, max(0.0, c)))


def is_x_state(rho: TwoQubitDensity, tol: float = EXACT_TOL) -> bool:
    """True if only the diagonal and anti-diagonal of rho are non-zero"""
    m = np.asarray(rho.entries)
    mask = np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool))
    return bool(np.all(np.abs(m[~mask]) <= tol))


def x_state_concurrence(rho: TwoQubitDensity) -> float:
    """
    Closed-form concurrence of an X-form density matrix

    Returns:
        2 * max(0, |r03| - sqrt(r11 r22), |r12| - sqrt(r00 r33))

    Raises:
        InvalidStateError: if rho has entries off the diagonal and anti-diagonal
    """
    if not is_x_state(rho):
        raise InvalidStateError("Density matrix is not of X form")

    m = np.asarray(rho.entries)
    d = np.clip(np.diag(m).real, 0.0, None)
    outer = abs(m[0, 3]) - np.sqrt(d[1] * d[2])
    inner = abs(m[1, 2]) - np.sqrt(d[0] * d[3])
    return float(min(1.0, 2.0 * max(0.0, outer, inner)))
