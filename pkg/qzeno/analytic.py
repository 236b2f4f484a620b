"""
Closed-form dynamics of alpha0|11> + beta0|00> under the double Jaynes-Cummings
coupling, with and without null-result measurements on AB
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .core import (
    EXACT_TOL,
    IMPOSSIBLE_PROBABILITY,
    ImpossibleOutcomeError,
    InvalidParameterError,
    PureState16,
    SystemParams,
    TwoQubitPure,
    ZenoOutcome,
    ab_index,
    basis_index,
)

# cos/sin values this small are roundoff of an exact zero (gt on a quarter period)
_ROUNDOFF = 1e-15


class Branch(Enum):
    """Which root of |alpha0| the initial concurrence fixes"""

    PLUS = "plus"    # |alpha0| >= |beta0|
    MINUS = "minus"  # |alpha0| <= |beta0|

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


@dataclass(frozen=True)
class EvolutionCoefficients:
    """a(t) = cos(gt), b(t) = sin(gt)"""

    a: float
    b: float
    t: float

    def __post_init__(self):
        if abs(self.a ** 2 + self.b ** 2 - 1.0) > EXACT_TOL:
            raise InvalidParameterError(f"a^2 + b^2 != 1 for a={self.a}, b={self.b}")


def _snap(x: float) -> float:
    return 0.0 if abs(x) < _ROUNDOFF else x


def evolution_coefficients(g: float, t: float) -> EvolutionCoefficients:
    theta = g * t
    return EvolutionCoefficients(_snap(math.cos(theta)), _snap(math.sin(theta)), t)


def _check_c0(c0: float):
    if not 0.0 <= c0 <= 1.0:
        raise InvalidParameterError(f"Initial concurrence must be in [0, 1], got {c0}")


def _check_n(n: int):
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"Number of measurements must be >= 1, got {n}")


def _check_g(g: float):
    if not g > 0:
        raise InvalidParameterError(f"Coupling g must be positive, got {g}")


def swap_time(g: float = 1.0) -> float:
    """T = pi / (2g), when the ab entanglement has moved entirely onto AB"""
    _check_g(g)
    return math.pi / (2.0 * g)


def evolved_state(params: SystemParams, t: float) -> PureState16:
    """
    Free evolution of (alpha0|11> + beta0|00>)_ab |00>_AB

    Returns:
        alpha0 a^2 |1100> + beta0 |0000> - i alpha0 a b (|1001> + |0110>)
        - alpha0 b^2 |0011>
    """
    if t < 0:
        raise InvalidParameterError(f"Time must be non-negative, got {t}")

    coeff = evolution_coefficients(params.g, t)
    a, b = coeff.a, coeff.b
    alpha, beta = params.alpha0, params.beta0

    amps = np.zeros(16, dtype=complex)
    amps[basis_index(1, 1, 0, 0)] = alpha * a * a
    amps[basis_index(0, 0, 0, 0)] = beta
    amps[basis_index(1, 0, 0, 1)] = -1j * alpha * a * b
    amps[basis_index(0, 1, 1, 0)] = -1j * alpha * a * b
    amps[basis_index(0, 0, 1, 1)] = -alpha * b * b
    return PureState16(amps)


def _damping(g: float, n: int, tau: float) -> float:
    """cos^{2N}(g tau), the factor each run of N null results puts on |11>"""
    a = evolution_coefficients(g, tau).a
    return (a * a) ** n


def survival_probability(params: SystemParams, n: int, tau: float) -> float:
    """Probability |alpha0|^2 cos^{4N}(g tau) + |beta0|^2 that all N results are null"""
    _check_n(n)
    x = _damping(params.g, n, tau)
    return params.abs_alpha ** 2 * x * x + params.abs_beta ** 2


def concurrence_after_n(params: SystemParams, n: int, tau: float) -> float:
    """
    Concurrence of ab after N null measurements spaced by tau

    Returns:
        2|alpha0||beta0| cos^{2N}(g tau) / (|alpha0|^2 cos^{4N}(g tau) + |beta0|^2)
    """
    _check_n(n)
    if tau < 0:
        raise InvalidParameterError(f"tau must be non-negative, got {tau}")

    x = _damping(params.g, n, tau)
    denominator = params.abs_alpha ** 2 * x * x + params.abs_beta ** 2
    if denominator < IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(
            f"Null result has probability {denominator!r} after {n} measurements"
        )
    return min(1.0, 2.0 * params.abs_alpha * params.abs_beta * x / denominator)


def zeno_state(params: SystemParams, n: int, total_time: Optional[float] = None) -> ZenoOutcome:
    """
    Post-selected ab state after N null measurements over total_time

    Args:
        params: initial amplitudes and coupling
        n: number of equally spaced measurements
        total_time: defaults to the swap time pi/(2g)

    Returns:
        ZenoOutcome with ab state proportional to
        alpha0 cos^{2N}(g tau)|11> + beta0|00>, tau = total_time / n
    """
    _check_n(n)
    if total_time is None:
        total_time = swap_time(params.g)
    if total_time <= 0:
        raise InvalidParameterError(f"Total time must be positive, got {total_time}")

    tau = total_time / n
    x = _damping(params.g, n, tau)
    probability = survival_probability(params, n, tau)
    if probability < IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(
            f"Null result has probability {probability!r} after {n} measurements"
        )

    scale = 1.0 / math.sqrt(probability)
    amps = np.zeros(4, dtype=complex)
    amps[ab_index(1, 1)] = params.alpha0 * x * scale
    amps[ab_index(0, 0)] = params.beta0 * scale

    return ZenoOutcome(
        ab_state=TwoQubitPure(amps),
        survival_probability=probability,
        concurrence=concurrence_after_n(params, n, tau),
        n_measurements=n,
        tau=tau,
    )


def single_measurement_concurrence(params: SystemParams, t: float) -> float:
    """Concurrence of ab after free evolution to t and one null measurement"""
    return concurrence_after_n(params, 1, t)


def single_measurement_survival(params: SystemParams, t: float) -> float:
    return survival_probability(params, 1, t)


def alpha_from_c0(c0: float, branch: Branch) -> float:
    """
    |alpha0| from the initial concurrence and the normalization

    Returns:
        sqrt(1/2 +- sqrt((1 - c0^2)/4)), + on the Plus branch
    """
    _check_c0(c0)
    root = math.sqrt((1.0 - c0 * c0) / 4.0)
    return math.sqrt(0.5 + branch.sign * root)


def params_from_c0(c0: float, branch: Branch = Branch.PLUS, g: float = 1.0) -> SystemParams:
    """Real, non-negative amplitudes with concurrence c0 on the given branch"""
    alpha = alpha_from_c0(c0, branch)
    beta = math.sqrt(max(0.0, 1.0 - alpha * alpha))
    return SystemParams(alpha, beta, g)


def branch_of(params: SystemParams) -> Branch:
    return Branch.PLUS if params.abs_alpha >= params.abs_beta else Branch.MINUS


def concurrence_branch(c0: float, n: int, tau: float, g: float, branch: Branch) -> float:
    """
    C_N as a function of the initial concurrence

    Returns:
        2 c0 x / (1 + x^2 -+ sqrt(1 - c0^2) (1 - x^2)), x = cos^{2N}(g tau),
        minus sign on the Plus branch
    """
    _check_c0(c0)
    _check_n(n)
    _check_g(g)

    x = _damping(g, n, tau)
    s = math.sqrt(1.0 - c0 * c0)
    denominator = 1.0 + x * x - branch.sign * s * (1.0 - x * x)
    if denominator < 2.0 * IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(
            f"Null result has vanishing probability for c0={c0}, n={n}, tau={tau}"
        )
    return min(1.0, 2.0 * c0 * x / denominator)


def free_lambda(c0: float, t: float, g: float, branch: Branch) -> float:
    """
    Lambda(t) = sqrt(1 +- s) cos^2(gt) (sqrt(1 -+ s) - sqrt(1 +- s) sin^2(gt)),
    s = sqrt(1 - c0^2), upper signs on the Plus branch
    """
    _check_c0(c0)
    _check_g(g)
    if t < 0:
        raise InvalidParameterError(f"Time must be non-negative, got {t}")

    coeff = evolution_coefficients(g, t)
    s = math.sqrt(1.0 - c0 * c0)
    major = math.sqrt(1.0 + branch.sign * s)
    minor = math.sqrt(1.0 - branch.sign * s)
    return major * coeff.a ** 2 * (minor - major * coeff.b ** 2)


def free_concurrence(c0: float, t: float, g: float, branch: Branch) -> float:
    """Concurrence of ab under free evolution, max(0, Lambda(t))"""
    return min(1.0, max(0.0, free_lambda(c0, t, g, branch)))


def sudden_death_time(c0: float, g: float = 1.0, branch: Branch = Branch.PLUS) -> Optional[float]:
    """
    First time the free-evolution concurrence of ab reaches zero

    Args:
        c0: initial concurrence, 0 < c0 <= 1
        g: coupling
        branch: only the Plus branch dies before the swap time

    Returns:
        (1/g) arcsin( ((1 - s)/(1 + s))^{1/4} ), s = sqrt(1 - c0^2), or None when
        there is no sudden death before the swap (c0 = 1, or the Minus branch)

    Raises:
        InvalidParameterError: if c0 is outside (0, 1]
    """
    _check_g(g)
    if not 0.0 < c0 <= 1.0:
        raise InvalidParameterError(f"Sudden death needs 0 < c0 < 1, got {c0}")
    if c0 == 1.0 or branch is Branch.MINUS:
        return None

    s = math.sqrt(1.0 - c0 * c0)
    ratio = ((1.0 - s) / (1.0 + s)) ** 0.25
    return math.asin(ratio) / g


def bell_prep_time(params: SystemParams) -> float:
    """
    Time of the single null measurement that leaves ab in a Bell state

    Returns:
        (1/g) arccos( sqrt(|beta0| / |alpha0|) ), where |alpha0| a^2(t) = |beta0|

    Raises:
        InvalidParameterError: unless |alpha0| > |beta0| > 0, with |alpha0| - |beta0|
            above 1e-12 so a rounded Bell state counts as balanced
    """
    if params.abs_beta == 0.0:
        raise InvalidParameterError("beta0 = 0: ab is a product state, no Bell state reachable")
    if params.abs_alpha - params.abs_beta <= EXACT_TOL:
        raise InvalidParameterError(
            f"Bell preparation needs |alpha0| > |beta0|, got "
            f"{params.abs_alpha:.6g} <= {params.abs_beta:.6g}"
        )
    return math.acos(math.sqrt(params.abs_beta / params.abs_alpha)) / params.g
