"""
Oracle-versus-closed-form invariant suite behind `qzeno validate`

Every check returns its largest deviation; a check passes when that deviation
is within its tolerance. A check that raises counts as failed.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import unitary_group

from . import analytic, oracle
from .analytic import Branch
from .core import (
    EXACT_TOL,
    ORACLE_TOL,
    PureState16,
    SystemParams,
    TwoQubitDensity,
    TwoQubitPure,
    ZenoError,
)
from .entanglement import (
    density_from_pure,
    pure_concurrence,
    wootters_concurrence,
    x_state_concurrence,
)

logger = logging.getLogger(__name__)

SEED = 20071

FREE_EVOLUTION_TOL = 1e-8
UNITARITY_TOL = 1e-10
FREEZING_TOL = 1e-3
ENHANCEMENT_TARGET = 0.99

PARAM_SETS = (
    SystemParams(math.sqrt(0.8), math.sqrt(0.2)),
    SystemParams(math.sqrt(0.5), math.sqrt(0.5)),
    SystemParams(math.sqrt(0.9), 1j * math.sqrt(0.1)),
    SystemParams(math.sqrt(0.3), -math.sqrt(0.7)),
    SystemParams(0.6 * np.exp(0.4j), 0.8, g=2.5),
)
C0_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
ZENO_C0 = (0.2, 0.5, 0.8)

Result = Tuple[float, str]


@dataclass
class OracleConfig:
    """How the oracle builds its Hamiltonian and integrates"""

    hamiltonian_factory: Callable[[float], oracle.Hamiltonian16] = oracle.build_hamiltonian
    method: str = "eigh"
    step: Optional[float] = None
    _cache: Dict[float, oracle.Hamiltonian16] = field(default_factory=dict, repr=False)

    def hamiltonian(self, g: float) -> oracle.Hamiltonian16:
        if g not in self._cache:
            self._cache[g] = self.hamiltonian_factory(g)
        return self._cache[g]

    def evolve(self, state: PureState16, g: float, t: float) -> PureState16:
        return oracle.evolve(state, self.hamiltonian(g), t, method=self.method, step=self.step)

    def free_state(self, params: SystemParams, t: float) -> PureState16:
        return self.evolve(oracle.initial_state(params), params.g, t)

    def zeno(self, params: SystemParams, n: int, total_time: Optional[float] = None):
        return oracle.run_zeno_protocol(
            params, n, total_time, h=self.hamiltonian(params.g),
            method=self.method, step=self.step,
        )


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_rows(self) -> List[tuple]:
        return [
            (c.name, c.max_deviation, c.tolerance, "pass" if c.passed else "FAIL", c.detail)
            for c in self.checks
        ]


def _swap_target(params: SystemParams) -> PureState16:
    """|00>_ab (alpha0|11> - beta0|00>)_AB"""
    return PureState16.from_labels({
        (0, 0, 1, 1): params.alpha0,
        (0, 0, 0, 0): -params.beta0,
    })


def _times(params: SystemParams, count: int = 20) -> np.ndarray:
    return np.linspace(0.0, analytic.swap_time(params.g), count)


def check_hamiltonian(cfg: OracleConfig) -> Result:
    number = oracle.excitation_number_operator()
    worst = 0.0
    for g in (0.5, 1.0, 2.0):
        h = cfg.hamiltonian(g)
        worst = max(
            worst,
            float(np.max(np.abs(h.entries - h.entries.conj().T))),
            float(np.max(np.abs(h.commutator_with(number)))),
        )
    return worst, "Hermiticity and [H, N] = 0"


def check_swap_fidelity(cfg: OracleConfig) -> Result:
    worst = 0.0
    for params in PARAM_SETS:
        evolved = cfg.free_state(params, analytic.swap_time(params.g))
        worst = max(worst, 1.0 - oracle.fidelity(evolved, _swap_target(params)))
    return worst, "1 - fidelity with the swapped state at T = pi/(2g)"


def check_oracle_vs_closed_form(cfg: OracleConfig) -> Result:
    worst = 0.0
    for params in PARAM_SETS:
        for t in _times(params):
            numeric = cfg.free_state(params, float(t))
            exact = analytic.evolved_state(params, float(t))
            worst = max(worst, oracle.phase_aligned_deviation(numeric, exact))
    return worst, "max amplitude deviation, 20 times x 5 parameter sets"


def check_unitarity(cfg: OracleConfig) -> Result:
    worst = 0.0
    for params in PARAM_SETS:
        for t in np.linspace(0.0, 10.0 / params.g, 41):
            worst = max(worst, abs(cfg.free_state(params, float(t)).norm() - 1.0))
    return worst, "| ||psi(t)|| - 1 | for t <= 10/g"


def check_composition(cfg: OracleConfig) -> Result:
    worst = 0.0
    for params in PARAM_SETS:
        start = oracle.initial_state(params)
        for t1, t2 in ((0.3, 0.5), (1.1, 0.02), (2.0, 3.7)):
            t1, t2 = t1 / params.g, t2 / params.g
            once = cfg.evolve(start, params.g, t1 + t2)
            twice = cfg.evolve(cfg.evolve(start, params.g, t1), params.g, t2)
            worst = max(worst, float(np.max(np.abs(once.amplitudes - twice.amplitudes))))
    return worst, "evolve(t1 + t2) vs evolve(evolve(t1), t2)"


def check_excitation_conservation(cfg: OracleConfig) -> Result:
    number = oracle.excitation_number_operator()
    worst = 0.0
    for params in PARAM_SETS:
        psi0 = oracle.initial_state(params).amplitudes
        n0 = float(np.vdot(psi0, number @ psi0).real)
        for t in np.linspace(0.0, 10.0 / params.g, 41):
            psi = cfg.free_state(params, float(t)).amplitudes
            worst = max(worst, abs(float(np.vdot(psi, number @ psi).real) - n0))
    return worst, "drift of <N_total>"


def check_projector_idempotence(cfg: OracleConfig) -> Result:
    worst = 0.0
    for params in PARAM_SETS:
        for t in _times(params, 7)[:-1]:
            once, _ = oracle.project_null_AB(cfg.free_state(params, float(t)))
            twice, p = oracle.project_null_AB(once)
            worst = max(
                worst,
                abs(p - 1.0),
                float(np.max(np.abs(once.amplitudes - twice.amplitudes))),
            )
    return worst, "second null projection changes nothing"


def check_zeno_protocol(cfg: OracleConfig) -> Result:
    worst = 0.0
    for c0 in ZENO_C0:
        params = analytic.params_from_c0(c0, Branch.PLUS)
        tau_total = analytic.swap_time(params.g)
        for n in range(1, 65):
            numeric = cfg.zeno(params, n)
            exact = analytic.zeno_state(params, n)
            overlap = abs(np.vdot(numeric.ab_state.amplitudes, exact.ab_state.amplitudes)) ** 2
            worst = max(
                worst,
                abs(numeric.survival_probability - exact.survival_probability),
                abs(numeric.concurrence - exact.concurrence),
                abs(numeric.concurrence - analytic.concurrence_after_n(params, n, tau_total / n)),
                1.0 - overlap,
            )
    return worst, "oracle protocol vs closed form, N = 1..64"


def check_branch_consistency(cfg: OracleConfig) -> Result:
    worst = 0.0
    for c0 in C0_GRID:
        for branch in Branch:
            params = analytic.params_from_c0(c0, branch)
            for n in range(1, 51):
                tau = analytic.swap_time(1.0) / n
                worst = max(worst, abs(
                    analytic.concurrence_branch(c0, n, tau, 1.0, branch)
                    - analytic.concurrence_after_n(params, n, tau)
                ))
    return worst, "C_N(c0, branch) vs C_N(alpha0(c0), beta0(c0))"


def check_freezing(cfg: OracleConfig) -> Result:
    worst = 0.0
    for c0 in ZENO_C0:
        for branch in Branch:
            deviations = []
            for n in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
                c = analytic.concurrence_branch(c0, n, analytic.swap_time(1.0) / n, 1.0, branch)
                deviations.append(abs(c - c0))
            if any(later >= earlier for earlier, later in zip(deviations, deviations[1:])):
                return math.inf, f"deviation not decreasing for c0={c0}, {branch.value}"
            worst = max(worst, deviations[-1])
    return worst, "|C_N - c0| at N = 1e6"


def check_minus_below_c0(cfg: OracleConfig) -> Result:
    worst = 0.0
    for c0 in C0_GRID:
        for n in range(1, 101):
            c = analytic.concurrence_branch(c0, n, analytic.swap_time(1.0) / n, 1.0, Branch.MINUS)
            worst = max(worst, c - c0)
    return max(0.0, worst), "excess of C_N minus over c0, N <= 100"


def check_enhancement(cfg: OracleConfig) -> Result:
    for c0 in C0_GRID:
        if not any(
            analytic.concurrence_branch(c0, n, analytic.swap_time(1.0) / n, 1.0, Branch.PLUS) > c0
            for n in range(1, 10 ** 4 + 1)
        ):
            return math.inf, f"no enhancement for c0={c0}"

    params = analytic.params_from_c0(0.8, Branch.PLUS)
    best = max(
        analytic.concurrence_branch(0.8, n, analytic.swap_time(1.0) / n, 1.0, Branch.PLUS)
        for n in range(1, 101)
    )
    numeric = cfg.zeno(params, 4).concurrence
    return max(0.0, ENHANCEMENT_TARGET - best, ENHANCEMENT_TARGET - numeric), (
        f"shortfall below {ENHANCEMENT_TARGET} at c0=0.8 (N=4 oracle {numeric:.6f})"
    )


def check_bell_prep(cfg: OracleConfig) -> Result:
    worst = 0.0
    for params in (SystemParams(math.sqrt(0.8), math.sqrt(0.2)),
                   SystemParams(math.sqrt(0.9), math.sqrt(0.1))):
        t_star = analytic.bell_prep_time(params)
        outcome = cfg.zeno(params, 1, total_time=t_star)
        worst = max(
            worst,
            abs(outcome.concurrence - 1.0),
            abs(outcome.survival_probability - 2.0 * params.abs_beta ** 2),
        )
    return worst, "single measurement at t* gives C = 1 and P = 2|beta0|^2"


def check_sudden_death(cfg: OracleConfig) -> Result:
    worst = 0.0
    for c0 in C0_GRID:
        t_sd = analytic.sudden_death_time(c0, 1.0)
        for t in np.linspace(t_sd, 0.5 * math.pi, 50):
            worst = max(worst, analytic.free_concurrence(c0, float(t), 1.0, Branch.PLUS))
    worst = max(worst, abs(analytic.sudden_death_time(0.8, 1.0) - 0.25 * math.pi))
    return worst, "C_f plus on [t_sd, pi/2g] and t_sd(0.8) - pi/4"


def _surface_grid():
    for gt in np.linspace(0.0, 0.5 * math.pi, 201):
        for c0 in C0_GRID:
            yield float(gt), c0


def check_free_evolution_oracle(cfg: OracleConfig) -> Result:
    worst = 0.0
    for branch in Branch:
        for gt, c0 in _surface_grid():
            params = analytic.params_from_c0(c0, branch)
            rho = oracle.reduce_to_ab(cfg.free_state(params, gt))
            worst = max(worst, abs(
                wootters_concurrence(rho) - analytic.free_concurrence(c0, gt, 1.0, branch)
            ))
    return worst, "Wootters of the reduced oracle state vs C_f, 201 x 9 grid"


def check_x_state_agreement(cfg: OracleConfig) -> Result:
    worst = 0.0
    for gt, c0 in _surface_grid():
        params = analytic.params_from_c0(c0, Branch.PLUS)
        rho = oracle.reduce_to_ab(cfg.free_state(params, gt))
        worst = max(worst, abs(wootters_concurrence(rho) - x_state_concurrence(rho)))
    return worst, "eigenvalue route vs X-state closed form"


def check_resurrection(cfg: OracleConfig) -> Result:
    params = analytic.params_from_c0(0.8, Branch.PLUS)
    t_sd = analytic.sudden_death_time(0.8, 1.0)
    worst = 0.0
    for gt in np.linspace(t_sd, 0.5 * math.pi, 40)[1:-1]:
        numeric = cfg.zeno(params, 1, total_time=float(gt)).concurrence
        if numeric <= 0.0:
            return math.inf, f"no resurrection at gt={gt:.6f}"
        worst = max(worst, abs(numeric - analytic.single_measurement_concurrence(params, float(gt))))

    at_09 = cfg.zeno(params, 1, total_time=0.9).concurrence
    if at_09 <= 0.9:
        return math.inf, f"C_1(0.9) = {at_09:.6f} <= 0.9"
    at_star = cfg.zeno(params, 1, total_time=analytic.bell_prep_time(params)).concurrence
    worst = max(worst, abs(at_star - 1.0))
    return worst, f"single measurement after sudden death, C_1(0.9) = {at_09:.6f}"


def check_phase_invariance(cfg: OracleConfig) -> Result:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for params in PARAM_SETS:
        for _ in range(4):
            rotated = params.with_phases(*rng.uniform(0.0, 2.0 * math.pi, size=2))
            for n in (1, 2, 5):
                tau = analytic.swap_time(params.g) / n
                worst = max(
                    worst,
                    abs(analytic.concurrence_after_n(rotated, n, tau)
                        - analytic.concurrence_after_n(params, n, tau)),
                    abs(analytic.survival_probability(rotated, n, tau)
                        - analytic.survival_probability(params, n, tau)),
                )
                a, b = cfg.zeno(rotated, n), cfg.zeno(params, n)
                worst = max(
                    worst,
                    abs(a.concurrence - b.concurrence),
                    abs(a.survival_probability - b.survival_probability),
                )
            t = 0.7 / params.g
            worst = max(worst, abs(
                wootters_concurrence(oracle.reduce_to_ab(cfg.free_state(rotated, t)))
                - wootters_concurrence(oracle.reduce_to_ab(cfg.free_state(params, t)))
            ))
    return worst, "unit phases on alpha0, beta0"


def check_g_scaling(cfg: OracleConfig) -> Result:
    worst = 0.0
    base = SystemParams(math.sqrt(0.8), math.sqrt(0.2))
    for g in (0.5, 2.0, 3.0):
        scaled = SystemParams(base.alpha0, base.beta0, g)
        for n in (1, 3, 10):
            tau = 0.4
            worst = max(worst, abs(
                analytic.concurrence_after_n(scaled, n, tau / g)
                - analytic.concurrence_after_n(base, n, tau)
            ))
        for c0 in C0_GRID:
            worst = max(
                worst,
                abs(g * analytic.sudden_death_time(c0, g) - analytic.sudden_death_time(c0, 1.0)),
                abs(analytic.free_concurrence(c0, 0.6 / g, g, Branch.PLUS)
                    - analytic.free_concurrence(c0, 0.6, 1.0, Branch.PLUS)),
            )
        worst = max(
            worst,
            abs(g * analytic.bell_prep_time(scaled) - analytic.bell_prep_time(base)),
            abs(cfg.zeno(scaled, 3).concurrence - cfg.zeno(base, 3).concurrence),
        )
    return worst, "results depend on g and t only through gt"


def _random_density(rng: np.random.Generator) -> TwoQubitDensity:
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    rho = rho / np.trace(rho).real
    return TwoQubitDensity(0.5 * (rho + rho.conj().T))


def _random_pure(rng: np.random.Generator) -> TwoQubitPure:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return TwoQubitPure(v / np.linalg.norm(v))


def check_local_unitary_invariance(cfg: OracleConfig) -> Result:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    densities = [_random_density(rng) for _ in range(100)]
    densities += [density_from_pure(_random_pure(rng)) for _ in range(50)]
    params = analytic.params_from_c0(0.6, Branch.PLUS)
    densities += [oracle.reduce_to_ab(cfg.free_state(params, gt)) for gt in np.linspace(0, 1.5, 16)]

    for rho in densities:
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        rotated = rho.conjugated(u)
        worst = max(worst, abs(wootters_concurrence(rotated) - wootters_concurrence(rho)))
    return worst, "conjugation by U1 x U2"


def check_pure_state_agreement(cfg: OracleConfig) -> Result:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        psi = _random_pure(rng)
        worst = max(worst, abs(wootters_concurrence(density_from_pure(psi)) - pure_concurrence(psi)))
    return worst, "Wootters on |psi><psi| vs 2|ad - bc|, 1000 random states"


CHECKS = (
    ("hamiltonian", 1e-14, check_hamiltonian),
    ("swap_fidelity", ORACLE_TOL, check_swap_fidelity),
    ("oracle_vs_closed_form", ORACLE_TOL, check_oracle_vs_closed_form),
    ("unitarity", UNITARITY_TOL, check_unitarity),
    ("composition", ORACLE_TOL, check_composition),
    ("excitation_conservation", ORACLE_TOL, check_excitation_conservation),
    ("projector_idempotence", EXACT_TOL, check_projector_idempotence),
    ("zeno_protocol", ORACLE_TOL, check_zeno_protocol),
    ("branch_consistency", EXACT_TOL, check_branch_consistency),
    ("freezing", FREEZING_TOL, check_freezing),
    ("minus_below_c0", EXACT_TOL, check_minus_below_c0),
    ("enhancement", 0.0, check_enhancement),
    ("bell_prep", ORACLE_TOL, check_bell_prep),
    ("sudden_death", EXACT_TOL, check_sudden_death),
    ("free_evolution_oracle", FREE_EVOLUTION_TOL, check_free_evolution_oracle),
    ("x_state_agreement", 1e-10, check_x_state_agreement),
    ("resurrection", ORACLE_TOL, check_resurrection),
    ("phase_invariance", ORACLE_TOL, check_phase_invariance),
    ("g_scaling", ORACLE_TOL, check_g_scaling),
    ("local_unitary_invariance", ORACLE_TOL, check_local_unitary_invariance),
    ("pure_state_agreement", ORACLE_TOL, check_pure_state_agreement),
)

REPORT_COLUMNS = ("check", "max_deviation", "tolerance", "status", "detail")


def run_check(name: str, tolerance: float, fn: Callable[[OracleConfig], Result],
              cfg: OracleConfig) -> CheckResult:
    try:
        deviation, detail = fn(cfg)
    except (ZenoError, ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
        logger.warning(f"Check {name} raised: {e}")
        return CheckResult(name, math.inf, tolerance, False, f"{type(e).__name__}: {e}")

    passed = bool(deviation <= tolerance)
    logger.debug(f"{name}: max deviation {deviation:.3e} (tolerance {tolerance:.0e})")
    if not passed:
        logger.warning(f"Check {name} failed: {deviation:.3e} > {tolerance:.0e}")
    return CheckResult(name, float(deviation), tolerance, passed, detail)


def run_validate(
    hamiltonian_factory: Callable[[float], oracle.Hamiltonian16] = oracle.build_hamiltonian,
    evolve_method: str = "eigh",
    step: Optional[float] = None,
    only: Optional[List[str]] = None,
) -> ValidationReport:
    """
    Run the invariant suite

    Args:
        hamiltonian_factory: builds the oracle Hamiltonian for a coupling g
        evolve_method: "eigh" or "rk4"
        step: RK4 step size
        only: restrict to these check names

    Returns:
        ValidationReport with one CheckResult per check
    """
    cfg = OracleConfig(hamiltonian_factory, evolve_method, step)
    selected = [c for c in CHECKS if only is None or c[0] in only]
    if only is not None:
        unknown = set(only) - {c[0] for c in CHECKS}
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(sorted(unknown))}")

    results = tuple(run_check(name, tol, fn, cfg) for name, tol, fn in selected)
    logger.info(f"Validation: {sum(r.passed for r in results)}/{len(results)} checks passed")
    return ValidationReport(results)
