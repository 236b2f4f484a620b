"""
Parameter sweeps over the analytic results, cross-checked against the oracle
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

from . import analytic, oracle
from .analytic import Branch
from .core import (
    ImpossibleOutcomeError,
    InvalidParameterError,
    SystemParams,
)
from .entanglement import pure_concurrence, wootters_concurrence
from .utils import STDOUT, write_csv
from .validation import run_validate  # noqa: F401  (re-exported for the CLI)

logger = logging.getLogger(__name__)

DEFAULT_C0_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
DEFAULT_C0 = 0.8
DEFAULT_N_MAX = 100
DEFAULT_TIME_POINTS = 201


class Experiment(Enum):
    ZENO_SWEEP = "zeno-sweep"
    FREE_EVOLUTION = "free-evolution"
    SINGLE_MEASUREMENT = "single-measurement"
    BELL_PREP = "bell-prep"
    VALIDATE = "validate"


@dataclass(frozen=True)
class SweepSpec:
    """
    What to sweep and where to write it

    The initial state comes either from c0_grid (with branch) or from an
    explicit params; when params is set it overrides c0_grid, branch and g.
    """

    experiment: Experiment
    c0_grid: Tuple[float, ...] = DEFAULT_C0_GRID
    branch: Branch = Branch.PLUS
    n_max: int = DEFAULT_N_MAX
    time_points: int = DEFAULT_TIME_POINTS
    g: float = 1.0
    output_path: str = STDOUT
    params: Optional[SystemParams] = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c0_grid", tuple(float(c) for c in self.c0_grid))
        if not self.c0_grid:
            raise InvalidParameterError("c0 grid must not be empty")
        for c0 in self.c0_grid:
            if not 0.0 < c0 <= 1.0:
                raise InvalidParameterError(f"c0 values must lie in (0, 1], got {c0}")
        if self.n_max < 1:
            raise InvalidParameterError(f"n_max must be >= 1, got {self.n_max}")
        if self.time_points < 2:
            raise InvalidParameterError(f"time_points must be >= 2, got {self.time_points}")
        if not self.g > 0:
            raise InvalidParameterError(f"Coupling g must be positive, got {self.g}")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be >= 1, got {self.workers}")

    @property
    def coupling(self) -> float:
        return self.params.g if self.params is not None else self.g

    def initial_states(self) -> List[Tuple[float, SystemParams]]:
        """(c0, params) for every initial state of the sweep, sorted by c0"""
        if self.params is not None:
            return [(self.params.c0, self.params)]
        return [
            (c0, analytic.params_from_c0(c0, self.branch, self.g))
            for c0 in sorted(set(self.c0_grid))
        ]

    def effective_branch(self) -> Branch:
        if self.params is not None:
            return analytic.branch_of(self.params)
        return self.branch

    def gt_grid(self) -> List[float]:
        """time_points uniform values of gt on [0, pi/2], both ends included"""
        last = self.time_points - 1
        return [0.5 * math.pi * k / last for k in range(last)] + [0.5 * math.pi]


@dataclass(frozen=True)
class SweepTable:
    """Header and rows of one experiment, in output order"""

    columns: Tuple[str, ...]
    rows: Tuple[tuple, ...]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _map_points(fn: Callable, points: Sequence, workers: int) -> list:
    """fn over points, in input order whatever the worker count"""
    if workers <= 1 or len(points) < 2:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def _require(spec: SweepSpec, experiment: Experiment):
    if spec.experiment is not experiment:
        raise InvalidParameterError(
            f"Expected a {experiment.value} sweep, got {spec.experiment.value}"
        )


def run_zeno_sweep(spec: SweepSpec) -> SweepTable:
    """
    C_N for both branches at tau = pi/(2gN), N = 1..n_max

    Raises:
        InvalidParameterError: if more than one initial concurrence is given
    """
    _require(spec, Experiment.ZENO_SWEEP)
    states = spec.initial_states()
    if len(states) != 1:
        raise InvalidParameterError("zeno-sweep takes a single c0")
    c0, _ = states[0]
    g = spec.coupling
    total_time = analytic.swap_time(g)

    def point(n):
        tau = total_time / n
        return (
            n,
            analytic.concurrence_branch(c0, n, tau, g, Branch.MINUS),
            analytic.concurrence_branch(c0, n, tau, g, Branch.PLUS),
        )

    rows = _map_points(point, range(1, spec.n_max + 1), spec.workers)
    return SweepTable(("N", "C_N_minus", "C_N_plus"), tuple(rows))


def _grid(spec: SweepSpec) -> List[Tuple[float, float, SystemParams]]:
    return [(gt, c0, params) for gt in spec.gt_grid() for c0, params in spec.initial_states()]


def run_free_evolution(spec: SweepSpec) -> SweepTable:
    """
    Free-evolution concurrence over the (gt, c0) grid

    Each row carries the closed form and the oracle value
    (evolve -> partial trace -> Wootters).
    """
    _require(spec, Experiment.FREE_EVOLUTION)
    branch = spec.effective_branch()
    g = spec.coupling
    h = oracle.build_hamiltonian(g)

    def point(item):
        gt, c0, params = item
        t = gt / g
        expected = analytic.free_concurrence(c0, t, g, branch)
        evolved = oracle.evolve(oracle.initial_state(params), h, t)
        observed = wootters_concurrence(oracle.reduce_to_ab(evolved))
        return gt, c0, expected, observed

    rows = _map_points(point, _grid(spec), spec.workers)
    name = f"C_f_{branch.value}"
    return SweepTable(("gt", "c0", name, f"{name}_oracle"), tuple(rows))


def run_single_measurement(spec: SweepSpec) -> SweepTable:
    """
    Concurrence of ab after free evolution to t and one null measurement on AB

    Raises:
        InvalidParameterError: for initial states with |alpha0| < |beta0|
    """
    _require(spec, Experiment.SINGLE_MEASUREMENT)
    if spec.params is not None:
        if spec.params.abs_alpha < spec.params.abs_beta:
            raise InvalidParameterError("single-measurement needs |alpha0| >= |beta0|")
    elif spec.branch is not Branch.PLUS:
        raise InvalidParameterError("single-measurement is defined on the plus branch")

    g = spec.coupling
    h = oracle.build_hamiltonian(g)

    def point(item):
        gt, c0, params = item
        t = gt / g
        try:
            expected = analytic.single_measurement_concurrence(params, t)
            evolved = oracle.evolve(oracle.initial_state(params), h, t)
            projected, _ = oracle.project_null_AB(evolved)
            observed = pure_concurrence(oracle.ab_factor(projected))
        except ImpossibleOutcomeError as e:
            logger.warning(f"gt={gt:.6g}, c0={c0:.6g}: {e}")
            return gt, c0, math.nan, math.nan
        return gt, c0, expected, observed

    rows = _map_points(point, _grid(spec), spec.workers)
    return SweepTable(("gt", "c0", "C_1_plus", "C_1_plus_oracle"), tuple(rows))


@dataclass(frozen=True)
class BellPrepReport:
    t_star: float
    gt_star: float
    survival_probability: float
    final_concurrence: float

    def as_table(self) -> SweepTable:
        return SweepTable(
            ("t_star", "gt_star", "survival_probability", "final_concurrence"),
            ((self.t_star, self.gt_star, self.survival_probability, self.final_concurrence),),
        )


def run_bell_prep(params: SystemParams) -> BellPrepReport:
    """
    Evolve freely to the Bell-preparation time and measure AB once

    Returns:
        BellPrepReport from the oracle run; the ab concurrence is 1 and the
        survival probability 2|beta0|^2

    Raises:
        InvalidParameterError: unless |alpha0| > |beta0| > 0
    """
    t_star = analytic.bell_prep_time(params)
    outcome = oracle.run_zeno_protocol(params, 1, total_time=t_star)
    logger.info(
        f"Bell preparation at gt*={params.g * t_star:.6f}: "
        f"concurrence {outcome.concurrence:.12f}, survival {outcome.survival_probability:.12f}"
    )
    return BellPrepReport(
        t_star=t_star,
        gt_star=params.g * t_star,
        survival_probability=outcome.survival_probability,
        final_concurrence=outcome.concurrence,
    )


SWEEPS = {
    Experiment.ZENO_SWEEP: run_zeno_sweep,
    Experiment.FREE_EVOLUTION: run_free_evolution,
    Experiment.SINGLE_MEASUREMENT: run_single_measurement,
}


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Dispatch on spec.experiment (bell-prep and validate included)"""
    if spec.experiment in SWEEPS:
        return SWEEPS[spec.experiment](spec)
    if spec.experiment is Experiment.BELL_PREP:
        states = spec.initial_states()
        if len(states) != 1:
            raise InvalidParameterError("bell-prep takes a single c0")
        return run_bell_prep(states[0][1]).as_table()
    raise InvalidParameterError(f"{spec.experiment.value} is not a sweep")


def emit(table: SweepTable, path: str) -> int:
    """Write a SweepTable as CSV; returns the number of rows written"""
    count = write_csv(path, table.columns, table.rows)
    logger.info(f"Wrote {count} rows to {'stdout' if path == STDOUT else path}")
    return count
