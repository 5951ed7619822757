"""
Convergence experiments: walk-vs-oracle sweeps over step-size grids,
block-error sweeps, and log-log order fits.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from config.settings import settings
from core.algebra import FiniteBialgebra
from core.fock import StepFunction, levy_matrix_element, slot_count, walk_matrix_element
from core.schurmann import SchurmannTriple
from core.walk import BlockErrors, WalkError, beta_block_errors, beta_direct
from data.models import FitResult, SweepRecord
from utils.logger import setup_logger

logger = setup_logger(__name__)


class HarnessError(Exception):
    """Base class for experiment failures."""
    pass


class NoiseFloorError(HarnessError):
    """Raised when fewer than three errors sit above the noise floor."""
    pass


@dataclass(frozen=True, eq=False)
class MatrixElementCase:
    """One matrix element <e(f), l_t(a) e(g)> to track as h -> 0."""

    name: str
    f: StepFunction
    g: StepFunction
    t: float
    a: np.ndarray


def default_h_grid(lam: float, j_min: int = 3, j_max: int = 10, base: float | None = None) -> list[float]:
    """base * 2^{-j} for j = j_min..j_max, base defaulting to 1/lambda (1 when lambda = 0)."""
    if base is None:
        base = 1.0 / lam if lam > 0 else 1.0
    return [base * 2.0 ** (-j) for j in range(j_min, j_max + 1)]


def _check_grid(h_grid: Sequence[float]) -> None:
    if any(not b < a for a, b in zip(h_grid, h_grid[1:])):
        raise HarnessError("h grid must be strictly decreasing")


def sweep_entry(
    algebra: FiniteBialgebra,
    triple: SchurmannTriple,
    case: MatrixElementCase,
    h: float,
    oracle: complex,
    record_timings: bool,
) -> SweepRecord:
    """One grid point; inadmissible steps become records carrying the error text."""
    n = slot_count(case.t, h) if h > 0 else 0
    start = time.perf_counter()
    try:
        beta = beta_direct(algebra, triple, h)
        value = walk_matrix_element(algebra, beta, case.f, case.g, case.t, case.a)
    except WalkError as e:
        logger.warning(f"Sweep entry h={h:.6g} skipped: {e}")
        return SweepRecord(h=h, n=n, error=str(e))
    elapsed_us = int((time.perf_counter() - start) * 1e6) if record_timings else 0
    return SweepRecord(
        h=h,
        n=n,
        walk_re=value.real,
        walk_im=value.imag,
        oracle_re=oracle.real,
        oracle_im=oracle.imag,
        abs_error=abs(value - oracle),
        wall_time_us=elapsed_us,
    )


def sweep(
    algebra: FiniteBialgebra,
    triple: SchurmannTriple,
    case: MatrixElementCase,
    h_grid: Sequence[float],
    jobs: int = 1,
    record_timings: bool | None = None,
) -> list[SweepRecord]:
    """
    Walk matrix element vs Lévy oracle at each h, in grid order.
    Entries are independent, so `jobs > 1` evaluates them on a thread pool.
    """
    _check_grid(h_grid)
    record_timings = settings.record_timings if record_timings is None else record_timings
    oracle = levy_matrix_element(algebra, triple, case.f, case.g, case.t, case.a)

    def run(h: float) -> SweepRecord:
        return sweep_entry(algebra, triple, case, h, oracle, record_timings)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run, h_grid))
    else:
        records = [run(h) for h in h_grid]

    logger.info(f"✓ Sweep {case.name}: {len(records)} step sizes, oracle {oracle:.10g}")
    return records


def fit_order(
    points: Iterable[SweepRecord] | Iterable[tuple[float, float]],
    noise_floor: float | None = None,
) -> FitResult:
    """
    OLS fit of log(error) against log(h), dropping errors below the noise floor.

    Raises:
        NoiseFloorError: If fewer than 3 usable points remain
    """
    noise_floor = settings.noise_floor if noise_floor is None else noise_floor
    pairs: list[tuple[float, float]] = []
    for point in points:
        if isinstance(point, SweepRecord):
            if not point.ok or point.abs_error is None:
                continue
            pairs.append((point.h, point.abs_error))
        else:
            pairs.append((float(point[0]), float(point[1])))

    usable = [(h, e) for h, e in pairs if h > 0 and np.isfinite(e) and e >= noise_floor]
    if len(usable) < 3:
        raise NoiseFloorError(
            f"Only {len(usable)} of {len(pairs)} errors above the noise floor {noise_floor:g}; need 3"
        )
    log_h = np.log([h for h, _ in usable])
    log_e = np.log([e for _, e in usable])
    result = stats.linregress(log_h, log_e)
    return FitResult(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        points_used=len(usable),
    )


def block_error_sweep(
    algebra: FiniteBialgebra,
    triple: SchurmannTriple,
    h_grid: Sequence[float],
    samples: int | None = None,
    seed: int | None = None,
) -> list[BlockErrors]:
    """beta_block_errors of beta_direct at each h of the grid."""
    _check_grid(h_grid)
    return [
        beta_block_errors(algebra, triple, beta_direct(algebra, triple, h), h, samples, seed)
        for h in h_grid
    ]
