"""Desk-scale reproductions of the asymptotic statements.

Three harnesses:

* ``run_convergence`` sweeps grid sizes and records, per grid, the
  closed-form aggregate bound for the jump-approximation chain, an
  oracle-quadrature product bound built from per-increment total
  variations, and the predicted rate shape.
* ``fit_rate_slope`` turns a sweep into a log-log slope for comparison
  against the predicted exponents.
* ``run_risk_transfer`` demonstrates estimator transfer: a drift estimator
  designed for the Gaussian experiment is applied to jump data through the
  fractional-part filter, and its integrated squared error is compared
  against the same estimator on clean Gaussian data and on raw jump data.

Monte Carlo replications are distributed over a thread pool whose size is
capped by the ``LECAM_THREADS`` environment variable; replication streams
are derived from the caller's stream id and results are reduced in
replication order, so outputs are bitwise identical at any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distances import (bernoulli_aggregate_bound,
                        continuous_kernel_aggregate_bound,
                        discrete_kernel_aggregate_bound,
                        hellinger_product_tv_bound, theorem_rate)
from .kernels import (TruncateResampleParams, fold_density_to_lattice_cell,
                      transfer_estimator, truncate_resample_pushforward)
from .laws import bernoulli_density, gaussian_density, increment_density_exact
from .model import (ContinuousJumps, DiracJump, Grid, HolderClassParams,
                    IntervalSummary, LatticeJumps, ModelSpec,
                    build_increment_summaries)
from .oracle import tv_quadrature
from .simulate import (RngStream, sample_path, sample_white_noise_increments)

__all__ = [
    "ConvergenceRow",
    "RiskRow",
    "run_convergence",
    "fit_rate_slope",
    "run_risk_transfer",
    "default_drift_estimator",
    "worker_count",
]

#: default drift cap and exponent for the truncate-and-resample kernel
DEFAULT_L = 1.0 / 3.0
DEFAULT_EPSILON = 0.5


@dataclass(frozen=True)
class ConvergenceRow:
    """One grid size of a convergence sweep.

    ``aggregate_bound`` is the closed-form chain bound (one-jump step plus
    filtering step) clamped to the trivial total variation ceiling 1;
    ``oracle_product_bound`` combines per-increment quadrature TVs through
    the product-measure inequality.
    """

    n: int
    delta_n: float
    aggregate_bound: float
    oracle_product_bound: float
    rate_prediction: float


@dataclass(frozen=True)
class RiskRow:
    """Risk-transfer comparison at one grid size."""

    n: int
    mise_direct_gaussian: float
    mise_transferred: float
    mise_naive_on_jumps: float
    replications: int


def worker_count() -> int:
    """Thread-pool size: LECAM_THREADS when set, else a small default."""
    env = os.environ.get("LECAM_THREADS", "").strip()
    if env:
        count = int(env)
        if count < 1:
            raise ValueError("LECAM_THREADS must be a positive integer")
        return count
    return min(4, os.cpu_count() or 1)


def _is_lattice_law(jump_law) -> bool:
    if isinstance(jump_law, LatticeJumps):
        return True
    return (isinstance(jump_law, DiracJump)
            and float(jump_law.location).is_integer())


def _check_jump_case(spec: ModelSpec, jump_case: str) -> None:
    if jump_case == "lattice":
        if not _is_lattice_law(spec.jump_law):
            raise ValueError("lattice case needs integer-lattice jumps")
    elif jump_case == "continuous":
        if not isinstance(spec.jump_law, ContinuousJumps):
            raise ValueError("continuous case needs a jump size density")
    else:
        raise ValueError("jump_case must be 'lattice' or 'continuous'")


def run_convergence(spec: ModelSpec, n_values, jump_case: str,
                    holder: HolderClassParams | None = None,
                    L: float = DEFAULT_L,
                    epsilon: float = DEFAULT_EPSILON) -> list[ConvergenceRow]:
    """Closed-form and oracle bounds over a sweep of grid sizes.

    Per grid: the one-jump and filtering aggregate bounds are summed and
    clamped at 1; the oracle product bound combines per-increment
    quadrature TVs (one-jump step, plus the filtered jump law against the
    Gaussian law) capped at 1 each.  The one-jump step TV is translation
    invariant in the interval drift, so it is computed once per distinct
    ``(lambda_i, sigma_i^2)`` pair with the drift zeroed.
    """
    n_values = [int(n) for n in n_values]
    if len(n_values) == 0 or any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly increasing")
    _check_jump_case(spec, jump_case)
    if holder is None:
        holder = HolderClassParams(alpha=1.0, M=1.0, B=1.0)
    rows: list[ConvergenceRow] = []
    bern_tv_cache: dict[tuple[float, float], float] = {}
    for n in n_values:
        grid = Grid.uniform(spec.horizon, n)
        summaries = build_increment_summaries(spec, grid)
        bern_report = bernoulli_aggregate_bound(summaries)
        if jump_case == "lattice":
            kernel_report = discrete_kernel_aggregate_bound(summaries)
        else:
            kernel_report = continuous_kernel_aggregate_bound(
                summaries, L, epsilon, spec.jump_law)
        aggregate = min(1.0, bern_report.aggregate + kernel_report.aggregate)

        per_tv = np.empty(summaries.n)
        for i in range(summaries.n):
            s_i = summaries.interval(i)
            key = (s_i.lam, s_i.sigma2)
            if key not in bern_tv_cache:
                centered = IntervalSummary(m=0.0, sigma2=s_i.sigma2,
                                           lam=s_i.lam)
                bern_tv_cache[key] = tv_quadrature(
                    increment_density_exact(centered, spec.jump_law),
                    bernoulli_density(centered, spec.jump_law))
            bern_tv = bern_tv_cache[key]
            approx = bernoulli_density(s_i, spec.jump_law)
            target = gaussian_density(s_i.m, s_i.sigma2)
            if jump_case == "lattice":
                kernel_tv = tv_quadrature(fold_density_to_lattice_cell(approx),
                                          fold_density_to_lattice_cell(target))
            else:
                params = TruncateResampleParams(L=L, epsilon=epsilon,
                                                sigma_i=s_i.sigma)
                kernel_tv = tv_quadrature(
                    truncate_resample_pushforward(approx, params), target)
            per_tv[i] = min(1.0, bern_tv + kernel_tv)
        oracle_product = hellinger_product_tv_bound(per_tv)
        rows.append(ConvergenceRow(
            n=n, delta_n=grid.mesh, aggregate_bound=aggregate,
            oracle_product_bound=oracle_product,
            rate_prediction=theorem_rate(grid.mesh, spec.horizon,
                                         spec.epsilon_n, holder, jump_case)))
    return rows


def fit_rate_slope(rows, column: str) -> float:
    """Least-squares slope of log(column) against log(delta_n)."""
    if len(rows) < 4:
        raise ValueError("need at least 4 rows for a slope fit")
    deltas = np.array([row.delta_n for row in rows], dtype=float)
    values = np.array([float(getattr(row, column)) for row in rows])
    if np.any(values <= 0):
        raise ValueError(f"column {column!r} must be positive to fit a slope")
    slope, _ = np.polyfit(np.log(deltas), np.log(values), 1)
    return float(slope)


def default_drift_estimator(increments, grid: Grid) -> np.ndarray:
    """Piecewise-constant drift estimate with moving-average smoothing.

    Raw per-interval rates ``increment / interval length`` are smoothed by
    a centered window of ``ceil(n**(1/3))`` intervals, renormalized at the
    edges.
    """
    inc = np.asarray(increments, dtype=float)
    n = grid.n
    if inc.size != n:
        raise ValueError("need one increment per grid interval")
    raw = inc / grid.deltas
    window = max(1, math.ceil(n ** (1.0 / 3.0)))
    kernel = np.ones(window)
    num = np.convolve(raw, kernel, mode="same")
    den = np.convolve(np.ones(n), kernel, mode="same")
    return num / den


def _integrated_squared_error(estimate: np.ndarray, f_at_times: np.ndarray,
                              grid: Grid) -> float:
    """Trapezoid integral of (estimate - f)^2 on the observation grid."""
    left = (estimate - f_at_times[:-1]) ** 2
    right = (estimate - f_at_times[1:]) ** 2
    return float(np.sum(grid.deltas * 0.5 * (left + right)))


def run_risk_transfer(spec: ModelSpec, delta, n_values, replications: int,
                      rng: RngStream) -> list[RiskRow]:
    """Paired Monte Carlo risks of direct, transferred, and naive use.

    ``delta(increments, grid)`` must return per-interval drift estimates.
    Per replication, one jump path and one independent Gaussian sample
    share the same drift; the estimator runs on the Gaussian increments
    (direct), on the jump sample through the fractional-part transfer, and
    on the raw jump increments (naive).  Risks are averaged integrated
    squared errors.
    """
    if replications < 1:
        raise ValueError("replications must be at least 1")
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise ValueError("n_values must be non-empty")
    if not _is_lattice_law(spec.jump_law):
        raise ValueError(
            "transfer via the fractional-part filter needs integer jumps")
    rows: list[RiskRow] = []
    for ni, n in enumerate(n_values):
        grid = Grid.uniform(spec.horizon, n)
        summaries = build_increment_summaries(spec, grid)
        f_at_times = np.asarray(spec.drift(grid.times), dtype=float)

        def one_rep(rep: int, _ni=ni, _grid=grid, _summ=summaries,
                    _f=f_at_times):
            base = (_ni * replications + rep) * 4
            path = sample_path(spec, _grid, _summ, rng.child(base))
            wn = sample_white_noise_increments(spec, _grid, _summ,
                                               rng.child(base + 1))
            obs = spec.initial + np.concatenate(
                ([0.0], np.cumsum(path.increments)))
            raw_inc = np.diff(obs)
            direct = _integrated_squared_error(delta(wn, _grid), _f, _grid)
            transferred = _integrated_squared_error(
                transfer_estimator(lambda v: delta(v, _grid), obs), _f, _grid)
            naive = _integrated_squared_error(delta(raw_inc, _grid), _f, _grid)
            return direct, transferred, naive

        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            results = list(pool.map(one_rep, range(replications)))
        arr = np.asarray(results)  # ordered by replication index
        rows.append(RiskRow(
            n=n,
            mise_direct_gaussian=float(arr[:, 0].mean()),
            mise_transferred=float(arr[:, 1].mean()),
            mise_naive_on_jumps=float(arr[:, 2].mean()),
            replications=replications))
    return rows
