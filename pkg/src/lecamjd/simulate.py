"""Exact-law samplers for the jump-diffusion and its companion experiments.

The continuous part of an increment is drawn exactly from its Gaussian law
(no Euler stepping, hence no discretization bias in any distance check);
jumps come from an inhomogeneous Poisson process sampled by thinning with a
dominating constant rate.  The white-noise and one-jump experiments reuse
the same summary integrals.

Randomness is supplied through :class:`RngStream`, a (seed, stream_id) pair
mapped to a counter-based Philox generator.  A fresh generator is built per
call, so every sampler is a pure function of its arguments: the same stream
always reproduces the same draws bitwise, and distinct stream ids give
independent streams for parallel replications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Grid, IncrementSummaries, IntervalSummary, JumpLaw, ModelSpec

__all__ = [
    "RngStream",
    "PathSample",
    "sample_inhomogeneous_poisson",
    "sample_path",
    "sample_white_noise_increments",
    "sample_bernoulli_approx",
    "sample_increment_batch",
    "find_intensity_bound",
    "bin_jump_sums",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Seed plus stream id; distinct ids give independent streams."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed & _MASK64,
                                    spawn_key=(self.stream_id & _MASK64,))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, offset: int) -> "RngStream":
        """Derived stream; callers compose offsets to keep ids distinct."""
        return RngStream(self.seed, (self.stream_id << 20) ^ offset)


@dataclass(frozen=True)
class PathSample:
    """Observed increments plus the simulator's jump bookkeeping.

    ``increments[i] = gaussian_parts[i] + sum of jump_sizes in
    (t_{i-1}, t_i]``; keeping the decomposition lets oracle-side statistics
    remove the jumps exactly.
    """

    times: np.ndarray
    increments: np.ndarray
    gaussian_parts: np.ndarray
    jump_times: np.ndarray
    jump_sizes: np.ndarray

    def __post_init__(self):
        for name in ("times", "increments", "gaussian_parts", "jump_times",
                     "jump_sizes"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.jump_times.size != self.jump_sizes.size:
            raise ValueError("jump_times and jump_sizes must align")
        if self.increments.size != self.times.size - 1:
            raise ValueError("need one increment per grid interval")


def sample_inhomogeneous_poisson(intensity, lambda_max: float,
                                 horizon: float, rng: RngStream) -> np.ndarray:
    """Jump times of an inhomogeneous Poisson process by thinning.

    Candidates arrive at constant rate ``lambda_max``; each is kept with
    probability ``intensity(t) / lambda_max``.  Raises if the intensity
    exceeds the dominating rate anywhere it is probed.
    """
    if lambda_max < 0 or not math.isfinite(lambda_max):
        raise ValueError("lambda_max must be a finite nonnegative rate")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    gen = rng.generator()
    if lambda_max == 0.0:
        return np.empty(0)
    count = int(gen.poisson(lambda_max * horizon))
    candidates = np.sort(gen.uniform(0.0, horizon, count))
    accept_u = gen.random(count)
    rates = np.asarray(intensity(candidates), dtype=float)
    if np.any(rates > lambda_max * (1.0 + 1e-12)):
        t_bad = float(candidates[np.argmax(rates)])
        raise ValueError(
            f"intensity({t_bad:g}) = {float(np.max(rates)):g} exceeds the "
            f"dominating rate {lambda_max:g}")
    return candidates[accept_u * lambda_max < rates]


def find_intensity_bound(spec: ModelSpec) -> float:
    """Dominating rate: the declared bound or a padded dense-scan maximum."""
    if spec.intensity_max is not None:
        return float(spec.intensity_max)
    probe = np.linspace(0.0, spec.horizon, 4097)
    peak = float(np.max(np.asarray(spec.intensity(probe), dtype=float)))
    return peak * 1.05


def bin_jump_sums(times: np.ndarray, jump_times: np.ndarray,
                  jump_sizes: np.ndarray) -> np.ndarray:
    """Sum jump sizes per grid interval, interval i owning (t_{i-1}, t_i]."""
    n = times.size - 1
    if jump_times.size == 0:
        return np.zeros(n)
    idx = np.searchsorted(times, jump_times, side="left") - 1
    idx = np.clip(idx, 0, n - 1)
    return np.bincount(idx, weights=jump_sizes, minlength=n)


def sample_path(spec: ModelSpec, grid: Grid, summaries: IncrementSummaries,
                rng: RngStream) -> PathSample:
    """One path of the jump-diffusion experiment, observed on the grid.

    Draw order (fixed for reproducibility): Gaussian parts, Poisson
    candidate count, candidate times, acceptance uniforms, jump sizes.
    """
    gen = rng.generator()
    n = grid.n
    gaussian = summaries.m + np.sqrt(summaries.sigma2) * gen.standard_normal(n)
    lambda_max = find_intensity_bound(spec)
    if lambda_max > 0:
        count = int(gen.poisson(lambda_max * grid.horizon))
        candidates = np.sort(gen.uniform(0.0, grid.horizon, count))
        accept_u = gen.random(count)
        rates = np.asarray(spec.intensity(candidates), dtype=float)
        if np.any(rates > lambda_max * (1.0 + 1e-12)):
            raise ValueError("intensity exceeds its dominating rate")
        keep = accept_u * lambda_max < rates
        jump_times = candidates[keep]
    else:
        jump_times = np.empty(0)
    jump_sizes = (spec.jump_law.sample(gen, jump_times.size)
                  if jump_times.size else np.empty(0))
    increments = gaussian + bin_jump_sums(grid.times, jump_times, jump_sizes)
    return PathSample(times=grid.times, increments=increments,
                      gaussian_parts=gaussian, jump_times=jump_times,
                      jump_sizes=jump_sizes)


def sample_white_noise_increments(spec: ModelSpec, grid: Grid,
                                  summaries: IncrementSummaries,
                                  rng: RngStream) -> np.ndarray:
    """Independent Gaussian increments of the white-noise experiment."""
    gen = rng.generator()
    n = grid.n
    return summaries.m + np.sqrt(summaries.sigma2) * gen.standard_normal(n)


def sample_bernoulli_approx(spec: ModelSpec, grid: Grid,
                            summaries: IncrementSummaries,
                            rng: RngStream) -> np.ndarray:
    """Increments of the one-jump approximation experiment.

    Increment i is Gaussian plus a single jump with probability
    ``alpha_i``.  Draw order: Gaussians, Bernoulli uniforms, jump sizes.
    """
    gen = rng.generator()
    n = grid.n
    gaussian = summaries.m + np.sqrt(summaries.sigma2) * gen.standard_normal(n)
    has_jump = gen.random(n) < summaries.alpha
    sizes = np.zeros(n)
    k = int(np.count_nonzero(has_jump))
    if k:
        sizes[has_jump] = spec.jump_law.sample(gen, k)
    return gaussian + sizes


def sample_increment_batch(summary: IntervalSummary, jump_law: JumpLaw,
                           rng: RngStream, size: int) -> np.ndarray:
    """Many independent draws of one interval's exact increment law.

    Draw order: Poisson counts, all jump sizes (flat), Gaussians.
    """
    if size < 1:
        raise ValueError("size must be positive")
    gen = rng.generator()
    counts = gen.poisson(summary.lam, size)
    total = int(counts.sum())
    jump_part = np.zeros(size)
    if total:
        draws = jump_law.sample(gen, total)
        ids = np.repeat(np.arange(size), counts)
        jump_part = np.bincount(ids, weights=draws, minlength=size)
    sd = math.sqrt(summary.sigma2)
    return summary.m + sd * gen.standard_normal(size) + jump_part
