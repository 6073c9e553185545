"""Experiment parameterization for discretely observed jump diffusions.

The observed process accumulates a deterministic drift, a Brownian part with
known time-dependent volatility scaled by a noise level ``epsilon_n``, and
compound Poisson jumps.  This module holds the experiment description
(:class:`ModelSpec`), observation grids, jump size laws, and the per-interval
summary integrals

    m_i      = integral of the drift over the interval,
    sigma_i^2 = integral of the squared noise volatility,
    lambda_i = integral of the jump intensity,
    alpha_i  = lambda_i * exp(-lambda_i),

which every downstream law, kernel, and bound consumes.

Drift, volatility, and intensity are evaluation callbacks wrapped in
:class:`TimeFunction`; exact antiderivative hooks are used when available
(constant, affine, sinusoid) and adaptive quadrature is the fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

__all__ = [
    "QuadratureError",
    "TimeFunction",
    "constant",
    "linear",
    "sine",
    "from_callable",
    "as_time_function",
    "JumpLaw",
    "DiracJump",
    "LatticeJumps",
    "ContinuousJumps",
    "uniform_jumps",
    "gaussian_jumps",
    "HolderClassParams",
    "Grid",
    "ModelSpec",
    "IntervalSummary",
    "IncrementSummaries",
    "build_increment_summaries",
    "piecewise_drift",
    "check_sigma_log_derivative",
]

#: absolute tolerance for every adaptive time integral in this module
QUAD_ABS_TOL = 1e-10

_MASK64 = (1 << 64) - 1


class QuadratureError(RuntimeError):
    """An adaptive integral failed to converge to its tolerance."""


def _quad(fn, a, b, *, name: str, epsabs: float = QUAD_ABS_TOL) -> float:
    res = integrate.quad(fn, a, b, epsabs=epsabs, epsrel=1e-10, limit=200,
                         full_output=True)
    if len(res) > 3:
        raise QuadratureError(
            f"{name} integral over [{a:g}, {b:g}] did not converge: {res[3]}")
    value = res[0]
    if not math.isfinite(value):
        raise QuadratureError(
            f"{name} integral over [{a:g}, {b:g}] is not finite")
    return float(value)


# ---------------------------------------------------------------------------
# time functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeFunction:
    """Scalar function of time with optional exact integral hooks.

    ``fn`` must accept scalars and numpy arrays.  ``integral(a, b)`` and
    ``square_integral(a, b)`` return the exact integral of ``fn`` and of
    ``fn**2`` when closed forms exist; quadrature fills in otherwise.
    ``label``/``params`` record how the function was built so configs can be
    round-tripped.
    """

    fn: Callable
    integral: Callable | None = None
    square_integral: Callable | None = None
    label: str = "custom"
    params: tuple[float, ...] = ()

    def __call__(self, t):
        return self.fn(t)


def constant(value: float) -> TimeFunction:
    v = float(value)
    return TimeFunction(
        fn=lambda t: v + 0.0 * np.asarray(t, dtype=float),
        integral=lambda a, b: v * (b - a),
        square_integral=lambda a, b: v * v * (b - a),
        label="constant",
        params=(v,),
    )


def linear(intercept: float, slope: float) -> TimeFunction:
    p, q = float(intercept), float(slope)

    def _int(a, b):
        return p * (b - a) + 0.5 * q * (b * b - a * a)

    def _int_sq(a, b):
        if q == 0.0:
            return p * p * (b - a)
        return ((p + q * b) ** 3 - (p + q * a) ** 3) / (3.0 * q)

    return TimeFunction(
        fn=lambda t: p + q * np.asarray(t, dtype=float),
        integral=_int,
        square_integral=_int_sq,
        label="linear",
        params=(p, q),
    )


def sine(offset: float, amplitude: float, angular_frequency: float,
         phase: float = 0.0) -> TimeFunction:
    c, amp, w, ph = (float(offset), float(amplitude),
                     float(angular_frequency), float(phase))
    if w == 0.0:
        return constant(c + amp * math.sin(ph))

    def _int(a, b):
        return (c * (b - a)
                - (amp / w) * (math.cos(w * b + ph) - math.cos(w * a + ph)))

    def _int_sq(a, b):
        cross = -(2.0 * c * amp / w) * (math.cos(w * b + ph)
                                        - math.cos(w * a + ph))
        square = (amp * amp) * (0.5 * (b - a)
                                - (math.sin(2 * (w * b + ph))
                                   - math.sin(2 * (w * a + ph))) / (4.0 * w))
        return c * c * (b - a) + cross + square

    return TimeFunction(
        fn=lambda t: c + amp * np.sin(w * np.asarray(t, dtype=float) + ph),
        integral=_int,
        square_integral=_int_sq,
        label="sine",
        params=(c, amp, w, ph),
    )


def from_callable(fn: Callable, integral: Callable | None = None,
                  square_integral: Callable | None = None) -> TimeFunction:
    return TimeFunction(fn=fn, integral=integral,
                        square_integral=square_integral)


def as_time_function(obj) -> TimeFunction:
    if isinstance(obj, TimeFunction):
        return obj
    if callable(obj):
        return from_callable(obj)
    if isinstance(obj, (int, float)):
        return constant(float(obj))
    raise TypeError(f"cannot interpret {obj!r} as a function of time")


def integral_of(tf: TimeFunction, a: float, b: float, *,
                name: str = "function") -> float:
    if tf.integral is not None:
        return float(tf.integral(a, b))
    return _quad(lambda t: float(tf.fn(t)), a, b, name=name)


def integral_of_square(tf: TimeFunction, a: float, b: float, *,
                       name: str = "function") -> float:
    if tf.square_integral is not None:
        return float(tf.square_integral(a, b))
    return _quad(lambda t: float(tf.fn(t)) ** 2, a, b, name=f"squared {name}")


# ---------------------------------------------------------------------------
# jump size laws
# ---------------------------------------------------------------------------

class JumpLaw:
    """Marker base class for jump size distributions."""

    __slots__ = ()


@dataclass(frozen=True)
class DiracJump(JumpLaw):
    """All jumps share one deterministic size."""

    location: float

    def mean(self) -> float:
        return float(self.location)

    def cf(self, u):
        return np.exp(1j * np.asarray(u, dtype=float) * self.location)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return np.full(int(size), float(self.location))


@dataclass(frozen=True)
class LatticeJumps(JumpLaw):
    """Jump sizes on the integer lattice with an explicit pmf."""

    values: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        vals = [float(v) for v in self.values]
        if len(vals) == 0 or len(vals) != len(self.probs):
            raise ValueError("values and probs must be non-empty and aligned")
        if any(not float(v).is_integer() for v in vals):
            raise ValueError("lattice jump values must be integers")
        probs = np.asarray(self.probs, dtype=float)
        if np.any(probs < 0):
            raise ValueError("lattice jump masses must be non-negative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(
                f"lattice jump masses sum to {probs.sum()!r}, expected 1")
        object.__setattr__(self, "values", tuple(int(v) for v in vals))
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))

    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def cf(self, u):
        u = np.asarray(u, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        return np.exp(1j * np.multiply.outer(u, vals)) @ probs

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        probs = np.asarray(self.probs, dtype=float)
        probs = probs / probs.sum()
        return gen.choice(np.asarray(self.values, dtype=float),
                          p=probs, size=int(size))

    def kfold_pmf(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Support and masses of the sum of ``k`` independent copies."""
        if k == 0:
            return np.array([0.0]), np.array([1.0])
        vmin, vmax = min(self.values), max(self.values)
        base = np.zeros(vmax - vmin + 1)
        for v, p in zip(self.values, self.probs):
            base[v - vmin] = p
        acc = base
        for _ in range(k - 1):
            acc = np.convolve(acc, base)
        support = np.arange(k * vmin, k * vmax + 1, dtype=float)
        return support, acc


@dataclass(frozen=True)
class ContinuousJumps(JumpLaw):
    """Jump sizes with a Lebesgue density on a bounded effective support.

    ``n1``/``n2`` record the near-zero envelope (density bounded by ``n2``
    on ``[-1/n1, 1/n1]``) that the resampling-kernel bound integrates over.
    Optional hooks supply a closed-form sampler, characteristic function,
    and Gaussian convolution; quadrature and a shared evaluation grid fill
    in when they are missing.  ``exact_gauss_conv(k, m, s2)`` may return
    ``("gaussian", mu, var)``, ``("pdf", fn, support, breakpoints)``, or
    ``None`` to request the grid fallback.
    """

    density: Callable
    support: tuple[float, float]
    n1: float = 1.0
    n2: float | None = None
    sampler: Callable | None = None
    cf_fn: Callable | None = None
    exact_gauss_conv: Callable | None = None
    label: str = "custom"
    params: tuple[float, ...] = ()

    def __post_init__(self):
        lo, hi = (float(self.support[0]), float(self.support[1]))
        if not lo < hi:
            raise ValueError("jump density support must be a proper interval")
        object.__setattr__(self, "support", (lo, hi))
        if self.n1 <= 0:
            raise ValueError("n1 must be positive")
        mass = _quad(lambda y: float(self.density(y)), lo, hi,
                     name="jump density", epsabs=1e-11)
        if abs(mass - 1.0) > 1e-8:
            raise ValueError(
                f"jump density integrates to {mass!r}, expected 1")
        if self.n2 is None:
            a, b = max(lo, -1.0 / self.n1), min(hi, 1.0 / self.n1)
            if a < b:
                probe = np.linspace(a, b, 513)
                bound = float(np.max(np.asarray(self.density(probe),
                                                dtype=float)))
            else:
                bound = 0.0
            object.__setattr__(self, "n2", bound)

    def mean(self) -> float:
        lo, hi = self.support
        return _quad(lambda y: y * float(self.density(y)), lo, hi,
                     name="jump mean", epsabs=1e-11)

    def cf(self, u):
        if self.cf_fn is not None:
            return self.cf_fn(u)
        u = np.asarray(u, dtype=float)
        lo, hi = self.support

        def _one(uu: float) -> complex:
            re = _quad(lambda y: float(self.density(y)) * math.cos(uu * y),
                       lo, hi, name="jump cf (real)", epsabs=1e-11)
            im = _quad(lambda y: float(self.density(y)) * math.sin(uu * y),
                       lo, hi, name="jump cf (imag)", epsabs=1e-11)
            return complex(re, im)

        if u.ndim == 0:
            return _one(float(u))
        return np.array([_one(float(uu)) for uu in u])

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        if self.sampler is not None:
            return np.asarray(self.sampler(gen, int(size)), dtype=float)
        # inverse transform on a dense CDF table
        lo, hi = self.support
        ys = np.linspace(lo, hi, 4097)
        dens = np.asarray(self.density(ys), dtype=float)
        cdf = np.concatenate(([0.0], np.cumsum(
            0.5 * (dens[1:] + dens[:-1]) * np.diff(ys))))
        cdf /= cdf[-1]
        u = gen.random(int(size))
        return np.interp(u, cdf, ys)


def uniform_jumps(lo: float, hi: float) -> ContinuousJumps:
    """Uniform jump sizes on ``[lo, hi]``."""
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    width = hi - lo
    dens = 1.0 / width

    def _density(y):
        y = np.asarray(y, dtype=float)
        return np.where((y >= lo) & (y <= hi), dens, 0.0)

    def _cf(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = (np.exp(1j * u * hi) - np.exp(1j * u * lo)) / (1j * u * width)
        return np.where(u == 0, 1.0 + 0.0j, vals)

    def _conv(k, m, s2):
        if k != 1:
            return None
        from . import _gauss
        sd = math.sqrt(s2)

        def pdf(x):
            x = np.asarray(x, dtype=float)
            return (_gauss.norm_cdf((x - m - lo) / sd)
                    - _gauss.norm_cdf((x - m - hi) / sd)) * dens

        support = (m + lo - 12.0 * sd, m + hi + 12.0 * sd)
        return ("pdf", pdf, support, (m + lo, m + hi))

    return ContinuousJumps(
        density=_density, support=(lo, hi),
        n1=1.0 / max(abs(lo), abs(hi), 1.0), n2=None,
        sampler=lambda gen, size: gen.uniform(lo, hi, size),
        cf_fn=_cf, exact_gauss_conv=_conv,
        label="uniform", params=(lo, hi),
    )


def gaussian_jumps(mean: float, sd: float) -> ContinuousJumps:
    """Normally distributed jump sizes."""
    mu, s = float(mean), float(sd)
    if s <= 0:
        raise ValueError("sd must be positive")
    from . import _gauss

    def _conv(k, m, s2):
        return ("gaussian", m + k * mu, s2 + k * s * s)

    return ContinuousJumps(
        density=lambda y: _gauss.norm_pdf(y, mu, s),
        support=(mu - 12.0 * s, mu + 12.0 * s),
        n1=1.0, n2=None,
        sampler=lambda gen, size: gen.normal(mu, s, size),
        cf_fn=lambda u: np.exp(1j * np.asarray(u, dtype=float) * mu
                               - 0.5 * np.asarray(u, dtype=float) ** 2 * s * s),
        exact_gauss_conv=_conv,
        label="gaussian", params=(mu, s),
    )


# ---------------------------------------------------------------------------
# smoothness class, grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolderClassParams:
    """Holder smoothness class: exponent, uniform Holder constant, sup bound."""

    alpha: float
    M: float
    B: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if self.M <= 0 or self.B <= 0:
            raise ValueError("M and B must be positive")


@dataclass(frozen=True)
class Grid:
    """Sorted observation times ``0 = t_0 < t_1 < ... < t_n``."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("grid needs at least two observation times")
        if t[0] != 0.0:
            raise ValueError("grid must start at t_0 = 0")
        if np.any(np.diff(t) <= 0):
            raise ValueError("grid times must be strictly increasing")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, horizon: float, n: int) -> "Grid":
        if n < 1:
            raise ValueError("need at least one interval")
        return cls(np.linspace(0.0, float(horizon), int(n) + 1))

    @property
    def n(self) -> int:
        return self.times.size - 1

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def deltas(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.times)))


# ---------------------------------------------------------------------------
# model specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    """Full description of one observation experiment.

    Parameters
    ----------
    drift, sigma, intensity:
        Time functions (callables or :class:`TimeFunction`) for the drift,
        the volatility factor, and the jump intensity.  The effective noise
        volatility is ``epsilon_n * sigma(t)``.
    epsilon_n:
        Positive noise level multiplying ``sigma``.
    jump_law:
        Distribution of a single jump size.
    horizon:
        Terminal time ``T_n``.
    initial:
        Starting value of the path.
    intensity_max:
        Optional known upper bound for the intensity; when missing, samplers
        find one by a dense scan with a safety factor.
    """

    drift: TimeFunction
    sigma: TimeFunction
    epsilon_n: float
    intensity: TimeFunction
    jump_law: JumpLaw
    horizon: float
    initial: float = 0.0
    intensity_max: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "drift", as_time_function(self.drift))
        object.__setattr__(self, "sigma", as_time_function(self.sigma))
        object.__setattr__(self, "intensity",
                           as_time_function(self.intensity))
        if not self.epsilon_n > 0:
            raise ValueError("epsilon_n must be positive")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if not isinstance(self.jump_law, JumpLaw):
            raise TypeError("jump_law must be a JumpLaw instance")
        probe = np.linspace(0.0, self.horizon, 257)
        sig = np.asarray(self.sigma(probe), dtype=float)
        if np.any(~np.isfinite(sig)) or np.any(sig <= 0):
            raise ValueError("sigma must be positive on [0, horizon]")
        lam = np.asarray(self.intensity(probe), dtype=float)
        if np.any(~np.isfinite(lam)) or np.any(lam < -1e-12):
            raise ValueError("intensity must be non-negative on [0, horizon]")

    def sigma_n(self, t):
        return self.epsilon_n * np.asarray(self.sigma(t), dtype=float)


@dataclass(frozen=True)
class IntervalSummary:
    """Summary integrals of one observation interval."""

    m: float
    sigma2: float
    lam: float
    alpha: float | None = None

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        expected = self.lam * math.exp(-self.lam)
        if self.alpha is None:
            object.__setattr__(self, "alpha", expected)
        elif abs(self.alpha - expected) > 1e-12 * max(1.0, expected):
            raise ValueError("alpha must equal lam * exp(-lam)")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


@dataclass(frozen=True)
class IncrementSummaries:
    """Per-interval summary integrals for a whole grid (arrays of length n)."""

    m: np.ndarray
    sigma2: np.ndarray
    lam: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("m", "sigma2", "lam", "alpha"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        n = arrays["m"].size
        if any(a.size != n for a in arrays.values()) or n == 0:
            raise ValueError("summary arrays must share a positive length")
        if np.any(arrays["sigma2"] <= 0):
            raise ValueError("sigma2 entries must be positive")
        if np.any(arrays["lam"] < 0):
            raise ValueError("lam entries must be non-negative")
        expected = arrays["lam"] * np.exp(-arrays["lam"])
        if not np.allclose(arrays["alpha"], expected, rtol=1e-13, atol=1e-300):
            raise ValueError("alpha must equal lam * exp(-lam) elementwise")

    @property
    def n(self) -> int:
        return self.m.size

    def interval(self, i: int) -> IntervalSummary:
        return IntervalSummary(m=float(self.m[i]), sigma2=float(self.sigma2[i]),
                               lam=float(self.lam[i]), alpha=float(self.alpha[i]))


def build_increment_summaries(spec: ModelSpec, grid: Grid) -> IncrementSummaries:
    """Integrate drift, squared noise volatility, and intensity per interval."""
    if grid.horizon > spec.horizon + 1e-12:
        raise ValueError("grid extends past the model horizon")
    times = grid.times
    n = grid.n
    m = np.empty(n)
    sigma2 = np.empty(n)
    lam = np.empty(n)
    eps2 = spec.epsilon_n ** 2
    for i in range(n):
        a, b = float(times[i]), float(times[i + 1])
        m[i] = integral_of(spec.drift, a, b, name="drift")
        sigma2[i] = eps2 * integral_of_square(spec.sigma, a, b, name="sigma")
        lam_i = integral_of(spec.intensity, a, b, name="intensity")
        if lam_i < -1e-12:
            raise ValueError(f"negative intensity mass on [{a:g}, {b:g}]")
        lam[i] = max(lam_i, 0.0)
        if sigma2[i] <= 0:
            raise ValueError(f"vanishing noise variance on [{a:g}, {b:g}]")
    alpha = lam * np.exp(-lam)
    return IncrementSummaries(m=m, sigma2=sigma2, lam=lam, alpha=alpha)


def piecewise_drift(f, grid: Grid):
    """Right-endpoint piecewise-constant approximation of ``f`` on the grid.

    The returned function takes the value ``f(t_i)`` on ``[t_{i-1}, t_i)``
    and ``f(T_n)`` at the terminal time.
    """
    tf = as_time_function(f)
    times = grid.times
    fvals = np.asarray(tf(times), dtype=float)

    def fbar(t):
        t_arr = np.asarray(t, dtype=float)
        idx = np.searchsorted(times, t_arr, side="right")
        idx = np.clip(idx, 1, times.size - 1)
        out = np.where(t_arr >= times[-1], fvals[-1], fvals[idx])
        return float(out) if out.ndim == 0 else out

    return fbar


def check_sigma_log_derivative(sigma, c1: float, grid: Grid) -> bool:
    """Check ``|d/dt log sigma(t)| <= c1`` at interval midpoints.

    Uses a central finite difference with step ``mesh / 100`` and a 1e-8
    slack on the comparison.  Raises if the probed volatility is not
    positive.
    """
    tf = as_time_function(sigma)
    h = grid.mesh / 100.0
    mids = 0.5 * (grid.times[:-1] + grid.times[1:])
    hi = np.asarray(tf(mids + h), dtype=float)
    lo = np.asarray(tf(mids - h), dtype=float)
    if np.any(hi <= 0) or np.any(lo <= 0):
        raise ValueError("sigma must stay positive near the grid midpoints")
    deriv = (np.log(hi) - np.log(lo)) / (2.0 * h)
    return bool(np.max(np.abs(deriv)) <= c1 + 1e-8)
