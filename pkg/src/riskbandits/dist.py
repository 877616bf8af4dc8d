"""Reward distributions: analytic arm models, empirical CDFs, and mixtures.

Every distribution exposes the same small surface: a right-continuous CDF
with first-class left limits, the generalized inverse (quantile), exact
moment/tail integrals, a seeded sampler, and the CDF integral
``int_{-inf}^{v} F(y) dy`` used by the low-tail-average criterion.

All values are immutable after construction; samplers take an explicit
numpy ``Generator``, so instances are safe to share across threads and
processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DomainError

__all__ = [
    "RewardDistribution",
    "Gaussian",
    "PointMass",
    "Uniform",
    "TwoPoint",
    "PiecewiseLinearCDF",
    "EmpiricalDistribution",
    "MixtureDistribution",
    "empirical_from_samples",
    "mixture",
    "proxy_distribution",
    "tail_integral",
]

_WEIGHT_TOL = 1e-12

# Density of the standard normal at 0 and friends.
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _norm_pdf(z):
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(z))


class RewardDistribution:
    """Common interface for all reward distribution kinds."""

    #: True when the CDF has an absolutely continuous non-linear part
    #: (currently: a Gaussian component).  Drives sup-distance refinement.
    has_smooth_part = False

    #: True when the CDF has linear pieces with positive slope.
    has_sloped_part = False

    # -- CDF surface ----------------------------------------------------

    def cdf(self, y):
        """Right-continuous CDF, scalar or elementwise on arrays."""
        raise NotImplementedError

    def cdf_left(self, y):
        """Left limit ``lim_{z -> y-} F(z)``."""
        raise NotImplementedError

    def quantile(self, alpha: float) -> float:
        """Generalized inverse ``inf{y | F(y) >= alpha}`` for alpha in (0,1)."""
        _check_alpha(alpha)
        return self._quantile(alpha)

    def upper_quantile(self, c: float) -> float:
        """``inf{y | F(y) > c}``: the right edge of the level-c stretch."""
        raise NotImplementedError

    def _quantile(self, alpha: float) -> float:
        raise NotImplementedError

    # -- sampling --------------------------------------------------------

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n i.i.d. draws; deterministic given the generator state."""
        if n < 1:
            raise DomainError(f"sample size must be >= 1, got {n}")
        return self._sample(rng, n)

    def _sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    # -- exact integrals ---------------------------------------------------

    def mean(self) -> float:
        raise NotImplementedError

    def second_moment(self) -> float:
        raise NotImplementedError

    def below_target_semivariance(self, r: float) -> float:
        """``int (x-r)^2 1{x <= r} dF`` (non-negative)."""
        raise NotImplementedError

    def exp_moment(self, theta: float) -> float:
        """``int exp(-theta x) dF`` for theta > 0."""
        raise NotImplementedError

    def lower_tail(self) -> float:
        """Signed ``int_{-inf}^0 x dF`` (typically <= 0)."""
        raise NotImplementedError

    def upper_tail(self) -> float:
        """Signed ``int_0^inf x dF`` (>= 0)."""
        raise NotImplementedError

    def cdf_integral_below(self, v: float) -> float:
        """``int_{-inf}^v F(y) dy`` (finite whenever the lower tail is)."""
        raise NotImplementedError

    # -- structure used by norms / checks ---------------------------------

    def breakpoints(self) -> np.ndarray:
        """Jump and kink locations of the CDF (sorted)."""
        raise NotImplementedError

    def smooth_probe_points(self) -> np.ndarray:
        """Extra evaluation candidates bracketing smooth-part extrema."""
        return np.array([])

    def support_bounds(self) -> tuple[float, float]:
        """An interval carrying all but ~1e-12 of the mass."""
        raise NotImplementedError

    def level_set(self, alpha: float):
        """Classify ``{y | F(y) = alpha}`` as ('empty'|'point'|'interval', lo, hi)."""
        _check_alpha(alpha)
        return self._level_set(alpha)

    def _level_set(self, alpha: float):
        raise NotImplementedError

    def as_piecewise(self):
        """Exact piecewise-linear representation, or None (smooth kinds)."""
        return None


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"percentile level must lie in (0,1), got {alpha}")


# ---------------------------------------------------------------------------
# Analytic kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gaussian(RewardDistribution):
    mean_value: float
    stddev: float

    has_smooth_part = True

    def __post_init__(self):
        if self.stddev <= 0:
            raise DomainError(f"stddev must be positive, got {self.stddev}")

    def cdf(self, y):
        return ndtr((np.asarray(y, dtype=float) - self.mean_value) / self.stddev)

    def cdf_left(self, y):
        return self.cdf(y)

    def _quantile(self, alpha):
        return self.mean_value + self.stddev * float(ndtri(alpha))

    def upper_quantile(self, c):
        if c <= 0.0:
            return -math.inf
        if c >= 1.0:
            return math.inf
        return self._quantile(c)

    def _sample(self, rng, n):
        return rng.normal(self.mean_value, self.stddev, size=n)

    def mean(self):
        return self.mean_value

    def second_moment(self):
        return self.mean_value**2 + self.stddev**2

    def below_target_semivariance(self, r):
        beta = (r - self.mean_value) / self.stddev
        phi = float(_norm_pdf(beta))
        Phi = float(ndtr(beta))
        s = self.stddev
        return s * s * (Phi - beta * phi) + 2 * s * (r - self.mean_value) * phi + (
            r - self.mean_value
        ) ** 2 * Phi

    def exp_moment(self, theta):
        return math.exp(-theta * self.mean_value + 0.5 * theta**2 * self.stddev**2)

    def _partial_mean(self, c):
        # int_{-inf}^c x dF
        beta = (c - self.mean_value) / self.stddev
        return self.mean_value * float(ndtr(beta)) - self.stddev * float(_norm_pdf(beta))

    def lower_tail(self):
        return self._partial_mean(0.0)

    def upper_tail(self):
        return self.mean_value - self._partial_mean(0.0)

    def cdf_integral_below(self, v):
        beta = (v - self.mean_value) / self.stddev
        return self.stddev * (beta * float(ndtr(beta)) + float(_norm_pdf(beta)))

    def breakpoints(self):
        return np.array([])

    def smooth_probe_points(self):
        return self.mean_value + self.stddev * np.linspace(-8.0, 8.0, 33)

    def support_bounds(self):
        return (self.mean_value - 9 * self.stddev, self.mean_value + 9 * self.stddev)

    def _level_set(self, alpha):
        q = self._quantile(alpha)
        return ("point", q, q)


@dataclass(frozen=True)
class PointMass(RewardDistribution):
    value: float

    def cdf(self, y):
        return (np.asarray(y, dtype=float) >= self.value).astype(float)

    def cdf_left(self, y):
        return (np.asarray(y, dtype=float) > self.value).astype(float)

    def _quantile(self, alpha):
        return self.value

    def upper_quantile(self, c):
        if c >= 1.0:
            return math.inf
        return self.value if c >= 0.0 else -math.inf

    def _sample(self, rng, n):
        return np.full(n, float(self.value))

    def mean(self):
        return self.value

    def second_moment(self):
        return self.value**2

    def below_target_semivariance(self, r):
        return (self.value - r) ** 2 if self.value <= r else 0.0

    def exp_moment(self, theta):
        return math.exp(-theta * self.value)

    def lower_tail(self):
        return self.value if self.value <= 0 else 0.0

    def upper_tail(self):
        return self.value if self.value > 0 else 0.0

    def cdf_integral_below(self, v):
        return max(0.0, v - self.value)

    def breakpoints(self):
        return np.array([self.value], dtype=float)

    def support_bounds(self):
        return (self.value, self.value)

    def _level_set(self, alpha):
        return ("empty", math.nan, math.nan)

    def as_piecewise(self):
        return PiecewiseLinearCDF.from_jumps([(self.value, 1.0)])


@dataclass(frozen=True)
class Uniform(RewardDistribution):
    lo: float
    hi: float

    has_sloped_part = True

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"uniform needs lo < hi, got [{self.lo}, {self.hi}]")

    def _pw(self):
        return PiecewiseLinearCDF(
            np.array([self.lo, self.hi]),
            np.array([0.0, 1.0]),
            np.array([0.0, 1.0]),
        )

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.clip((y - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def cdf_left(self, y):
        return self.cdf(y)

    def _quantile(self, alpha):
        return self.lo + alpha * (self.hi - self.lo)

    def upper_quantile(self, c):
        if c >= 1.0:
            return math.inf
        if c <= 0.0:
            return self.lo if c == 0.0 else -math.inf
        return self.lo + c * (self.hi - self.lo)

    def _sample(self, rng, n):
        return rng.uniform(self.lo, self.hi, size=n)

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def second_moment(self):
        return (self.lo**2 + self.lo * self.hi + self.hi**2) / 3.0

    def below_target_semivariance(self, r):
        return self._pw().below_target_semivariance(r)

    def exp_moment(self, theta):
        return (math.exp(-theta * self.lo) - math.exp(-theta * self.hi)) / (
            theta * (self.hi - self.lo)
        )

    def lower_tail(self):
        return self._pw().lower_tail()

    def upper_tail(self):
        return self._pw().upper_tail()

    def cdf_integral_below(self, v):
        return self._pw().cdf_integral_below(v)

    def breakpoints(self):
        return np.array([self.lo, self.hi], dtype=float)

    def support_bounds(self):
        return (self.lo, self.hi)

    def _level_set(self, alpha):
        q = self._quantile(alpha)
        return ("point", q, q)

    def as_piecewise(self):
        return self._pw()


@dataclass(frozen=True)
class TwoPoint(RewardDistribution):
    """Scaled Bernoulli: value ``hi`` with probability ``p``, else ``lo``."""

    p: float
    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise DomainError(f"probability must lie in [0,1], got {self.p}")
        if not self.lo < self.hi:
            raise DomainError(f"two-point needs lo < hi, got [{self.lo}, {self.hi}]")

    def _pw(self):
        return PiecewiseLinearCDF.from_jumps([(self.lo, 1.0 - self.p), (self.hi, self.p)])

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y >= self.hi, 1.0, np.where(y >= self.lo, 1.0 - self.p, 0.0))

    def cdf_left(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y > self.hi, 1.0, np.where(y > self.lo, 1.0 - self.p, 0.0))

    def _quantile(self, alpha):
        return self.lo if alpha <= 1.0 - self.p else self.hi

    def upper_quantile(self, c):
        if c >= 1.0:
            return math.inf
        if c >= 1.0 - self.p:
            return self.hi
        return self.lo if c >= 0.0 else -math.inf

    def _sample(self, rng, n):
        return np.where(rng.random(n) < self.p, float(self.hi), float(self.lo))

    def mean(self):
        return (1.0 - self.p) * self.lo + self.p * self.hi

    def second_moment(self):
        return (1.0 - self.p) * self.lo**2 + self.p * self.hi**2

    def below_target_semivariance(self, r):
        out = 0.0
        if self.lo <= r:
            out += (1.0 - self.p) * (self.lo - r) ** 2
        if self.hi <= r:
            out += self.p * (self.hi - r) ** 2
        return out

    def exp_moment(self, theta):
        return (1.0 - self.p) * math.exp(-theta * self.lo) + self.p * math.exp(
            -theta * self.hi
        )

    def lower_tail(self):
        out = 0.0
        if self.lo <= 0:
            out += (1.0 - self.p) * self.lo
        if self.hi <= 0:
            out += self.p * self.hi
        return out

    def upper_tail(self):
        return self.mean() - self.lower_tail()

    def cdf_integral_below(self, v):
        return (1.0 - self.p) * max(0.0, v - self.lo) + self.p * max(0.0, v - self.hi)

    def breakpoints(self):
        return np.array([self.lo, self.hi], dtype=float)

    def support_bounds(self):
        return (self.lo, self.hi)

    def _level_set(self, alpha):
        if math.isclose(alpha, 1.0 - self.p, rel_tol=0.0, abs_tol=1e-12) and self.p > 0:
            return ("interval", self.lo, self.hi)
        return ("empty", math.nan, math.nan)

    def as_piecewise(self):
        return self._pw()


class PiecewiseLinearCDF(RewardDistribution):
    """CDF made of jumps, flat stretches, and sloped linear segments.

    Knots are stored as strictly increasing locations ``ys`` with the left
    limit ``fl[k]`` and the right-continuous value ``fr[k]`` at each knot;
    a jump at ``ys[k]`` is encoded by ``fl[k] < fr[k]``.  Between knots the
    CDF interpolates linearly from ``fr[k]`` to ``fl[k+1]``; it is 0 before
    the first knot and 1 from the last one on.
    """

    def __init__(self, ys, fl, fr):
        ys = np.asarray(ys, dtype=float)
        fl = np.asarray(fl, dtype=float)
        fr = np.asarray(fr, dtype=float)
        if ys.ndim != 1 or len(ys) < 1 or len(fl) != len(ys) or len(fr) != len(ys):
            raise DomainError("piecewise CDF needs matching non-empty knot arrays")
        if np.any(np.diff(ys) <= 0):
            raise DomainError("piecewise knot locations must be strictly increasing")
        interleaved = np.column_stack([fl, fr]).ravel()
        if np.any(np.diff(interleaved) < -1e-12):
            raise DomainError("piecewise CDF values must be non-decreasing")
        if abs(fl[0]) > 1e-12 or abs(fr[-1] - 1.0) > 1e-12:
            raise DomainError("piecewise CDF must start at 0 and end at 1")
        self.ys = ys
        self.fl = np.minimum(np.maximum(fl, 0.0), 1.0)
        self.fr = np.minimum(np.maximum(fr, 0.0), 1.0)
        self.fl[0] = 0.0
        self.fr[-1] = 1.0
        self.ys.setflags(write=False)
        self.fl.setflags(write=False)
        self.fr.setflags(write=False)
        self.has_sloped_part = bool(np.any(self.fl[1:] > self.fr[:-1]))

    @classmethod
    def from_pairs(cls, pairs):
        """Build from (y, F(y)) pairs, linearly interpolated in between.

        A repeated y encodes a jump: ``(1, 0.0), (1, 0.1)`` jumps from 0 to
        0.1 at y=1.  The first pair must carry the left limit of the first
        knot, so a CDF jumping at its left edge starts with ``(y0, 0.0)``.
        """
        if not pairs:
            raise DomainError("piecewise CDF needs at least one knot")
        ys, fl, fr = [], [], []
        for y, f in pairs:
            y = float(y)
            f = float(f)
            if ys and y == ys[-1]:
                fr[-1] = f
            else:
                ys.append(y)
                fl.append(f)
                fr.append(f)
        return cls(np.array(ys), np.array(fl), np.array(fr))

    @classmethod
    def from_jumps(cls, atoms):
        """Pure step CDF from (location, mass) atoms."""
        atoms = sorted(atoms)
        ys, fl, fr = [], [], []
        acc = 0.0
        for y, m in atoms:
            ys.append(float(y))
            fl.append(acc)
            acc += float(m)
            fr.append(acc)
        if abs(acc - 1.0) > 1e-9:
            raise DomainError(f"atom masses must sum to 1, got {acc}")
        fr[-1] = 1.0
        return cls(np.array(ys), np.array(fl), np.array(fr))

    # CDF evaluation: vectorized over y.
    def cdf(self, y):
        scalar = np.isscalar(y) or np.ndim(y) == 0
        yv = np.atleast_1d(np.asarray(y, dtype=float))
        idx = np.searchsorted(self.ys, yv, side="right") - 1
        out = np.zeros(yv.shape, dtype=float)
        last = idx == len(self.ys) - 1
        out[last] = 1.0
        mid = (idx >= 0) & ~last
        k = idx[mid]
        f0 = self.fr[k]
        f1 = self.fl[k + 1]
        t = (yv[mid] - self.ys[k]) / (self.ys[k + 1] - self.ys[k])
        out[mid] = f0 + t * (f1 - f0)
        return float(out[0]) if scalar else out

    def cdf_left(self, y):
        scalar = np.isscalar(y) or np.ndim(y) == 0
        yv = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.atleast_1d(np.asarray(self.cdf(yv))).copy()
        at_knot = np.isin(yv, self.ys)
        if np.any(at_knot):
            kk = np.searchsorted(self.ys, yv[at_knot])
            out[at_knot] = self.fl[kk]
        out[yv > self.ys[-1]] = 1.0
        return float(out[0]) if scalar else out

    def _quantile(self, alpha):
        k = int(np.searchsorted(self.fr, alpha, side="left"))
        if k >= len(self.ys):
            return float(self.ys[-1])
        if self.fl[k] >= alpha and k > 0:
            f0, f1 = self.fr[k - 1], self.fl[k]
            if f1 > f0:
                t = (alpha - f0) / (f1 - f0)
                return float(self.ys[k - 1] + t * (self.ys[k] - self.ys[k - 1]))
            return float(self.ys[k - 1]) if f0 >= alpha else float(self.ys[k])
        return float(self.ys[k])

    def upper_quantile(self, c):
        if c >= 1.0:
            return math.inf
        if c < 0.0:
            return -math.inf
        # first knot whose right-continuous value exceeds c
        k = int(np.searchsorted(self.fr, c, side="right"))
        if k >= len(self.ys):
            return float(self.ys[-1])
        if k > 0 and self.fl[k] > c:
            f0, f1 = self.fr[k - 1], self.fl[k]
            if abs(f0 - c) <= 1e-12:
                return float(self.ys[k - 1])  # rises immediately after the knot
            t = (c - f0) / (f1 - f0)
            return float(self.ys[k - 1] + t * (self.ys[k] - self.ys[k - 1]))
        return float(self.ys[k])

    def quantile_array(self, u):
        u = np.asarray(u, dtype=float)
        ks = np.searchsorted(self.fr, u, side="left")
        ks = np.minimum(ks, len(self.ys) - 1)
        out = self.ys[ks].copy()
        interp = (ks > 0) & (self.fl[ks] >= u)
        k = ks[interp]
        f0 = self.fr[k - 1]
        f1 = self.fl[k]
        slope_ok = f1 > f0
        t = np.where(slope_ok, (u[interp] - f0) / np.where(slope_ok, f1 - f0, 1.0), 1.0)
        out[interp] = self.ys[k - 1] + t * (self.ys[k] - self.ys[k - 1])
        return out

    def _sample(self, rng, n):
        return self.quantile_array(rng.random(n))

    # exact segment/jump integral helpers ------------------------------

    def _jump_masses(self):
        return self.fr - self.fl

    def _segments(self):
        """(a, b, slope) for each inter-knot linear piece with slope > 0."""
        a = self.ys[:-1]
        b = self.ys[1:]
        df = self.fl[1:] - self.fr[:-1]
        slope = df / (b - a)
        keep = df > 0
        return a[keep], b[keep], slope[keep]

    def mean(self):
        out = float(np.dot(self.ys, self._jump_masses()))
        a, b, s = self._segments()
        out += float(np.sum(s * (b**2 - a**2) / 2.0))
        return out

    def second_moment(self):
        out = float(np.dot(self.ys**2, self._jump_masses()))
        a, b, s = self._segments()
        out += float(np.sum(s * (b**3 - a**3) / 3.0))
        return out

    def below_target_semivariance(self, r):
        m = self._jump_masses()
        sel = self.ys <= r
        out = float(np.dot((self.ys[sel] - r) ** 2, m[sel]))
        a, b, s = self._segments()
        bb = np.minimum(b, r)
        cut = a < bb
        aa, bb, ss = a[cut], bb[cut], s[cut]
        out += float(np.sum(ss * ((bb - r) ** 3 - (aa - r) ** 3) / 3.0))
        return out

    def exp_moment(self, theta):
        out = float(np.dot(np.exp(-theta * self.ys), self._jump_masses()))
        a, b, s = self._segments()
        out += float(np.sum(s * (np.exp(-theta * a) - np.exp(-theta * b)) / theta))
        return out

    def _partial_mean(self, c):
        m = self._jump_masses()
        sel = self.ys <= c
        out = float(np.dot(self.ys[sel], m[sel]))
        a, b, s = self._segments()
        bb = np.minimum(b, c)
        cut = a < bb
        aa, bb, ss = a[cut], bb[cut], s[cut]
        out += float(np.sum(ss * (bb**2 - aa**2) / 2.0))
        return out

    def lower_tail(self):
        return self._partial_mean(0.0)

    def upper_tail(self):
        return self.mean() - self._partial_mean(0.0)

    def cdf_integral_below(self, v):
        if v <= self.ys[0]:
            return 0.0
        out = 0.0
        for k in range(len(self.ys) - 1):
            a, b = self.ys[k], self.ys[k + 1]
            if v <= a:
                break
            hi = min(v, b)
            f_a = self.fr[k]
            f_hi = float(self.cdf(hi)) if hi < b else self.fl[k + 1]
            out += 0.5 * (f_a + f_hi) * (hi - a)
        if v > self.ys[-1]:
            out += v - self.ys[-1]
        return out

    def breakpoints(self):
        return self.ys.copy()

    def support_bounds(self):
        return (float(self.ys[0]), float(self.ys[-1]))

    def _level_set(self, alpha):
        hits = []  # list of (lo, hi) closed intervals where F == alpha
        for k in range(len(self.ys)):
            if abs(self.fr[k] - alpha) <= 1e-12:
                hits.append((self.ys[k], self.ys[k]))
            if k + 1 < len(self.ys):
                f0, f1 = self.fr[k], self.fl[k + 1]
                a, b = self.ys[k], self.ys[k + 1]
                if abs(f0 - alpha) <= 1e-12 and abs(f1 - alpha) <= 1e-12:
                    hits.append((a, b))
                elif min(f0, f1) - 1e-12 < alpha < max(f0, f1) + 1e-12 and f1 > f0:
                    if f0 <= alpha <= f1:
                        t = (alpha - f0) / (f1 - f0)
                        y = a + t * (b - a)
                        hits.append((y, y))
        if not hits:
            return ("empty", math.nan, math.nan)
        hits.sort()
        lo, hi = hits[0]
        for a, b in hits[1:]:
            if a <= hi + 1e-12:
                hi = max(hi, b)
            else:
                break  # non-decreasing CDF: level set is one component
        if hi > lo:
            return ("interval", float(lo), float(hi))
        return ("point", float(lo), float(hi))

    def as_piecewise(self):
        return self

    def __repr__(self):
        return f"PiecewiseLinearCDF({len(self.ys)} knots on [{self.ys[0]}, {self.ys[-1]}])"


# ---------------------------------------------------------------------------
# Empirical distribution (step CDF over a sample multiset)
# ---------------------------------------------------------------------------


class EmpiricalDistribution(RewardDistribution):
    """The step CDF that puts mass 1/t on each observed reward."""

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or len(samples) == 0:
            raise DomainError("empirical distribution needs at least one sample")
        self.samples = np.sort(samples)
        self.samples.setflags(write=False)
        self.t = len(self.samples)

    @classmethod
    def from_sorted(cls, samples: np.ndarray) -> "EmpiricalDistribution":
        """Wrap an already-sorted array without copying or re-sorting.

        The caller promises not to mutate ``samples`` while the wrapper is
        in use (hot-loop construction from policy-state buffers).
        """
        out = cls.__new__(cls)
        out.samples = samples
        out.t = len(samples)
        return out

    def with_value(self, x: float) -> "EmpiricalDistribution":
        """A new empirical distribution with one more observation."""
        merged = np.insert(self.samples, np.searchsorted(self.samples, x), x)
        return EmpiricalDistribution.from_sorted(merged)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        out = np.searchsorted(self.samples, y, side="right") / self.t
        return out if out.ndim else float(out)

    def cdf_left(self, y):
        y = np.asarray(y, dtype=float)
        out = np.searchsorted(self.samples, y, side="left") / self.t
        return out if out.ndim else float(out)

    def _quantile(self, alpha):
        k = max(1, math.ceil(alpha * self.t - 1e-9))
        return float(self.samples[min(k, self.t) - 1])

    def upper_quantile(self, c):
        if c >= 1.0:
            return math.inf
        if c < 0.0:
            return -math.inf
        j = int(math.floor(c * self.t + 1e-9)) + 1
        if j > self.t:
            return math.inf
        return float(self.samples[j - 1])

    def _sample(self, rng, n):
        return rng.choice(self.samples, size=n, replace=True)

    def mean(self):
        return float(np.mean(self.samples))

    def second_moment(self):
        return float(np.mean(self.samples**2))

    def below_target_semivariance(self, r):
        d = self.samples[self.samples <= r] - r
        return float(np.sum(d * d)) / self.t

    def exp_moment(self, theta):
        return float(np.mean(np.exp(-theta * self.samples)))

    def lower_tail(self):
        return float(np.sum(self.samples[self.samples <= 0])) / self.t

    def upper_tail(self):
        return float(np.sum(self.samples[self.samples > 0])) / self.t

    def cdf_integral_below(self, v):
        m = int(np.searchsorted(self.samples, v, side="right"))
        if m == 0:
            return 0.0
        return (v * m - float(np.sum(self.samples[:m]))) / self.t

    def breakpoints(self):
        return np.unique(self.samples)

    def support_bounds(self):
        return (float(self.samples[0]), float(self.samples[-1]))

    def _level_set(self, alpha):
        return self.as_piecewise()._level_set(alpha)

    def as_piecewise(self):
        vals, counts = np.unique(self.samples, return_counts=True)
        cum = np.cumsum(counts) / self.t
        fl = np.concatenate([[0.0], cum[:-1]])
        return PiecewiseLinearCDF(vals, fl, cum)

    def __repr__(self):
        return f"EmpiricalDistribution(t={self.t})"


def empirical_from_samples(values) -> EmpiricalDistribution:
    """Sorted-multiset empirical distribution of the given rewards."""
    return EmpiricalDistribution(values)


# ---------------------------------------------------------------------------
# Mixtures
# ---------------------------------------------------------------------------


class MixtureDistribution(RewardDistribution):
    """Convex combination ``F_p = sum_i p_i F_i`` of component distributions."""

    def __init__(self, components, weights):
        weights = np.asarray(weights, dtype=float)
        if len(components) != len(weights) or len(components) == 0:
            raise DomainError("mixture needs matching non-empty components/weights")
        if np.any(weights < -_WEIGHT_TOL):
            raise DomainError(f"mixture weights must be non-negative, got {weights}")
        total = float(np.sum(weights))
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"mixture weights must sum to 1, got {total}")
        self.components = tuple(components)
        w = np.clip(weights, 0.0, None) / total
        top = int(np.argmax(w))  # absorb rounding so the sum is exactly 1
        w[top] = 1.0 - (float(np.sum(w)) - w[top])
        self.weights = w
        self.weights.setflags(write=False)
        self.has_smooth_part = any(c.has_smooth_part for c in components)
        self.has_sloped_part = any(c.has_sloped_part for c in components)
        self._merged = None
        self._merged_tried = False

    def _merged_piecewise(self):
        if self._merged_tried:
            return self._merged
        self._merged_tried = True
        parts = [c.as_piecewise() for c in self.components]
        if any(p is None for p in parts):
            self._merged = None
            return None
        ys = np.unique(np.concatenate([p.ys for p in parts]))
        fl = np.zeros_like(ys)
        fr = np.zeros_like(ys)
        for w, p in zip(self.weights, parts):
            fl += w * np.asarray(p.cdf_left(ys))
            fr += w * np.asarray(p.cdf(ys))
        self._merged = PiecewiseLinearCDF(ys, fl, fr)
        return self._merged

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape, dtype=float)
        for w, c in zip(self.weights, self.components):
            if w > 0:
                out += w * np.asarray(c.cdf(y))
        return out if out.ndim else float(out)

    def cdf_left(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape, dtype=float)
        for w, c in zip(self.weights, self.components):
            if w > 0:
                out += w * np.asarray(c.cdf_left(y))
        return out if out.ndim else float(out)

    def _bisect_monotone(self, target, strict, lo, hi):
        """inf{y | F(y) >= target} (or > target when strict) by bisection.

        Requires F(lo) below the threshold and F(hi) at-or-above it; exact
        to float resolution, jumps included.
        """
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            v = float(self.cdf(mid))
            if (v > target) if strict else (v >= target):
                hi = mid
            else:
                lo = mid
        return hi

    def _quantile(self, alpha):
        merged = self._merged_piecewise()
        if merged is not None:
            return merged._quantile(alpha)
        # the mixture quantile is bracketed by the component quantiles
        qs = [c.quantile(alpha) for w, c in zip(self.weights, self.components) if w > 0]
        lo = min(qs)
        lo -= max(1e-9, 1e-12 * abs(lo))
        return self._bisect_monotone(alpha, False, lo, max(qs))

    def upper_quantile(self, c):
        merged = self._merged_piecewise()
        if merged is not None:
            return merged.upper_quantile(c)
        if c >= 1.0:
            return math.inf
        qs = [d.upper_quantile(c) for w, d in zip(self.weights, self.components) if w > 0]
        lo = min(qs)
        lo -= max(1e-9, 1e-12 * abs(lo))
        hi = max(qs)
        hi += max(1e-9, 1e-12 * abs(hi))
        return self._bisect_monotone(c, True, lo, hi)

    def _sample(self, rng, n):
        idx = rng.choice(len(self.components), size=n, p=self.weights)
        out = np.empty(n, dtype=float)
        for k, c in enumerate(self.components):
            sel = idx == k
            cnt = int(np.sum(sel))
            if cnt:
                out[sel] = c.sample(rng, cnt)
        return out

    def _weighted(self, fn):
        return float(sum(w * fn(c) for w, c in zip(self.weights, self.components) if w > 0))

    def mean(self):
        return self._weighted(lambda c: c.mean())

    def second_moment(self):
        return self._weighted(lambda c: c.second_moment())

    def below_target_semivariance(self, r):
        return self._weighted(lambda c: c.below_target_semivariance(r))

    def exp_moment(self, theta):
        return self._weighted(lambda c: c.exp_moment(theta))

    def lower_tail(self):
        return self._weighted(lambda c: c.lower_tail())

    def upper_tail(self):
        return self._weighted(lambda c: c.upper_tail())

    def cdf_integral_below(self, v):
        return self._weighted(lambda c: c.cdf_integral_below(v))

    def breakpoints(self):
        parts = [c.breakpoints() for w, c in zip(self.weights, self.components) if w > 0]
        parts = [p for p in parts if len(p)]
        if not parts:
            return np.array([])
        return np.unique(np.concatenate(parts))

    def smooth_probe_points(self):
        parts = [
            c.smooth_probe_points()
            for w, c in zip(self.weights, self.components)
            if w > 0
        ]
        parts = [p for p in parts if len(p)]
        if not parts:
            return np.array([])
        return np.unique(np.concatenate(parts))

    def support_bounds(self):
        bounds = [c.support_bounds() for w, c in zip(self.weights, self.components) if w > 0]
        return (min(b[0] for b in bounds), max(b[1] for b in bounds))

    def _level_set(self, alpha):
        merged = self._merged_piecewise()
        if merged is not None:
            return merged._level_set(alpha)
        # a Gaussian component makes the mixture CDF strictly increasing
        q = self._quantile(alpha)
        if abs(float(self.cdf(q)) - alpha) <= 1e-12:
            return ("point", q, q)
        return ("empty", math.nan, math.nan)

    def as_piecewise(self):
        return self._merged_piecewise()

    def __repr__(self):
        w = ", ".join(f"{x:.4g}" for x in self.weights)
        return f"MixtureDistribution(weights=[{w}])"


def mixture(arms, p) -> MixtureDistribution:
    """The distribution with CDF ``sum_i p_i F_i`` for simplex weights p."""
    return MixtureDistribution(arms, p)


def proxy_distribution(arms, pull_counts, horizon: int) -> MixtureDistribution:
    """Mixture of the true arm CDFs weighted by pull fractions."""
    pull_counts = np.asarray(pull_counts)
    if len(pull_counts) != len(arms):
        raise DomainError("one pull count per arm required")
    if np.any(pull_counts < 0):
        raise DomainError("pull counts must be non-negative")
    total = int(np.sum(pull_counts))
    if horizon < 1 or total != int(horizon):
        raise DomainError(
            f"pull counts sum to {total}, expected horizon {horizon}"
        )
    return MixtureDistribution(arms, pull_counts / float(horizon))


def tail_integral(dist: RewardDistribution, side: str) -> float:
    """Magnitude of the one-sided first-moment integral around 0.

    ``side='lower'`` gives ``|int_{-inf}^0 x dF|``; ``side='upper'`` gives
    ``|int_0^inf x dF|``.  Divergent tails surface as ``math.inf``.
    """
    if side == "lower":
        val = dist.lower_tail()
    elif side == "upper":
        val = dist.upper_tail()
    else:
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    return abs(val)
