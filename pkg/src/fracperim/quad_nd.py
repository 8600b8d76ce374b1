"""Evaluation paths in dimension n: tails, radial reductions, Monte Carlo.

Radial-profile sets are handled in the variable x = s log|y|.  With
g(r) the section measure at |y| = e^r,

    alpha_s(E) = s int_1^inf f(rho) rho^{-1-s} d rho = int_0^inf g(x/s) e^{-x} dx,

and the x-integral is truncated at ``X_MAX`` (tail below e^{-50}).

Interactions between a centered ball B_r and a radial set use the mean of
the kernel over the ball, which is radial and has the closed form

    int_{B_r} |z - y|^{-n-s} dz = |B_r| |y|^{-n-s} 2F1((n+s)/2, 1+s/2; n/2+1; r^2/|y|^2)

for |y| > r.  Integrating it over the exterior of B_b gives a 3F2 series at
r^2/b^2, and b = r yields the s-perimeter of the ball itself.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import hyp2f1

from fracperim._parallel import ordered_map
from fracperim.errors import (
    DomainError,
    RegimeError,
    SingularPairError,
    UnsupportedSceneError,
)
from fracperim.exact1d import alpha_s_1d, check_s
from fracperim.set_model import (
    Annulus,
    Ball,
    Box,
    Complement,
    IntervalUnion,
    RadialProfileSet,
    SetUnion,
    separation,
    sphere_measure,
)

X_MAX = 50.0
#: Minimum separation accepted by the Monte Carlo estimator.
DELTA_MIN = 1e-6
#: Below this s the direct radial quadrature is refused (use the alpha_s surrogate).
S_MIN_DIRECT = 1e-3
#: Segments wider than this ratio are integrated in log x.
LOG_RATIO = 100.0


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_subdivisions: int = 200
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        bps = tuple(float(b) for b in self.breakpoints)
        if list(bps) != sorted(bps):
            raise DomainError("quadrature breakpoints must be sorted")
        object.__setattr__(self, "breakpoints", bps)


@dataclass(frozen=True)
class McSpec:
    n_samples: int = 100_000
    seed: int = 0
    n_strata: int = 8

    def __post_init__(self):
        if self.n_samples < 1000:
            raise DomainError("Monte Carlo needs at least 1000 samples")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        if not 1 <= self.n_strata <= self.n_samples:
            raise DomainError("n_strata must lie in [1, n_samples]")


@dataclass(frozen=True)
class QuadResult:
    """Integral value, absolute error estimate, and whether the subdivision cap was hit."""

    value: float
    error: float
    capped: bool = False

    def __add__(self, other: QuadResult) -> QuadResult:
        return QuadResult(self.value + other.value, self.error + other.error, self.capped or other.capped)

    def scaled(self, c: float) -> QuadResult:
        return QuadResult(c * self.value, abs(c) * self.error, self.capped)


def integrate_segment(f, a: float, b: float, spec: QuadratureSpec) -> QuadResult:
    """Adaptive Gauss-Kronrod on [a, b]; a hit subdivision cap is flagged, not raised."""
    if b <= a:
        return QuadResult(0.0, 0.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, err = integrate.quad(
            f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions
        )
    capped = any(issubclass(w.category, integrate.IntegrationWarning) for w in caught)
    return QuadResult(value, err, capped)


def integrate_breakpoints(f, points, spec: QuadratureSpec) -> QuadResult:
    """Integrate over consecutive ``points``, switching to log x on wide segments."""
    total = QuadResult(0.0, 0.0)
    for lo, hi in zip(points[:-1], points[1:]):
        if lo > 0 and hi / lo > LOG_RATIO:
            total += integrate_segment(
                lambda u: f(math.exp(u)) * math.exp(u), math.log(lo), math.log(hi), spec
            )
        else:
            total += integrate_segment(f, lo, hi, spec)
    return total


# ---------------------------------------------------------------------------
# tails
# ---------------------------------------------------------------------------


def tail_integral(R: float, s: float, n: int) -> float:
    """s int_{|y| > R} |y|^{-n-s} dy = omega_{n-1} R^{-s}."""
    check_s(s)
    if not R > 0:
        raise DomainError("tail radius must be positive")
    return sphere_measure(n) * math.exp(-s * math.log(R))


def shell_integral(r: float, R: float, s: float, n: int) -> float:
    """s int_{r < |y| < R} |y|^{-n-s} dy = omega_{n-1} (r^{-s} - R^{-s})."""
    check_s(s)
    if not 0 < r <= R:
        raise DomainError("shell needs 0 < r <= R")
    return -sphere_measure(n) * math.exp(-s * math.log(r)) * math.expm1(-s * math.log(R / r))


# ---------------------------------------------------------------------------
# radial-profile sets
# ---------------------------------------------------------------------------


def _radial_integrand(p: RadialProfileSet, s: float | None, log10_s: float | None):
    """g(x / s) and the x-images of the profile breakpoints inside (0, X_MAX)."""
    prof = p.profile
    limit = math.log10(X_MAX)
    if log10_s is not None:
        if not hasattr(prof, "log10_call"):
            raise DomainError("log-domain evaluation needs a profile with log10_call")

        def g(x: float) -> float:
            return prof.log10_call(math.log10(x) - log10_s if x > 0 else -math.inf)

        images = [b + log10_s for b in prof.log10_breakpoints]
        xs = [10.0**e for e in images if e < limit]
    else:

        def g(x: float) -> float:
            return prof(x / s)

        xs = [s * r for r in prof.log_breakpoints if math.isfinite(r) and s * r < X_MAX]
    return g, sorted(x for x in xs if x > 0)


def _resolve_s(s, log10_s):
    if log10_s is None:
        check_s(s)
        return float(s), None
    if not log10_s < 0:
        raise DomainError("log10_s must be negative")
    s_float = 10.0**log10_s
    return (s_float if s_float > 0 else None), float(log10_s)


def alpha_s_radial_result(
    p: RadialProfileSet, s=None, spec: QuadratureSpec | None = None, *, log10_s: float | None = None
) -> QuadResult:
    """:func:`alpha_s_radial` with its quadrature error estimate."""
    spec = spec or QuadratureSpec()
    if p.is_empty:
        return QuadResult(0.0, 0.0)
    s_val, log10_s = _resolve_s(s, log10_s)
    if log10_s is None and hasattr(p.profile, "log10_call"):
        # profiles with a log-domain evaluator never touch exp(r)
        log10_s = math.log10(s_val)
    g, xs = _radial_integrand(p, s_val, log10_s)
    points = sorted({0.0, *xs, *(b for b in spec.breakpoints if 0 < b < X_MAX), X_MAX})
    return integrate_breakpoints(lambda x: g(x) * math.exp(-x), points, spec)


def alpha_s_radial(
    p: RadialProfileSet, s=None, spec: QuadratureSpec | None = None, *, log10_s: float | None = None
) -> float:
    """alpha_s of a radial-profile set, as int_0^50 g(x/s) e^{-x} dx.

    Parameters
    ----------
    p : RadialProfileSet
    s : float, optional
        Fractional order in (0, 1).  May be omitted when ``log10_s`` is given.
    spec : QuadratureSpec, optional
    log10_s : float, optional
        log10 of s, for orders below the double range (s < 1e-308).  Only
        profiles exposing ``log10_call`` support this path.

    Returns
    -------
    float
        A value in [0, omega_{n-1}].

    Raises
    ------
    ExponentOverflowError
        If a rho-domain profile is asked for rho = e^{x/s} beyond 1e300.
    """
    return alpha_s_radial_result(p, s, spec, log10_s=log10_s).value


def _check_centered_ball(omega, dim: int) -> None:
    if not isinstance(omega, Ball) or not omega.is_centered or omega.dim != dim:
        raise UnsupportedSceneError("the radial path needs Omega to be a centered ball")
    if not omega.radius < 1:
        raise DomainError("the radial path needs Omega = B_r with r < 1")


def ball_mean_factor(z, n: int, s: float):
    """2F1((n+s)/2, 1+s/2; n/2+1; z) at z = r^2/rho^2.

    This is the mean of |z - y|^{-n-s} over z in B_r, divided by |y|^{-n-s}.
    """
    return hyp2f1((n + s) / 2, 1 + s / 2, n / 2 + 1, z)


def interaction_omega_radial_result(
    omega: Ball, p: RadialProfileSet, s: float, spec: QuadratureSpec | None = None
) -> QuadResult:
    """:func:`interaction_omega_radial` with its quadrature error estimate."""
    spec = spec or QuadratureSpec()
    check_s(s)
    _check_centered_ball(omega, p.dim)
    if s < S_MIN_DIRECT:
        raise RegimeError(
            f"s = {s:g} is below {S_MIN_DIRECT:g}; use the alpha_s surrogate "
            "s L(Omega, E) ~ alpha_s(E) |Omega| within the explicit gradient-bound error"
        )
    if p.is_empty or omega.is_empty:
        return QuadResult(0.0, 0.0)
    n, r_sq = p.dim, omega.radius_sq
    g, xs = _radial_integrand(p, s, None)

    def f(x: float) -> float:
        return g(x) * math.exp(-x) * float(ball_mean_factor(r_sq * math.exp(-2 * x / s), n, s))

    # the 2F1 factor varies on the scale x ~ s
    extra = [c * s for c in (0.25, 1.0, 4.0) if c * s < X_MAX]
    points = sorted({0.0, *xs, *extra, *(b for b in spec.breakpoints if 0 < b < X_MAX), X_MAX})
    return integrate_breakpoints(f, points, spec).scaled(omega.measure / s)


def interaction_omega_radial(
    omega: Ball, p: RadialProfileSet, s: float, spec: QuadratureSpec | None = None
) -> float:
    """L(B_r, E) for a radial-profile set E and a centered ball B_r, r < 1.

    The inner integral over B_r is the closed-form kernel mean, so a single
    radial quadrature over E remains.

    Raises
    ------
    RegimeError
        For s < 1e-3, where the alpha_s surrogate should be used.
    """
    return interaction_omega_radial_result(omega, p, s, spec).value


# ---------------------------------------------------------------------------
# balls
# ---------------------------------------------------------------------------


def _hyp3f2(n: int, s: float, z: float) -> float:
    return float(mpmath.hyp3f2((n + s) / 2, 1 + s / 2, s / 2, n / 2 + 1, s / 2 + 1, z))


def ball_exterior_interaction(ball: Ball, b: float | None, s: float) -> float:
    """L(B_r(c), complement of B_b(c)) for b >= r; ``b=None`` means b = r.

    With b = r this is the s-perimeter of the ball in the whole space.
    """
    check_s(s)
    n, r_sq = ball.dim, ball.radius_sq
    if ball.is_empty:
        return 0.0
    if b is None:
        z, b_sq = 1.0, r_sq
    else:
        if b < ball.radius:
            raise DomainError("exterior radius must be at least the ball radius")
        b_sq = float(b) ** 2
        z = min(r_sq / b_sq, 1.0)
    return sphere_measure(n) * ball.measure * b_sq ** (-s / 2) / s * _hyp3f2(n, s, z)


def ball_per_s(ball: Ball, s: float) -> float:
    """Per_s of a ball in any domain containing it."""
    return ball_exterior_interaction(ball, None, s)


def gradient_bound_constant(f_measure: float, r: float, n: int, s: float, R: float = 1.0) -> float:
    """Explicit C with |alpha_s(E)|F| - s L(F, E)| <= C s for F in B_r, E outside B_R.

    C = 2^{n+s+1} (n+s) |F| r int_{|y|>R} |y|^{-n-s-1} dy, valid when 2r <= R.
    """
    if not 0 < 2 * r <= R:
        raise DomainError("the gradient bound needs F inside B_r with 2r <= R")
    tail = sphere_measure(n) * R ** (-1 - s) / (1 + s)
    return 2 ** (n + s + 1) * (n + s) * f_measure * r * tail


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def _norm(c) -> float:
    return float(np.linalg.norm(c))


def _point_box_distance(c, lo, hi) -> float:
    c = np.asarray(c, dtype=float)
    return _norm(c - np.clip(c, lo, hi))


def set_separation(a, b) -> float:
    """inf |x - y| over x in A, y in B, for the supported primitive pairs.

    Returns 0 whenever the sets touch or overlap.
    """
    if isinstance(a, SetUnion):
        return min(set_separation(m, b) for m in a.members)
    if isinstance(b, SetUnion):
        return min(set_separation(a, m) for m in b.members)
    if isinstance(a, IntervalUnion) and isinstance(b, IntervalUnion):
        return separation(a, b)
    if isinstance(a, Ball) and isinstance(b, Ball):
        return max(0.0, math.dist(a.center, b.center) - a.radius - b.radius)
    if isinstance(a, Box) and isinstance(b, Box):
        gaps = [max(0.0, l2 - h1, l1 - h2) for l1, h1, l2, h2 in zip(a.lo, a.hi, b.lo, b.hi)]
        return math.hypot(*gaps)
    if isinstance(a, Ball) and isinstance(b, Box):
        return max(0.0, _point_box_distance(a.center, b.lo, b.hi) - a.radius)
    if isinstance(a, Box) and isinstance(b, Ball):
        return set_separation(b, a)
    if isinstance(a, Ball) and isinstance(b, Annulus):
        d = math.dist(a.center, b.center)
        return max(0.0, b.inner - d - a.radius, d - a.radius - b.outer)
    if isinstance(a, Annulus) and isinstance(b, Ball):
        return set_separation(b, a)
    raise UnsupportedSceneError(
        f"no separation rule for {type(a).__name__} and {type(b).__name__}"
    )


def _stratum_rng(seed: int, stratum: int) -> np.random.Generator:
    # counter-based stream per stratum: independent of thread layout
    return np.random.Generator(np.random.Philox(key=np.array([seed, stratum], dtype=np.uint64)))


def sample_uniform(e, m: int, rng: np.random.Generator) -> np.ndarray:
    """``m`` uniform points of E, shape (m, dim).

    Interval unions are sampled through the inverse of their cumulative
    length; other sets by rejection inside the bounding box.
    """
    if isinstance(e, IntervalUnion):
        lo = np.array([p[0] for p in e.intervals])
        lengths = np.array([p[1] - p[0] for p in e.intervals])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        u = rng.random(m) * cum[-1]
        k = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, len(lo) - 1)
        return (lo[k] + (u - cum[k]))[:, None]
    lo, hi = e.bounding_box()
    box_vol = float(np.prod(hi - lo))
    rate = e.measure / box_vol
    out, have = [], 0
    while have < m:
        batch = int((m - have) / rate * 1.1) + 64
        x = lo + (hi - lo) * rng.random((batch, len(lo)))
        x = x[e.contains(x)]
        out.append(x)
        have += len(x)
    return np.concatenate(out)[:m]


def _stratum_sums(a, b, n: int, s: float, m: int, rng) -> tuple[float, float]:
    x = sample_uniform(a, m, rng)
    y = sample_uniform(b, m, rng)
    k = np.linalg.norm(x - y, axis=1) ** (-n - s)
    return float(np.sum(k)), float(np.sum(k * k))


def _strata_sizes(spec: McSpec) -> list[int]:
    base, extra = divmod(spec.n_samples, spec.n_strata)
    return [base + (i < extra) for i in range(spec.n_strata)]


def mc_mean(sampler, spec: McSpec) -> tuple[float, float]:
    """Mean and standard error of ``sampler(m, rng)`` values pooled over strata.

    ``sampler`` returns (sum, sum of squares) of m draws.  Strata are
    evaluated in any order and reduced in index order.
    """
    sizes = _strata_sizes(spec)
    sums = ordered_map(lambda i: sampler(sizes[i], _stratum_rng(spec.seed, i)), range(len(sizes)))
    total_n = sum(sizes)
    s1 = math.fsum(t[0] for t in sums)
    s2 = math.fsum(t[1] for t in sums)
    mean = s1 / total_n
    var = max(s2 / total_n - mean * mean, 0.0) * total_n / (total_n - 1)
    return mean, math.sqrt(var / total_n)


def mc_interaction(a, b, s: float, n: int, spec: McSpec | None = None) -> tuple[float, float]:
    """Monte Carlo estimate of L(A, B) and its standard error.

    Samples x in A and y in B uniformly and returns |A||B| times the sample
    mean of |x - y|^{-n-s}.  Output depends only on ``spec`` (seed, sample
    count and strata), not on the thread count.

    Raises
    ------
    SingularPairError
        If the sets are closer than ``DELTA_MIN``; such pairs belong to the
        closed-form or radial paths.
    """
    spec = spec or McSpec()
    check_s(s)
    if a.is_empty or b.is_empty:
        return 0.0, 0.0
    if a.dim != n or b.dim != n:
        raise DomainError("set dimensions do not match n")
    if not (a.is_bounded and b.is_bounded):
        raise DomainError("Monte Carlo needs bounded sets")
    delta = set_separation(a, b)
    if delta < DELTA_MIN:
        raise SingularPairError(
            f"singular pair: separation {delta:g} < {DELTA_MIN:g}; the kernel is unbounded "
            "on A x B, use the exact 1D or radial paths"
        )
    mean, se = mc_mean(lambda m, rng: _stratum_sums(a, b, n, s, m, rng), spec)
    scale = a.measure * b.measure
    return scale * mean, scale * se


# ---------------------------------------------------------------------------
# alpha_s for general scene sets
# ---------------------------------------------------------------------------


def _inside_unit_ball(e) -> bool:
    if isinstance(e, Ball):
        return _norm(e.center) + e.radius <= 1.0
    if isinstance(e, Annulus):
        return _norm(e.center) + e.outer <= 1.0
    if isinstance(e, Box):
        return bool(np.all(np.linalg.norm(e.corners(), axis=1) <= 1.0))
    return False


def alpha_s_set(e, s: float, n: int, quad: QuadratureSpec | None = None, mc: McSpec | None = None):
    """alpha_s(E) for any supported scene set, as (value, error estimate)."""
    check_s(s)
    if isinstance(e, IntervalUnion):
        return alpha_s_1d(e, s), 0.0
    if isinstance(e, RadialProfileSet):
        res = alpha_s_radial_result(e, s, quad)
        return res.value, res.error
    if isinstance(e, SetUnion):
        parts = [alpha_s_set(m, s, n, quad, mc) for m in e.members]
        return math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts)
    if isinstance(e, Complement) and isinstance(e.inner, Ball) and e.inner.is_centered:
        return tail_integral(max(1.0, e.inner.radius), s, n), 0.0
    if getattr(e, "is_empty", False) or _inside_unit_ball(e):
        return 0.0, 0.0
    if isinstance(e, Annulus) and _norm(e.center) == 0.0:
        lo, hi = max(1.0, e.inner), max(1.0, e.outer)
        return (shell_integral(lo, hi, s, n) if hi > lo else 0.0), 0.0
    if isinstance(e, (Ball, Box, Annulus)):
        mc = mc or McSpec()

        def sampler(m, rng):
            y = sample_uniform(e, m, rng)
            r = np.linalg.norm(y, axis=1)
            w = np.where(r > 1.0, r ** (-n - s), 0.0)
            return float(np.sum(w)), float(np.sum(w * w))

        mean, se = mc_mean(sampler, mc)
        return s * e.measure * mean, s * e.measure * se
    raise UnsupportedSceneError(f"alpha_s is not available for {type(e).__name__}")
