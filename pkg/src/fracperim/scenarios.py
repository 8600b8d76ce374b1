"""Builders for the named constructions and their reference quantities.

* :func:`build_t2_counterexample`: E = complement of (-2, 2), F = Omega = (-1, 1).
* :func:`build_spiral` / :func:`build_exx`: the planar spiral whose angular
  width at radius rho is phi(log rho), with phi switching between 0 and 1 on
  blocks [a_k, a_{k+1}), a_k = 10^{k^2}.
* :func:`build_exx_special`: the spiral plus a centered ball filling half of
  Omega = B_{1/2}.
* :func:`build_ex2`: the truncated union of gaps I_{2j} between partial sums
  of beta_k = 1/(k log^2 k), whose full version has infinite s-perimeter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from fracperim._parallel import ordered_map
from fracperim.errors import DomainError, ExponentOverflowError, UnsupportedSceneError
from fracperim.exact1d import InteractionPlan, check_s
from fracperim.set_model import (
    Ball,
    IntervalUnion,
    RadialProfileSet,
    Scene,
    SetUnion,
)

#: Largest log10 argument for which block membership is decided exactly.
LOG10_MAX = 2.0**52


# ---------------------------------------------------------------------------
# transition function and spiral
# ---------------------------------------------------------------------------


def smooth_step(t: float) -> float:
    """C^infinity ramp h(t) / (h(t) + h(1-t)), h(t) = exp(-1/t); 0 for t <= 0, 1 for t >= 1."""
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    # h(t)/(h(t)+h(1-t)) = 1 / (1 + exp(1/t - 1/(1-t)))
    e = 1.0 / t - 1.0 / (1.0 - t)
    if e > 700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(e))


def _block_index(log10_x: float) -> int:
    """The m with m^2 <= log10_x < (m+1)^2, for log10_x >= 0."""
    m = math.isqrt(int(log10_x))
    while (m + 1) ** 2 <= log10_x:
        m += 1
    while m * m > log10_x:
        m -= 1
    return m


@dataclass(frozen=True)
class TransitionFunction:
    """phi on [0, inf): 0 on [0, 1) and on blocks [a_{4k}, a_{4k+1}), 1 on [a_{4k+2}, a_{4k+3}).

    On [a_{4k+1}, a_{4k+2}) phi rises as ``smooth_step(t)`` and on
    [a_{4k+3}, a_{4k+4}) it falls as ``1 - smooth_step(t)``, where t is the
    position of log10 x inside the block.  Arguments are carried as log10 x
    so no power a_k is ever formed as a float unless it fits.
    """

    k_max: int

    def __post_init__(self):
        if self.k_max < 1:
            raise DomainError("k_max must be >= 1")
        if (4 * self.k_max + 4) ** 2 > LOG10_MAX:
            raise ExponentOverflowError("exponent overflow: k_max beyond the log-domain capacity")

    @property
    def exponents(self) -> tuple[int, ...]:
        """k^2 for the block ends a_k, k = 0 .. 4 k_max + 4."""
        return tuple(k * k for k in range(4 * self.k_max + 5))

    def eval_log10(self, log10_x: float) -> float:
        if log10_x < 0:
            return 0.0
        if log10_x > LOG10_MAX:
            raise ExponentOverflowError("exponent overflow: argument beyond the log-domain capacity")
        m = _block_index(log10_x)
        t = (log10_x - m * m) / (2 * m + 1)
        j = m % 4
        if j == 0:
            return 0.0
        if j == 1:
            return smooth_step(t)
        if j == 2:
            return 1.0
        return 1.0 - smooth_step(t)

    def __call__(self, x: float) -> float:
        if x < 1.0:
            return 0.0
        return self.eval_log10(math.log10(x))

    def probe_log10_s(self, k: int) -> tuple[float, float]:
        """log10 of s = k / a_{4k+1} and s = k / a_{4k+3}."""
        if not 1 <= k <= self.k_max:
            raise DomainError(f"probe index k must lie in [1, {self.k_max}]")
        lk = math.log10(k)
        return lk - (4 * k + 1) ** 2, lk - (4 * k + 3) ** 2

    def probe_bounds(self, k: int) -> tuple[float, float]:
        """Analytic bounds: alpha at the first probe <= upper, at the second >= lower."""
        b0 = 10.0 ** (-(8 * k + 1))
        b1 = 10.0 ** (-(8 * k + 5))
        upper = -math.expm1(-k * b0) + math.exp(-k)
        lower = math.exp(-k * b1) - math.exp(-k)
        return upper, lower


@dataclass(frozen=True)
class SpiralProfile:
    """Angular width phi(r) at log-radius r; a profile for :class:`RadialProfileSet`."""

    phi: TransitionFunction

    @property
    def upper(self) -> float:
        return 1.0

    @property
    def lower(self) -> float:
        return 0.0

    @property
    def log10_breakpoints(self) -> tuple[float, ...]:
        return tuple(float(e) for e in self.phi.exponents)

    @property
    def log_breakpoints(self) -> tuple[float, ...]:
        return tuple(10.0**e for e in self.phi.exponents if e <= 308)

    def __call__(self, r: float) -> float:
        return self.phi(r)

    def log10_call(self, log10_r: float) -> float:
        return self.phi.eval_log10(log10_r)

    def to_json(self) -> dict:
        return {"kind": "spiral", "k_max": self.phi.k_max}


def build_spiral(k_max: int = 3) -> RadialProfileSet:
    """The planar spiral {rho > 1, angle in [0, phi(log rho)]}."""
    return RadialProfileSet(2, SpiralProfile(TransitionFunction(k_max)))


EXX_OMEGA_RADIUS = 0.5


def build_exx(k_max: int = 3) -> Scene:
    omega = Ball.centered(EXX_OMEGA_RADIUS, 2)
    return Scene(2, omega, build_spiral(k_max), scene_id="exx", meta={"k_max": k_max})


def build_exx_special(k_max: int = 3) -> Scene:
    """Spiral plus the centered ball of squared radius 1/8 inside Omega = B_{1/2}.

    The ball has exactly half the area of Omega, so |E cap Omega| = |Omega minus E| = pi/8.
    """
    omega = Ball.centered(EXX_OMEGA_RADIUS, 2)
    inner = Ball.centered(math.sqrt(0.125), 2, radius_sq=0.125)
    e = SetUnion((inner, build_spiral(k_max)))
    return Scene(2, omega, e, scene_id="exx-special", meta={"k_max": k_max})


# ---------------------------------------------------------------------------
# T2
# ---------------------------------------------------------------------------


def build_t2_counterexample(n: int = 1) -> tuple[Scene, Scene, Scene]:
    """Scenes for E = complement of (-2, 2), F = (-1, 1) and E u F, all over Omega = (-1, 1)."""
    if n != 1:
        raise UnsupportedSceneError("the T2 counterexample is realized in dimension 1 only")
    omega = IntervalUnion.interval(-1.0, 1.0)
    e = IntervalUnion((), left_ray=-2.0, right_ray=2.0)
    f = IntervalUnion.interval(-1.0, 1.0)
    return (
        Scene(1, omega, e, scene_id="t2-E"),
        Scene(1, omega, f, scene_id="t2-F"),
        Scene(1, omega, e | f, scene_id="t2-EuF"),
    )


# ---------------------------------------------------------------------------
# EX2
# ---------------------------------------------------------------------------

EX2_THRESHOLDS = (1.0, 10.0, 100.0)
EX2_N_MAX = 1_000_000
EX2_CHECKPOINTS = (100, 1000, 10_000, 100_000)


def ex2_betas(m: int) -> np.ndarray:
    """beta_1 .. beta_m: beta_1 = 1/log^2 2, beta_k = 1/(k log^2 k)."""
    k = np.arange(1, m + 1, dtype=float)
    out = np.empty(m)
    out[0] = 1.0 / math.log(2.0) ** 2
    out[1:] = 1.0 / (k[1:] * np.log(k[1:]) ** 2)
    return out


@dataclass(frozen=True)
class Ex2Construction:
    """Truncation at N terms: E_N = union of I_{2j} = (sigma_{2j}, sigma_{2j+1}) with 2j+1 <= N."""

    n_terms: int
    betas: np.ndarray = field(repr=False)
    sigmas: np.ndarray = field(repr=False)

    @cached_property
    def set_e(self) -> IntervalUnion:
        # sigma_m is sigmas[m - 1]
        j = np.arange(1, (self.n_terms - 1) // 2 + 1)
        lo = self.sigmas[2 * j - 1]
        hi = self.sigmas[2 * j]
        return IntervalUnion(tuple(zip(lo.tolist(), hi.tolist())))

    @property
    def omega(self) -> IntervalUnion:
        return IntervalUnion.interval(0.0, float(self.sigmas[self.n_terms - 1]))

    @property
    def n_intervals(self) -> int:
        return (self.n_terms - 1) // 2

    def scene(self) -> Scene:
        return Scene(1, self.omega, self.set_e, scene_id=f"ex2-N{self.n_terms}", meta={"n_terms": self.n_terms})


def build_ex2(n_terms: int) -> Ex2Construction:
    if n_terms < 4:
        raise DomainError("EX2 truncation needs n_terms >= 4")
    betas = ex2_betas(n_terms)
    return Ex2Construction(n_terms, betas, np.cumsum(betas))


def ex2_unbounded_scene() -> Scene:
    """The untruncated EX2 set, flagged as having infinite s-perimeter for every s."""
    c = build_ex2(4)
    return Scene(1, c.omega, c.set_e, scene_id="ex2-full", finite=False, meta={"n_terms": None})


def ex2_lower_bound_series(s: float, n_max: int) -> np.ndarray:
    """lb(N) = (1/(1-s)) sum_{j <= (N-1)//2} beta_{2j+2}^{1-s}, for N = 1 .. n_max (index N-1)."""
    check_s(s)
    j_max = (n_max - 1) // 2
    betas = ex2_betas(2 * j_max + 2)
    terms = betas[3::2] ** (1 - s)  # beta_{2j+2}, j = 1 .. j_max
    partial = np.concatenate([[0.0], np.cumsum(terms)]) / (1 - s)
    n = np.arange(1, n_max + 1)
    return partial[(n - 1) // 2]


def ex2_chain_bound(s: float, n_terms: int) -> float:
    """(1/(s(1-s))) sum_j [b_{2j+1}^{1-s} + b_{2j+2}^{1-s} - (b_{2j+1} + b_{2j+2})^{1-s}].

    Sits between the exact Per_s of the truncation and :func:`ex2_lower_bound_series`.
    """
    check_s(s)
    j_max = (n_terms - 1) // 2
    betas = ex2_betas(2 * j_max + 2)
    b1 = betas[2::2]  # beta_{2j+1}
    b2 = betas[3::2]  # beta_{2j+2}
    p = 1 - s
    # b1^p + b2^p - (b1+b2)^p, written to keep accuracy for small s
    total = b1**p * (1 + (b2 / b1) ** p - (1 + b2 / b1) ** p)
    return math.fsum(total.tolist()) / (s * p)


def ex2_exact_per_s(c: Ex2Construction, s_values) -> np.ndarray:
    """Per_s(E_N; Omega_N) at each s.

    E_N lies inside Omega_N, so the perimeter is L(E_N, complement of E_N).
    """
    e = c.set_e
    plan = InteractionPlan(e, e.complement())
    return np.array([plan.evaluate(float(s)) for s in np.atleast_1d(s_values)])


@dataclass(frozen=True)
class Ex2Report:
    s: float
    thresholds: tuple[float, ...]
    n_exceeded: tuple[int | None, ...]
    checkpoints: tuple[int, ...]
    exact: tuple[float, ...]
    lower_bound: tuple[float, ...]
    chain: tuple[float, ...]
    dominates: bool
    monotone: bool
    confirmed: bool

    def rows(self) -> list[tuple[float, int | None]]:
        return list(zip(self.thresholds, self.n_exceeded))


def ex2_divergence_reports(
    s_values,
    thresholds=EX2_THRESHOLDS,
    n_max: int = EX2_N_MAX,
    checkpoints=EX2_CHECKPOINTS,
) -> list[Ex2Report]:
    """:func:`ex2_divergence_report` for several s, sharing one pair-sum plan per N."""
    s_values = [float(s) for s in s_values]
    check_s(s_values)
    checkpoints = tuple(int(n) for n in checkpoints if 4 <= n <= n_max)
    lbs, crossings = {}, {}
    for s in s_values:
        lb = ex2_lower_bound_series(s, n_max)
        lbs[s] = lb
        found = []
        for t in thresholds:
            hit = np.nonzero(lb > t)[0]
            found.append(None if len(hit) == 0 else max(int(hit[0]) + 1, 4))
        crossings[s] = found

    need = sorted({*checkpoints, *(n for s in s_values for n in crossings[s] if n is not None)})

    def exact_for(n: int) -> np.ndarray:
        return ex2_exact_per_s(build_ex2(n), s_values)

    exact_at = dict(zip(need, ordered_map(exact_for, need)))
    reports = []
    tol = 1e-12
    for i, s in enumerate(s_values):
        lb = lbs[s]
        ex = {n: float(exact_at[n][i]) for n in need}
        chain_at = {n: ex2_chain_bound(s, n) for n in need}
        confirmed = all(ex[n] > t for t, n in zip(thresholds, crossings[s]) if n is not None)
        dominates = all(ex[n] >= chain_at[n] * (1 - tol) and chain_at[n] >= lb[n - 1] * (1 - tol) for n in need)
        exact = tuple(ex[n] for n in checkpoints)
        lower = tuple(float(lb[n - 1]) for n in checkpoints)
        monotone = all(b > a for a, b in zip(exact, exact[1:])) and all(b > a for a, b in zip(lower, lower[1:]))
        reports.append(
            Ex2Report(
                s=s,
                thresholds=tuple(float(t) for t in thresholds),
                n_exceeded=tuple(crossings[s]),
                checkpoints=checkpoints,
                exact=exact,
                lower_bound=lower,
                chain=tuple(chain_at[n] for n in checkpoints),
                dominates=dominates,
                monotone=monotone,
                confirmed=confirmed,
            )
        )
    return reports


def ex2_divergence_report(
    s: float,
    thresholds=EX2_THRESHOLDS,
    n_max: int = EX2_N_MAX,
    checkpoints=EX2_CHECKPOINTS,
) -> Ex2Report:
    """Threshold crossings and exact-versus-bound checks for the truncations.

    For each threshold t, ``n_exceeded`` is the smallest N <= n_max at which
    both the exact Per_s(E_N; Omega_N) and lb(N) exceed t, or ``None`` when
    lb(n_max) <= t (reported as open).  Truncations start at N = 4.  Since
    exact >= lb, that N is the first crossing of lb; the exact value is
    evaluated there and ``confirmed`` records that it exceeds t as well.
    ``dominates`` checks exact >= chain bound >= lb at every evaluated N.
    """
    return ex2_divergence_reports([s], thresholds, n_max, checkpoints)[0]
