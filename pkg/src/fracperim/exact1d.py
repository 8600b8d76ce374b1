"""Closed-form fractional calculus on the line.

All integrals reduce to the antiderivative t -> t^{1-s} / (s(1-s)) of the
kernel |x - y|^{-1-s}.  For open intervals (a, b) and (c, d) with
a < b <= c < d,

    L((a,b), (c,d)) = [(c-a)^{1-s} - (c-b)^{1-s} - (d-a)^{1-s} + (d-b)^{1-s}] / (s(1-s)),

which is bilinear in the endpoints: with orientation signs -1 at lower and
+1 at upper ends,

    L(A, B) = sum_{x in dA, y in dB} sign(x) sign(y) |x - y|^{1-s} / (s(1-s)).

Writing t^{1-s} = t + g_s(t) with g_s(t) = t expm1(-s log t), the linear
part cancels for every pair of finite intervals and leaves exactly the
finite length of the partner for each ray.  Evaluating g_s instead of
t^{1-s} avoids the cancellation that otherwise costs a factor 1/s in
relative accuracy as s -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracperim.errors import DivergentInteractionError, DomainError
from fracperim.pairsum import PairSumPlan, g_kernel
from fracperim.set_model import INF, IntervalUnion, Scene

#: Above this many endpoint products, cross sums go through a PairSumPlan.
OUTER_MAX = 1_000_000


@dataclass(frozen=True)
class InteractionKernelParams:
    s: float
    n: int = 1

    def __post_init__(self):
        check_s(self.s)
        if self.n < 1:
            raise DomainError("dimension must be >= 1")


def check_s(s) -> None:
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    if not np.all((arr > 0) & (arr < 1)):
        raise DomainError(f"s must lie strictly inside (0, 1), got {s!r}")


def _g(t: float, s: float) -> float:
    return t * math.expm1(-s * math.log(t)) if t > 0 else 0.0


def interaction_pair(a: float, b: float, c: float, d: float, s: float) -> float:
    """L((a, b), (c, d)) for a < b <= c < d, where ``d`` may be ``inf``.

    >>> round(interaction_pair(0, 1, 1, math.inf, 0.5), 12)
    4.0

    Raises
    ------
    DivergentInteractionError
        If the intervals overlap (b > c): the double integral over a shared
        region is infinite for every s.
    """
    check_s(s)
    if not (a < b and c < d):
        raise DomainError("interaction_pair needs a < b and c < d")
    if b > c:
        raise DivergentInteractionError(
            f"divergent interaction: ({a}, {b}) and ({c}, {d}) overlap"
        )
    if math.isinf(a):
        raise DomainError("left end a must be finite")
    if math.isinf(d):
        num = (b - a) + _g(c - a, s) - _g(c - b, s)
    else:
        num = _g(c - a, s) - _g(c - b, s) - _g(d - a, s) + _g(d - b, s)
    return num / (s * (1 - s))


def _ray_divergence(a: IntervalUnion, b: IntervalUnion) -> bool:
    # opposite rays interact infinitely: each x < p sees an infinite tail
    return (a.left_ray is not None and b.right_ray is not None) or (
        a.right_ray is not None and b.left_ray is not None
    )


def _finite_length(e: IntervalUnion) -> float:
    return math.fsum(hi - lo for lo, hi in e.intervals)


def _linear_part(a: IntervalUnion, b: IntervalUnion) -> float:
    rays_a = (a.left_ray is not None) + (a.right_ray is not None)
    rays_b = (b.left_ray is not None) + (b.right_ray is not None)
    return rays_a * _finite_length(b) + rays_b * _finite_length(a)


class InteractionPlan:
    """L(A, B) for fixed A, B, evaluable at many s with shared setup."""

    def __init__(self, a: IntervalUnion, b: IntervalUnion):
        self.trivial = a.is_empty or b.is_empty
        if self.trivial:
            return
        if a.intersect(b).measure > 0:
            raise DivergentInteractionError(
                "divergent interaction: the sets share a region of positive measure"
            )
        if _ray_divergence(a, b):
            raise DivergentInteractionError(
                "divergent interaction: opposite rays interact infinitely"
            )
        self.linear = _linear_part(a, b)
        pa, ea = a.endpoints()
        pb, eb = b.endpoints()
        self._outer = len(pa) * len(pb) <= OUTER_MAX
        if self._outer:
            self._dist = np.abs(pb[None, :] - pa[:, None])
            self._w = np.outer(ea, eb)
        else:
            pts = np.concatenate([pa, pb])
            u = np.concatenate([ea, np.zeros_like(pb)])
            v = np.concatenate([np.zeros_like(pa), eb])
            self._plan = PairSumPlan(pts, u, v)

    def evaluate(self, s: float) -> float:
        if self.trivial:
            return 0.0
        if self._outer:
            cross = float(np.sum(self._w * g_kernel(self._dist, s)))
        else:
            cross = self._plan.evaluate(s)
        return (self.linear + cross) / (s * (1 - s))


def interaction_union(a: IntervalUnion, b: IntervalUnion, s):
    """L(A, B) for essentially disjoint interval unions (rays allowed).

    ``s`` may be a scalar or a sequence; a sequence returns an array and
    reuses the endpoint geometry across all values.
    """
    check_s(s)
    plan = InteractionPlan(a, b)
    if np.ndim(s) == 0:
        return plan.evaluate(float(s))
    return np.array([plan.evaluate(float(x)) for x in s])


def _scene_sets(scene: Scene) -> tuple[IntervalUnion, IntervalUnion]:
    if scene.dim != 1 or not isinstance(scene.set_e, IntervalUnion):
        raise DomainError("exact 1D evaluation needs a 1D scene with an interval-union set")
    if not scene.finite:
        raise DivergentInteractionError(
            f"divergent: scene {scene.scene_id!r} has infinite s-perimeter for every s"
        )
    return scene.set_e, scene.omega


def per_s_sets(e: IntervalUnion, omega: IntervalUnion, s):
    """Per_s(E; Omega) as the three-term interaction sum."""
    check_s(s)
    comp = e.complement()
    outside = omega.complement()
    e_in, e_out = e.intersect(omega), e.intersect(outside)
    c_in, c_out = comp.intersect(omega), comp.intersect(outside)
    plans = [InteractionPlan(e_in, c_in), InteractionPlan(e_in, c_out), InteractionPlan(e_out, c_in)]
    if np.ndim(s) == 0:
        return math.fsum(p.evaluate(float(s)) for p in plans)
    return np.array([math.fsum(p.evaluate(float(x)) for p in plans) for x in s])


def per_s_1d(scene: Scene, s):
    """Per_s(E; Omega) for a 1D scene; ``s`` scalar or sequence.

    >>> sc = Scene(1, IntervalUnion.interval(0, 1), IntervalUnion.interval(0, 1))
    >>> round(per_s_1d(sc, 0.5), 12)
    8.0
    """
    e, omega = _scene_sets(scene)
    return per_s_sets(e, omega, s)


def alpha_s_1d(e: IntervalUnion, s):
    """alpha_s(E) = s * int_{E minus [-1, 1]} |y|^{-1-s} dy, in closed form.

    A piece (a, b) with 1 <= a < b contributes a^{-s} - b^{-s}, a ray
    (a, inf) contributes a^{-s}; the negative half-line is mirrored.
    """
    check_s(s)
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    total = np.zeros_like(s_arr)
    halves = (
        e.intersect(IntervalUnion(right_ray=1.0)),
        e.intersect(IntervalUnion(left_ray=-1.0)).reflect(),
    )
    for half in halves:
        for lo, hi in half.pieces:
            lo_term = np.exp(-s_arr * math.log(lo))
            if math.isinf(hi):
                total += lo_term
            else:
                total += -lo_term * np.expm1(-s_arr * math.log(hi / lo))
    return float(total[0]) if np.ndim(s) == 0 else total


def decomposition_terms(scene: Scene, s: float) -> dict[str, float]:
    """The four terms of Per_s(E) = Per_s(E1) - L(E1, E2) + L(E2, Omega minus E1)."""
    e, omega = _scene_sets(scene)
    e1 = e.intersect(omega)
    e2 = e.difference(omega)
    terms: dict[str, float] = {}
    for name, fn in (
        ("per_s(E)", lambda: per_s_sets(e, omega, s)),
        ("per_s(E1)", lambda: per_s_sets(e1, omega, s)),
        ("L(E1,E2)", lambda: interaction_union(e1, e2, s)),
        ("L(E2,Omega-E1)", lambda: interaction_union(e2, omega.difference(e1), s)),
    ):
        try:
            terms[name] = fn()
        except DivergentInteractionError as exc:
            raise DivergentInteractionError(f"term {name} diverges: {exc}") from exc
    return terms


def decomposition_check(scene: Scene, s: float) -> float:
    """Relative residual of the E1/E2 decomposition of Per_s(E; Omega)."""
    t = decomposition_terms(scene, s)
    lhs = t["per_s(E)"]
    rhs = t["per_s(E1)"] - t["L(E1,E2)"] + t["L(E2,Omega-E1)"]
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def mazya_shaposhnikova_term(e1: IntervalUnion, s):
    """s L(E1, complement E1) for bounded E1."""
    check_s(s)
    return np.asarray(s) * interaction_union(e1, e1.complement(), s)

