"""Sets, domains and measures.

One-dimensional sets are :class:`IntervalUnion` values: finitely many open
intervals plus optional rays, always kept in normal form (sorted, pairwise
separated by gaps of positive length).  Higher-dimensional primitives are
balls, boxes and annuli, their complements and disjoint unions, and
:class:`RadialProfileSet` for sets living outside the unit ball that are
described by the spherical measure of their section at each radius.

All values are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence, Union, runtime_checkable

import numpy as np

from fracperim.errors import (
    DomainError,
    ExponentOverflowError,
    UnboundedMeasureError,
)

INF = math.inf

#: Largest radius a rho-domain profile may reference.
RHO_MAX = 1e300


def sphere_measure(n: int) -> float:
    """Return H^{n-1}(S^{n-1}), the surface measure of the unit sphere in R^n.

    Computed by the recurrence ``w(n) = 2*pi*w(n-2)/(n-2)`` from ``w(1) = 2``
    and ``w(2) = 2*pi``, which keeps the low dimensions exact.
    """
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    value = 2.0 if n % 2 else 2.0 * math.pi
    for m in range(3 if n % 2 else 4, n + 1, 2):
        value = 2.0 * math.pi * value / (m - 2)
    return value


def unit_ball_volume(n: int) -> float:
    return sphere_measure(n) / n


@dataclass(frozen=True)
class SphereConstant:
    """The constant w_{n-1} = 2 pi^{n/2} / Gamma(n/2) for dimension ``dim``."""

    dim: int

    @property
    def value(self) -> float:
        return sphere_measure(self.dim)


# ---------------------------------------------------------------------------
# One-dimensional sets
# ---------------------------------------------------------------------------

Piece = tuple[float, float]


def _normalize(pieces: Sequence[Piece]) -> list[Piece]:
    clean = []
    for lo, hi in pieces:
        lo, hi = float(lo), float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise DomainError("interval endpoints must not be NaN")
        if lo > hi:
            raise DomainError(f"interval ({lo}, {hi}) has lo > hi")
        if lo < hi:
            clean.append((lo, hi))
    clean.sort()
    merged: list[Piece] = []
    for lo, hi in clean:
        # touching pieces merge: the shared endpoint is a null set
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


@dataclass(frozen=True)
class IntervalUnion:
    """A finite union of open intervals in R, with optional rays.

    ``left_ray = b`` adds ``(-inf, b)`` and ``right_ray = a`` adds
    ``(a, +inf)``.  The constructor normalizes its input, so overlapping or
    touching pieces are merged and pieces swallowed by a ray disappear.  The
    whole line is stored as ``left_ray = inf``.

    Examples
    --------
    >>> IntervalUnion([(2, 3), (0, 1), (1, 1.5)])
    IntervalUnion(intervals=((0.0, 1.5), (2.0, 3.0)), left_ray=None, right_ray=None)
    >>> IntervalUnion(right_ray=1.0).measure
    inf
    """

    intervals: tuple[Piece, ...] = ()
    left_ray: float | None = None
    right_ray: float | None = None

    def __post_init__(self):
        pieces = list(self.intervals)
        if self.left_ray is not None:
            pieces.append((-INF, self.left_ray))
        if self.right_ray is not None:
            pieces.append((self.right_ray, INF))
        merged = _normalize(pieces)
        left = right = None
        if merged and merged[0][0] == -INF:
            left = merged.pop(0)[1]
            if left == INF:
                merged = []
        if merged and merged[-1][1] == INF:
            right = merged.pop()[0]
        object.__setattr__(self, "intervals", tuple(merged))
        object.__setattr__(self, "left_ray", left)
        object.__setattr__(self, "right_ray", right)

    # constructors -----------------------------------------------------

    @classmethod
    def from_pieces(cls, pieces: Sequence[Piece]) -> IntervalUnion:
        """Build from ``(lo, hi)`` pairs where ``lo``/``hi`` may be infinite."""
        finite, left, right = [], None, None
        for lo, hi in _normalize(pieces):
            if lo == -INF:
                left = hi
            elif hi == INF:
                right = lo
            else:
                finite.append((lo, hi))
        return cls(tuple(finite), left, right)

    @classmethod
    def interval(cls, lo: float, hi: float) -> IntervalUnion:
        return cls.from_pieces([(lo, hi)])

    @classmethod
    def empty(cls) -> IntervalUnion:
        return cls()

    @classmethod
    def full(cls) -> IntervalUnion:
        return cls(left_ray=INF)

    # basic properties -------------------------------------------------

    @property
    def dim(self) -> int:
        return 1

    @property
    def pieces(self) -> tuple[Piece, ...]:
        """All pieces in increasing order, rays included with infinite ends."""
        out = []
        if self.left_ray is not None:
            out.append((-INF, self.left_ray))
        out.extend(self.intervals)
        if self.right_ray is not None:
            out.append((self.right_ray, INF))
        return tuple(out)

    @property
    def measure(self) -> float:
        if self.left_ray is not None or self.right_ray is not None:
            return INF
        return math.fsum(hi - lo for lo, hi in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals and self.left_ray is None and self.right_ray is None

    @property
    def is_full(self) -> bool:
        return self.left_ray == INF

    @property
    def is_bounded(self) -> bool:
        return self.left_ray is None and self.right_ray is None

    def __len__(self) -> int:
        return len(self.pieces)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.is_bounded:
            raise UnboundedMeasureError("a set with a ray has no bounding box")
        if self.is_empty:
            return np.zeros(1), np.zeros(1)
        return np.array([self.intervals[0][0]]), np.array([self.intervals[-1][1]])

    def contains(self, x) -> np.ndarray:
        """Pointwise membership; ``x`` has shape ``(m,)`` or ``(m, 1)``."""
        x = np.asarray(x, dtype=float).reshape(-1)
        inside = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.pieces:
            inside |= (x > lo) & (x < hi)
        return inside

    # algebra ----------------------------------------------------------

    def complement(self) -> IntervalUnion:
        if self.is_empty:
            return IntervalUnion.full()
        gaps, prev = [], -INF
        for lo, hi in self.pieces:
            if lo > prev:
                gaps.append((prev, lo))
            prev = hi
        if prev < INF:
            gaps.append((prev, INF))
        return IntervalUnion.from_pieces(gaps)

    def intersect(self, other: IntervalUnion) -> IntervalUnion:
        a, b = self.pieces, other.pieces
        i = j = 0
        out = []
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion.from_pieces(out)

    def union(self, other: IntervalUnion) -> IntervalUnion:
        return IntervalUnion.from_pieces(self.pieces + other.pieces)

    def difference(self, other: IntervalUnion) -> IntervalUnion:
        return self.intersect(other.complement())

    __and__ = intersect
    __or__ = union
    __sub__ = difference

    def reflect(self) -> IntervalUnion:
        """The mirror image ``{-x : x in self}``."""
        return IntervalUnion.from_pieces([(-hi, -lo) for lo, hi in self.pieces])

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Finite endpoints with orientation signs.

        Lower ends carry ``-1`` and upper ends ``+1``; the infinite end of a
        ray is omitted.  Points are sorted.
        """
        pts, sgn = [], []
        for lo, hi in self.pieces:
            if lo > -INF:
                pts.append(lo)
                sgn.append(-1.0)
            if hi < INF:
                pts.append(hi)
                sgn.append(1.0)
        return np.array(pts, dtype=float), np.array(sgn, dtype=float)

    def to_json(self) -> dict:
        if self.is_full:
            return {"type": "intervals", "intervals": [], "full": True}
        return {
            "type": "intervals",
            "intervals": [[lo, hi] for lo, hi in self.intervals],
            "left_ray": self.left_ray,
            "right_ray": self.right_ray,
        }


def lebesgue_measure(e) -> float:
    """Lebesgue measure of any set descriptor; ``inf`` for unbounded sets."""
    return e.measure


def normalized_measure(e, n: int | None = None) -> float:
    """Return w_{n-1} |E|, rejecting sets of infinite measure.

    >>> normalized_measure(IntervalUnion.interval(0, 1), 1)
    2.0
    """
    n = e.dim if n is None else n
    m = lebesgue_measure(e)
    if math.isinf(m):
        raise UnboundedMeasureError("unbounded measure: M(E) needs |E| < inf")
    return sphere_measure(n) * m


def restrict(a: IntervalUnion, omega: IntervalUnion) -> IntervalUnion:
    """``a`` intersected with ``omega``."""
    return a.intersect(omega)


def complement_within(e: IntervalUnion, omega: IntervalUnion) -> IntervalUnion:
    """``omega`` minus ``e``."""
    return omega.difference(e)


def separation(a: IntervalUnion, b: IntervalUnion) -> float:
    """``inf{|x - y| : x in a, y in b}``; ``inf`` if either set is empty.

    Consecutive pieces (ordered by left end) of different sets realize the
    minimum, so one sweep suffices.
    """
    if a.is_empty or b.is_empty:
        return INF
    tagged = sorted([(lo, hi, 0) for lo, hi in a.pieces] + [(lo, hi, 1) for lo, hi in b.pieces])
    best = INF
    for (lo1, hi1, t1), (lo2, hi2, t2) in zip(tagged, tagged[1:]):
        if t1 != t2:
            best = min(best, max(0.0, lo2 - hi1))
    return best


def overlap_measure(a: IntervalUnion, b: IntervalUnion) -> float:
    return a.intersect(b).measure


# ---------------------------------------------------------------------------
# n-dimensional primitives
# ---------------------------------------------------------------------------


def _as_points(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x.reshape(-1, dim)


@dataclass(frozen=True)
class Ball:
    """Open ball.  ``radius_sq`` may be given to keep r^2 exact."""

    center: tuple[float, ...]
    radius: float
    radius_sq: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.radius < 0:
            raise DomainError("ball radius must be nonnegative")
        if self.radius_sq is None:
            object.__setattr__(self, "radius_sq", float(self.radius) ** 2)

    @classmethod
    def centered(cls, radius: float, dim: int, radius_sq: float | None = None) -> Ball:
        return cls((0.0,) * dim, radius, radius_sq)

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def is_centered(self) -> bool:
        return all(c == 0.0 for c in self.center)

    @property
    def measure(self) -> float:
        n = self.dim
        if n == 2:
            return math.pi * self.radius_sq
        return unit_ball_volume(n) * self.radius_sq ** (n / 2)

    @property
    def is_bounded(self) -> bool:
        return True

    @property
    def is_empty(self) -> bool:
        return self.radius == 0

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.array(self.center)
        return c - self.radius, c + self.radius

    def contains(self, x) -> np.ndarray:
        x = _as_points(x, self.dim)
        return np.sum((x - np.array(self.center)) ** 2, axis=1) < self.radius_sq

    def to_json(self) -> dict:
        out = {"type": "ball", "center": list(self.center), "radius": self.radius}
        if self.radius_sq != float(self.radius) ** 2:
            out["radius_sq"] = self.radius_sq
        return out


@dataclass(frozen=True)
class Box:
    """Open axis-aligned box ``prod (lo_i, hi_i)``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if len(self.lo) != len(self.hi):
            raise DomainError("box corners have different dimensions")
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise DomainError("box must have lo <= hi in every coordinate")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def measure(self) -> float:
        return math.prod(h - l for l, h in zip(self.lo, self.hi))

    @property
    def is_bounded(self) -> bool:
        return True

    @property
    def is_empty(self) -> bool:
        return self.measure == 0

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.lo), np.array(self.hi)

    def contains(self, x) -> np.ndarray:
        x = _as_points(x, self.dim)
        return np.all((x > np.array(self.lo)) & (x < np.array(self.hi)), axis=1)

    def corners(self) -> np.ndarray:
        grids = np.meshgrid(*zip(self.lo, self.hi), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def to_json(self) -> dict:
        return {"type": "box", "lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class Annulus:
    """``B_outer(center) minus closed B_inner(center)``."""

    center: tuple[float, ...]
    inner: float
    outer: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not 0 <= self.inner <= self.outer:
            raise DomainError("annulus needs 0 <= inner <= outer")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def measure(self) -> float:
        n = self.dim
        return unit_ball_volume(n) * (self.outer**n - self.inner**n)

    @property
    def is_bounded(self) -> bool:
        return True

    @property
    def is_empty(self) -> bool:
        return self.inner == self.outer

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.array(self.center)
        return c - self.outer, c + self.outer

    def contains(self, x) -> np.ndarray:
        x = _as_points(x, self.dim)
        r2 = np.sum((x - np.array(self.center)) ** 2, axis=1)
        return (r2 > self.inner**2) & (r2 < self.outer**2)


@dataclass(frozen=True)
class Complement:
    """The complement of a bounded primitive."""

    inner: Ball | Box | Annulus

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def measure(self) -> float:
        return INF

    @property
    def is_bounded(self) -> bool:
        return False

    @property
    def is_empty(self) -> bool:
        return False

    def contains(self, x) -> np.ndarray:
        return ~self.inner.contains(x)

    def to_json(self) -> dict:
        if isinstance(self.inner, Ball):
            return {"type": "complement_ball", "center": list(self.inner.center), "radius": self.inner.radius}
        raise NotImplementedError("only complements of balls are serializable")


@dataclass(frozen=True)
class SetUnion:
    """Union of pairwise disjoint members (disjointness is the caller's promise)."""

    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        dims = {m.dim for m in self.members}
        if len(dims) != 1:
            raise DomainError("union members must share one dimension")

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def measure(self) -> float:
        return math.fsum(m.measure for m in self.members)

    @property
    def is_bounded(self) -> bool:
        return all(m.is_bounded for m in self.members)

    @property
    def is_empty(self) -> bool:
        return all(m.is_empty for m in self.members)

    def contains(self, x) -> np.ndarray:
        out = self.members[0].contains(x)
        for m in self.members[1:]:
            out = out | m.contains(x)
        return out

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        boxes = [m.bounding_box() for m in self.members]
        return np.min([b[0] for b in boxes], axis=0), np.max([b[1] for b in boxes], axis=0)

    def to_json(self) -> dict:
        return {"type": "union", "members": [m.to_json() for m in self.members]}


# ---------------------------------------------------------------------------
# Radial profile sets
# ---------------------------------------------------------------------------


@runtime_checkable
class RadialProfile(Protocol):
    """Section measure of a set outside B_1, in the log-radius variable.

    ``profile(r)`` is the (n-1)-dimensional spherical measure of the section
    of the set at radius ``rho = exp(r)``, for ``r >= 0``.
    ``log_breakpoints`` lists the r-values where the profile changes
    analytic piece, and ``upper`` bounds the profile from above.
    """

    log_breakpoints: tuple[float, ...]
    upper: float

    def __call__(self, r: float) -> float: ...


@dataclass(frozen=True)
class ConstantProfile:
    value: float

    @property
    def log_breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def upper(self) -> float:
        return self.value

    def __call__(self, r: float) -> float:
        return self.value

    def log10_call(self, log10_r: float) -> float:
        return self.value

    @property
    def log10_breakpoints(self) -> tuple[float, ...]:
        return ()

    def to_json(self) -> dict:
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class PiecewiseConstantProfile:
    """``values[i]`` on ``[radii[i], radii[i+1])``; the last value extends to infinity.

    ``radii`` are rho values starting at 1.
    """

    radii: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        values = tuple(float(v) for v in self.values)
        if len(radii) != len(values) or not radii:
            raise DomainError("piecewise profile needs one value per radius")
        if radii[0] != 1.0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise DomainError("profile radii must start at 1 and increase strictly")
        if radii[-1] > RHO_MAX:
            raise ExponentOverflowError(
                f"exponent overflow: profile radius {radii[-1]:g} exceeds {RHO_MAX:g}; "
                "describe the profile in the log-radius domain instead"
            )
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_logr", tuple(math.log(r) for r in radii))

    @property
    def log_breakpoints(self) -> tuple[float, ...]:
        return self._logr[1:]

    @property
    def upper(self) -> float:
        return max(self.values)

    @property
    def lower(self) -> float:
        return min(self.values)

    def __call__(self, r: float) -> float:
        i = int(np.searchsorted(self._logr, r, side="right")) - 1
        return self.values[max(i, 0)]

    def to_json(self) -> dict:
        return {"kind": "piecewise_constant", "radii": list(self.radii), "values": list(self.values)}


@dataclass(frozen=True)
class RhoProfile:
    """Wrap a rho-domain profile ``f(rho)`` with its rho breakpoints."""

    f: object
    breakpoints: tuple[float, ...] = ()
    upper: float = INF

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if any(b > RHO_MAX for b in bps):
            raise ExponentOverflowError(
                "exponent overflow: rho breakpoint beyond double range; "
                "use a log-domain profile"
            )
        object.__setattr__(self, "breakpoints", bps)

    @property
    def log_breakpoints(self) -> tuple[float, ...]:
        return tuple(math.log(b) for b in self.breakpoints if b > 1.0)

    def __call__(self, r: float) -> float:
        if r > math.log(RHO_MAX):
            raise ExponentOverflowError("exponent overflow: rho = exp(r) beyond double range")
        return self.f(math.exp(r))


@dataclass(frozen=True)
class RadialProfileSet:
    """``{x : |x| > 1, x/|x| in a section of measure profile(log|x|)}``.

    The set is disjoint from B_1 by construction.  Only the section measure
    is stored; interactions with centered balls do not depend on the shape
    of the section.
    """

    dim: int
    profile: RadialProfile

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("dimension must be >= 1")
        upper = getattr(self.profile, "upper", INF)
        if upper > sphere_measure(self.dim) * (1 + 1e-15):
            raise DomainError("profile exceeds the measure of the unit sphere")
        lower = getattr(self.profile, "lower", 0.0)
        if lower < 0:
            raise DomainError("profile must be nonnegative")

    def profile_at(self, rho: float) -> float:
        """f(rho) for rho >= 1."""
        if rho < 1:
            return 0.0
        return self.profile(math.log(rho))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Breakpoints in rho; ``inf`` where exp(r) overflows."""
        out = []
        for r in self.profile.log_breakpoints:
            out.append(math.exp(r) if r < 709.0 else INF)
        return tuple(out)

    @property
    def measure(self) -> float:
        return INF if getattr(self.profile, "upper", 1.0) > 0 else 0.0

    @property
    def is_bounded(self) -> bool:
        return False

    @property
    def is_empty(self) -> bool:
        return getattr(self.profile, "upper", 1.0) == 0

    def to_json(self) -> dict:
        return {"type": "radial_profile", "profile": self.profile.to_json()}


# ---------------------------------------------------------------------------
# Scenes
# ---------------------------------------------------------------------------

Omega = Union[IntervalUnion, Ball, Box]


def _ball_inside_unit_ball(b: Ball) -> bool:
    return math.hypot(*b.center) + b.radius <= 1.0


@dataclass(frozen=True)
class Scene:
    """A dimension, a bounded open domain Omega and a measurable set E.

    ``finite`` records whether Per_{s0}(E; Omega) < inf for some s0; every
    evaluation path refuses scenes where it is false.
    """

    dim: int
    omega: Omega
    set_e: object
    scene_id: str = "scene"
    finite: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.omega.dim != self.dim:
            raise DomainError("omega dimension does not match scene dimension")
        if getattr(self.set_e, "dim", self.dim) != self.dim:
            raise DomainError("set dimension does not match scene dimension")
        if self.dim == 1 and isinstance(self.omega, IntervalUnion):
            if len(self.omega.intervals) != 1 or not self.omega.is_bounded:
                raise DomainError("a 1D domain must be a single bounded interval")
        if not self.omega.measure > 0:
            raise DomainError("degenerate domain: |Omega| must be positive")

    @property
    def e_cap_omega_empty(self) -> bool:
        """Whether E and Omega are disjoint up to a null set."""
        return _disjoint(self.set_e, self.omega)


def _disjoint(e, omega) -> bool:
    if isinstance(e, IntervalUnion):
        return e.intersect(omega).is_empty
    if isinstance(e, SetUnion):
        return all(_disjoint(m, omega) for m in e.members)
    if isinstance(e, RadialProfileSet):
        if e.is_empty:
            return True
        if isinstance(omega, Ball):
            return _ball_inside_unit_ball(omega)
        return bool(np.all(np.linalg.norm(omega.corners(), axis=1) <= 1.0))
    if isinstance(e, Ball):
        if isinstance(omega, Ball):
            return math.dist(e.center, omega.center) >= e.radius + omega.radius
        lo, hi = omega.bounding_box()
        nearest = np.clip(np.array(e.center), lo, hi)
        return float(np.linalg.norm(nearest - np.array(e.center))) >= e.radius
    if isinstance(e, Box):
        if isinstance(omega, Box):
            return any(h1 <= l2 or h2 <= l1 for l1, h1, l2, h2 in zip(e.lo, e.hi, omega.lo, omega.hi))
        return _disjoint(omega, e)
    if isinstance(e, Complement):
        return _contains_set(e.inner, omega)
    if getattr(e, "is_empty", False):
        return True
    raise NotImplementedError(f"cannot decide E cap Omega for {type(e).__name__}")


def _contains_set(outer, inner) -> bool:
    """Whether ``inner`` is a subset of ``outer`` (both convex primitives)."""
    if isinstance(outer, Ball):
        if isinstance(inner, Ball):
            return math.dist(outer.center, inner.center) + inner.radius <= outer.radius
        d = np.linalg.norm(inner.corners() - np.array(outer.center), axis=1)
        return bool(np.all(d <= outer.radius))
    if isinstance(outer, Box):
        lo, hi = inner.bounding_box()
        return bool(np.all(lo >= np.array(outer.lo)) and np.all(hi <= np.array(outer.hi)))
    return False
