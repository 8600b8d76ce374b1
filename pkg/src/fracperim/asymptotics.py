"""s -> 0 sweeps, polynomial extrapolation, and the limit-formula layer."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from fracperim._parallel import ordered_map
from fracperim.errors import (
    DivergentInteractionError,
    DomainError,
    ExponentOverflowError,
    FracPerimError,
    HalfMeasureError,
    RankDeficiencyError,
    RegimeError,
    UnsupportedSceneError,
)
from fracperim.exact1d import InteractionPlan, alpha_s_1d, check_s
from fracperim.quad_nd import (
    S_MIN_DIRECT,
    McSpec,
    QuadratureSpec,
    alpha_s_radial_result,
    alpha_s_set,
    ball_exterior_interaction,
    ball_per_s,
    interaction_omega_radial_result,
    mc_interaction,
    gradient_bound_constant,
    set_separation,
)
from fracperim.scenarios import LOG10_MAX
from fracperim.set_model import (
    Ball,
    Complement,
    IntervalUnion,
    RadialProfileSet,
    Scene,
    SetUnion,
    sphere_measure,
)

EVAL_PATHS = ("exact1d", "radial", "quadrature", "mc")
CSV_HEADER = ("s", "s_per_s", "alpha_s", "eval_path", "error_estimate")
DEFAULT_THRESHOLD = 1e-3
DEFAULT_DEGREE = 2
#: tolerated excess of alpha over [0, omega] from extrapolation round-off
ALPHA_SLACK = 1e-6


def default_grid(s0: float = 0.2, ratio: float = 0.5, count: int = 12) -> list[float]:
    """Geometric grid s0 * ratio^i, i = 0 .. count-1."""
    return [s0 * ratio**i for i in range(count)]


class SweepRow(NamedTuple):
    s: float
    s_per_s: float
    alpha_s: float
    eval_path: str
    error_estimate: float


@dataclass(frozen=True)
class SweepTable:
    scene_id: str
    rows: tuple[SweepRow, ...]

    def __post_init__(self):
        rows = tuple(SweepRow(*r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        s = [r.s for r in rows]
        if any(not 0 < x < 1 for x in s):
            raise DomainError("every sweep row needs s in (0, 1)")
        if any(b >= a for a, b in zip(s, s[1:])):
            raise DomainError("sweep rows must have strictly decreasing s")
        if any(not r.error_estimate >= 0 for r in rows):
            raise DomainError("error estimates must be nonnegative")
        if any(r.eval_path not in EVAL_PATHS for r in rows):
            raise DomainError("unknown evaluation path tag")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(
                ["%.17g" % r.s, "%.17g" % r.s_per_s, "%.17g" % r.alpha_s, r.eval_path, "%.17g" % r.error_estimate]
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, scene_id: str = "scene") -> SweepTable:
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise DomainError(f"unexpected CSV header {header}")
        rows = [SweepRow(float(a), float(b), float(c), d, float(e)) for a, b, c, d, e in reader]
        return cls(scene_id, tuple(rows))


# ---------------------------------------------------------------------------
# evaluation paths
# ---------------------------------------------------------------------------


class _Exact1D:
    path = "exact1d"

    def __init__(self, scene: Scene):
        e, omega = scene.set_e, scene.omega
        comp, outside = e.complement(), omega.complement()
        self.plans = [
            InteractionPlan(e.intersect(omega), comp.intersect(omega)),
            InteractionPlan(e.intersect(omega), comp.intersect(outside)),
            InteractionPlan(e.intersect(outside), comp.intersect(omega)),
        ]
        self.e = e

    def row(self, s: float) -> SweepRow:
        per = math.fsum(p.evaluate(s) for p in self.plans)
        return SweepRow(s, s * per, alpha_s_1d(self.e, s), self.path, 0.0)


def _is_concentric(a: Ball, b: Ball) -> bool:
    return a.center == b.center


class _RadialBall:
    """E = (optional centered ball B_b inside Omega) u (radial set S), Omega = B_r, r < 1.

    Per_s(B_b u S; B_r) = Per_s(B_b) + L(S, B_r) - 2 L(S, B_b).  Below
    ``S_MIN_DIRECT`` each s L(S, F) is replaced by alpha_s(S) |F| with the
    explicit gradient-bound error C s.
    """

    path = "radial"

    def __init__(self, scene: Scene, radial: RadialProfileSet, inner: Ball | None, quad: QuadratureSpec):
        self.omega, self.radial, self.inner, self.quad = scene.omega, radial, inner, quad

    def _s_interaction(self, ball: Ball, s: float, alpha: float) -> tuple[float, float]:
        if s >= S_MIN_DIRECT:
            res = interaction_omega_radial_result(ball, self.radial, s, self.quad)
            return s * res.value, s * res.error
        if 2 * ball.radius > 1:
            raise RegimeError("the alpha_s surrogate needs Omega inside B_{1/2}")
        c = gradient_bound_constant(ball.measure, ball.radius, ball.dim, s)
        return alpha * ball.measure, c * s

    def row(self, s: float) -> SweepRow:
        a = alpha_s_radial_result(self.radial, s, self.quad)
        val, err = self._s_interaction(self.omega, s, a.value)
        err += a.error * self.omega.measure
        if self.inner is not None and not self.inner.is_empty:
            v_b, e_b = self._s_interaction(self.inner, s, a.value)
            val += s * ball_per_s(self.inner, s) - 2 * v_b
            err += 2 * e_b
        return SweepRow(s, val, a.value, self.path, err)


class _BallBall:
    """Concentric ball (or ball complement) E in a ball Omega: 3F2 closed forms."""

    path = "quadrature"

    def __init__(self, scene: Scene):
        e = scene.set_e
        # Per_s(complement E) = Per_s(E)
        self.ball = e.inner if isinstance(e, Complement) else e
        self.omega = scene.omega
        self.alpha_set = e

    def row(self, s: float) -> SweepRow:
        b, om = self.ball, self.omega
        if b.is_empty:
            per = 0.0
        elif b.radius <= om.radius:
            per = ball_per_s(b, s)
        else:
            per = ball_exterior_interaction(om, b.radius, s)
        alpha, _ = alpha_s_set(self.alpha_set, s, b.dim)
        return SweepRow(s, s * per, alpha, self.path, 0.0)


class _MonteCarlo:
    """E bounded and separated from Omega: Per_s(E; Omega) = L(E, Omega)."""

    path = "mc"

    def __init__(self, scene: Scene, mc: McSpec, quad: QuadratureSpec):
        self.e, self.omega, self.n, self.mc, self.quad = scene.set_e, scene.omega, scene.dim, mc, quad

    def row(self, s: float) -> SweepRow:
        est, se = mc_interaction(self.e, self.omega, s, self.n, self.mc)
        alpha, _ = alpha_s_set(self.e, s, self.n, self.quad, self.mc)
        return SweepRow(s, s * est, alpha, self.path, s * se)


class _Empty:
    def __init__(self, path: str):
        self.path = path

    def row(self, s: float) -> SweepRow:
        return SweepRow(s, 0.0, 0.0, self.path, 0.0)


def _centered_ball_in(omega, e) -> bool:
    return isinstance(e, Ball) and _is_concentric(e, omega) and e.radius <= omega.radius


def evaluator(scene: Scene, quad: QuadratureSpec | None = None, mc: McSpec | None = None):
    """Pick the evaluation path for a scene, by precedence exact1d > radial > quadrature > mc."""
    quad = quad or QuadratureSpec()
    mc = mc or McSpec()
    e, omega = scene.set_e, scene.omega
    if not scene.finite:
        raise DivergentInteractionError(
            f"divergent: scene {scene.scene_id!r} has infinite s-perimeter for every s"
        )
    if scene.dim == 1 and isinstance(e, IntervalUnion):
        return _Exact1D(scene)
    if getattr(e, "is_empty", False):
        return _Empty("quadrature")
    radial_ok = isinstance(omega, Ball) and omega.is_centered and omega.radius < 1
    if radial_ok and isinstance(e, RadialProfileSet):
        return _RadialBall(scene, e, None, quad)
    if radial_ok and isinstance(e, SetUnion) and len(e.members) == 2:
        balls = [m for m in e.members if isinstance(m, Ball)]
        radials = [m for m in e.members if isinstance(m, RadialProfileSet)]
        if len(balls) == 1 and len(radials) == 1 and _centered_ball_in(omega, balls[0]):
            return _RadialBall(scene, radials[0], balls[0], quad)
    if isinstance(omega, Ball):
        inner = e.inner if isinstance(e, Complement) else e
        if isinstance(inner, Ball) and _is_concentric(inner, omega):
            return _BallBall(scene)
    if getattr(e, "is_bounded", False) and scene.e_cap_omega_empty:
        try:
            sep = set_separation(e, omega)
        except UnsupportedSceneError:
            sep = 0.0
        if sep > 0:
            return _MonteCarlo(scene, mc, quad)
    raise UnsupportedSceneError(
        f"no evaluation path for scene {scene.scene_id!r} "
        f"({type(e).__name__} in {type(omega).__name__})"
    )


def _with_s(exc: Exception, s: float) -> Exception:
    try:
        new = type(exc)(f"at s={s:.17g}: {exc}")
    except TypeError:
        new = FracPerimError(f"at s={s:.17g}: {exc}")
    return new


def sweep(
    scene: Scene,
    s_grid: Sequence[float] | None = None,
    quad: QuadratureSpec | None = None,
    mc: McSpec | None = None,
) -> SweepTable:
    """Evaluate s Per_s(E; Omega) and alpha_s(E) along a strictly decreasing grid.

    Rows are independent and may run in parallel; the table keeps grid order.
    Any evaluation error is re-raised with the offending s in its message.
    """
    grid = [float(s) for s in (default_grid() if s_grid is None else s_grid)]
    check_s(grid)
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError("the s-grid must be strictly decreasing")
    ev = evaluator(scene, quad, mc)

    def one(s: float) -> SweepRow:
        try:
            return ev.row(s)
        except FracPerimError as exc:
            raise _with_s(exc, s) from exc

    return SweepTable(scene.scene_id, tuple(ordered_map(one, grid)))


# ---------------------------------------------------------------------------
# extrapolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitEstimate:
    """Extrapolated s -> 0 value of one sweep column.

    ``stability`` is the change in value when the largest-s row is dropped.
    """

    value: float
    fit_degree: int
    residual_rms: float
    converged: bool
    stability: float = 0.0
    threshold: float = DEFAULT_THRESHOLD
    n_rows: int = 0


def _fit_c0(s: np.ndarray, y: np.ndarray, w: np.ndarray | None, degree: int) -> tuple[float, np.ndarray]:
    # distinct nodes give a Vandermonde matrix of full column rank
    if len(np.unique(s)) < degree + 1:
        raise RankDeficiencyError(
            f"rank deficiency: {len(np.unique(s))} distinct s values for degree {degree}"
        )
    a = np.vander(s / np.max(s), degree + 1, increasing=True)
    if w is not None:
        coef = np.linalg.lstsq(a * w[:, None], y * w, rcond=None)[0]
    else:
        coef = np.linalg.lstsq(a, y, rcond=None)[0]
    return float(coef[0]), y - a @ coef


def extrapolate(
    table: SweepTable,
    column: str = "s_per_s",
    degree: int = DEFAULT_DEGREE,
    threshold: float = DEFAULT_THRESHOLD,
) -> LimitEstimate:
    """Least-squares fit c0 + c1 s + ... + c_d s^d and report c0.

    Rows evaluated by Monte Carlo are weighted by inverse variance.
    ``converged`` needs both the residual rms and the drop-one change below
    ``threshold``; failing that is a reported state, not an error.

    Examples
    --------
    >>> rows = [SweepRow(s, 2 + s, 0.0, "exact1d", 0.0) for s in default_grid(count=6)]
    >>> round(extrapolate(SweepTable("t", rows), degree=1).value, 12)
    2.0
    """
    if column not in ("s_per_s", "alpha_s"):
        raise DomainError("column must be s_per_s or alpha_s")
    if degree < 0:
        raise DomainError("degree must be nonnegative")
    if len(table) < degree + 3:
        raise DomainError(f"extrapolation of degree {degree} needs at least {degree + 3} rows")
    s = table.column("s")
    y = table.column(column)
    w = None
    if any(r.eval_path == "mc" for r in table.rows) and column == "s_per_s":
        err = table.column("error_estimate")
        floor = max(float(np.max(err)) * 1e-6, 1e-300)
        w = 1.0 / np.maximum(err, floor)
    value, resid = _fit_c0(s, y, w, degree)
    dropped, _ = _fit_c0(s[1:], y[1:], None if w is None else w[1:], degree)
    rms = float(np.sqrt(np.mean(resid**2)))
    stability = abs(value - dropped)
    converged = bool(rms < threshold and stability < threshold)
    return LimitEstimate(value, degree, rms, converged, stability, threshold, len(table))


# ---------------------------------------------------------------------------
# limit formulas
# ---------------------------------------------------------------------------


def tf_predict(m_e_in: float, m_omega_minus_e: float, alpha: float, n: int) -> float:
    """mu = (1 - a) M(E cap Omega) + a M(Omega minus E), with a = alpha / omega_{n-1}."""
    om = sphere_measure(n)
    if not -ALPHA_SLACK * om <= alpha <= om * (1 + ALPHA_SLACK):
        raise DomainError(f"alpha = {alpha!r} lies outside [0, {om!r}]")
    if m_e_in < 0 or m_omega_minus_e < 0:
        raise DomainError("measures must be nonnegative")
    a = min(max(alpha / om, 0.0), 1.0)
    return (1 - a) * m_e_in + a * m_omega_minus_e


def tf1_alpha_from_mu(mu: float, m_e_in: float, vol_omega_minus_e: float, vol_e_in: float) -> float:
    """alpha = (mu - M(E cap Omega)) / (|Omega minus E| - |E cap Omega|).

    Raises
    ------
    HalfMeasureError
        When |Omega minus E| = |E cap Omega|: mu then equals M(E cap Omega)
        whatever alpha is, so alpha cannot be recovered.
    """
    if math.isclose(vol_omega_minus_e, vol_e_in, rel_tol=1e-12, abs_tol=0.0):
        raise HalfMeasureError(
            "half-measure case |Omega minus E| = |E cap Omega|: mu = M(E cap Omega) "
            "holds regardless of alpha, which is not recoverable from mu"
        )
    return (mu - m_e_in) / (vol_omega_minus_e - vol_e_in)


class ProbeRow(NamedTuple):
    k: int
    s_lo: float
    alpha_at_s_lo: float
    s_hi: float
    alpha_at_s_hi: float


def oscillation_probe(p: RadialProfileSet, k_range, quad: QuadratureSpec | None = None) -> list[ProbeRow]:
    """alpha_s of a spiral set along s = k / a_{4k+1} and s = k / a_{4k+3}.

    For k <= 3 both orders are ordinary doubles; beyond that s underflows
    and the integrand is evaluated from log10 s (the returned ``s_*`` is
    then 0.0; ``p.profile.phi.probe_log10_s(k)`` gives the exact order).
    """
    phi = getattr(p.profile, "phi", None)
    if phi is None:
        raise DomainError("oscillation_probe needs a spiral profile")
    out = []
    for k in k_range:
        if (4 * k + 4) ** 2 > LOG10_MAX:
            raise ExponentOverflowError(f"exponent overflow: k = {k} beyond the log-domain capacity")
        lo, hi = phi.probe_log10_s(k)
        a_lo = alpha_s_radial_result(p, spec=quad, log10_s=lo).value
        a_hi = alpha_s_radial_result(p, spec=quad, log10_s=hi).value
        out.append(ProbeRow(k, 10.0**lo, a_lo, 10.0**hi, a_hi))
    return out


def probe_grid(p: RadialProfileSet, k_range) -> list[float]:
    """The probe orders of :func:`oscillation_probe` as one decreasing s-grid."""
    phi = p.profile.phi
    grid = []
    for k in k_range:
        lo, hi = phi.probe_log10_s(k)
        grid += [10.0**lo, 10.0**hi]
    if any(not g > 0 for g in grid):
        raise ExponentOverflowError("exponent overflow: probe order below the double range")
    return grid
