import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracperim.asymptotics import (
    CSV_HEADER,
    LimitEstimate,
    SweepRow,
    SweepTable,
    default_grid,
    evaluator,
    extrapolate,
    oscillation_probe,
    probe_grid,
    sweep,
    tf1_alpha_from_mu,
    tf_predict,
)
from fracperim.errors import (
    DivergentInteractionError,
    DomainError,
    ExponentOverflowError,
    HalfMeasureError,
    RankDeficiencyError,
    UnsupportedSceneError,
)
from fracperim.quad_nd import McSpec
from fracperim.scenarios import build_ex2, build_exx, build_exx_special, build_spiral, ex2_unbounded_scene
from fracperim.set_model import (
    Ball,
    Box,
    Complement,
    ConstantProfile,
    IntervalUnion,
    RadialProfileSet,
    Scene,
    sphere_measure,
)

OM01 = IntervalUnion.interval(0.0, 1.0)
OM11 = IntervalUnion.interval(-1.0, 1.0)


def test_default_grid():
    g = default_grid()
    assert len(g) == 12 and g[0] == 0.2 and g[-1] == pytest.approx(0.2 * 2**-11)


def test_sweep_bounded_example():
    table = sweep(Scene(1, OM01, IntervalUnion.interval(0.1, 0.3)))
    assert len(table) == 12
    assert {r.eval_path for r in table.rows} == {"exact1d"}
    col = table.column("s_per_s")
    # rows run from s = 0.2 downward; values fall monotonically onto 0.4 from above
    assert np.all(np.diff(col) < 0) and col[-1] > 0.4
    assert extrapolate(table).value == pytest.approx(0.4, abs=1e-3)


def test_sweep_empty_set():
    table = sweep(Scene(1, OM01, IntervalUnion.empty()))
    assert np.all(table.column("s_per_s") == 0)


def test_ray_scene_limits():
    table = sweep(Scene(1, OM11, IntervalUnion(right_ray=2.0)))
    alpha = extrapolate(table, "alpha_s")
    mu = extrapolate(table)
    assert alpha.value == pytest.approx(1.0, abs=1e-3) and alpha.converged
    assert mu.value == pytest.approx(2.0, abs=1e-3) and mu.converged
    assert mu.value == pytest.approx(tf_predict(0.0, 4.0, alpha.value, 1), abs=1e-3)


def test_sweep_grid_validation():
    sc = Scene(1, OM01, IntervalUnion.interval(0.1, 0.3))
    with pytest.raises(DomainError):
        sweep(sc, [0.1, 0.2])
    with pytest.raises(DomainError):
        sweep(sc, [0.5, 0.0])


def test_sweep_table_validation():
    good = SweepRow(0.1, 1.0, 0.0, "exact1d", 0.0)
    with pytest.raises(DomainError):
        SweepTable("x", (good, SweepRow(0.2, 1.0, 0.0, "exact1d", 0.0)))
    with pytest.raises(DomainError):
        SweepTable("x", (SweepRow(0.1, 1.0, 0.0, "exact1d", -1.0),))
    with pytest.raises(DomainError):
        SweepTable("x", (SweepRow(0.1, 1.0, 0.0, "voxels", 0.0),))
    with pytest.raises(DomainError):
        SweepTable("x", (SweepRow(1.0, 1.0, 0.0, "exact1d", 0.0),))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=8))
def test_csv_round_trip_is_exact(values):
    rows = tuple(SweepRow(0.5 * 2.0**-i, v, abs(v) / 7, "mc", abs(v) * 1e-3) for i, v in enumerate(values))
    table = SweepTable("t", rows)
    text = table.to_csv()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert SweepTable.from_csv(text, "t") == table


def test_from_csv_rejects_header():
    with pytest.raises(DomainError):
        SweepTable.from_csv("a,b\n1,2\n")


# -- extrapolation -------------------------------------------------------------


def synthetic(f, grid=None, path="exact1d", err=0.0):
    grid = grid or default_grid(count=8)
    return SweepTable("syn", tuple(SweepRow(s, f(s), 0.0, path, err) for s in grid))


def test_extrapolate_linear_model_exact():
    est = extrapolate(synthetic(lambda s: 2 + s), degree=1)
    assert isinstance(est, LimitEstimate)
    assert est.value == pytest.approx(2.0, abs=1e-14) and est.converged and est.fit_degree == 1


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_extrapolate_recovers_quadratics(c0, c1, c2):
    est = extrapolate(synthetic(lambda s: c0 + c1 * s + c2 * s * s))
    assert est.value == pytest.approx(c0, abs=1e-9)


def test_extrapolate_nonconvergent_is_reported():
    est = extrapolate(synthetic(lambda s: math.sin(1 / s)))
    assert not est.converged


def test_extrapolate_errors():
    with pytest.raises(DomainError):
        extrapolate(synthetic(lambda s: s), column="error_estimate")
    with pytest.raises(DomainError):
        extrapolate(synthetic(lambda s: s, grid=[0.2, 0.1, 0.05]), degree=2)
    with pytest.raises(DomainError):
        extrapolate(synthetic(lambda s: s), degree=-1)


def test_rank_deficiency_needs_distinct_nodes():
    from fracperim.asymptotics import _fit_c0

    s = np.array([0.1, 0.1, 0.1, 0.05])
    with pytest.raises(RankDeficiencyError):
        _fit_c0(s, np.ones(4), None, 2)


def test_mc_rows_weighted_by_inverse_error():
    grid = default_grid(count=8)
    rows = [SweepRow(s, 1.0 + s, 0.0, "mc", 1e-4) for s in grid]
    rows[2] = SweepRow(grid[2], 50.0, 0.0, "mc", 1e3)  # a wild row with a huge error bar
    est = extrapolate(SweepTable("mc", tuple(rows)), degree=1)
    assert est.value == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize(
    "e, omega",
    [
        (IntervalUnion.interval(0.1, 0.3), OM01),
        (IntervalUnion(right_ray=2.0), OM11),
        (IntervalUnion(((-0.5, 0.2),), right_ray=3.0), OM11),
    ],
)
def test_grid_doubling_changes_less_than_residual(e, omega):
    sc = Scene(1, omega, e)
    coarse = extrapolate(sweep(sc, default_grid()))
    fine = extrapolate(sweep(sc, default_grid(0.2, 2**-0.5, 23)))
    assert abs(coarse.value - fine.value) < coarse.residual_rms


# -- formula layer --------------------------------------------------------------


def test_tf_predict_examples():
    assert tf_predict(0.4, 1.6, 0.0, 1) == 0.4
    assert tf_predict(0.0, 4.0, 1.0, 1) == 2.0
    assert tf_predict(0.4, 1.6, 2.0, 1) == 1.6
    with pytest.raises(DomainError):
        tf_predict(0.4, 1.6, 2.5, 1)
    with pytest.raises(DomainError):
        tf_predict(-1.0, 1.6, 1.0, 1)


def test_tf1_examples():
    assert tf1_alpha_from_mu(2.0, 0.0, 2.0, 0.0) == 1.0
    assert tf1_alpha_from_mu(0.4, 0.4, 0.8, 0.2) == 0.0
    with pytest.raises(HalfMeasureError):
        tf1_alpha_from_mu(1.0, 1.0, 0.5, 0.5)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.floats(0, 5), st.floats(0, 5), st.floats(0, 1))
def test_tf1_round_trip(n, v_in, v_out, frac):
    if math.isclose(v_in, v_out, rel_tol=1e-6, abs_tol=1e-6):
        return
    om = sphere_measure(n)
    alpha = frac * om
    mu = tf_predict(om * v_in, om * v_out, alpha, n)
    assert tf1_alpha_from_mu(mu, om * v_in, v_out, v_in) == pytest.approx(alpha, abs=1e-12 * max(1.0, om / abs(v_out - v_in)))


# -- evaluation paths -------------------------------------------------------------


def path_of(scene):
    return evaluator(scene).row(0.1).eval_path


def test_path_precedence():
    assert path_of(Scene(1, OM01, IntervalUnion.interval(0.1, 0.3))) == "exact1d"
    assert path_of(build_exx(3)) == "radial"
    assert path_of(build_exx_special(3)) == "radial"
    assert path_of(Scene(2, Ball.centered(1.0, 2), Ball.centered(0.5, 2))) == "quadrature"
    assert path_of(Scene(2, Ball.centered(1.0, 2), Complement(Ball.centered(0.5, 2)))) == "quadrature"
    assert path_of(Scene(2, Ball.centered(0.5, 2), Box((1.0, -0.5), (2.0, 0.5)))) == "mc"


def test_unsupported_and_divergent_scenes():
    with pytest.raises(UnsupportedSceneError):
        evaluator(Scene(2, Ball.centered(1.0, 2), Box((0.0, 0.0), (0.5, 0.5))))
    with pytest.raises(DivergentInteractionError, match="divergent"):
        evaluator(ex2_unbounded_scene())


def test_ball_scene_limit_and_complement_symmetry():
    om = Ball.centered(1.0, 2)
    e = Ball.centered(0.5, 2)
    t1 = sweep(Scene(2, om, e), default_grid(count=8))
    t2 = sweep(Scene(2, om, Complement(e)), default_grid(count=8))
    np.testing.assert_allclose(t1.column("s_per_s"), t2.column("s_per_s"), rtol=1e-12)
    # bounded E inside Omega: the limit is 2 pi |E|
    assert t1.column("s_per_s")[-1] == pytest.approx(math.pi**2 / 2, rel=2e-3)
    # E^c contains everything outside Omega, so the tail sees the whole sphere
    assert t2.column("alpha_s")[0] == pytest.approx(2 * math.pi)


def test_ball_larger_than_omega():
    sc = Scene(2, Ball.centered(0.5, 2), Ball.centered(1.0, 2))
    s = 0.3
    from fracperim.quad_nd import ball_exterior_interaction

    row = evaluator(sc).row(s)
    assert row.s_per_s == pytest.approx(s * ball_exterior_interaction(Ball.centered(0.5, 2), 1.0, s))


def test_mc_path_matches_closed_form_separated_balls():
    # disjoint box and ball: nothing closed-form applies, so rows carry MC error bars
    sc = Scene(2, Ball.centered(0.5, 2), Box((1.0, -0.5), (2.0, 0.5)))
    t = sweep(sc, [0.2, 0.1], mc=McSpec(50_000, 4))
    assert all(r.error_estimate > 0 for r in t.rows)


def test_radial_surrogate_below_direct_regime():
    sc = build_exx_special(3)
    rows = sweep(sc, [2e-3, 5e-4]).rows
    assert rows[1].eval_path == "radial" and rows[1].error_estimate > 0
    assert rows[1].s_per_s == pytest.approx(math.pi**2 / 4, rel=5e-2)


def test_sweep_is_thread_count_independent(monkeypatch):
    sc = Scene(2, Ball.centered(0.5, 2), Box((1.0, -0.5), (2.0, 0.5)))
    monkeypatch.setenv("FRACPERIM_THREADS", "1")
    a = sweep(sc, [0.2, 0.1, 0.05], mc=McSpec(20_000, 9)).to_csv()
    monkeypatch.setenv("FRACPERIM_THREADS", "3")
    b = sweep(sc, [0.2, 0.1, 0.05], mc=McSpec(20_000, 9)).to_csv()
    assert a == b


# -- oscillation probe ------------------------------------------------------------


def test_probe_grid_and_overflow():
    p = build_spiral(3)
    g = probe_grid(p, [1, 2])
    assert g == sorted(g, reverse=True) and len(g) == 4
    with pytest.raises(ExponentOverflowError):
        probe_grid(build_spiral(5), [4])
    with pytest.raises(DomainError):
        oscillation_probe(RadialProfileSet(2, ConstantProfile(1.0)), [1])


def test_exx_extrapolation_not_converged():
    sc = build_exx(3)
    table = sweep(sc, probe_grid(sc.set_e, [1, 2, 3]))
    assert not extrapolate(table, "alpha_s").converged
    assert not extrapolate(table).converged


def test_ex2_truncation_sweep_grows():
    sc = build_ex2(200).scene()
    t = sweep(sc, [0.5, 0.25])
    assert all(r.eval_path == "exact1d" for r in t.rows)
