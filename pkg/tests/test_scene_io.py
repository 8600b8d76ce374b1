import json
from pathlib import Path

import pytest
from hypothesis import given, settings

from conftest import interval_unions
from fracperim.errors import DivergentInteractionError, SchemaError
from fracperim.exact1d import per_s_1d
from fracperim.scenarios import build_ex2, build_exx, build_exx_special
from fracperim.scene_io import dump_scene, dumps_scene, load_scene, loads_scene, scene_to_dict, validate
from fracperim.set_model import (
    Ball,
    Box,
    Complement,
    ConstantProfile,
    IntervalUnion,
    PiecewiseConstantProfile,
    RadialProfileSet,
    Scene,
    SetUnion,
)

SCENES = Path(__file__).parent.parent / "scenes"


def round_trip(scene):
    return loads_scene(dumps_scene(scene))


@pytest.mark.parametrize(
    "scene",
    [
        Scene(1, IntervalUnion.interval(0.0, 1.0), IntervalUnion.interval(0.1, 0.3), scene_id="b"),
        Scene(1, IntervalUnion.interval(-1.0, 1.0), IntervalUnion(((-0.5, 0.2),), left_ray=-3.0, right_ray=2.0)),
        Scene(1, IntervalUnion.interval(0.0, 1.0), IntervalUnion.full()),
        Scene(2, Ball.centered(1.0, 2), Ball.centered(0.5, 2)),
        Scene(3, Ball.centered(1.0, 3), Complement(Ball.centered(0.25, 3))),
        Scene(2, Ball.centered(0.5, 2), Box((1.0, -0.5), (2.0, 0.5))),
        Scene(2, Ball.centered(1.0, 2), RadialProfileSet(2, ConstantProfile(0.5))),
        Scene(2, Ball.centered(1.0, 2), RadialProfileSet(2, PiecewiseConstantProfile((1.0, 4.0), (1.0, 0.25)))),
        Scene(2, Ball.centered(1.0, 2), SetUnion((Ball.centered(0.25, 2), Box((2.0, 2.0), (3.0, 3.0))))),
        build_exx(3),
        build_exx_special(3),
    ],
    ids=lambda s: s.scene_id if isinstance(s, Scene) else None,
)
def test_round_trip(scene):
    back = round_trip(scene)
    assert back.dim == scene.dim
    assert back.omega == scene.omega
    assert scene_to_dict(back) == scene_to_dict(scene)


def test_ex2_round_trip_rebuilds_construction():
    sc = build_ex2(10).scene()
    back = round_trip(sc)
    assert back.set_e == sc.set_e and back.omega == sc.omega


@settings(max_examples=100, deadline=None)
@given(interval_unions(rays=True))
def test_interval_union_round_trip(e):
    sc = Scene(1, IntervalUnion.interval(-6.0, 6.0), e)
    assert round_trip(sc).set_e == e


def test_example_scene_files_load(tmp_path):
    for name in ("ray", "bounded", "ball_in_ball"):
        sc = load_scene(SCENES / f"{name}.json")
        dump_scene(sc, tmp_path / "x.json")
        assert load_scene(tmp_path / "x.json").set_e == sc.set_e


def test_ex2_null_terms_is_divergent():
    sc = load_scene(SCENES / "ex2_full.json")
    assert not sc.finite
    with pytest.raises(DivergentInteractionError):
        per_s_1d(sc, 0.5)


@pytest.mark.parametrize(
    "doc, pointer",
    [
        ({"dim": 1, "omega": {"type": "interval", "lo": 0, "hi": 1}, "set": {"type": "intervals", "intervals": [], "colour": 1}}, "/set"),
        ({"dim": 4, "omega": {"type": "interval", "lo": 0, "hi": 1}, "set": {"type": "intervals", "intervals": []}}, "/dim"),
        ({"dim": 2, "omega": {"type": "ball", "center": [0, 0], "radius": 1}, "set": {"type": "ball", "center": [0, 0], "radius": -1}}, "/set/radius"),
        ({"dim": 1, "set": {"type": "intervals", "intervals": []}}, "/"),
        ({"dim": 1, "omega": {"type": "interval", "lo": 0, "hi": 1}, "set": {"type": "ex2", "n_terms": 10}}, "/omega"),
        ({"dim": 1, "set": {"type": "ex2", "n_terms": 2}}, "/set/n_terms"),
        ({"dim": 2, "omega": {"type": "ball", "center": [0, 0], "radius": 1},
          "set": {"type": "radial_profile", "profile": {"kind": "constant"}}}, "/set/profile"),
    ],
)
def test_schema_errors_name_the_field(doc, pointer):
    with pytest.raises(SchemaError, match=f"at {pointer}[: ]"):
        validate(doc)


def test_bad_example_file():
    with pytest.raises(SchemaError, match="'colour' was unexpected"):
        load_scene(SCENES / "bad.json")


def test_malformed_json_reports_position():
    with pytest.raises(SchemaError, match="line 2, column"):
        loads_scene('{"dim": 1,\n "set": }')


@pytest.mark.parametrize("const", ["NaN", "Infinity", "-Infinity"])
def test_non_finite_numbers_rejected(const):
    text = json.dumps({"dim": 1, "omega": {"type": "interval", "lo": 0, "hi": 1},
                       "set": {"type": "intervals", "intervals": [[0, 0.5]]}}).replace("0.5", const)
    with pytest.raises(SchemaError, match="non-finite"):
        loads_scene(text)


@pytest.mark.parametrize(
    "set_doc, match",
    [
        ({"type": "intervals", "intervals": [[0.5, 0.2]]}, "lo < hi"),
        ({"type": "intervals", "intervals": [[0, 1]], "full": True}, "full-line"),
    ],
)
def test_semantic_errors(set_doc, match):
    with pytest.raises(SchemaError, match=match):
        loads_scene(json.dumps({"dim": 1, "omega": {"type": "interval", "lo": 0, "hi": 1}, "set": set_doc}))


def test_spiral_needs_plane():
    doc = {"dim": 3, "omega": {"type": "ball", "center": [0, 0, 0], "radius": 1},
           "set": {"type": "radial_profile", "profile": {"kind": "spiral", "k_max": 3}}}
    with pytest.raises(SchemaError, match="planar"):
        loads_scene(json.dumps(doc))


def test_top_level_must_be_object():
    with pytest.raises(SchemaError):
        loads_scene("[1, 2]")
