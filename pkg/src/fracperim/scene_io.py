"""Scene description files: schema validation, loading and dumping.

The schema (``data/scene_schema.json``) rejects unknown fields.  A set of
type ``ex2`` names the truncated construction (``n_terms``) or, with
``n_terms: null``, the full one, whose s-perimeter is infinite; its domain
is implied by the construction, so ``omega`` must be omitted.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources

import jsonschema

from fracperim.errors import DomainError, SchemaError
from fracperim.scenarios import SpiralProfile, TransitionFunction, build_ex2, ex2_unbounded_scene
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


@lru_cache(maxsize=1)
def scene_schema() -> dict:
    text = resources.files("fracperim").joinpath("data/scene_schema.json").read_text("utf-8")
    return json.loads(text)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def _tag_mismatch(err) -> bool:
    return err.validator == "const" and len(err.path) > 0 and err.path[-1] in ("type", "kind")


def _narrow(err):
    """Descend into the oneOf branch selected by the object's type tag."""
    while err.validator == "oneOf" and err.context:
        branches: dict[int, list] = {}
        for sub in err.context:
            branches.setdefault(sub.schema_path[0], []).append(sub)
        live = [errs for errs in branches.values() if not any(_tag_mismatch(e) for e in errs)]
        if len(live) != 1:
            break
        err = jsonschema.exceptions.best_match(live[0])
    return err


def validate(doc: dict) -> None:
    """Raise :class:`SchemaError` naming the offending field."""
    validator = jsonschema.Draft202012Validator(scene_schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        err = _narrow(err)
        if err.validator == "not" and not err.absolute_path:
            raise SchemaError("schema violation at /omega: ex2 scenes build their own omega")
        raise SchemaError(f"schema violation at {_pointer(err.absolute_path)}: {err.message}")


def _ball(d: dict, dim: int) -> Ball:
    return Ball(tuple(d["center"]), d["radius"], d.get("radius_sq"))


def _omega(d: dict, dim: int):
    kind = d["type"]
    if kind == "interval":
        return IntervalUnion.interval(d["lo"], d["hi"])
    if kind == "ball":
        return _ball(d, dim)
    return Box(tuple(d["lo"]), tuple(d["hi"]))


def _profile(d: dict, dim: int):
    kind = d["kind"]
    if kind == "constant":
        return ConstantProfile(d["value"])
    if kind == "piecewise_constant":
        return PiecewiseConstantProfile(tuple(d["radii"]), tuple(d["values"]))
    if dim != 2:
        raise DomainError("the spiral profile is planar (dim = 2)")
    return SpiralProfile(TransitionFunction(d["k_max"]))


def _set(d: dict, dim: int):
    kind = d["type"]
    if kind == "intervals":
        if d.get("full"):
            if d["intervals"] or d.get("left_ray") is not None or d.get("right_ray") is not None:
                raise DomainError("a full-line set takes no pieces")
            return IntervalUnion.full()
        pieces = tuple((float(lo), float(hi)) for lo, hi in d["intervals"])
        if any(not lo < hi for lo, hi in pieces):
            raise DomainError("intervals need lo < hi")
        return IntervalUnion(pieces, d.get("left_ray"), d.get("right_ray"))
    if kind == "radial_profile":
        return RadialProfileSet(dim, _profile(d["profile"], dim))
    if kind == "ball":
        return _ball(d, dim)
    if kind == "box":
        return Box(tuple(d["lo"]), tuple(d["hi"]))
    if kind == "complement_ball":
        return Complement(_ball(d | {"type": "ball"}, dim))
    if kind == "union":
        return SetUnion(tuple(_set(m, dim) for m in d["members"]))
    raise DomainError(f"set type {kind!r} cannot appear inside a union")


def scene_from_dict(doc: dict) -> Scene:
    validate(doc)
    dim = doc["dim"]
    sid = doc.get("id", "scene")
    try:
        if doc["set"]["type"] == "ex2":
            if dim != 1:
                raise DomainError("the ex2 construction is one-dimensional")
            n = doc["set"]["n_terms"]
            if n is None:
                return ex2_unbounded_scene()
            sc = build_ex2(n).scene()
            return Scene(1, sc.omega, sc.set_e, scene_id=doc.get("id", sc.scene_id), meta=sc.meta)
        return Scene(dim, _omega(doc["omega"], dim), _set(doc["set"], dim), scene_id=sid)
    except DomainError as exc:
        raise SchemaError(f"invalid scene: {exc}") from exc


def loads_scene(text: str) -> Scene:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("schema violation at /: a scene must be a JSON object")
    return scene_from_dict(doc)


def _reject_constant(name: str):
    raise SchemaError(f"non-finite number {name} is not allowed in a scene")


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return loads_scene(fh.read())


def scene_to_dict(scene: Scene) -> dict:
    if "n_terms" in scene.meta:
        return {"dim": 1, "id": scene.scene_id, "set": {"type": "ex2", "n_terms": scene.meta["n_terms"]}}
    om = scene.omega
    if isinstance(om, IntervalUnion):
        (lo, hi), = om.intervals
        omega = {"type": "interval", "lo": lo, "hi": hi}
    else:
        omega = om.to_json()
    doc = {"dim": scene.dim, "id": scene.scene_id, "omega": omega, "set": scene.set_e.to_json()}
    validate(doc)
    return doc


def dumps_scene(scene: Scene) -> str:
    doc = scene_to_dict(scene)
    if any(isinstance(v, float) and not math.isfinite(v) for v in _floats(doc)):
        raise SchemaError("scene contains a non-finite number")
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def dump_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scene(scene))


def _floats(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _floats(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _floats(v)
    elif isinstance(obj, float):
        yield obj
