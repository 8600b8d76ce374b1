import json
import math

import numpy as np
import pytest

from fracperim.errors import DomainError
from fracperim.verify import SUITES, VerifyReport, all_ok, random_scene_pair, run_suite


def test_report_json_maps_non_finite_to_null():
    r = VerifyReport("x", "pass", math.nan, 1.0, math.inf, "d")
    d = json.loads(r.to_json())
    assert d == {"check_id": "x", "status": "pass", "observed": None, "expected": 1.0, "tolerance": None, "details": "d"}


def test_unknown_suite():
    with pytest.raises(DomainError):
        list(run_suite("nope"))


def test_all_ok_treats_not_converged_as_expected():
    reps = [VerifyReport("a", "pass", 0, 0, 0), VerifyReport("b", "not_converged", 0, 0, 0)]
    assert all_ok(reps)
    assert not all_ok(reps + [VerifyReport("c", "fail", 1, 0, 0)])


@pytest.mark.parametrize("name", [s for s in SUITES if s != "ex2"])
def test_suites_do_not_fail(name):
    reps = list(run_suite(name, seed=3))
    assert reps and all_ok(reps), [r for r in reps if r.status == "fail"]
    assert all(r.check_id.startswith(name) for r in reps)


@pytest.mark.parametrize("separated", [True, False])
def test_random_scene_pairs_are_disjoint(separated):
    rng = np.random.default_rng(0)
    for _ in range(50):
        e, f, u = random_scene_pair(rng, separated)
        assert e.set_e.intersect(f.set_e).measure == 0
        assert u.set_e == e.set_e.union(f.set_e)
        if separated:
            assert e.set_e.is_bounded and f.set_e.is_bounded
