import math

import pytest

from ballgreen.results import CheckResult
from ballgreen.verify import MANIFEST, REGISTRY, default_spec, run_all, run_check

CHEAP = ["theorem-inf-norm", "sup-location", "lemma-h-norm", "hyp-identity", "sphere-reduction",
         "series-signs", "series-integral", "gamma-inequality", "moebius-identities",
         "kernel-green-gradient", "identity-chain", "manufactured-solution", "gradient-domination",
         "duality-interpolation"]


def test_manifest_points_at_registered_checks():
    named = {c for cs in MANIFEST.values() for c in cs}
    assert named <= set(REGISTRY)
    assert set(REGISTRY) == named


@pytest.mark.parametrize("name", CHEAP)
def test_check_passes_n3(name):
    res = run_check(name, [3])
    assert res
    bad = [r for r in res if not r.passed]
    assert not bad, [(r.name, r.abs_error, r.tolerance, r.detail) for r in bad]


def test_theorem_example_values():
    (r, *_) = run_check("theorem-inf-norm", [3])
    assert r.computed == pytest.approx(3 * math.pi, rel=1e-9)
    assert r.expected == pytest.approx(3 * math.pi, rel=1e-15)
    h = run_check("lemma-h-norm", [4])
    assert any(c.expected == pytest.approx(0.5) and c.computed == pytest.approx(0.5, rel=1e-9) for c in h)


def test_unknown_check_and_empty_dims():
    with pytest.raises(KeyError):
        run_check("nope", [3])
    with pytest.raises(ValueError):
        run_check("hyp-identity", [])
    with pytest.raises(ValueError):
        run_all([])


def test_failures_are_recorded_not_raised(monkeypatch):
    def boom(ctx, spec, profile):
        raise RuntimeError("synthetic")
    monkeypatch.setitem(REGISTRY, "boom", boom)
    (r,) = run_check("boom", [3])
    assert not r.passed and "synthetic" in r.detail["error"]


def test_result_serialisation():
    r = CheckResult.compare("x", 3, 1.0, 1.0 + 1e-9, 1e-6, "derived: test")
    d = r.to_dict()
    assert d["passed"] and d["metric"] == "rel"
    bad = CheckResult.predicate("y", 3, False, "p", math.inf, 0.0).to_dict()
    assert bad["abs_error"] is None


def test_profiles():
    assert default_spec("thorough").radial_nodes == 4 * default_spec("fast").radial_nodes
    with pytest.raises(ValueError):
        default_spec("slow")


def test_run_all_n3_fast():
    rep = run_all([3], "fast", seed=0, workers=4)
    assert rep["all_passed"], [c["name"] for c in rep["checks"] if not c["passed"]]
    assert {c["name"].split("[")[0] for c in rep["checks"]} >= set(REGISTRY)
