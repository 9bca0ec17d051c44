"""Smoke test for the fejerlab_py extension module.

Build and install it first:

    pip install --no-build-isolation crates/fejerlab-py
"""

import json
import math
import sys

import fejerlab_py as fl


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a, b)) and len(a) == len(b)


def main():
    names = fl.examples()
    assert len(names) == 10, names

    e0, e1 = fl.Vector.basis(0), fl.Vector.basis(1)
    assert (e0 + e1).inner(e0 + e1) == 2.0
    assert abs(e0.dist(e1) - math.sqrt(2)) < 1e-15
    assert close(fl.Vector([3.0, 4.0]).unit().to_dense(), [0.6, 0.8])
    try:
        fl.Vector([0.0, 0.0]).unit()
    except ValueError:
        pass
    else:
        raise AssertionError("unit of zero must raise")

    authors = fl.Example("AuthorsExample")
    rows = authors.terms(4)
    r3 = math.sqrt(3)
    for got, want in zip(rows, [[0, 2], [1, 2], [0, r3], [0.5, r3]]):
        assert close(got, want), rows
    assert abs(authors.term(60).dist(authors.limit)) <= 1e-6

    y_flat = json.dumps({"type": "affine_flat", "anchor": {"idx": [], "val": []},
                         "basis": [{"idx": [0], "val": [1.0]}], "complement": True})
    assert close(fl.project(y_flat, [1.0, 1.0]), [0.0, 1.0])
    half = json.dumps({"type": "halfspace", "normal": {"idx": [1], "val": [1.0]},
                       "offset": 0.0, "boundary": "closed"})
    assert close(fl.project(half, [2.0, -3.0]), [2.0])
    assert fl.distance(half, [2.0, -3.0]) == 3.0

    p, q = fl.moreau_split([[1.0, 1.0]], [1.0, 0.0])
    assert close(p, [0.5, 0.5]) and close(q, [0.5, -0.5]), (p, q)

    e1_eps = fl.tolerances("QuasiIndCounter", 6, [0.0, 0.0, 0.0, 1.0])
    assert abs(e1_eps[1] - 2.0) <= 1e-12, e1_eps

    verdict = fl.liminf_membership("AngularClosure", [0.0, 1.0])
    assert verdict["verdict"] == "InTail", verdict
    assert fl.liminf_membership("AuthorsExample", [0.0, 2 / r3])["verdict"] == "Excluded"

    report = fl.classify("Type1Counter", [[-1.0, 0.0], [-0.1, 0.0]], 64)
    assert report["quasi"]["type1"]["verdict"] == "Divergent"

    grid = fl.maximal_set_2d("SegmentLimit")
    inside = [(c["x"], c["y"]) for c in grid["cells"] if c["location"] != "out"]
    assert inside and all(y == 0.0 and abs(x) <= 1.0 for x, y in inside)

    shadow = fl.verify("L2ShadowFail")
    status = {c["claim_id"]: c["status"] for c in shadow["claims"]}
    assert status["shadow.shadows_y"] == "Pass"
    assert status["shadow.distances_c"] == "Pass"

    everything = fl.verify("all", jobs=2)
    assert [r["example"] for r in everything] == names
    fails = [c["claim_id"] for r in everything for c in r["claims"] if c["status"] == "Fail"]
    print("claims failing:", fails)
    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
