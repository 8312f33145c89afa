"""Quick check of the pycyclecx bindings against the bundled data files."""

import json
import pathlib
import sys

import pycyclecx as cx

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def read(name):
    return (DATA / name).read_text()


def main():
    torus = cx.Surface.standard(1)
    assert torus.genus == 1 and torus.num_edges == 3

    # one reduced cycle per class on the torus
    for x in [(1, 0), (2, 0), (1, 2), (-3, 1)]:
        vs = cx.enumerate_vertices(torus, list(x), 12)
        assert len(vs) == 1, (x, vs)
        assert vs[0].homology_class() == list(x)
    assert cx.enumerate_vertices(torus, [3, 0], 12)[0].num_components == 3

    pair = cx.Multicurve(torus, [2, 0, 2], [1, -1])
    assert pair.homology_class() == [0, 0]
    assert not pair.is_reduced()
    assert pair.reduced_subcycle() is None

    two_pants = cx.CobordismCycle.from_json(read("genus2_two_pants.json"))
    report = two_pants.validate(2)
    assert report["k"] == 1 and report["within_bound"]

    three = cx.CobordismCycle.from_json(read("genus2_three_levels.json"))
    try:
        three.validate(2)
    except cx.CycleError as e:
        assert e.args[0] == "EulerMismatch", e.args
    else:
        raise AssertionError("three levels on genus 2 must be rejected")

    top = cx.CobordismCycle.from_json(read("genus3_vertex.json")).extend_to_top(3)
    assert top.k == 3 and top.level_euler() == [-1, -1, -1, -1]

    red = cx.reduce(two_pants, ["1/3", "2/3"])
    assert len(red["config"]["weights"]) == 2

    g2 = cx.Surface.from_json(read("genus2.json"))
    base_data = json.loads(read("genus2_base.json"))
    base = cx.Multicurve(g2, base_data["weights"], base_data["orientations"])
    path = cx.retract_to_star(g2, read("genus2_edge_config.json"), base)
    assert path["initial_crossings"] == 4
    assert len(path["steps"]) <= 2
    assert path["star"]["kappa_values"] == 2

    snap = cx.build_subcomplex(g2, [1, 0, 0, 0], 12)
    assert snap["stats"]["edges"] >= 1 and snap["stats"]["dimension"] == 1

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
