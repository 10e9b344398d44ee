"""Acceptance gate: the eleven headline claims, one test each.

Each test pulls what it needs from the shared suite reports (cached per
session, so the expensive balls are built once), asserts the claim at its
stated tolerance, and prints one PASS line.  A failure here means the
library does not reproduce the corresponding claim; nothing in this file
may be weakened to make it pass.
"""
import pytest

from ttgeo import suites

DERIVED_SPHERE_FIBER_CONSTANT = 10


@pytest.fixture(scope="module")
def reports():
    return {}


@pytest.fixture(scope="module")
def suite(res, reports):
    def get(name):
        if name not in reports:
            reports[name] = suites.SUITES[name](res)
        return reports[name]

    return get


def _detail(report, fragment):
    hits = [c for c in report["checks"] if fragment in c["check"]]
    assert len(hits) == 1, f"want one check matching {fragment!r}, got {len(hits)}"
    return hits[0]


def test_c01_enumeration_counts_and_time(suite):
    rep = suite("classes")
    c = _detail(rep, "class counts")
    assert c["torus_classes"] == 1, c
    assert c["sphere_classes"] == 13, c
    assert c["sphere_mirror_classes"] == 8, c
    assert c["amphichiral"] == 3, c
    assert all(v < 60.0 for v in c["enumeration_seconds"].values()), c
    print("PASS [1] complete-track classes: 1 torus, 13 sphere, "
          "8 up to mirror, 3 amphichiral, under 60 s")


def test_c02_switch_and_branch_counts(suite):
    c = _detail(suite("classes"), "switch and branch")
    assert c["pass"], c
    assert c["sizes"] == [["s04", 4, 6], ["s11", 2, 3]], c
    print("PASS [2] every class: 2 switches / 3 branches (torus), "
          "4 switches / 6 branches (sphere)")


def test_c03_measure_cones_and_slopes(suite):
    rep = suite("classes")
    rays = _detail(rep, "measure cone")
    assert rays["ray_counts"] == [2] and rays["max_weight"] <= 2, rays
    dets = _detail(rep, "slope pair determinants")
    assert dets["torus"] == [1], dets
    assert dets["sphere"] == [1, 2], dets
    print("PASS [3] two extremal rays, weights <= 2; slope determinants "
          "1 (torus) and {1, 2} (sphere)")


def test_c04_cayley_graph_isomorphism(suite):
    rep = suite("cayley")
    rel = _detail(rep, "relators")
    assert rel["pass"], rel
    iso = _detail(rep, "rooted-isomorphic to the Cayley ball")
    assert iso["pass"], iso
    assert iso["radius"] == 6 and iso["complex_vertices"] == iso["cayley_vertices"]
    assert iso["seconds"] < 120.0, iso
    print(f"PASS [4] radius-6 complex ball ({iso['complex_vertices']} vertices) "
          f"isomorphic to the PSL(2,Z) Cayley ball in {iso['seconds']}s; "
          "relators land on -I")


def test_c05_fiber_constants(suite):
    rep = suite("qi")
    torus = _detail(rep, "torus fibers")
    assert torus["diameter"] == 3 and torus["fiber_sizes"] == [2], torus
    sphere = _detail(rep, "sphere fibers")
    assert sphere["constant"] == DERIVED_SPHERE_FIBER_CONSTANT, sphere
    assert sphere["base_members"] == 26, sphere
    assert sphere["members_per_class"] == [2] * 13, sphere
    assert sphere["transport_coherent"], sphere
    for edge in sphere["edges"]:
        assert edge["diameter"] == DERIVED_SPHERE_FIBER_CONSTANT, edge
        assert edge["uncertified"] == 0, edge
    print(f"PASS [5] fiber diameters constant: 3 on the torus (size-2 fibers), "
          f"a = {sphere['constant']} on the sphere across "
          f"{len(sphere['edges'])} certified edges")


def test_c06_quasi_isometry_bounds(suite):
    rep = suite("qi")
    torus = _detail(rep, "torus distances")
    assert torus["pass"] and not torus["violations"], torus
    sphere = _detail(rep, "sphere distances")
    assert sphere["pass"] and not sphere["violations"], sphere
    assert sphere["multiplicative"] == 11 and sphere["additive"] == 10, sphere
    print(f"PASS [6] distance bounds hold with zero violations: "
          f"(4, 3) on {torus['certified_pairs']} torus pairs, "
          f"(11, 10) on {sphere['certified_pairs']} sphere pairs")


def test_c07_line_graph_of_dual_tree(suite):
    rep = suite("farey")
    shape = _detail(rep, "line graph of the dual tree")
    assert shape["pass"] and shape["rooted_isomorphic"], shape
    deg = _detail(rep, "degrees all 4")
    assert deg["pass"] and deg["degrees"] == [4], deg
    print(f"PASS [7] interior image graph on {shape['interior_labels']} labels "
          "is the dual-tree line graph, all degrees 4")


def test_c08_transition_table_coherence(suite):
    rep = suite("table1")
    fwd = _detail(rep, "realizes a table row")
    assert fwd["pass"] and not fwd["violations"], fwd
    back = _detail(rep, "row is witnessed")
    assert back["pass"] and not back["missing"], back
    assert back["rows_witnessed"] == 10, back
    print("PASS [8] transition table coherent both ways: every split matches "
          "a row, all 10 rows witnessed")


def test_c09_t1_reach_and_interior(suite):
    rep = suite("t1reach")
    reach = _detail(rep, "within 5 of T1")
    assert reach["pass"] and not reach["violations"], reach
    iso = _detail(rep, "rooted-isomorphic to the torus complex ball")
    assert iso["pass"] and iso["t1_radius"] >= 3, iso
    assert iso["t1_vertices"] == iso["torus_vertices"], iso
    print(f"PASS [9] all {reach['certified_pairs']} certified sphere vertices "
          f"within 5 of T1; interior T1 ball (radius {iso['t1_radius']}) "
          "isomorphic to the torus complex ball")


def test_c10_group_action(suite):
    rep = suite("mcg")
    s11_stab = _detail(rep, "torus seed stabilizer")
    assert s11_stab["pass"] and s11_stab["order"] == 1, s11_stab
    s04_stab = _detail(rep, "Klein four-group")
    assert s04_stab["pass"] and s04_stab["order"] == 4, s04_stab
    assert s04_stab["element_orders"] == [1, 2, 2, 2], s04_stab
    for surface in ("s11", "s04"):
        pd = _detail(rep, f"{surface}: displacement")
        assert pd["pass"], pd
        counts = list(pd["counts"].values())
        assert counts[0] == counts[-1], pd
        orbit = _detail(rep, f"{surface}: orbit")
        assert orbit["pass"], orbit
        eq = _detail(rep, f"{surface}: generators preserve")
        assert eq["pass"] and not eq["violations"], eq
    print("PASS [10] action checks out: trivial / (Z/2)^2 stabilizers, "
          "stable displacement counts for r <= 3, transitive orbits, "
          "distance-preserving generators")


def test_c11_split_totality(suite):
    rep = suite("table1")
    for surface in ("s11", "s04"):
        tot = _detail(rep, f"{surface}: complete split")
        assert tot["pass"] and not tot["violations"], tot
        assert tot["large_branches"] > 0, tot
    print("PASS [11] every large branch of every ball track admits a "
          "complete split")
