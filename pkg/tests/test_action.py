"""Mapping class model and its action."""
import pytest
from hypothesis import given, settings, strategies as st

from ttgeo.action import (
    MappingClass,
    act_on_edge_label,
    act_on_slope,
    act_on_track,
    certified_distance_via_orbit,
    compose,
    element_order,
    inverse,
    mapping_class_from_text,
    model_elements,
    orbit_matrix_index,
    psl2_entry_ball,
    stabilizer_report,
)
from ttgeo.complexes import BASE_EDGE, IDENTITY, L_GEN, R_GEN, mat_inv
from ttgeo.farey import make_slope
from ttgeo.fixtures import seed_track
from ttgeo.graphs import UNCERTIFIED
from ttgeo.tracks import canonical_key

GEN_CHOICES = (R_GEN, L_GEN, mat_inv(R_GEN), mat_inv(L_GEN))


def test_identity_and_inverse():
    e = MappingClass()
    assert e.matrix == IDENTITY and e.klein == (0, 0)
    g = mapping_class_from_text("1,1;0,1", "1,0")
    assert compose(g, inverse(g)).matrix == IDENTITY
    assert compose(g, inverse(g)).klein == (0, 0)


def test_klein_tag_validation():
    with pytest.raises(ValueError):
        MappingClass(IDENTITY, (2, 0))
    assert mapping_class_from_text("1,0;0,1", "3,5").klein == (1, 1)


@given(st.lists(st.sampled_from(range(4)), min_size=1, max_size=5))
@settings(max_examples=40, deadline=None)
def test_action_respects_composition(word):
    t = seed_track("s04")
    gs = [MappingClass(GEN_CHOICES[i]) for i in word]
    stepwise = t
    for g in reversed(gs):
        stepwise = act_on_track(g, stepwise)
    total = MappingClass()
    for g in gs:
        total = compose(total, g)
    assert canonical_key(act_on_track(total, t)) == canonical_key(stepwise)


def test_slope_action_is_linear():
    g = MappingClass((1, 2, 1, 3))
    s = act_on_slope(g, make_slope(1, 1))
    assert s == make_slope(3, 4)


def test_klein_factor_acts_trivially_on_tracks():
    t = seed_track("s04")
    for tag in ((0, 1), (1, 0), (1, 1)):
        g = MappingClass(IDENTITY, tag)
        assert canonical_key(act_on_track(g, t)) == canonical_key(t)
        assert act_on_edge_label(g, BASE_EDGE) == BASE_EDGE


def test_element_orders():
    assert element_order(MappingClass((0, 1, -1, 0))) == 2  # quarter turn, psl2
    assert element_order(MappingClass((0, 1, -1, -1))) == 3
    assert element_order(MappingClass(R_GEN)) is None


def test_entry_ball_sizes_frozen():
    assert len(psl2_entry_ball(1)) == 10
    assert len(psl2_entry_ball(2)) == 26
    assert len(psl2_entry_ball(8)) == 346
    assert len(psl2_entry_ball(21)) == 2234


def test_entry_ball_closed_under_inverse():
    ball = set(psl2_entry_ball(5))
    from ttgeo.complexes import psl2_canon

    assert all(psl2_canon(mat_inv(m)) in ball for m in ball)


def test_model_elements_counts():
    assert len(model_elements("s11", 2)) == 26
    assert len(model_elements("s04", 2)) == 104


def test_stabilizers():
    s11 = stabilizer_report(seed_track("s11"))
    assert s11["order"] == 1 and s11["matrix_fixers"] == ["1,0;0,1"]
    s04 = stabilizer_report(seed_track("s04"))
    assert s04["order"] == 4
    assert s04["klein_four_group"]
    assert s04["element_orders"] == [1, 2, 2, 2]


def test_orbit_covers_torus_ball(res):
    b = res.ball("s11", 3)
    index = orbit_matrix_index(b)
    assert sorted(index) == sorted(b.tracks)
    assert index[b.center] == IDENTITY


def test_orbit_translation_preserves_depth_at_most(res):
    # moving the seed by an orbit matrix lands exactly at the recorded vertex
    b = res.ball("s11", 4)
    index = orbit_matrix_index(b)
    t = seed_track("s11")
    for k, m in sorted(index.items())[:30]:
        assert canonical_key(act_on_track(MappingClass(m), t)) == k


def test_certified_distance_via_orbit_agrees_with_direct(res):
    b = res.ball("s04", 6)
    mats = list(orbit_matrix_index(b).values())
    ks = sorted(b.tracks)
    pairs = [(ks[i], ks[j]) for i in range(0, 40, 7) for j in range(0, 40, 11)]
    for u, v in pairs:
        direct = b.certified_pair_distance(u, v)
        if direct is not UNCERTIFIED:
            assert certified_distance_via_orbit(b, mats, u, v) == direct
