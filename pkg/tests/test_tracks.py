"""Track structure, canonicalization, enumeration, serialization."""
import pytest
from hypothesis import given, settings, strategies as st

from ttgeo.fixtures import class_representatives, seed_track
from ttgeo.tracks import (
    TrainTrack,
    canonical_form,
    canonical_key,
    from_json_dict,
    is_amphichiral,
    is_complete,
    mirror,
    mirror_class_key,
    structural_class_key,
    to_json_dict,
)

S11_SEED_KEY = "s11|3,4,5,0,1,2|0.0.1;-1.0.1;0.-1.1"
S04_SEED_KEY = (
    "s04|3,7,11,0,10,8,9,1,5,6,4,2|"
    "0.0.1;0.0.1;0.0.1;0.0.-1;-1.1.-1;-1.0.-1"
)


def test_seed_keys_frozen():
    assert canonical_key(seed_track("s11")) == S11_SEED_KEY
    assert canonical_key(seed_track("s04")) == S04_SEED_KEY


def test_seeds_are_complete_marked_tracks():
    for surface in ("s11", "s04"):
        t = seed_track(surface)
        assert is_complete(t)
        assert t.marking is not None


def test_validation_rejects_malformed_pairings():
    with pytest.raises(ValueError):
        TrainTrack("s11", (1, 0, 3, 2, 5, 5))  # not an involution
    with pytest.raises(ValueError):
        TrainTrack("s11", (0, 2, 1, 4, 3, 5))  # fixed points
    with pytest.raises(ValueError):
        TrainTrack("s07", (3, 4, 5, 0, 1, 2))  # unknown surface


def test_canonicalization_idempotent():
    for surface in ("s11", "s04"):
        t = seed_track(surface)
        c = canonical_form(t)
        assert canonical_form(c) == c
        assert canonical_key(c) == canonical_key(t)


def _permute_switches(pairing, perm):
    # switch relabeling: half-branch 3s+i goes to 3 perm[s]+i
    relab = lambda h: 3 * perm[h // 3] + h % 3
    out = [0] * len(pairing)
    for h, p in enumerate(pairing):
        out[relab(h)] = relab(p)
    return tuple(out)


@given(st.permutations(list(range(4))))
@settings(max_examples=30, deadline=None)
def test_structural_key_invariant_under_switch_relabeling(perm):
    t = seed_track("s04")
    relabeled = TrainTrack("s04", _permute_switches(t.pairing, perm))
    assert structural_class_key(relabeled) == structural_class_key(t)


def test_mirror_is_an_involution_on_keys():
    for surface in ("s11", "s04"):
        t = seed_track(surface)
        assert canonical_key(mirror(mirror(t))) == canonical_key(t)


def test_torus_class_is_amphichiral():
    assert is_amphichiral(seed_track("s11"))


def test_enumeration_counts(res):
    torus = res.enumeration("s11")
    sphere = res.enumeration("s04")
    assert len(torus) == 1
    assert len(sphere) == 13
    assert len({structural_class_key(t) for t in sphere}) == 13
    assert len({mirror_class_key(t) for t in sphere}) == 8
    assert len(res.enumeration("s04", up_to_mirror=True)) == 8


def test_enumeration_reps_are_unmarked_canonical(res):
    for t in res.enumeration("s04"):
        assert t.marking is None
        assert canonical_form(t) == t


def test_json_roundtrip_every_fixture():
    tracks = [seed_track("s11"), seed_track("s04")]
    tracks += list(class_representatives().values())
    for t in tracks:
        back = from_json_dict(to_json_dict(t))
        assert back == t
        assert canonical_key(back) == canonical_key(t)


def test_json_dict_is_stable():
    t = seed_track("s04")
    assert to_json_dict(t) == to_json_dict(from_json_dict(to_json_dict(t)))
