"""Left/right splits at large branches, their inverses, and measure transfer.

The local rewrite is fixed here and validated by the carrying-coherence and
Farey-coherence checks in the test suite rather than assumed: a split at a
large branch e with strand half-branches a (S1 at the tail switch u), b (S2
at u), c (S1 at the head switch w), d (S2 at w) replaces e by a diagonal
branch z between the two switches.

RIGHT keeps the a-d and b-c strands smooth with the diagonal descending from
the a-d strand (at u) to the b-c strand (at w); LEFT is the reflected
configuration.  In both cases the diagonal sits in small slots at both ends
and carries weight |mu(a) - mu(d)|; the measure-transfer map back to the
source track is mu(e) = mu(z) + mu(d) + mu(b) (RIGHT) or mu(z) + mu(a) +
mu(c) (LEFT).

Chirality naming is anchored by the once-punctured-torus seed: RIGHT is the
chirality that replaces the slope 0/1 cycle by the mediant 1/1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .tracks import (
    Hol,
    TrainTrack,
    _with_hols,
    hol_compose,
    hol_inverse,
    is_complete,
)

RIGHT = "R"
LEFT = "L"


@dataclass(frozen=True)
class SplitMove:
    branch: int
    chirality: str

    def __post_init__(self):
        if self.chirality not in (RIGHT, LEFT):
            raise ValueError(f"chirality must be {RIGHT!r} or {LEFT!r}")

    def to_json_dict(self) -> Dict:
        return {"branch": self.branch, "chirality": self.chirality}


def large_branches(t: TrainTrack) -> Tuple[int, ...]:
    """Branches whose half-branches both occupy large slots.  Their two
    switches are automatically distinct (one L slot per switch)."""
    return tuple(
        i for i, (h1, h2) in enumerate(t.branches())
        if h1 % 3 == 0 and h2 % 3 == 0
    )


def _rewrite(
    t: TrainTrack,
    drop: Tuple[int, int],
    newpos: Dict[int, int],
    walk: Dict[int, Hol],
    new_pair: Tuple[int, int],
    new_hol: Optional[Hol],
) -> TrainTrack:
    """Rehome branch endpoints per newpos, drop one branch, add another.

    walk[h] is the holonomy of the connecting path from h's old switch to
    its new one; endpoint h of a branch with holonomy g (oriented toward h)
    picks up walk[h] on the left.
    """
    marked = t.marking is not None
    new_hols: Dict[Tuple[int, int], Hol] = {}
    pairs: List[Tuple[int, int]] = []
    for b, (h1, h2) in enumerate(t.branches()):
        if (h1, h2) == drop:
            continue
        g = t.branch_hol(b) if marked else None
        if marked:
            if h2 in walk:
                g = hol_compose(walk[h2], g)
            if h1 in walk:
                g = hol_compose(g, hol_inverse(walk[h1]))
        n1, n2 = newpos.get(h1, h1), newpos.get(h2, h2)
        if n1 > n2:
            n1, n2 = n2, n1
            if marked:
                g = hol_inverse(g)
        pairs.append((n1, n2))
        if marked:
            new_hols[(n1, n2)] = g
    pairs.append(new_pair)
    if marked:
        new_hols[new_pair] = new_hol
    n = len(t.pairing)
    pairing = [0] * n
    for a, b2 in pairs:
        pairing[a] = b2
        pairing[b2] = a
    pairing_t = tuple(pairing)
    if marked:
        return _with_hols(t.surface, pairing_t, new_hols)
    return TrainTrack(t.surface, pairing_t)


def split(t: TrainTrack, move: SplitMove) -> TrainTrack:
    """Apply the rewrite; the result may or may not be complete.

    The returned track's marking is the carried transport of t's: endpoints
    rehomed across the old branch e compose with e's holonomy along their
    connecting path, and the diagonal inherits e's course.
    """
    h1, h2 = t.branches()[move.branch]
    if h1 % 3 != 0 or h2 % 3 != 0:
        raise ValueError("split requires a large branch")
    u, w = h1 // 3, h2 // 3
    g_e = t.branch_hol(move.branch) if t.marking is not None else None
    inv = hol_inverse(g_e) if g_e is not None else None
    if move.chirality == RIGHT:
        newpos = {3 * u + 1: 3 * u, 3 * w + 2: 3 * u + 2,
                  3 * w + 1: 3 * w, 3 * u + 2: 3 * w + 2}
        walk = {3 * w + 2: inv, 3 * u + 2: g_e}
        new_pair = (3 * u + 1, 3 * w + 1)
    else:
        newpos = {3 * u + 1: 3 * w + 1, 3 * w + 1: 3 * u + 1,
                  3 * w + 2: 3 * w, 3 * u + 2: 3 * u}
        walk = {3 * u + 1: g_e, 3 * w + 1: inv}
        new_pair = (3 * u + 2, 3 * w + 2)
    if t.marking is None:
        walk = {}
    return _rewrite(t, (h1, h2), newpos, walk, new_pair, g_e)


def split_transfer(t: TrainTrack, move: SplitMove, result: TrainTrack,
                   weights: Sequence[int]) -> Tuple[int, ...]:
    """Carry a measure on the split result back to a measure on t.

    Branches other than the diagonal keep their weights (identified by
    position in the rewrite); the dropped branch e regains the full traffic
    mu(z) + the two through-strands crossing it.
    """
    src = t.branches()
    dst = result.branches()
    h1, h2 = src[move.branch]
    u, w = h1 // 3, h2 // 3
    if move.chirality == RIGHT:
        newpos = {3 * u + 1: 3 * u, 3 * w + 2: 3 * u + 2,
                  3 * w + 1: 3 * w, 3 * u + 2: 3 * w + 2}
        new_pair = (3 * u + 1, 3 * w + 1)
    else:
        newpos = {3 * u + 1: 3 * w + 1, 3 * w + 1: 3 * u + 1,
                  3 * w + 2: 3 * w, 3 * u + 2: 3 * u}
        new_pair = (3 * u + 2, 3 * w + 2)
    dst_index = {pair: i for i, pair in enumerate(dst)}
    out = [0] * len(src)
    for b, (a1, a2) in enumerate(src):
        if b == move.branch:
            continue
        n1, n2 = newpos.get(a1, a1), newpos.get(a2, a2)
        if n1 > n2:
            n1, n2 = n2, n1
        out[b] = weights[dst_index[(n1, n2)]]
    z = weights[dst_index[new_pair]]
    # Traffic through where e used to be: the diagonal plus the two
    # through-strands (d and b for RIGHT, a and c for LEFT).
    if move.chirality == RIGHT:
        d_end, b_end = 3 * w + 2, 3 * u + 2
        cross1 = out[t.branch_index()[d_end]]
        cross2 = out[t.branch_index()[b_end]]
    else:
        cross1 = out[t.branch_index()[3 * u + 1]]
        cross2 = out[t.branch_index()[3 * w + 1]]
    out[move.branch] = z + cross1 + cross2
    return tuple(out)


def splits(t: TrainTrack) -> Tuple[Tuple[SplitMove, TrainTrack], ...]:
    """All split rewrites of t (complete or not), in deterministic order."""
    out = []
    for b in large_branches(t):
        for ch in (RIGHT, LEFT):
            move = SplitMove(b, ch)
            out.append((move, split(t, move)))
    return tuple(out)


def foldable_branches(t: TrainTrack) -> Tuple[Tuple[int, str], ...]:
    """Branches along which an inverse split can be performed: both ends in
    S1 slots undoes a RIGHT split, both ends in S2 slots undoes a LEFT."""
    out = []
    for i, (h1, h2) in enumerate(t.branches()):
        if h1 % 3 == 1 and h2 % 3 == 1:
            out.append((i, RIGHT))
        elif h1 % 3 == 2 and h2 % 3 == 2:
            out.append((i, LEFT))
    return tuple(out)


def fold(t: TrainTrack, branch: int, chirality: str) -> TrainTrack:
    """Inverse split along the given diagonal branch: fold(split(t, m))
    recovers t exactly, including the marking presentation."""
    z1, z2 = t.branches()[branch]
    u, w = z1 // 3, z2 // 3
    g_z = t.branch_hol(branch) if t.marking is not None else None
    inv = hol_inverse(g_z) if g_z is not None else None
    if chirality == RIGHT:
        if z1 % 3 != 1 or z2 % 3 != 1:
            raise ValueError("right fold requires an S1-S1 branch")
        newpos = {3 * u: 3 * u + 1, 3 * w: 3 * w + 1,
                  3 * u + 2: 3 * w + 2, 3 * w + 2: 3 * u + 2}
        walk = {3 * u + 2: g_z, 3 * w + 2: inv}
    elif chirality == LEFT:
        if z1 % 3 != 2 or z2 % 3 != 2:
            raise ValueError("left fold requires an S2-S2 branch")
        newpos = {3 * u: 3 * u + 2, 3 * w: 3 * w + 2,
                  3 * u + 1: 3 * w + 1, 3 * w + 1: 3 * u + 1}
        walk = {3 * u + 1: g_z, 3 * w + 1: inv}
    else:
        raise ValueError(f"unknown chirality {chirality!r}")
    if t.marking is None:
        walk = {}
    return _rewrite(t, (z1, z2), newpos, walk, (3 * u, 3 * w), g_z)


def folds(t: TrainTrack) -> Tuple[Tuple[Tuple[int, str], TrainTrack], ...]:
    out = []
    for b, ch in foldable_branches(t):
        out.append(((b, ch), fold(t, b, ch)))
    return tuple(out)


def neighbors(t: TrainTrack) -> Tuple[TrainTrack, ...]:
    """Undirected train track complex adjacency: complete split results
    together with complete fold sources (tracks that split onto t)."""
    from .tracks import canonical_key

    seen = {}
    for _, r in splits(t):
        if is_complete(r):
            seen.setdefault(canonical_key(r), r)
    for _, r in folds(t):
        if is_complete(r):
            seen.setdefault(canonical_key(r), r)
    return tuple(seen[k] for k in sorted(seen))


def double_split(t: TrainTrack) -> Tuple[TrainTrack, ...]:
    """Split at both large branches of a two-large-branch track, one split
    each, keeping complete results.  The two rewrites touch disjoint switch
    pairs, so the composition is order-independent."""
    bigs = large_branches(t)
    if len(bigs) != 2:
        raise ValueError("double split requires exactly two large branches")
    from .tracks import canonical_key

    out = {}
    for ch1 in (RIGHT, LEFT):
        for ch2 in (RIGHT, LEFT):
            mid = split(t, SplitMove(bigs[0], ch1))
            # Branch indices shift after the first rewrite; locate the
            # second large branch by its unchanged half-branch ids.
            target = t.branches()[bigs[1]]
            b2 = mid.branches().index(target)
            res = split(mid, SplitMove(b2, ch2))
            if is_complete(res):
                out.setdefault(canonical_key(res), res)
    return tuple(out[k] for k in sorted(out))
