"""Desk model of the mapping class group and its action on the complexes.

The model is PSL(2, Z) for the torus and PSL(2, Z) x (Z/2)^2 for the
sphere, the Klein factor acting trivially on slopes and on track keys (its
elements are the hyperelliptic-type classes).  Matrices act linearly on
marking vectors and slopes; combinatorial structure never changes, so the
action descends to canonical keys and is an automorphism of every ball
window it preserves.

The same orbit machinery powers the fiber-diameter certification for the
sphere: a pair too deep for the direct min-rule is translated by orbit
matrices until one endpoint sits near the center, where the window
certifies the (translation-invariant) distance.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .complexes import (
    BASE_EDGE,
    ComplexBall,
    FiberMap,
    IDENTITY,
    L_GEN,
    Mat,
    R_GEN,
    closed_class_key,
    edge_label,
    mat_inv,
    mat_label,
    mat_mul,
    parse_edge_label,
    parse_mat,
    project_fibers,
    psl2_canon,
    t1_subgraph,
)
from .farey import Slope, make_slope, slope_pair
from .graphs import UNCERTIFIED
from .measures import vertex_cycles
from .tracks import TrainTrack, canonical_key, structural_class_key

KLEIN_ELEMENTS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class MappingClass:
    """A model mapping class: canonical PSL(2, Z) matrix plus Klein tag."""

    matrix: Mat = IDENTITY
    klein: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "matrix", psl2_canon(self.matrix))
        kx, ky = self.klein
        if kx not in (0, 1) or ky not in (0, 1):
            raise ValueError(f"klein tag must lie in (Z/2)^2, got {self.klein}")

    def label(self) -> str:
        return f"{mat_label(self.matrix)}|{self.klein[0]},{self.klein[1]}"


def mapping_class_from_text(matrix: str, klein: str = "0,0") -> MappingClass:
    kx, ky = (int(x) % 2 for x in klein.split(","))
    return MappingClass(parse_mat(matrix), (kx, ky))


def compose(g: MappingClass, h: MappingClass) -> MappingClass:
    """g after h; the Klein factor is central and 2-torsion."""
    return MappingClass(
        mat_mul(g.matrix, h.matrix),
        ((g.klein[0] + h.klein[0]) % 2, (g.klein[1] + h.klein[1]) % 2),
    )


def inverse(g: MappingClass) -> MappingClass:
    return MappingClass(mat_inv(g.matrix), g.klein)


def act_on_slope(g: MappingClass, s: Slope) -> Slope:
    a, b, c, d = g.matrix
    return make_slope(a * s.p + b * s.q, c * s.p + d * s.q)


def act_on_track(g: MappingClass, t: TrainTrack) -> TrainTrack:
    """Matrix action on the marking; structure and parity are untouched."""
    if t.marking is None:
        return t
    a, b, c, d = g.matrix
    marking = tuple((a * x + b * y, c * x + d * y) for x, y in t.marking)
    return TrainTrack(t.surface, t.pairing, marking, t.parity)


def act_on_edge_label(g: MappingClass, label: str) -> str:
    u, v = parse_edge_label(label)
    return edge_label(slope_pair(act_on_slope(g, u), act_on_slope(g, v)))


def _act_key(m: Mat, t: TrainTrack) -> str:
    return canonical_key(act_on_track(MappingClass(m), t))


_GENS = (R_GEN, L_GEN, mat_inv(R_GEN), mat_inv(L_GEN))


def orbit_matrix_index(ball: ComplexBall) -> Dict[str, Mat]:
    """Matrix witness per orbit vertex inside the ball.

    Breadth-first over generator words, keeping only words whose image of
    the center lies in the ball.  On the torus this walks the complex
    itself (splits are generator moves); on the sphere it walks T1 (double
    splits), so the index covers the center's structural class.
    """
    seed = ball.tracks[ball.center]
    index: Dict[str, Mat] = {ball.center: IDENTITY}
    frontier: List[Mat] = [IDENTITY]
    while frontier:
        nxt: List[Mat] = []
        for g in frontier:
            for m in _GENS:
                gm = psl2_canon(mat_mul(g, m))
                k = _act_key(gm, seed)
                if k in ball.distances and k not in index:
                    index[k] = gm
                    nxt.append(gm)
        frontier = nxt
    return index


def psl2_entry_ball(bound: int) -> Tuple[Mat, ...]:
    """All PSL(2, Z) elements with every entry bounded by the given value.

    Generated by word search pruned at the bound; sound because every such
    matrix has a generator word along which entries never exceed their
    final values (the reversed Euclidean reduction of its columns).
    """
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for g in frontier:
            for m in _GENS:
                h = psl2_canon(mat_mul(g, m))
                if h not in seen and max(abs(x) for x in h) <= bound:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen))


def model_elements(surface: str, bound: int) -> List[MappingClass]:
    kleins = KLEIN_ELEMENTS if surface == "s04" else ((0, 0),)
    return [
        MappingClass(m, k) for m in psl2_entry_ball(bound) for k in kleins
    ]


def element_order(g: MappingClass, cap: int = 12) -> Optional[int]:
    acc = g
    for n in range(1, cap + 1):
        if acc.matrix == IDENTITY and acc.klein == (0, 0):
            return n
        acc = compose(acc, g)
    return None


def stabilizer_report(t: TrainTrack, bound: int = 21) -> Dict:
    """All model elements within the entry bound fixing the track's key."""
    key = canonical_key(t)
    mats = [m for m in psl2_entry_ball(bound) if _act_key(m, t) == key]
    kleins = KLEIN_ELEMENTS if t.surface == "s04" else ((0, 0),)
    elements = [MappingClass(m, k) for m in mats for k in kleins]
    orders = sorted(element_order(g) or 0 for g in elements)
    return {
        "surface": t.surface,
        "entry_bound": bound,
        "matrix_fixers": [mat_label(m) for m in mats],
        "order": len(elements),
        "element_orders": orders,
        "klein_four_group": len(elements) == 4
        and orders == [1, 2, 2, 2]
        and all(g.matrix == IDENTITY for g in elements),
    }


def properly_discontinuous_report(
    ball: ComplexBall, r_max: int = 3, bounds: Sequence[int] = (8, 13, 21)
) -> Dict:
    """Counts of model elements displacing the center by at most r.

    The displacement d(x, gx) equals the ball depth of the moved center,
    always certified.  Finiteness is witnessed by count stability across
    growing entry bounds.
    """
    seed = ball.tracks[ball.center]
    klein_mult = len(KLEIN_ELEMENTS) if ball.surface == "s04" else 1
    counts: Dict[int, List[int]] = {}
    for bound in bounds:
        per_r = [0] * (r_max + 1)
        for m in psl2_entry_ball(bound):
            dep = ball.distances.get(_act_key(m, seed))
            if dep is not None and dep <= r_max:
                for r in range(dep, r_max + 1):
                    per_r[r] += klein_mult
        counts[bound] = per_r
    last, prev = bounds[-1], bounds[-2]
    return {
        "bounds": list(bounds),
        "counts": {str(b): counts[b] for b in bounds},
        "stable": counts[last] == counts[prev],
        "stabilizer_order_matches_r0": counts[last][0] == klein_mult,
    }


def cocompact_report(ball: ComplexBall) -> Dict:
    """Orbit coverage: the whole ball for the torus, the closed class (with
    the split-reach bound) for the sphere."""
    index = orbit_matrix_index(ball)
    if ball.surface == "s11":
        missed = [k for k in ball.graph.vertices if k not in index]
        return {
            "surface": "s11",
            "orbit_size": len(index),
            "vertices": ball.graph.vertex_count,
            "transitive": not missed,
            "missed": missed[:5],
            "cobounded_radius": 0 if not missed else None,
        }
    from .complexes import t1_reach_report

    t1 = t1_subgraph(ball)
    certified_t1 = [
        v for v in t1.vertices if ball.distances[v] <= ball.radius - 2
    ]
    missed = [v for v in certified_t1 if v not in index]
    reach = t1_reach_report(ball)
    return {
        "surface": "s04",
        "orbit_size": len(index),
        "t1_vertices": len(t1.vertices),
        "t1_certified": len(certified_t1),
        "transitive_on_t1": not missed,
        "missed": missed[:5],
        "reach_bound": reach["reach"],
        "reach_violations": reach["violation_count"],
        "per_class_distance": reach["per_class_distance"],
    }


def equivariance_report(
    ball: ComplexBall, max_pairs: int = 300, gens: Iterable[Mat] = _GENS
) -> Dict:
    """d(gu, gv) = d(u, v) on sampled certified pairs, for each generator."""
    gs = [MappingClass(m) for m in gens]
    checked = 0
    skipped = 0
    violations: List[Tuple[str, str, str]] = []
    taken = 0
    for u, v, d in ball.certified_pairs():
        taken += 1
        if taken % 7:
            # Thin the stream: certified pairs arrive grouped by source
            # vertex, and neighboring pairs exercise the same translates.
            continue
        if checked // max(1, len(gs)) >= max_pairs:
            break
        tu, tv = ball.tracks[u], ball.tracks[v]
        for g in gs:
            ku = canonical_key(act_on_track(g, tu))
            kv = canonical_key(act_on_track(g, tv))
            if ku not in ball.distances or kv not in ball.distances:
                skipped += 1
                continue
            dg = ball.certified_pair_distance(ku, kv)
            if dg is UNCERTIFIED:
                skipped += 1
                continue
            checked += 1
            if dg != d:
                violations.append((u, v, f"{g.label()}: {d} -> {dg}"))
    return {
        "pairs_checked": checked,
        "skipped": skipped,
        "violations": violations[:10],
        "violation_count": len(violations),
    }


# ---------------------------------------------------------------------------
# Orbit-assisted distance certification and the sphere fiber constant


def _index_by_depth(ball: ComplexBall, index: Mapping[str, Mat]) -> List[Mat]:
    return [index[k] for k in sorted(index, key=lambda k: (ball.distances[k], k))]


def certified_distance_via_orbit(
    ball: ComplexBall, mats: Sequence[Mat], u: str, v: str
):
    """Certified distance of a pair, translating by orbit matrices when the
    direct min-rule window is too shallow.

    Translation preserves distances (the action is an automorphism), so any
    translate satisfying the min-rule certifies the original pair.
    """
    d = ball.certified_pair_distance(u, v)
    if d is not UNCERTIFIED:
        return d
    tu, tv = ball.tracks[u], ball.tracks[v]
    for m in mats:
        g = MappingClass(mat_inv(m))
        ku = canonical_key(act_on_track(g, tu))
        if ku not in ball.distances:
            continue
        kv = canonical_key(act_on_track(g, tv))
        if kv not in ball.distances:
            continue
        d = ball.certified_pair_distance(ku, kv)
        if d is not UNCERTIFIED:
            return d
    return UNCERTIFIED


def fiber_diameter_via_orbit(
    ball: ComplexBall,
    fibers: FiberMap,
    label: str,
    mats: Sequence[Mat],
) -> Dict:
    """All-pairs certified diameter of one fiber, orbit-assisted."""
    members = fibers.fiber(label)
    pairs = 0
    uncertified = 0
    diameter = 0
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            pairs += 1
            d = certified_distance_via_orbit(ball, mats, u, v)
            if d is UNCERTIFIED:
                uncertified += 1
            else:
                diameter = max(diameter, d)
    return {
        "edge": label,
        "members": len(members),
        "pairs": pairs,
        "uncertified": uncertified,
        "diameter": diameter if uncertified == 0 else UNCERTIFIED,
    }


def sphere_fiber_constant_report(
    ball: ComplexBall,
    fibers: Optional[FiberMap] = None,
    extra_words: Sequence[Sequence[Mat]] = ((R_GEN,), (L_GEN,), (R_GEN, R_GEN)),
) -> Dict:
    """Derive the constant fiber diameter of the sphere projection.

    The base-edge fiber is certified member-complete: exactly two tracks
    per structural class, closed under the edge-stabilizing quarter turn
    and under splits within the window (deeper layers add no member).  Its
    all-pairs certified diameter is the constant; translated edges must
    reproduce both the fiber (as the matrix image) and the diameter.
    """
    if fibers is None:
        fibers = project_fibers(ball)
    index = orbit_matrix_index(ball)
    mats = _index_by_depth(ball, index)
    base = fiber_diameter_via_orbit(ball, fibers, BASE_EDGE, mats)
    members = fibers.fiber(BASE_EDGE)
    per_class: Dict[str, int] = {}
    for k in members:
        sk = structural_class_key(ball.tracks[k])
        per_class[sk] = per_class.get(sk, 0) + 1
    edges: List[Dict] = [base]
    coherent = True
    for word in extra_words:
        g = MappingClass(IDENTITY)
        for m in word:
            g = compose(g, MappingClass(m))
        target = act_on_edge_label(g, BASE_EDGE)
        moved = sorted(
            canonical_key(act_on_track(g, ball.tracks[k])) for k in members
        )
        inside = all(k in ball.distances for k in moved)
        scan = sorted(fibers.fiber(target))
        if inside and scan != moved:
            coherent = False
        entry = fiber_diameter_via_orbit(ball, fibers, target, mats)
        entry["transported_inside"] = inside
        entry["matches_transport"] = inside and scan == moved
        edges.append(entry)
    diams = {
        e["diameter"] for e in edges if e["diameter"] is not UNCERTIFIED
    }
    constant = diams.pop() if len(diams) == 1 else None
    return {
        "base_members": len(members),
        "members_per_class": sorted(per_class.values()),
        "edges": edges,
        "transport_coherent": coherent,
        "constant": constant
        if constant is not None and all(e["diameter"] == constant for e in edges)
        else None,
    }
