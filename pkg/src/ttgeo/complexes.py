"""Certified balls of the train track complex and the maps onto Farey edges.

A ball is grown by breadth-first search from a marked seed under the
undirected split relation (a track is adjacent to its complete splits and to
the complete tracks that split onto it).  Everything downstream, fibers,
quasi-isometry bounds, the Cayley comparison, T1, only ever claims facts
about certified vertices and pairs.

Certification rule, used for complex balls and Farey-side windows alike: a
window distance d(u, v) computed around a center c is the true distance of
the ambient graph whenever min(dep(u), dep(v)) + d(u, v) <= horizon, where
dep is the BFS depth from c and the horizon is the first depth at which a
vertex may be missing a neighbor.  A true geodesic from the shallower
endpoint then cannot reach an unexplored vertex, so the window value is
exact.  For a radius-R ball the horizon is R by construction.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Set, Tuple

from .farey import (
    Slope,
    det_abs,
    farey_ball,
    make_slope,
    parse_slope,
    resolve_i4_to_edge,
    slope_pair,
    triangles,
)
from .graphs import Graph, UNCERTIFIED, bfs_distances, rooted_isomorphic
from .measures import vertex_cycles
from .splitting import (
    LEFT,
    RIGHT,
    SplitMove,
    double_split,
    large_branches,
    neighbors,
    split,
    splits,
)
from .tracks import (
    TrainTrack,
    canonical_form,
    canonical_key,
    is_amphichiral,
    is_complete,
    mirror_class_key,
    structural_class_key,
)

#: Documented construction bounds (breadth-first layers, not hard limits of
#: the algorithm; they keep desk runs inside a test-suite time budget).
MAX_RADIUS = {"s11": 10, "s04": 16}

SAME = "same"
ADJACENT = "adjacent"
NEXT_BUT_ONE = "next-but-one"


# ---------------------------------------------------------------------------
# Complex balls


@dataclass(frozen=True)
class ComplexBall:
    surface: str
    center: str
    radius: int
    graph: Graph
    tracks: Mapping[str, TrainTrack]
    distances: Mapping[str, int]
    _rows: Dict[str, Dict[str, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def depth(self, key: str) -> int:
        return self.distances[key]

    def _row(self, u: str) -> Dict[str, int]:
        """BFS from u truncated at radius - dep(u), the certified range."""
        row = self._rows.get(u)
        if row is None:
            row = _truncated_bfs(self.graph, u, self.radius - self.distances[u])
            self._rows[u] = row
        return row

    def certified_pair_distance(self, u: str, v: str):
        """True complex distance of (u, v), or UNCERTIFIED."""
        if self.distances[u] > self.distances[v]:
            u, v = v, u
        d = self._row(u).get(v)
        return UNCERTIFIED if d is None else d

    def certified_pairs(self) -> Iterator[Tuple[str, str, int]]:
        """All certified pairs (u, v, d) with u != v, each reported once."""
        for u in self.graph.vertices:
            du = self.distances[u]
            for v, d in self._row(u).items():
                if v == u:
                    continue
                dv = self.distances[v]
                if du < dv or (du == dv and u < v):
                    yield u, v, d


def _truncated_bfs(g: Graph, root: str, limit: int) -> Dict[str, int]:
    ri = g.index(root)
    dist = {ri: 0}
    q = deque([ri])
    while q:
        i = q.popleft()
        d = dist[i] + 1
        if d > limit:
            continue
        for j in g.adj[i]:
            if j not in dist:
                dist[j] = d
                q.append(j)
    return {g.vertices[i]: d for i, d in dist.items()}


def build_ball(seed: TrainTrack, radius: int) -> ComplexBall:
    """Deterministic BFS ball of the train track complex around the seed.

    Every vertex with depth < radius is fully expanded; vertices at depth
    exactly radius are expanded only to record edges among already-known
    vertices, so the ball graph is the induced subgraph on the depth-R set.
    """
    if not is_complete(seed):
        raise ValueError("ball seed must be a complete track")
    if radius < 0 or radius > MAX_RADIUS[seed.surface]:
        raise ValueError(f"radius outside documented bound {MAX_RADIUS[seed.surface]}")
    c0 = canonical_form(seed)
    k0 = canonical_key(c0)
    tracks: Dict[str, TrainTrack] = {k0: c0}
    dist: Dict[str, int] = {k0: 0}
    edges: Set[Tuple[str, str]] = set()
    frontier = [k0]
    for depth in range(1, radius + 1):
        nxt: List[str] = []
        for k in sorted(frontier):
            for nb in neighbors(tracks[k]):
                nc = canonical_form(nb)
                nk = canonical_key(nc)
                if nk not in dist:
                    dist[nk] = depth
                    tracks[nk] = nc
                    nxt.append(nk)
                edges.add((min(k, nk), max(k, nk)))
        frontier = nxt
    for k in sorted(frontier):
        # Final layer: record edges among known vertices only.
        for nb in neighbors(tracks[k]):
            nk = canonical_key(canonical_form(nb))
            if nk in dist:
                edges.add((min(k, nk), max(k, nk)))
    graph = Graph.from_edges(sorted(dist), sorted(edges))
    return ComplexBall(seed.surface, k0, radius, graph, tracks, dist)


def restrict_ball(ball: ComplexBall, radius: int) -> ComplexBall:
    """The sub-ball of smaller radius; identical to building it directly."""
    if radius > ball.radius:
        raise ValueError("cannot enlarge a ball by restriction")
    keep = sorted(k for k, d in ball.distances.items() if d <= radius)
    return ComplexBall(
        ball.surface,
        ball.center,
        radius,
        ball.graph.subgraph(keep),
        {k: ball.tracks[k] for k in keep},
        {k: ball.distances[k] for k in keep},
    )


def export_ball(ball: ComplexBall, fmt: str = "json") -> str:
    """Serialize a ball, each vertex annotated with its Farey edge.

    JSON carries the full structure (keys, depths, slope pairs, edge list);
    DOT keeps the same data as node attributes so standard graphviz tooling
    can render the complex directly.
    """
    keys = sorted(ball.tracks)
    annot = {k: edge_label(track_farey_edge(ball.tracks[k])) for k in keys}
    pairs = sorted(tuple(sorted(e)) for e in ball.graph.label_edges())
    if fmt == "json":
        payload = {
            "surface": ball.surface,
            "center": ball.center,
            "radius": ball.radius,
            "vertex_count": len(keys),
            "edge_count": len(pairs),
            "vertices": [
                {"key": k, "depth": ball.distances[k], "farey_edge": annot[k]}
                for k in keys
            ],
            "edges": [list(e) for e in pairs],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "dot":
        idx = {k: i for i, k in enumerate(keys)}
        lines = ["graph ball {"]
        lines.append('  graph [surface="%s", radius=%d];' % (ball.surface, ball.radius))
        for k in keys:
            lines.append(
                '  n%d [key="%s", depth=%d, farey="%s"];'
                % (idx[k], k, ball.distances[k], annot[k])
            )
        for u, v in pairs:
            lines.append("  n%d -- n%d;" % (idx[u], idx[v]))
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format: {fmt}")


# ---------------------------------------------------------------------------
# Farey edge labels and the projection


def edge_label(pair: Tuple[Slope, Slope]) -> str:
    a, b = slope_pair(pair[0], pair[1])
    return f"{a}|{b}"


def parse_edge_label(label: str) -> Tuple[Slope, Slope]:
    a, b = label.split("|")
    return slope_pair(parse_slope(a), parse_slope(b))


def track_farey_edge(t: TrainTrack) -> Tuple[Slope, Slope]:
    """The Farey edge assigned to a complete marked track.

    The two vertex-cycle slopes span the edge directly when their det is 1;
    det-2 pairs (4-punctured sphere only) resolve to the unique Farey edge
    both of whose endpoints neighbor both cycles.
    """
    a, b = vertex_cycles(t)
    d = det_abs(a, b)
    if d == 1:
        return slope_pair(a, b)
    if d == 2 and t.surface == "s04":
        return resolve_i4_to_edge(a, b)
    raise ValueError(f"vertex cycle pair with det {d} has no Farey edge")


@dataclass(frozen=True)
class FiberMap:
    assignment: Mapping[str, str]
    image: Graph
    _fibers: Dict[str, Tuple[str, ...]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def fiber(self, label: str) -> Tuple[str, ...]:
        if not self._fibers:
            grouped: Dict[str, List[str]] = {}
            for k in sorted(self.assignment):
                grouped.setdefault(self.assignment[k], []).append(k)
            self._fibers.update({lab: tuple(v) for lab, v in grouped.items()})
        return self._fibers.get(label, ())


def project_fibers(ball: ComplexBall) -> FiberMap:
    """Map every ball vertex to its Farey edge; the image graph has one
    vertex per edge hit and an edge wherever some ball edge joins fibers."""
    assignment = {
        k: edge_label(track_farey_edge(t)) for k, t in sorted(ball.tracks.items())
    }
    img_edges = set()
    for u, v in ball.graph.label_edges():
        lu, lv = assignment[u], assignment[v]
        if lu != lv:
            img_edges.add((min(lu, lv), max(lu, lv)))
    labels = sorted(set(assignment.values()))
    return FiberMap(assignment, Graph.from_edges(labels, sorted(img_edges)))


def fiber_interior_labels(
    ball: ComplexBall, fibers: FiberMap, margin: int
) -> Tuple[str, ...]:
    """Labels whose known fiber sits at depth <= radius - margin.

    With margin >= the fiber diameter, any unseen true fiber member would
    lie within diameter of a seen member and hence inside the ball, so the
    known fiber is the whole fiber; its pairwise distances are then all
    certified as well.
    """
    out = []
    for label in fibers.image.vertices:
        members = fibers.fiber(label)
        if members and all(ball.distances[m] <= ball.radius - margin for m in members):
            out.append(label)
    return tuple(out)


def fiber_diameter(ball: ComplexBall, fibers: FiberMap, label: str, margin: int):
    """Certified diameter of one fiber, or UNCERTIFIED near the boundary."""
    members = fibers.fiber(label)
    if not members:
        return UNCERTIFIED
    if any(ball.distances[m] > ball.radius - margin for m in members):
        return UNCERTIFIED
    best = 0
    for i, u in enumerate(members):
        for v in members[i + 1:]:
            d = ball.certified_pair_distance(u, v)
            if d is UNCERTIFIED:
                return UNCERTIFIED
            best = max(best, d)
    return best


def derive_fiber_constant(ball: ComplexBall, fibers: FiberMap) -> Dict:
    """The constant fiber diameter of the projection, derived from interior
    fibers at a self-consistent margin.

    Starts from margin 2 and raises it until margin >= diameter, the
    threshold at which fiber membership itself is certified.
    """
    margin = 2
    while margin <= ball.radius:
        labels = fiber_interior_labels(ball, fibers, margin)
        diams = sorted(
            {fiber_diameter(ball, fibers, lab, margin) for lab in labels}
            - {UNCERTIFIED}
        )
        if len(diams) == 1 and margin >= diams[0]:
            sizes = sorted({len(fibers.fiber(lab)) for lab in labels})
            return {
                "diameter": diams[0],
                "margin": margin,
                "interior_labels": len(labels),
                "fiber_sizes": sizes,
            }
        margin += 1
    raise RuntimeError("no self-consistent fiber diameter inside this ball")


# ---------------------------------------------------------------------------
# Farey-side oracle windows
#
# In the full Farey graph the edge-graph neighbors of x = {a, b} are forced:
# the co-triangle partners {a, b+-a} and {b, a+-b} (always), and for the
# 4-punctured sphere additionally the next-but-one chords {a, b+-2a} and
# {b, a+-2b}.  A window vertex with all its forced neighbors present is
# complete, which yields the certification horizon.


def _slope_add(a: Slope, b: Slope, k: int) -> Slope:
    return make_slope(b.p + k * a.p, b.q + k * a.q)


def true_edge_neighbors(label: str, surface: str) -> Tuple[str, ...]:
    a, b = parse_edge_label(label)
    out = set()
    for u, v in ((a, b), (b, a)):
        for k in (1, -1):
            out.add(edge_label((u, _slope_add(u, v, k))))
            if surface == "s04":
                out.add(edge_label((u, _slope_add(u, v, 2 * k))))
    out.discard(label)
    return tuple(sorted(out))


BASE_EDGE = "0/1|1/0"


@dataclass(frozen=True)
class OracleWindow:
    """Farey-edge graph window (adjacency only for the torus; chords added
    for the sphere) with a certification horizon around the base edge."""

    surface: str
    depth: int
    base: str
    graph: Graph
    depths: Mapping[str, int]
    horizon: int
    _rows: Dict[str, Dict[str, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def certified_distance(self, u: str, v: str):
        du = self.depths.get(u)
        dv = self.depths.get(v)
        if du is None or dv is None:
            return UNCERTIFIED
        if du > dv:
            u, v = v, u
            du = dv
        row = self._rows.get(u)
        if row is None:
            row = _truncated_bfs(self.graph, u, self.horizon - du)
            self._rows[u] = row
        d = row.get(v)
        return UNCERTIFIED if d is None else d


@lru_cache(maxsize=None)
def oracle_window(surface: str, depth: int) -> OracleWindow:
    f = farey_ball(depth)
    labels = {edge_label(slope_pair(x, y)) for x, y in f.edges}
    edges = set()
    complete = set()
    for lab in sorted(labels):
        nbs = true_edge_neighbors(lab, surface)
        present = [nb for nb in nbs if nb in labels]
        if len(present) == len(nbs):
            complete.add(lab)
        for nb in present:
            edges.add((min(lab, nb), max(lab, nb)))
    g = Graph.from_edges(sorted(labels), sorted(edges))
    depths = bfs_distances(g, BASE_EDGE)
    horizon = min(
        (d for lab, d in depths.items() if lab not in complete),
        default=max(depths.values()),
    )
    return OracleWindow(surface, depth, BASE_EDGE, g, depths, horizon)


@lru_cache(maxsize=None)
def line_graph_of_dual_tree(depth: int) -> Graph:
    """Line graph of the dual tree of a Farey window, with each dual-tree
    edge named by the Farey edge its two triangles share."""
    f = farey_ball(depth)
    by_edge: Dict[str, List[frozenset]] = {}
    for tri in triangles(f):
        verts = sorted(tri, key=lambda s: s.sort_key())
        for i in range(3):
            for j in range(i + 1, 3):
                lab = edge_label(slope_pair(verts[i], verts[j]))
                by_edge.setdefault(lab, []).append(frozenset(tri))
    interior = sorted(lab for lab, ts in by_edge.items() if len(ts) == 2)
    tree_edges_at: Dict[frozenset, List[str]] = {}
    for lab in interior:
        for tri in by_edge[lab]:
            tree_edges_at.setdefault(tri, []).append(lab)
    edges = []
    for labs in tree_edges_at.values():
        labs = sorted(labs)
        for i in range(len(labs)):
            for j in range(i + 1, len(labs)):
                edges.append((labs[i], labs[j]))
    return Graph.from_edges(interior, edges)


def verify_line_graph_structure(
    ball: ComplexBall, fibers: FiberMap, margin: int, depth: int
) -> Dict:
    """Interior of the image graph against the dual-tree line-graph oracle.

    Labels agree on both sides, so the induced subgraphs are compared as
    labelled graphs and then by explicit rooted isomorphism.
    """
    interior = fiber_interior_labels(ball, fibers, margin)
    oracle_full = line_graph_of_dual_tree(depth)
    missing = [lab for lab in interior if not oracle_full.has_vertex(lab)]
    inner = fibers.image.subgraph(interior)
    same_edges = not missing and set(inner.label_edges()) == set(
        oracle_full.subgraph(interior).label_edges()
    )
    iso = False
    root = fibers.assignment[ball.center]
    if same_edges and inner.has_vertex(root):
        reachable = sorted(bfs_distances(inner, root))
        comp_inner = inner.subgraph(reachable)
        comp_oracle = oracle_full.subgraph(reachable)
        iso, _ = rooted_isomorphic(comp_inner, root, comp_oracle, root)
    degrees = sorted(fibers.image.degree(lab) for lab in interior)
    return {
        "interior_count": len(interior),
        "edge_sets_equal": same_edges,
        "rooted_isomorphic": iso,
        "interior_degrees": degrees,
    }


# ---------------------------------------------------------------------------
# Quasi-isometry comparison


def qi_report(
    ball: ComplexBall,
    fibers: FiberMap,
    window: OracleWindow,
    mult: int,
    add: int,
) -> Dict:
    """Check d_image <= d_complex <= mult * d_image + add on every certified
    pair of the ball, with image distances from the oracle window."""
    checked = 0
    lower_viol: List[Tuple[str, str, int, int]] = []
    upper_viol: List[Tuple[str, str, int, int]] = []
    skipped_oracle = 0
    max_d = 0
    max_img = 0
    spread = 0
    for u, v, d in ball.certified_pairs():
        lu = fibers.assignment[u]
        lv = fibers.assignment[v]
        if lu == lv:
            di = 0
        else:
            di = window.certified_distance(lu, lv)
            if di is UNCERTIFIED:
                skipped_oracle += 1
                continue
        checked += 1
        max_d = max(max_d, d)
        max_img = max(max_img, di)
        spread = max(spread, abs(d - 3 * di))
        if not di <= d:
            lower_viol.append((u, v, d, di))
        if not d <= mult * di + add:
            upper_viol.append((u, v, d, di))
    return {
        "pairs_checked": checked,
        "skipped_oracle": skipped_oracle,
        "max_complex_distance": max_d,
        "max_image_distance": max_img,
        "multiplicative": mult,
        "additive": add,
        "max_abs_spread_vs_3x_image": spread,
        "lower_violations": lower_viol[:20],
        "upper_violations": upper_viol[:20],
        "violation_count": len(lower_viol) + len(upper_viol),
    }


# ---------------------------------------------------------------------------
# PSL(2, Z) Cayley ball

R_GEN = (1, 1, 0, 1)
L_GEN = (1, 0, 1, 1)
IDENTITY = (1, 0, 0, 1)

Mat = Tuple[int, int, int, int]


def mat_mul(a: Mat, b: Mat) -> Mat:
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def mat_inv(m: Mat) -> Mat:
    a, b, c, d = m
    return (d, -b, -c, a)


def psl2_canon(m: Mat) -> Mat:
    """Fix the +-I ambiguity: first nonzero of (a, b, c, d) made positive."""
    for x in m:
        if x != 0:
            return m if x > 0 else (-m[0], -m[1], -m[2], -m[3])
    raise ValueError("zero matrix")


def mat_label(m: Mat) -> str:
    a, b, c, d = m
    return f"{a},{b};{c},{d}"


def parse_mat(s: str) -> Mat:
    rows = s.split(";")
    if len(rows) != 2:
        raise ValueError(f"bad matrix text {s!r}")
    a, b = (int(x) for x in rows[0].split(","))
    c, d = (int(x) for x in rows[1].split(","))
    return (a, b, c, d)


def relator_values() -> Dict[str, Mat]:
    """The two defining relators evaluated in SL(2, Z); both equal -I, which
    is the identity of PSL(2, Z)."""
    u = mat_mul(L_GEN, mat_inv(R_GEN))
    w = mat_mul(u, L_GEN)
    return {
        "(l.r^-1.l)^2": mat_mul(w, w),
        "(l.r^-1)^3": mat_mul(mat_mul(u, u), u),
    }


def cayley_ball_psl2z(radius: int) -> Tuple[Graph, Dict[str, Mat], Dict[str, int]]:
    """Radius-R ball of the Cayley graph of PSL(2, Z) on generators r, l."""
    gens = [R_GEN, mat_inv(R_GEN), L_GEN, mat_inv(L_GEN)]
    root = psl2_canon(IDENTITY)
    dist: Dict[Mat, int] = {root: 0}
    edges: Set[Tuple[str, str]] = set()
    frontier = [root]
    for depth in range(1, radius + 1):
        nxt = []
        for m in frontier:
            for g in gens:
                n = psl2_canon(mat_mul(m, g))
                if n not in dist:
                    dist[n] = depth
                    nxt.append(n)
                edges.add(tuple(sorted((mat_label(m), mat_label(n)))))
        frontier = nxt
    for m in frontier:
        for g in gens:
            n = psl2_canon(mat_mul(m, g))
            if n in dist:
                edges.add(tuple(sorted((mat_label(m), mat_label(n)))))
    mats = {mat_label(m): m for m in dist}
    graph = Graph.from_edges(sorted(mats), sorted(edges))
    return graph, mats, {mat_label(m): d for m, d in dist.items()}


def verify_cayley_isomorphism(ball: ComplexBall, radius: int):
    """Rooted isomorphism between the complex ball and the Cayley ball."""
    if ball.radius != radius:
        ball = restrict_ball(ball, radius)
    cay, _, _ = cayley_ball_psl2z(radius)
    return rooted_isomorphic(ball.graph, ball.center, cay, mat_label(IDENTITY))


# ---------------------------------------------------------------------------
# T1: the double-split subcomplex of the 4-punctured sphere


def closed_class_key(ball: ComplexBall) -> str:
    """Structural key of the unique two-large-branch class closed under
    double splits."""
    reps: Dict[str, TrainTrack] = {}
    for k in sorted(ball.tracks):
        reps.setdefault(structural_class_key(ball.tracks[k]), ball.tracks[k])
    closed = []
    for sk in sorted(reps):
        t = reps[sk]
        if len(large_branches(t)) != 2:
            continue
        results = double_split(t)
        if results and all(structural_class_key(r) == sk for r in results):
            closed.append(sk)
    if len(closed) != 1:
        raise RuntimeError(f"expected one double-split-closed class, got {closed}")
    return closed[0]


def t1_subgraph(ball: ComplexBall) -> Graph:
    """Subgraph on the closed-class vertices with double-split adjacency."""
    if ball.surface != "s04":
        raise ValueError("T1 lives in the 4-punctured sphere complex only")
    c1 = closed_class_key(ball)
    verts = sorted(k for k, t in ball.tracks.items() if structural_class_key(t) == c1)
    vset = set(verts)
    edges = set()
    for k in verts:
        for r in double_split(ball.tracks[k]):
            rk = canonical_key(canonical_form(r))
            if rk in vset and rk != k:
                edges.add((min(k, rk), max(k, rk)))
    return Graph.from_edges(verts, sorted(edges))


def t1_reach_report(ball: ComplexBall, reach: int = 5) -> Dict:
    """Certified distances from ball vertices to T1.

    A vertex is certified for reach r when its depth is at most radius - r:
    any true path of length <= r from it stays inside the ball, so the
    window distance to T1 is exact whenever it is <= r.
    """
    t1 = t1_subgraph(ball)
    dist: Dict[str, int] = {v: 0 for v in t1.vertices}
    q = deque(sorted(t1.vertices))
    while q:
        u = q.popleft()
        for w in ball.graph.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    certified = [k for k, d in ball.distances.items() if d <= ball.radius - reach]
    over = [k for k in certified if dist.get(k, reach + 1) > reach]
    per_class: Dict[str, List[int]] = {}
    for k in certified:
        per_class.setdefault(structural_class_key(ball.tracks[k]), []).append(
            dist.get(k, reach + 1)
        )
    table = {
        sk: {"min": min(ds), "max": max(ds), "count": len(ds)}
        for sk, ds in sorted(per_class.items())
    }
    return {
        "reach": reach,
        "t1_vertices": len(t1.vertices),
        "certified_vertices": len(certified),
        "violations": over[:10],
        "violation_count": len(over),
        "per_class_distance": table,
    }


def t1_interior_ball(ball: ComplexBall) -> Tuple[Graph, str, int]:
    """The largest certified-complete ball of T1 around the center.

    A T1 vertex is T1-complete when its ball depth is at most radius - 2:
    each T1 edge is two splits, so all its double-split partners then lie
    inside the ball.  The interior radius stops one short of the first
    T1-depth carrying an incomplete vertex.
    """
    t1 = t1_subgraph(ball)
    depths = bfs_distances(t1, ball.center)
    horizon = min(
        (d for v, d in depths.items() if ball.distances[v] > ball.radius - 2),
        default=max(depths.values()),
    )
    radius = max(horizon - 1, 0)
    keep = sorted(v for v, d in depths.items() if d <= radius)
    return t1.subgraph(keep), ball.center, radius


# ---------------------------------------------------------------------------
# Split transition table of the 4-punctured sphere classes

#: Reference transition table of the eight diffeomorphism classes of
#: complete tracks (mirror pairs identified): each complete single split
#: lands in the stated class, with the stated relation between source and
#: destination Farey edges.  The runtime numbering of derived classes is the
#: unique digraph bijection onto this table.
EXPECTED_TRANSITIONS: Dict[int, frozenset] = {
    1: frozenset({(2, ADJACENT)}),
    2: frozenset({(1, SAME)}),
    3: frozenset({(2, SAME)}),
    4: frozenset({(3, ADJACENT)}),
    5: frozenset({(4, ADJACENT), (5, NEXT_BUT_ONE)}),
    6: frozenset({(3, ADJACENT), (6, ADJACENT)}),
    7: frozenset({(6, SAME)}),
    8: frozenset({(7, ADJACENT)}),
}
EXPECTED_AMPHICHIRAL = frozenset({1, 4, 8})


def edge_relation(e1: Tuple[Slope, Slope], e2: Tuple[Slope, Slope]) -> str:
    """Relation of two Farey edges: same, adjacent (shared endpoint, other
    endpoints at det 1), or next-but-one (shared endpoint, det 2)."""
    s1, s2 = set(e1), set(e2)
    if s1 == s2:
        return SAME
    shared = s1 & s2
    if len(shared) == 1:
        (o1,) = s1 - shared
        (o2,) = s2 - shared
        d = det_abs(o1, o2)
        if d == 1:
            return ADJACENT
        if d == 2:
            return NEXT_BUT_ONE
    raise ValueError(f"unrelated Farey edges {e1} and {e2}")


def harvest_class_reps(ball: ComplexBall) -> Dict[str, TrainTrack]:
    """Lex-least marked representative of every structural class in a ball."""
    reps: Dict[str, Tuple[Tuple[int, str], TrainTrack]] = {}
    for k in sorted(ball.tracks):
        t = ball.tracks[k]
        sk = structural_class_key(t)
        tag = (ball.distances[k], k)
        if sk not in reps or tag < reps[sk][0]:
            reps[sk] = (tag, t)
    return {sk: t for sk, (_, t) in sorted(reps.items())}


def class_transitions(rep: TrainTrack) -> frozenset:
    """Set of (destination mirror class, image-edge relation) over all
    complete single splits of the representative."""
    src_edge = track_farey_edge(rep)
    out = set()
    for _, result in splits(rep):
        if not is_complete(result):
            continue
        rel = edge_relation(src_edge, track_farey_edge(result))
        out.add((mirror_class_key(result), rel))
    return frozenset(out)


def derive_class_numbering(reps: Mapping[str, TrainTrack]) -> Dict[str, int]:
    """Unique bijection of the derived mirror classes onto the reference
    table; raises unless exactly one exists."""
    from itertools import permutations

    by_mirror: Dict[str, TrainTrack] = {}
    for sk in sorted(reps):
        by_mirror.setdefault(mirror_class_key(reps[sk]), reps[sk])
    keys = sorted(by_mirror)
    if len(keys) != len(EXPECTED_TRANSITIONS):
        raise RuntimeError(
            f"expected {len(EXPECTED_TRANSITIONS)} mirror classes, got {len(keys)}"
        )
    trans = {mk: class_transitions(by_mirror[mk]) for mk in keys}
    amphi = {mk for mk, t in by_mirror.items() if is_amphichiral(t)}
    solutions = []
    numbers = sorted(EXPECTED_TRANSITIONS)
    for perm in permutations(numbers):
        assign = dict(zip(keys, perm))
        if {assign[mk] for mk in amphi} != set(EXPECTED_AMPHICHIRAL):
            continue
        ok = True
        for mk in keys:
            got = frozenset((assign[dst], rel) for dst, rel in trans[mk])
            if got != EXPECTED_TRANSITIONS[assign[mk]]:
                ok = False
                break
        if ok:
            solutions.append(assign)
    if len(solutions) != 1:
        raise RuntimeError(f"class numbering not unique: {len(solutions)} solutions")
    return solutions[0]


def table_coherence_report(ball: ComplexBall) -> Dict:
    """Both directions of table coherence over a ball: every complete single
    split realizes a table row for its source class, and every table row is
    witnessed at least once."""
    reps = harvest_class_reps(ball)
    numbering = derive_class_numbering(reps)
    witnessed: Dict[Tuple[int, int, str], int] = {}
    bad: List[Tuple[str, str]] = []
    for k in sorted(ball.tracks):
        t = ball.tracks[k]
        src = numbering[mirror_class_key(t)]
        src_edge = track_farey_edge(t)
        for _, result in splits(t):
            if not is_complete(result):
                continue
            dst = numbering[mirror_class_key(result)]
            rel = edge_relation(src_edge, track_farey_edge(result))
            if (dst, rel) not in EXPECTED_TRANSITIONS[src]:
                bad.append((k, f"{src}->{dst}:{rel}"))
            witnessed[(src, dst, rel)] = witnessed.get((src, dst, rel), 0) + 1
    expected_rows = {
        (src, dst, rel)
        for src, pairs in EXPECTED_TRANSITIONS.items()
        for dst, rel in pairs
    }
    missing = sorted(expected_rows - set(witnessed))
    return {
        "classes": dict(sorted(numbering.items())),
        "rows_witnessed": {
            f"{s}->{d}:{r}": n for (s, d, r), n in sorted(witnessed.items())
        },
        "unexpected": bad[:10],
        "unexpected_count": len(bad),
        "missing_rows": [f"{s}->{d}:{r}" for s, d, r in missing],
    }


def split_totality_report(ball: ComplexBall) -> Dict:
    """Every track in the ball must admit a complete split at every large
    branch."""
    failures = []
    tracks_checked = 0
    branches_checked = 0
    for k in sorted(ball.tracks):
        t = ball.tracks[k]
        tracks_checked += 1
        for b in large_branches(t):
            branches_checked += 1
            ok = any(is_complete(split(t, SplitMove(b, ch))) for ch in (RIGHT, LEFT))
            if not ok:
                failures.append((k, b))
    return {
        "tracks": tracks_checked,
        "large_branches": branches_checked,
        "failures": failures[:10],
        "failure_count": len(failures),
    }
