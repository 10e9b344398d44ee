"""Reduced slopes, the Farey graph, its dual tree, and slope-pair resolution.

Slopes p/q are kept in lowest terms with q > 0, except the point at infinity
which is stored as 1/0.  Two slopes span a Farey edge exactly when
|p_a q_b - p_b q_a| = 1; geometric intersection numbers are that determinant
on the once-punctured torus and twice it on the 4-punctured sphere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Set, Tuple

from . import check_surface
from .graphs import Graph

#: largest supported farey_ball depth; generation count grows roughly 3^depth
MAX_DEPTH = 14


@dataclass(frozen=True, order=False)
class Slope:
    """A reduced slope p/q in Q together with 1/0 for infinity."""

    p: int
    q: int

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def sort_key(self) -> Tuple:
        if self.q == 0:
            return (1, 0, 1, 0)
        f = Fraction(self.p, self.q)
        return (0, f.numerator, f.denominator, 0)


def make_slope(p: int, q: int) -> Slope:
    """Canonical Slope: gcd 1, q > 0, infinity as 1/0.  (0, 0) is rejected."""
    if p == 0 and q == 0:
        raise ValueError("slope 0/0 is undefined")
    g = gcd(abs(p), abs(q))
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return Slope(p, q)


def parse_slope(text: str) -> Slope:
    num, _, den = text.partition("/")
    if not den:
        raise ValueError(f"slope text {text!r} must look like 'p/q'")
    return make_slope(int(num), int(den))


def det_abs(a: Slope, b: Slope) -> int:
    return abs(a.p * b.q - b.p * a.q)


def intersection_number(surface: str, a: Slope, b: Slope) -> int:
    """Geometric intersection of the simple closed curves named by two slopes."""
    check_surface(surface)
    d = det_abs(a, b)
    return d if surface == "s11" else 2 * d


def slope_pair(a: Slope, b: Slope) -> Tuple[Slope, Slope]:
    """Deterministic unordered pair representation."""
    return tuple(sorted((a, b), key=Slope.sort_key))  # type: ignore[return-value]


def completions(a: Slope, b: Slope) -> Tuple[Slope, Slope]:
    """The two slopes completing Farey edge {a, b} to a triangle."""
    if det_abs(a, b) != 1:
        raise ValueError(f"{a} and {b} do not span a Farey edge")
    return (make_slope(a.p + b.p, a.q + b.q), make_slope(a.p - b.p, a.q - b.q))


@dataclass(frozen=True)
class FareyGraph:
    """A depth-bounded window of the Farey graph grown from the edge {0/1, 1/0}."""

    depth: int
    slopes: Tuple[Slope, ...]
    edges: FrozenSet[Tuple[Slope, Slope]]

    def adjacency(self) -> Dict[Slope, Set[Slope]]:
        adj: Dict[Slope, Set[Slope]] = {s: set() for s in self.slopes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def has_edge(self, a: Slope, b: Slope) -> bool:
        return slope_pair(a, b) in self.edges

    def to_graph(self) -> Graph:
        return Graph.from_edges(
            (str(s) for s in self.slopes),
            ((str(a), str(b)) for a, b in self.edges),
        )


def farey_ball(depth: int) -> FareyGraph:
    """Grow the Farey window: at each generation every present edge acquires
    both of its triangle completions.  Depth 0 is the base edge alone."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > MAX_DEPTH:
        raise ValueError(f"depth {depth} exceeds documented bound {MAX_DEPTH}")
    zero = make_slope(0, 1)
    inf = make_slope(1, 0)
    edges: Set[Tuple[Slope, Slope]] = {slope_pair(zero, inf)}
    fresh = set(edges)
    for _ in range(depth):
        new_edges: Set[Tuple[Slope, Slope]] = set()
        for a, b in fresh:
            for c in completions(a, b):
                for other in (a, b):
                    e = slope_pair(c, other)
                    if e not in edges:
                        new_edges.add(e)
        edges |= new_edges
        # Every edge is fully completed the generation after it appears, so
        # carrying only the frontier forward yields the same window.
        fresh = new_edges
    slopes = sorted({s for e in edges for s in e}, key=Slope.sort_key)
    return FareyGraph(depth, tuple(slopes), frozenset(edges))


def triangles(fg: FareyGraph) -> List[Tuple[Slope, Slope, Slope]]:
    """All 3-cliques of the window, each sorted, listed deterministically."""
    adj = fg.adjacency()
    seen: Set[FrozenSet[Slope]] = set()
    out = []
    for a, b in fg.edges:
        for c in adj[a] & adj[b]:
            t = frozenset((a, b, c))
            if t not in seen:
                seen.add(t)
                out.append(tuple(sorted(t, key=Slope.sort_key)))
    out.sort(key=lambda t: tuple(s.sort_key() for s in t))
    return out  # type: ignore[return-value]


def triangle_label(t: Tuple[Slope, Slope, Slope]) -> str:
    return "|".join(str(s) for s in t)


def dual_tree(fg: FareyGraph) -> Graph:
    """Dual of the triangulated window: a vertex per Farey triangle, an edge
    when two triangles share a Farey edge.  On the full tessellation this is
    the trivalent tree; a window gives a finite subtree."""
    tris = triangles(fg)
    by_edge: Dict[Tuple[Slope, Slope], List[str]] = {}
    for t in tris:
        lbl = triangle_label(t)
        a, b, c = t
        for e in (slope_pair(a, b), slope_pair(a, c), slope_pair(b, c)):
            by_edge.setdefault(e, []).append(lbl)
    edges = []
    for e, labels in by_edge.items():
        if len(labels) == 2:
            edges.append((labels[0], labels[1]))
        elif len(labels) > 2:
            raise ValueError(f"Farey edge {e} lies on {len(labels)} triangles")
    return Graph.from_edges((triangle_label(t) for t in tris), edges)


def resolve_i4_to_edge(a: Slope, b: Slope) -> Tuple[Slope, Slope]:
    """For a det-2 pair, the unique Farey edge both of whose endpoints are
    Farey-adjacent to both inputs.  Found by bounded search over slope height."""
    if det_abs(a, b) != 2:
        raise ValueError(f"expected det 2, got {det_abs(a, b)} for ({a}, {b})")
    height = max(abs(a.p), abs(a.q), abs(b.p), abs(b.q)) + 2
    candidates = []
    for q in range(0, height + 1):
        for p in range(-height, height + 1):
            if gcd(abs(p), abs(q)) != 1:
                continue
            try:
                s = make_slope(p, q)
            except ValueError:
                continue
            if det_abs(s, a) == 1 and det_abs(s, b) == 1:
                if s not in candidates:
                    candidates.append(s)
    pairs = [
        slope_pair(x, y)
        for i, x in enumerate(candidates)
        for y in candidates[i + 1:]
        if det_abs(x, y) == 1
    ]
    if len(pairs) != 1:
        raise ValueError(f"resolution of ({a}, {b}) is not unique: {pairs}")
    return pairs[0]
