"""Finite simple graphs with deterministic exports and window-certified distances.

Vertices are strings.  A graph built from a bounded window of an infinite
complex can only certify distances for pairs whose entire geodesic provably
stays inside the window; everything else is reported as UNCERTIFIED, a
first-class sentinel that callers must handle explicitly.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple


class _Uncertified:
    """Sentinel for distances a bounded window cannot certify."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNCERTIFIED"

    def __bool__(self) -> bool:
        return False


UNCERTIFIED = _Uncertified()


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph over string labels."""

    vertices: Tuple[str, ...]
    adj: Tuple[Tuple[int, ...], ...]
    _index: Dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    @staticmethod
    def from_edges(vertices: Iterable[str], edges: Iterable[Tuple[str, str]]) -> "Graph":
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        nbr: List[set] = [set() for _ in labels]
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at {a!r} not admitted")
            ia, ib = index[a], index[b]
            nbr[ia].add(ib)
            nbr[ib].add(ia)
        adj = tuple(tuple(sorted(s)) for s in nbr)
        g = Graph(tuple(labels), adj)
        object.__setattr__(g, "_index", index)
        return g

    def __post_init__(self):
        if not self._index:
            object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def index(self, label: str) -> int:
        return self._index[label]

    def has_vertex(self, label: str) -> bool:
        return label in self._index

    def neighbors(self, label: str) -> Tuple[str, ...]:
        return tuple(self.vertices[j] for j in self.adj[self._index[label]])

    def degree(self, label: str) -> int:
        return len(self.adj[self._index[label]])

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edge_list(self) -> List[Tuple[int, int]]:
        out = []
        for i, nbrs in enumerate(self.adj):
            for j in nbrs:
                if i < j:
                    out.append((i, j))
        return out

    def label_edges(self) -> List[Tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edge_list()]

    def subgraph(self, keep: Iterable[str]) -> "Graph":
        kept = set(keep)
        edges = [(a, b) for a, b in self.label_edges() if a in kept and b in kept]
        return Graph.from_edges(kept, edges)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(bfs_distances(self, self.vertices[0])) == len(self.vertices)


def bfs_distances(g: Graph, root: str) -> Dict[str, int]:
    """Distances from root to every reachable vertex; unreachable ones are absent."""
    ri = g.index(root)
    dist = {ri: 0}
    q = deque([ri])
    while q:
        i = q.popleft()
        d = dist[i] + 1
        for j in g.adj[i]:
            if j not in dist:
                dist[j] = d
                q.append(j)
    return {g.vertices[i]: d for i, d in dist.items()}


def _bfs_row(g: Graph, src: int) -> List[Optional[int]]:
    dist: List[Optional[int]] = [None] * len(g.vertices)
    dist[src] = 0
    q = deque([src])
    while q:
        i = q.popleft()
        d = dist[i] + 1  # type: ignore[operator]
        for j in g.adj[i]:
            if dist[j] is None:
                dist[j] = d
                q.append(j)
    return dist


def certified_distance(ball_graph: Graph, center: str, radius: int, u: str, v: str):
    """Distance between u and v inside a radius-`radius` ball around `center`.

    The window value equals the true distance in the ambient complex whenever
    min(d(center,u), d(center,v)) + d(u,v) <= radius: an ambient geodesic
    from the shallower endpoint stays within the ball, which holds every
    vertex up to depth `radius`.  Otherwise returns UNCERTIFIED.
    """
    from_center = _bfs_row(ball_graph, ball_graph.index(center))
    du = from_center[ball_graph.index(u)]
    dv = from_center[ball_graph.index(v)]
    if du is None or dv is None:
        return UNCERTIFIED
    row = _bfs_row(ball_graph, ball_graph.index(u))
    d = row[ball_graph.index(v)]
    if d is None:
        return UNCERTIFIED
    if min(du, dv) + d <= radius:
        return d
    return UNCERTIFIED


def _refine_colors(g: Graph, seed: List) -> List[int]:
    """Iterated neighbourhood refinement starting from the seed labelling.

    Color ids are ranks of sorted signatures, so two graphs refined from
    comparable seeds get comparable ids regardless of vertex order.
    """
    palette = {s: i for i, s in enumerate(sorted(set(seed)))}
    colors = [palette[s] for s in seed]
    while True:
        sigs = [
            (colors[i], tuple(sorted(colors[j] for j in g.adj[i])))
            for i in range(len(g.vertices))
        ]
        palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def rooted_isomorphic(g1: Graph, r1: str, g2: Graph, r2: str):
    """Backtracking isomorphism test sending r1 to r2.

    Returns (True, mapping) with a verified witness, or (False, None).
    Both graphs must be connected.
    """
    if not (g1.is_connected() and g2.is_connected()):
        raise ValueError("rooted_isomorphic expects connected graphs")
    n = len(g1.vertices)
    if n != len(g2.vertices) or g1.edge_count != g2.edge_count:
        return False, None

    d1 = bfs_distances(g1, r1)
    d2 = bfs_distances(g2, r2)
    if len(d1) != n or len(d2) != n:
        return False, None
    seed1 = [(d1[v], len(g1.adj[i])) for i, v in enumerate(g1.vertices)]
    seed2 = [(d2[v], len(g2.adj[i])) for i, v in enumerate(g2.vertices)]
    c1 = _refine_colors(g1, seed1)
    c2 = _refine_colors(g2, seed2)
    if sorted(c1) != sorted(c2):
        return False, None

    # Deterministic assignment order: BFS from the root, finer color first.
    i1 = g1.index(r1)
    i2 = g2.index(r2)
    if c1[i1] != c2[i2]:
        return False, None
    order = sorted(range(n), key=lambda i: (d1[g1.vertices[i]], c1[i], g1.vertices[i]))
    by_color: Dict[int, List[int]] = {}
    for j in range(n):
        by_color.setdefault(c2[j], []).append(j)

    mapping: List[Optional[int]] = [None] * n
    used = [False] * n
    adj2 = [set(a) for a in g2.adj]

    def feasible(u: int, w: int) -> bool:
        if c1[u] != c2[w]:
            return False
        for x in g1.adj[u]:
            mx = mapping[x]
            if mx is not None and mx not in adj2[w]:
                return False
        mapped_nbrs = sum(1 for x in g1.adj[u] if mapping[x] is not None)
        mapped_back = sum(1 for y in adj2[w] if used[y])
        return mapped_nbrs == mapped_back

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        if u == i1:
            candidates = [i2]
        else:
            anchor = next((mapping[x] for x in g1.adj[u] if mapping[x] is not None), None)
            if anchor is None:
                candidates = [w for w in by_color.get(c1[u], []) if not used[w]]
            else:
                candidates = [w for w in adj2[anchor] if not used[w]]
        for w in candidates:
            if used[w] or not feasible(u, w):
                continue
            mapping[u] = w
            used[w] = True
            if backtrack(pos + 1):
                return True
            mapping[u] = None
            used[w] = False
        return False

    if not backtrack(0):
        return False, None

    witness = {g1.vertices[u]: g2.vertices[mapping[u]] for u in range(n)}  # type: ignore[index]
    # Re-verify the witness edge by edge before reporting success.
    if witness[r1] != r2:
        return False, None
    edge_set2 = {frozenset(e) for e in g2.label_edges()}
    for a, b in g1.label_edges():
        if frozenset((witness[a], witness[b])) not in edge_set2:
            return False, None
    return True, witness


def line_graph(g: Graph) -> Graph:
    """Vertices are edges of g (labelled 'a--b'), adjacent when sharing an endpoint."""
    edge_labels = {}
    for a, b in g.label_edges():
        lo, hi = sorted((a, b))
        edge_labels[(lo, hi)] = f"{lo}--{hi}"
    edges = []
    for v in g.vertices:
        incident = sorted(edge_labels[tuple(sorted((v, w)))] for w in g.neighbors(v))
        for i in range(len(incident)):
            for j in range(i + 1, len(incident)):
                edges.append((incident[i], incident[j]))
    return Graph.from_edges(edge_labels.values(), edges)


def export_graph(g: Graph, fmt: str, annotations: Optional[Dict[str, str]] = None) -> str:
    """Deterministic DOT or JSON serialization; identical input, identical bytes."""
    if fmt == "dot":
        lines = ["graph G {"]
        for v in g.vertices:
            if annotations and v in annotations:
                lines.append(f'  "{v}" [label="{annotations[v]}"];')
            else:
                lines.append(f'  "{v}";')
        for i, j in g.edge_list():
            lines.append(f'  "{g.vertices[i]}" -- "{g.vertices[j]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc: Dict = {
            "vertices": list(g.vertices),
            "edges": [list(e) for e in g.edge_list()],
        }
        if annotations:
            doc["annotations"] = {k: annotations[k] for k in sorted(annotations)}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")
