"""Generic train tracks as ribbon graphs with switch slot roles.

A track on a surface with n_s trivalent switches has half-branches
0..3*n_s-1; half-branch h sits at switch h // 3 in slot h % 3, where slot 0
is the large side (L) and slots 1, 2 are the small side (S1, S2), with S1
preceding S2 counterclockwise from L.  A fixed-point-free involution pairs
half-branches into branches; loops are allowed.

Complementary regions are boundary walks of the ribbon structure.  A walk
picks up a cusp exactly when it turns through the corner between the two
small slots of a switch; corners between L and a small slot are smooth.

Markings attach to each branch a Z^2 vector (plus, on the 4-punctured
sphere, a sheet bit for the torus double cover) describing the holonomy of
the branch in the orbifold cover; vertex cycle slopes are read off from
these by the tracer in `measures`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import check_surface

SLOT_L, SLOT_S1, SLOT_S2 = 0, 1, 2

#: Gamma = Z^2 semidirect {+-1}; elements (vx, vy, eps) act as x -> eps*x + v.
Hol = Tuple[int, int, int]

HOL_ID: Hol = (0, 0, 1)


def hol_compose(a: Hol, b: Hol) -> Hol:
    """a after b: (va, ea) o (vb, eb) = (va + ea*vb, ea*eb)."""
    return (a[0] + a[2] * b[0], a[1] + a[2] * b[1], a[2] * b[2])


def hol_inverse(a: Hol) -> Hol:
    return (-a[2] * a[0], -a[2] * a[1], a[2])


def switch_of(h: int) -> int:
    return h // 3


def slot_of(h: int) -> int:
    return h % 3


def rotate_ccw(h: int) -> int:
    """Next slot counterclockwise at the same switch: L -> S1 -> S2 -> L."""
    return h - h % 3 + (h + 1) % 3


@dataclass(frozen=True)
class TrainTrack:
    """Immutable generic train track, optionally carrying a marking.

    `marking[b]` is the Z^2 vector of branch b traversed from its smaller
    half-branch id to its larger; `parity[b]` is the double-cover sheet bit
    (4-punctured sphere only; omitted entirely on the once-punctured torus).
    """

    surface: str
    pairing: Tuple[int, ...]
    marking: Optional[Tuple[Tuple[int, int], ...]] = None
    parity: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        check_surface(self.surface)
        n = len(self.pairing)
        if n == 0 or n % 3 != 0:
            raise ValueError("pairing length must be a positive multiple of 3")
        for h, k in enumerate(self.pairing):
            if not 0 <= k < n:
                raise ValueError(f"half-branch {h} paired out of range: {k}")
            if k == h:
                raise ValueError(f"half-branch {h} paired with itself")
            if self.pairing[k] != h:
                raise ValueError("pairing is not an involution")
        if not _connected(self.pairing):
            raise ValueError("track must be connected as a 1-complex")
        nb = n // 2
        if self.marking is not None:
            if len(self.marking) != nb:
                raise ValueError("marking must assign a vector to every branch")
            for v in self.marking:
                if len(v) != 2 or not all(isinstance(x, int) for x in v):
                    raise ValueError(f"bad marking vector {v!r}")
            if self.surface == "s04":
                if self.parity is None or len(self.parity) != nb:
                    raise ValueError("s04 markings require a parity bit per branch")
                if any(b not in (0, 1) for b in self.parity):
                    raise ValueError("parity bits must be 0 or 1")
            elif self.parity is not None:
                raise ValueError("parity only applies to s04 markings")
        elif self.parity is not None:
            raise ValueError("parity without marking")

    @property
    def switch_count(self) -> int:
        return len(self.pairing) // 3

    @property
    def branch_count(self) -> int:
        return len(self.pairing) // 2

    def branches(self) -> Tuple[Tuple[int, int], ...]:
        return _branches_of(self.pairing)

    def branch_index(self) -> Dict[int, int]:
        """Half-branch id -> branch index."""
        out: Dict[int, int] = {}
        for i, (a, b) in enumerate(self.branches()):
            out[a] = i
            out[b] = i
        return out

    def branch_hol(self, b: int) -> Hol:
        """Holonomy of branch b in its stored (min -> max) direction."""
        if self.marking is None:
            raise ValueError("track carries no marking")
        x, y = self.marking[b]
        e = 1
        if self.parity is not None and self.parity[b]:
            e = -1
        return (x, y, e)

    def is_marked(self) -> bool:
        return self.marking is not None

    def unmarked(self) -> "TrainTrack":
        return TrainTrack(self.surface, self.pairing)


@lru_cache(maxsize=None)
def _branches_of(pairing: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    return tuple((h, k) for h, k in enumerate(pairing) if h < k)


def _connected(pairing: Sequence[int]) -> bool:
    n_s = len(pairing) // 3
    parent = list(range(n_s))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h, k in enumerate(pairing):
        a, b = find(h // 3), find(k // 3)
        if a != b:
            parent[a] = b
    return len({find(s) for s in range(n_s)}) == 1


@dataclass(frozen=True)
class RegionProfile:
    """Boundary walks of the complementary regions plus the closed surface."""

    walks: Tuple[Tuple[int, ...], ...]
    cusps: Tuple[int, ...]
    genus: int
    punctures: int

    @property
    def region_count(self) -> int:
        return len(self.walks)

    def cusp_signature(self) -> Tuple[int, ...]:
        return tuple(sorted(self.cusps))


def boundary_regions(t: TrainTrack) -> RegionProfile:
    """Trace all boundary walks; a cusp is counted exactly when the walk
    turns through the S1-S2 corner of a switch (arrival slot S1)."""
    pairing = t.pairing
    n = len(pairing)
    seen = [False] * n
    walks: List[Tuple[int, ...]] = []
    cusps: List[int] = []
    for start in range(n):
        if seen[start]:
            continue
        walk: List[int] = []
        c = 0
        h = start
        while not seen[h]:
            seen[h] = True
            walk.append(h)
            arrive = pairing[h]
            if arrive % 3 == SLOT_S1:
                c += 1
            h = rotate_ccw(arrive)
        walks.append(tuple(walk))
        cusps.append(c)
    chi = t.switch_count - t.branch_count + len(walks)
    if chi % 2 != 0:
        raise ValueError("odd Euler characteristic from an orientable ribbon structure")
    genus = (2 - chi) // 2
    return RegionProfile(tuple(walks), tuple(cusps), genus, len(walks))


_COMPLETE_TARGETS = {
    # surface: (switches, cusp signature, genus)
    "s11": (2, (2,), 1),
    "s04": (4, (1, 1, 1, 1), 0),
}


def is_complete(t: TrainTrack) -> bool:
    """Complete = the complementary regions are the surface's once-punctured
    polygons (bigon for s11, four monogons for s04) and the track is recurrent."""
    if t.switch_count != _COMPLETE_TARGETS[t.surface][0]:
        return False
    if _profile_cached(t.pairing, t.surface) is None:
        return False
    from .measures import is_recurrent  # deferred: measures imports tracks

    return is_recurrent(t)


@lru_cache(maxsize=None)
def _profile_cached(pairing: Tuple[int, ...], surface: str):
    t = TrainTrack(surface, pairing)
    profile = boundary_regions(t)
    _, signature, genus = _COMPLETE_TARGETS[surface]
    if profile.cusp_signature() != signature or profile.genus != genus:
        return None
    return profile


def mirror(t: TrainTrack) -> TrainTrack:
    """Reflect the ribbon structure: swap S1 and S2 at every switch and apply
    the orientation-reversing involution (x, y) -> (x, -y) to marking vectors."""

    def m(h: int) -> int:
        j = h % 3
        if j == SLOT_L:
            return h
        return h + 1 if j == SLOT_S1 else h - 1

    n = len(t.pairing)
    newp = [0] * n
    for h, k in enumerate(t.pairing):
        newp[m(h)] = m(k)
    if t.marking is None:
        return TrainTrack(t.surface, tuple(newp))
    new_hols: Dict[Tuple[int, int], Hol] = {}
    for b, (h1, h2) in enumerate(t.branches()):
        x, y, e = t.branch_hol(b)
        hol: Hol = (x, -y, e)
        n1, n2 = m(h1), m(h2)
        if n1 > n2:
            n1, n2 = n2, n1
            hol = hol_inverse(hol)
        new_hols[(n1, n2)] = hol
    return _with_hols(t.surface, tuple(newp), new_hols)


def _with_hols(surface: str, pairing: Tuple[int, ...], hols: Dict[Tuple[int, int], Hol]) -> TrainTrack:
    branches = _branches_of(pairing)
    marking = []
    parity = []
    for pair in branches:
        x, y, e = hols[pair]
        marking.append((x, y))
        parity.append(0 if e == 1 else 1)
    if surface == "s04":
        return TrainTrack(surface, pairing, tuple(marking), tuple(parity))
    if any(parity):
        raise ValueError("sheet-swapping holonomy is impossible on s11")
    return TrainTrack(surface, pairing, tuple(marking))


def relabel(t: TrainTrack, perm: Sequence[int]) -> TrainTrack:
    """Apply a switch permutation (slot roles ride along unchanged)."""

    def P(h: int) -> int:
        return 3 * perm[h // 3] + h % 3

    n = len(t.pairing)
    newp = [0] * n
    for h, k in enumerate(t.pairing):
        newp[P(h)] = P(k)
    if t.marking is None:
        return TrainTrack(t.surface, tuple(newp))
    new_hols: Dict[Tuple[int, int], Hol] = {}
    for b, (h1, h2) in enumerate(t.branches()):
        hol = t.branch_hol(b)
        n1, n2 = P(h1), P(h2)
        if n1 > n2:
            n1, n2 = n2, n1
            hol = hol_inverse(hol)
        new_hols[(n1, n2)] = hol
    return _with_hols(t.surface, tuple(newp), new_hols)


@lru_cache(maxsize=None)
def _structure_canon(pairing: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[Tuple[int, ...], ...]]:
    """Lex-least relabeling of the pairing and every permutation achieving it."""
    n_s = len(pairing) // 3
    best: Optional[Tuple[int, ...]] = None
    argmins: List[Tuple[int, ...]] = []
    for perm in permutations(range(n_s)):
        newp = [0] * len(pairing)
        for h, k in enumerate(pairing):
            newp[3 * perm[h // 3] + h % 3] = 3 * perm[k // 3] + k % 3
        cand = tuple(newp)
        if best is None or cand < best:
            best = cand
            argmins = [perm]
        elif cand == best:
            argmins.append(perm)
    return best, tuple(argmins)  # type: ignore[return-value]


@lru_cache(maxsize=None)
def _spanning_tree(pairing: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    """Deterministic spanning tree over branches (smallest branch ids first)."""
    branches = _branches_of(pairing)
    n_s = len(pairing) // 3
    visited = {0}
    tree: List[Tuple[int, int]] = []
    while len(visited) < n_s:
        progress = False
        for (h1, h2) in branches:
            s1, s2 = h1 // 3, h2 // 3
            if (s1 in visited) != (s2 in visited):
                tree.append((h1, h2))
                visited.add(s1 if s2 in visited else s2)
                progress = True
        if not progress:
            raise ValueError("disconnected track in spanning tree construction")
    return tuple(tree)


def _gauge_reduce(t: TrainTrack) -> Dict[Tuple[int, int], Hol]:
    """Gauge the marking so every spanning-tree branch has identity holonomy."""
    tree = _spanning_tree(t.pairing)
    tree_set = set(tree)
    hols = {pair: t.branch_hol(b) for b, pair in enumerate(t.branches())}
    pot: Dict[int, Hol] = {0: HOL_ID}
    remaining = [pair for pair in tree]
    while remaining:
        rest = []
        for (h1, h2) in remaining:
            s1, s2 = h1 // 3, h2 // 3
            g = hols[(h1, h2)]
            if s1 in pot and s2 not in pot:
                # c(head) = c(tail) o g^{-1}
                pot[s2] = hol_compose(pot[s1], hol_inverse(g))
            elif s2 in pot and s1 not in pot:
                pot[s1] = hol_compose(pot[s2], g)
            elif s1 not in pot and s2 not in pot:
                rest.append((h1, h2))
        remaining = rest
    out: Dict[Tuple[int, int], Hol] = {}
    for pair, g in hols.items():
        if pair in tree_set:
            out[pair] = HOL_ID
            continue
        s1, s2 = pair[0] // 3, pair[1] // 3
        out[pair] = hol_compose(hol_compose(pot[s2], g), hol_inverse(pot[s1]))
    return out


def _marking_variants(surface: str, pairing: Tuple[int, ...], reduced: Dict[Tuple[int, int], Hol]):
    """All residual-gauge normal forms of a tree-reduced marking.

    Residual gauge: a global sign, and (s04) a uniform Z^2 shift of every
    sheet-swapping branch vector, realized by deck transformations of the
    double cover that act trivially on every slope.
    """
    branches = _branches_of(pairing)
    order = [pair for pair in branches]
    for s0 in (1, -1):
        vals = []
        for pair in order:
            x, y, e = reduced[pair]
            vals.append((s0 * x, s0 * y, e))
        if surface == "s04":
            shift = next(((x, y) for x, y, e in vals if e == -1), None)
            if shift is not None:
                sx, sy = shift
                vals = [
                    (x - sx, y - sy, e) if e == -1 else (x, y, e)
                    for x, y, e in vals
                ]
        yield tuple(vals)


@lru_cache(maxsize=300_000)
def canonical_form(t: TrainTrack) -> TrainTrack:
    """The canonical presentation: lex-least structure, gauge-normal marking."""
    best_struct, argmins = _structure_canon(t.pairing)
    if t.marking is None:
        return TrainTrack(t.surface, best_struct)
    best_vals = None
    for perm in argmins:
        rt = relabel(t, perm)
        reduced = _gauge_reduce(rt)
        for vals in _marking_variants(t.surface, best_struct, reduced):
            if best_vals is None or vals < best_vals:
                best_vals = vals
    hols = {pair: v for pair, v in zip(_branches_of(best_struct), best_vals)}
    return _with_hols(t.surface, best_struct, hols)


@lru_cache(maxsize=300_000)
def canonical_key(t: TrainTrack, with_marking: bool = True) -> str:
    """Stable identity of the track up to relabeling and marking gauge."""
    if t.marking is None or not with_marking:
        best, _ = _structure_canon(t.pairing)
        return f"{t.surface}|{','.join(map(str, best))}"
    c = canonical_form(t)
    parts = [c.surface, ",".join(map(str, c.pairing))]
    hol_txt = []
    for b in range(c.branch_count):
        x, y, e = c.branch_hol(b)
        hol_txt.append(f"{x}.{y}.{e}")
    parts.append(";".join(hol_txt))
    return "|".join(parts)


def structural_class_key(t: TrainTrack) -> str:
    return canonical_key(t, with_marking=False)


def mirror_class_key(t: TrainTrack) -> str:
    """Key of the diffeo class up to mirror (least of the two structural keys)."""
    return min(structural_class_key(t), structural_class_key(mirror(t)))


def is_amphichiral(t: TrainTrack) -> bool:
    return structural_class_key(t) == structural_class_key(mirror(t))


def _involutions(elems: List[int]) -> Iterator[List[Tuple[int, int]]]:
    if not elems:
        yield []
        return
    a = elems[0]
    for i in range(1, len(elems)):
        b = elems[i]
        rest = elems[1:i] + elems[i + 1:]
        for sub in _involutions(rest):
            yield [(a, b)] + sub


def _complete_filter(surface: str, chunk: List[Tuple[Tuple[int, int], ...]]) -> List[Tuple[int, ...]]:
    n = 6 if surface == "s11" else 12
    out = []
    for pairs in chunk:
        p = [0] * n
        for a, b in pairs:
            p[a] = b
            p[b] = a
        pairing = tuple(p)
        if not _connected(pairing):
            continue
        if _profile_cached(pairing, surface) is None:
            continue
        t = TrainTrack(surface, pairing)
        from .measures import is_recurrent

        if is_recurrent(t):
            out.append(pairing)
    return out


def enumerate_complete(surface: str, up_to_mirror: bool = False, threads: Optional[int] = None) -> Tuple[TrainTrack, ...]:
    """Exhaustively enumerate complete-track diffeo classes on the surface.

    Every fixed-point-free pairing of the half-branches is generated, filtered
    by region profile and recurrence, and deduplicated by structural key.
    The result is independent of thread count.
    """
    check_surface(surface)
    n = 6 if surface == "s11" else 12
    all_pairings = [tuple(pairs) for pairs in _involutions(list(range(n)))]
    if threads is None:
        threads = _env_threads()
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        chunks = [all_pairings[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(lambda c: _complete_filter(surface, list(c)), chunks)
        survivors = [p for chunk in results for p in chunk]
    else:
        survivors = _complete_filter(surface, all_pairings)

    reps: Dict[str, TrainTrack] = {}
    for pairing in survivors:
        t = TrainTrack(surface, pairing)
        key = structural_class_key(t)
        if key not in reps:
            reps[key] = canonical_form(t)
    if up_to_mirror:
        # The lex-least chirality of each pair is itself complete, so its
        # structural key is always present among the representatives.
        reps = {mk: reps[mk] for mk in {mirror_class_key(t) for t in reps.values()}}
    return tuple(reps[k] for k in sorted(reps))


def _env_threads() -> int:
    import os

    raw = os.environ.get("TTGEO_THREADS", "1")
    try:
        return max(1, min(16, int(raw)))
    except ValueError:
        return 1


def to_json_dict(t: TrainTrack) -> Dict:
    doc: Dict = {
        "surface": t.surface,
        "switches": [
            {"L": 3 * s, "S1": 3 * s + 1, "S2": 3 * s + 2}
            for s in range(t.switch_count)
        ],
        "pairing": [list(pair) for pair in t.branches()],
    }
    if t.marking is not None:
        doc["marking"] = {str(b): list(v) for b, v in enumerate(t.marking)}
        if t.parity is not None:
            doc["parity"] = {str(b): bit for b, bit in enumerate(t.parity)}
    return doc


def to_json(t: TrainTrack) -> str:
    return json.dumps(to_json_dict(t), sort_keys=True, indent=2) + "\n"


def from_json_dict(doc: Dict) -> TrainTrack:
    surface = check_surface(doc["surface"])
    pairs = [tuple(p) for p in doc["pairing"]]
    n = 2 * len(pairs)
    pairing = [0] * n
    for a, b in pairs:
        pairing[a] = b
        pairing[b] = a
    for i, sw in enumerate(doc.get("switches", [])):
        if (sw["L"], sw["S1"], sw["S2"]) != (3 * i, 3 * i + 1, 3 * i + 2):
            raise ValueError("switch slots must follow the 3s, 3s+1, 3s+2 layout")
    marking = None
    parity = None
    if "marking" in doc:
        nb = n // 2
        marking = tuple(
            tuple(doc["marking"][str(b)]) for b in range(nb)
        )
        if "parity" in doc:
            parity = tuple(doc["parity"][str(b)] for b in range(nb))
    return TrainTrack(surface, tuple(pairing), marking, parity)


def from_json(text: str) -> TrainTrack:
    return from_json_dict(json.loads(text))
