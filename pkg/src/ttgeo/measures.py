"""Transverse measures, the recurrence test, and the strand tracer.

A transverse measure assigns a weight to every branch so that at each switch
the weight entering on the large side equals the total entering on the small
side, counted per incidence.  The admissible nonnegative measures form a
pointed polyhedral cone; its extremal rays are computed exactly and their
integer representatives are traced through a fibered neighborhood of the
track to recover the vertex cycles and, on marked tracks, their slopes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .farey import Slope, make_slope
from .tracks import (
    Hol,
    HOL_ID,
    TrainTrack,
    hol_compose,
    hol_inverse,
)


def switch_rows(t: TrainTrack) -> List[List[int]]:
    """One row per switch: +1 for each large-slot incidence of a branch,
    -1 for each small-slot incidence (loops contribute twice)."""
    idx = t.branch_index()
    rows = []
    for s in range(t.switch_count):
        row = [0] * t.branch_count
        row[idx[3 * s]] += 1
        row[idx[3 * s + 1]] -= 1
        row[idx[3 * s + 2]] -= 1
        rows.append(row)
    return rows


def _nullspace(rows: Sequence[Sequence[int]], ncols: int) -> List[Tuple[Fraction, ...]]:
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fc]
        basis.append(tuple(v))
    return basis


def measure_space_dim(t: TrainTrack) -> int:
    return len(_nullspace(switch_rows(t), t.branch_count))


def _primitive(v: Sequence[Fraction]) -> Optional[Tuple[int, ...]]:
    """Scale to the primitive nonnegative integer vector on the same ray."""
    if all(x == 0 for x in v):
        return None
    if any(x < 0 for x in v):
        if any(x > 0 for x in v):
            return None
        v = [-x for x in v]
    from functools import reduce

    denom = reduce(lambda a, b: a * b.denominator // gcd(a, b.denominator), v, 1)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@lru_cache(maxsize=None)
def _cone_rays_cached(pairing: Tuple[int, ...], surface: str) -> Tuple[Tuple[int, ...], ...]:
    t = TrainTrack(surface, pairing)
    rows = switch_rows(t)
    nb = t.branch_count
    basis = _nullspace(rows, nb)
    d = len(basis)
    if d == 0:
        return ()
    if d == 1:
        v = _primitive(basis[0])
        return (v,) if v is not None else ()
    rays = set()
    for zeros in combinations(range(nb), d - 1):
        aug = list(rows)
        for c in zeros:
            unit = [0] * nb
            unit[c] = 1
            aug.append(unit)
        sols = _nullspace(aug, nb)
        if len(sols) != 1:
            continue
        v = _primitive(sols[0])
        if v is not None:
            rays.add(v)
    return tuple(sorted(rays))


def cone_rays(t: TrainTrack) -> Tuple[Tuple[int, ...], ...]:
    """Extremal rays of the measure cone as primitive integer weight vectors,
    indexed like t.branches(), in sorted order."""
    return _cone_rays_cached(t.pairing, t.surface)


def is_recurrent(t: TrainTrack) -> bool:
    """A track is recurrent when some measure is strictly positive; for a
    pointed cone the sum of the extremal rays has maximal support."""
    rays = cone_rays(t)
    if not rays:
        return False
    return all(any(r[b] for r in rays) for b in range(t.branch_count))


@dataclass(frozen=True)
class TracedComponent:
    segments: int
    holonomy: Optional[Hol]


def _check_switch_conditions(t: TrainTrack, weights: Sequence[int]) -> None:
    idx = t.branch_index()
    for s in range(t.switch_count):
        large = weights[idx[3 * s]]
        small = weights[idx[3 * s + 1]] + weights[idx[3 * s + 2]]
        if large != small:
            raise ValueError(f"switch {s} violates the measure condition")


def trace_measure(t: TrainTrack, weights: Sequence[int]) -> Tuple[TracedComponent, ...]:
    """Resolve an integer measure into the multicurve it carries.

    The fibered neighborhood of branch b holds weights[b] parallel strands;
    at a switch, large-side position j meets the j-th point of the small side
    (S1 block first).  Crossing a branch preserves the position when the two
    ends lie in slots of opposite kinds (one large, one small) and reverses
    it when they lie in slots of the same kind.

    Components are returned with their segment counts; holonomies are read
    from the marking when present (None otherwise), each along the direction
    the trace happened to run.
    """
    if any(w < 0 for w in weights) or len(weights) != t.branch_count:
        raise ValueError("weights must be one nonnegative integer per branch")
    _check_switch_conditions(t, weights)
    idx = t.branch_index()
    pairing = t.pairing

    def wt(h: int) -> int:
        return weights[idx[h]]

    def cross(h: int, p: int) -> Tuple[int, int]:
        k = pairing[h]
        if (h % 3 == 0) != (k % 3 == 0):
            return k, p
        return k, wt(h) + 1 - p

    def step(h: int, p: int) -> Tuple[int, int, Optional[int]]:
        """From the state 'just crossed into h at position p', pass through
        the switch and cross the next branch; also report the end the
        crossing departed from, to orient the holonomy lookup."""
        s, j = h // 3, h % 3
        w1 = wt(3 * s + 1)
        if j == 0:
            exit_h, ep = (3 * s + 1, p) if p <= w1 else (3 * s + 2, p - w1)
        elif j == 1:
            exit_h, ep = 3 * s, p
        else:
            exit_h, ep = 3 * s, w1 + p
        nh, np_ = cross(exit_h, ep)
        return nh, np_, exit_h

    states = [(h, p) for h in range(len(pairing)) for p in range(1, wt(h) + 1)]
    seen = set()
    orbits: List[Tuple[Tuple[Tuple[int, int], ...], Optional[Hol]]] = []
    orbit_of: Dict[Tuple[int, int], int] = {}
    for start in states:
        if start in seen:
            continue
        orbit: List[Tuple[int, int]] = []
        total = HOL_ID
        h, p = start
        while (h, p) not in seen:
            seen.add((h, p))
            orbit.append((h, p))
            orbit_of[(h, p)] = len(orbits)
            nh, np_, exit_h = step(h, p)
            if t.marking is not None:
                b = idx[exit_h]
                g = t.branch_hol(b)
                if exit_h > pairing[exit_h]:
                    g = hol_inverse(g)
                total = hol_compose(g, total)
            h, p = nh, np_
        if (h, p) != start:
            raise ValueError("strand trace failed to close")
        orbits.append((tuple(orbit), total if t.marking is not None else None))

    out: List[TracedComponent] = []
    reported = set()
    for i, (orbit, total) in enumerate(orbits):
        if i in reported:
            continue
        mate = orbit_of[cross(*orbit[0])]
        if mate == i:
            raise ValueError("one-sided strand component")
        reported.add(mate)
        out.append(TracedComponent(len(orbit), total))
    return tuple(out)


def vertex_cycles(t: TrainTrack) -> Tuple[Slope, ...]:
    """Slopes of the extremal-ray curves of a marked track, sorted."""
    if t.marking is None:
        raise ValueError("vertex cycle slopes require a marking")
    slopes = []
    for ray in cone_rays(t):
        comps = trace_measure(t, ray)
        if len(comps) != 1:
            raise ValueError("extremal ray traced to a disconnected multicurve")
        x, y, e = comps[0].holonomy
        if e != 1:
            raise ValueError("vertex cycle holonomy reverses the cover sheet")
        if (x, y) == (0, 0):
            raise ValueError("vertex cycle is puncture-parallel")
        if gcd(x, y) != 1:
            # A simple closed essential curve lifts to primitive torus classes.
            raise ValueError("vertex cycle class is not primitive")
        slopes.append(make_slope(x, y))
    return tuple(sorted(slopes, key=lambda s: s.sort_key()))
