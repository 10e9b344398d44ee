"""Verification suites: named bundles of acceptance checks over shared state.

Each suite returns a deterministic JSON-ready report: a list of checks,
each with a pass flag and enough numbers to audit the claim, plus an
overall pass flag and wall time.  The expensive artifacts (balls, fiber
maps, enumerations) live in a Resources cache so the service, the CLI and
the test harness can share one copy per process.

Suite map: classes covers enumeration counts, switch and branch counts,
measure cone shape and slope determinants; cayley the PSL(2, Z) ball
comparison; qi the fiber constants and both quasi-isometry bounds; farey
the line-graph structure of the image; table1 the transition table and
split totality; t1reach the distance-to-T1 bound and the interior
isomorphism; mcg the group action (stabilizers, proper discontinuity,
cocompactness, equivariance).
"""
from __future__ import annotations

import json
import time
from typing import Callable, Dict, List, Optional, Tuple

from .action import (
    cocompact_report,
    equivariance_report,
    properly_discontinuous_report,
    sphere_fiber_constant_report,
    stabilizer_report,
)
from .complexes import (
    ComplexBall,
    FiberMap,
    IDENTITY,
    build_ball,
    cayley_ball_psl2z,
    derive_fiber_constant,
    mat_label,
    oracle_window,
    project_fibers,
    qi_report,
    relator_values,
    restrict_ball,
    split_totality_report,
    t1_interior_ball,
    t1_reach_report,
    table_coherence_report,
    track_farey_edge,
    verify_cayley_isomorphism,
    verify_line_graph_structure,
)
from .farey import det_abs
from .fixtures import class_representatives, seed_track
from .graphs import rooted_isomorphic
from .measures import cone_rays, vertex_cycles
from .tracks import (
    TrainTrack,
    enumerate_complete,
    is_amphichiral,
    is_complete,
    structural_class_key,
)

#: Radii the suites certify at.  The sphere fiber constant needs the deep
#: ball; everything else runs at the documented working radii.
SUITE_RADII = {
    "s11_ball": 8,
    "s11_cayley": 6,
    "s04_fiber": 15,
    "s04_reach": 8,
    "s04_qi": 6,
    "farey_depth": 12,
}


class Resources:
    """Process-wide cache of balls, fiber maps and enumerations.

    Balls are kept as the largest built per surface; smaller radii are
    served as cached restrictions, which agree with direct builds.
    """

    def __init__(self):
        self._largest: Dict[str, ComplexBall] = {}
        self._restricted: Dict[Tuple[str, int], ComplexBall] = {}
        self._fibers: Dict[Tuple[str, int], FiberMap] = {}
        self._enum: Dict[Tuple[str, bool], Tuple[TrainTrack, ...]] = {}
        self.enum_seconds: Dict[str, float] = {}

    def ball(self, surface: str, radius: int) -> ComplexBall:
        key = (surface, radius)
        if key in self._restricted:
            return self._restricted[key]
        have = self._largest.get(surface)
        if have is None or have.radius < radius:
            have = build_ball(seed_track(surface), radius)
            self._largest[surface] = have
        out = have if have.radius == radius else restrict_ball(have, radius)
        self._restricted[key] = out
        return out

    def fibers(self, surface: str, radius: int) -> FiberMap:
        key = (surface, radius)
        if key not in self._fibers:
            self._fibers[key] = project_fibers(self.ball(surface, radius))
        return self._fibers[key]

    def enumeration(self, surface: str, up_to_mirror: bool = False):
        key = (surface, up_to_mirror)
        if key not in self._enum:
            t0 = time.monotonic()
            self._enum[key] = enumerate_complete(surface, up_to_mirror)
            self.enum_seconds[f"{surface}{'/mirror' if up_to_mirror else ''}"] = (
                time.monotonic() - t0
            )
        return self._enum[key]


def _check(name: str, passed, **detail) -> Dict:
    return {"check": name, "pass": bool(passed), **detail}


def _finish(suite: str, checks: List[Dict], t0: float) -> Dict:
    return {
        "suite": suite,
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
        "seconds": round(time.monotonic() - t0, 2),
    }


def suite_classes(res: Resources) -> Dict:
    """Enumeration counts, local combinatorics, measure cones, slope pairs."""
    t0 = time.monotonic()
    checks: List[Dict] = []

    torus = res.enumeration("s11")
    sphere = res.enumeration("s04")
    sphere_m = res.enumeration("s04", up_to_mirror=True)
    amphi = sum(1 for t in sphere_m if is_amphichiral(t))
    secs = dict(res.enum_seconds)
    checks.append(
        _check(
            "class counts 1 / 13 / 8 / 3",
            len(torus) == 1
            and len(sphere) == 13
            and len(sphere_m) == 8
            and amphi == 3,
            torus_classes=len(torus),
            sphere_classes=len(sphere),
            sphere_mirror_classes=len(sphere_m),
            amphichiral=amphi,
            enumeration_seconds=secs,
        )
    )
    checks.append(
        _check(
            "enumeration under 60 s per surface",
            all(v < 60.0 for v in secs.values()),
            enumeration_seconds=secs,
        )
    )

    sizes = sorted(
        {(t.surface, t.switch_count, t.branch_count) for t in torus + sphere}
    )
    checks.append(
        _check(
            "switch and branch counts 2/3 and 4/6",
            sizes == [("s04", 4, 6), ("s11", 2, 3)],
            sizes=[list(s) for s in sizes],
        )
    )
    checks.append(
        _check(
            "every representative is complete",
            all(is_complete(t) for t in torus + sphere),
        )
    )

    ray_counts = set()
    max_weight = 0
    for t in torus + sphere:
        rays = cone_rays(t)
        ray_counts.add(len(rays))
        max_weight = max(max_weight, max(max(r) for r in rays))
    checks.append(
        _check(
            "measure cone: two extremal rays, weights at most 2",
            ray_counts == {2} and max_weight <= 2,
            ray_counts=sorted(ray_counts),
            max_weight=max_weight,
        )
    )

    reps = class_representatives()
    fixture_keys = {structural_class_key(t) for t in reps.values()}
    enum_keys = {structural_class_key(t) for t in sphere}
    checks.append(
        _check(
            "shipped class representatives cover the 13 classes",
            fixture_keys == enum_keys,
            fixtures=len(fixture_keys),
        )
    )

    torus_dets = sorted(
        {det_abs(*vertex_cycles(seed_track("s11")))}
    )
    sphere_dets = sorted({det_abs(*vertex_cycles(t)) for t in reps.values()})
    per_class = {
        name: det_abs(*vertex_cycles(t)) for name, t in sorted(reps.items())
    }
    checks.append(
        _check(
            "slope pair determinants: 1 on the torus, {1, 2} on the sphere",
            torus_dets == [1] and sphere_dets == [1, 2],
            torus=torus_dets,
            sphere=sphere_dets,
            sphere_by_class=per_class,
        )
    )
    return _finish("classes", checks, t0)


def suite_cayley(res: Resources) -> Dict:
    """Torus ball against the PSL(2, Z) Cayley ball, plus the relators."""
    t0 = time.monotonic()
    checks: List[Dict] = []

    rel = relator_values()
    checks.append(
        _check(
            "both relators evaluate to -I in SL(2, Z)",
            all(m == (-1, 0, 0, -1) for m in rel.values()),
            values={k: mat_label(v) for k, v in rel.items()},
        )
    )

    radius = SUITE_RADII["s11_cayley"]
    ball = res.ball("s11", radius)
    cay, _, cay_dist = cayley_ball_psl2z(radius)
    t_iso = time.monotonic()
    ok, _ = verify_cayley_isomorphism(ball, radius)
    secs = time.monotonic() - t_iso
    checks.append(
        _check(
            f"radius-{radius} ball rooted-isomorphic to the Cayley ball",
            ok and ball.graph.vertex_count == cay.vertex_count,
            radius=radius,
            complex_vertices=ball.graph.vertex_count,
            cayley_vertices=cay.vertex_count,
            identity_depth=cay_dist[mat_label(IDENTITY)],
            seconds=round(secs, 2),
        )
    )
    checks.append(
        _check("isomorphism under 120 s", secs < 120.0, seconds=round(secs, 2))
    )
    return _finish("cayley", checks, t0)


def suite_qi(res: Resources) -> Dict:
    """Fiber constants of both projections and the two-sided distance bounds."""
    t0 = time.monotonic()
    checks: List[Dict] = []
    depth = SUITE_RADII["farey_depth"]

    r11 = SUITE_RADII["s11_ball"]
    b11 = res.ball("s11", r11)
    f11 = res.fibers("s11", r11)
    torus_fibers = derive_fiber_constant(b11, f11)
    checks.append(
        _check(
            "torus fibers: size 2, diameter exactly 3",
            torus_fibers["diameter"] == 3 and torus_fibers["fiber_sizes"] == [2],
            **torus_fibers,
        )
    )
    q11 = qi_report(b11, f11, oracle_window("s11", depth), 4, 3)
    checks.append(
        _check(
            f"torus distances within (4, 3) of the Farey edge graph at radius {r11}",
            q11["violation_count"] == 0 and q11["pairs_checked"] > 0,
            radius=r11,
            certified_pairs=q11["pairs_checked"],
            violations=q11["lower_violations"] + q11["upper_violations"],
            max_abs_spread_vs_3x_image=q11["max_abs_spread_vs_3x_image"],
            skipped_oracle=q11["skipped_oracle"],
        )
    )

    r04 = SUITE_RADII["s04_fiber"]
    b04 = res.ball("s04", r04)
    f04 = res.fibers("s04", r04)
    sphere_fibers = sphere_fiber_constant_report(b04, f04)
    a = sphere_fibers["constant"]
    checks.append(
        _check(
            "sphere fibers: 26 members, 2 per class, one certified diameter",
            a is not None
            and sphere_fibers["base_members"] == 26
            and sphere_fibers["members_per_class"] == [2] * 13
            and sphere_fibers["transport_coherent"],
            constant=a,
            radius=r04,
            base_members=sphere_fibers["base_members"],
            members_per_class=sphere_fibers["members_per_class"],
            transport_coherent=sphere_fibers["transport_coherent"],
            edges=[
                {k: v for k, v in e.items() if k != "members"}
                for e in sphere_fibers["edges"]
            ],
        )
    )

    rq = SUITE_RADII["s04_qi"]
    if a is not None:
        q04 = qi_report(
            res.ball("s04", rq),
            res.fibers("s04", rq),
            oracle_window("s04", depth),
            a + 1,
            a,
        )
        checks.append(
            _check(
                f"sphere distances within (a+1, a) of the edge graph at radius {rq}",
                q04["violation_count"] == 0 and q04["pairs_checked"] > 0,
                radius=rq,
                multiplicative=a + 1,
                additive=a,
                certified_pairs=q04["pairs_checked"],
                violations=q04["lower_violations"] + q04["upper_violations"],
                skipped_oracle=q04["skipped_oracle"],
            )
        )
    else:
        checks.append(
            _check("sphere distance bounds need the derived constant", False)
        )
    return _finish("qi", checks, t0)


def suite_farey(res: Resources) -> Dict:
    """Interior of the torus image graph against the dual-tree line graph."""
    t0 = time.monotonic()
    r11 = SUITE_RADII["s11_ball"]
    rep = verify_line_graph_structure(
        res.ball("s11", r11),
        res.fibers("s11", r11),
        margin=3,
        depth=SUITE_RADII["farey_depth"],
    )
    checks = [
        _check(
            "interior image graph is the line graph of the dual tree",
            rep["edge_sets_equal"] and rep["rooted_isomorphic"],
            interior_labels=rep["interior_count"],
            rooted_isomorphic=rep["rooted_isomorphic"],
        ),
        _check(
            "interior image degrees all 4",
            bool(rep["interior_degrees"]) and set(rep["interior_degrees"]) == {4},
            degrees=sorted(set(rep["interior_degrees"])),
        ),
    ]
    return _finish("farey", checks, t0)


def suite_table1(res: Resources) -> Dict:
    """Transition-table coherence and split totality."""
    t0 = time.monotonic()
    checks: List[Dict] = []

    rq = SUITE_RADII["s04_qi"]
    table = table_coherence_report(res.ball("s04", rq))
    checks.append(
        _check(
            "every complete split realizes a table row",
            table["unexpected_count"] == 0,
            radius=rq,
            violations=table["unexpected"],
        )
    )
    checks.append(
        _check(
            "every table row is witnessed",
            not table["missing_rows"],
            rows_witnessed=len(table["rows_witnessed"]),
            missing=table["missing_rows"],
        )
    )

    for surface in ("s11", "s04"):
        tot = split_totality_report(res.ball(surface, rq))
        checks.append(
            _check(
                f"{surface}: complete split available at every large branch",
                tot["failure_count"] == 0,
                radius=rq,
                tracks=tot["tracks"],
                large_branches=tot["large_branches"],
                violations=tot["failures"],
            )
        )
    return _finish("table1", checks, t0)


def suite_t1reach(res: Resources) -> Dict:
    """Distance to T1 and the interior T1 ball against the torus complex."""
    t0 = time.monotonic()
    checks: List[Dict] = []
    r04 = SUITE_RADII["s04_reach"]
    ball = res.ball("s04", r04)

    reach = t1_reach_report(ball, reach=5)
    dist_range = sorted(
        {(row["min"], row["max"]) for row in reach["per_class_distance"].values()}
    )
    checks.append(
        _check(
            "every certified vertex within 5 of T1",
            reach["violation_count"] == 0 and reach["certified_vertices"] > 0,
            radius=r04,
            reach=reach["reach"],
            certified_pairs=reach["certified_vertices"],
            t1_vertices=reach["t1_vertices"],
            violations=reach["violations"],
            per_class_min_max=[list(p) for p in dist_range],
        )
    )

    t1g, root, rad = t1_interior_ball(ball)
    torus = res.ball("s11", rad)
    iso, _ = rooted_isomorphic(t1g, root, torus.graph, torus.center)
    checks.append(
        _check(
            "interior T1 ball rooted-isomorphic to the torus complex ball",
            iso and rad >= 3,
            t1_radius=rad,
            t1_vertices=len(t1g.vertices),
            torus_vertices=torus.graph.vertex_count,
        )
    )
    return _finish("t1reach", checks, t0)


def suite_mcg(res: Resources) -> Dict:
    """Group action: stabilizers, proper discontinuity, cocompactness,
    equivariance."""
    t0 = time.monotonic()
    checks: List[Dict] = []

    stab11 = stabilizer_report(seed_track("s11"))
    checks.append(
        _check(
            "torus seed stabilizer trivial",
            stab11["order"] == 1 and stab11["matrix_fixers"] == ["1,0;0,1"],
            **{k: v for k, v in stab11.items() if k != "surface"},
        )
    )
    stab04 = stabilizer_report(seed_track("s04"))
    checks.append(
        _check(
            "sphere seed stabilizer is the Klein four-group",
            stab04["order"] == 4 and stab04["klein_four_group"],
            **{k: v for k, v in stab04.items() if k != "surface"},
        )
    )

    for surface in ("s11", "s04"):
        radius = SUITE_RADII["s11_ball" if surface == "s11" else "s04_reach"]
        ball = res.ball(surface, radius)
        pd = properly_discontinuous_report(ball)
        checks.append(
            _check(
                f"{surface}: displacement counts finite and stable for r <= 3",
                pd["stable"] and pd["stabilizer_order_matches_r0"],
                radius=radius,
                counts=pd["counts"],
                bounds=pd["bounds"],
            )
        )
        co = cocompact_report(ball)
        transitive = co.get("transitive", co.get("transitive_on_t1"))
        checks.append(
            _check(
                f"{surface}: orbit of the seed covers the certified window",
                transitive
                and co.get("reach_violations", 0) == 0
                and not co["missed"],
                **{k: v for k, v in co.items() if k != "per_class_distance"},
            )
        )
        eq = equivariance_report(ball)
        checks.append(
            _check(
                f"{surface}: generators preserve certified distances",
                eq["violation_count"] == 0 and eq["pairs_checked"] > 0,
                radius=radius,
                certified_pairs=eq["pairs_checked"],
                violations=eq["violations"],
            )
        )
    return _finish("mcg", checks, t0)


SUITES: Dict[str, Callable[[Resources], Dict]] = {
    "classes": suite_classes,
    "cayley": suite_cayley,
    "qi": suite_qi,
    "farey": suite_farey,
    "table1": suite_table1,
    "t1reach": suite_t1reach,
    "mcg": suite_mcg,
}


def run_suite(name: str, res: Optional[Resources] = None) -> Dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](res if res is not None else Resources())


def run_all(res: Optional[Resources] = None) -> Dict:
    res = res if res is not None else Resources()
    t0 = time.monotonic()
    reports = {name: SUITES[name](res) for name in sorted(SUITES)}
    return {
        "suites": reports,
        "pass": all(r["pass"] for r in reports.values()),
        "seconds": round(time.monotonic() - t0, 2),
    }


def report_text(report: Dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
