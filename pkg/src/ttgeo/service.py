"""HTTP facade over the library.

Every computation the CLI exposes goes through this app, whether served
over a socket or driven in process.  State is one shared Resources cache
behind a lock, so repeated verification calls reuse balls and fiber maps.
"""
from __future__ import annotations

import json
import threading
from typing import Dict, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import SURFACES, __version__
from .action import act_on_track, mapping_class_from_text
from .complexes import build_ball, export_ball
from .farey import farey_ball
from .fixtures import seed_track
from .graphs import export_graph
from .measures import vertex_cycles
from .suites import SUITES, Resources, run_all, run_suite
from .tracks import (
    TrainTrack,
    canonical_key,
    enumerate_complete,
    from_json_dict,
    is_amphichiral,
    is_complete,
    to_json_dict,
)


class BallRequest(BaseModel):
    surface: Optional[str] = Field(default=None, description="fixture seed surface")
    radius: int
    track: Optional[Dict] = Field(default=None, description="explicit seed track")
    format: str = "json"


class VerifyRequest(BaseModel):
    suite: str = Field(description=f"one of {sorted(SUITES)} or 'all'")


class ActRequest(BaseModel):
    matrix: str = Field(description="matrix as 'a,b;c,d'")
    klein: str = "0,0"
    track: Dict


def _parse_track(doc: Dict) -> TrainTrack:
    try:
        return from_json_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=f"bad track: {exc}")


def create_app() -> FastAPI:
    app = FastAPI(title="ttgeo", version=__version__)
    resources = Resources()
    lock = threading.Lock()

    @app.get("/health")
    def health() -> Dict:
        return {"status": "ok", "version": __version__}

    @app.get("/enumerate")
    def enumerate_classes(
        surface: str = Query(...), up_to_mirror: bool = Query(default=False)
    ) -> Dict:
        if surface not in SURFACES:
            raise HTTPException(status_code=422, detail=f"unknown surface {surface}")
        reps = enumerate_complete(surface, up_to_mirror=up_to_mirror)
        return {
            "surface": surface,
            "up_to_mirror": up_to_mirror,
            "count": len(reps),
            "classes": [
                {
                    "key": canonical_key(t),
                    "switches": t.switch_count,
                    "branches": t.branch_count,
                    "amphichiral": is_amphichiral(t),
                }
                for t in reps
            ],
        }

    @app.get("/seed")
    def seed(surface: str = Query(...)) -> Dict:
        if surface not in SURFACES:
            raise HTTPException(status_code=422, detail=f"unknown surface {surface}")
        t = seed_track(surface)
        return {
            "surface": surface,
            "track": to_json_dict(t),
            "canonical_key": canonical_key(t),
            "vertex_cycles": [str(s) for s in vertex_cycles(t)],
        }

    @app.post("/ball")
    def ball(req: BallRequest):
        if req.track is not None:
            seed_t = _parse_track(req.track)
        elif req.surface in SURFACES:
            seed_t = seed_track(req.surface)
        else:
            raise HTTPException(
                status_code=422, detail="need a surface or an explicit track"
            )
        if not is_complete(seed_t) or seed_t.marking is None:
            raise HTTPException(
                status_code=422, detail="seed must be a complete marked track"
            )
        try:
            b = build_ball(seed_t, req.radius)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        text = export_ball(b, req.format)
        if req.format == "dot":
            return PlainTextResponse(text)
        return json.loads(text)

    @app.get("/farey")
    def farey(depth: int = Query(...), format: str = Query(default="json")):
        try:
            fb = farey_ball(depth)
            text = export_graph(fb.to_graph(), format)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if format == "dot":
            return PlainTextResponse(text)
        doc = json.loads(text)
        doc["depth"] = depth
        return doc

    @app.post("/verify")
    def verify(req: VerifyRequest) -> Dict:
        with lock:
            try:
                if req.suite == "all":
                    return run_all(resources)
                return run_suite(req.suite, resources)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/act")
    def act(req: ActRequest) -> Dict:
        try:
            g = mapping_class_from_text(req.matrix, req.klein)
        except (ValueError, IndexError) as exc:
            raise HTTPException(status_code=422, detail=f"bad element: {exc}")
        t = _parse_track(req.track)
        out = act_on_track(g, t)
        return {
            "element": g.label(),
            "track": to_json_dict(out),
            "canonical_key": canonical_key(out),
        }

    return app


app = create_app()
