"""Shipped seed tracks and marked class representatives.

The two seeds anchor every reproducible construction: balls, verification
suites, and the chirality convention itself (the RIGHT split of the torus
seed is the one whose new vertex-cycle slope is 1/1).  Representatives of
the sphere classes are shipped one per class, named by the derived class
numbering, mirror partners carrying an ``m`` suffix.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Dict

from .tracks import TrainTrack, from_json_dict

_SEED_FILES = {"s11": "s11_seed.json", "s04": "s04_seed.json"}


def _data_root():
    return resources.files("ttgeo") / "data"


def _load(resource) -> TrainTrack:
    return from_json_dict(json.loads(resource.read_text()))


def seed_track(surface: str) -> TrainTrack:
    """The shipped complete marked seed of a surface."""
    try:
        name = _SEED_FILES[surface]
    except KeyError:
        raise ValueError(f"no seed fixture for surface {surface!r}") from None
    return _load(_data_root() / name)


def class_representatives() -> Dict[str, TrainTrack]:
    """Marked representatives of the 13 sphere classes, keyed by class name
    ("01".."08" plus the five mirror partners "02m".."07m")."""
    out: Dict[str, TrainTrack] = {}
    for entry in sorted(
        (_data_root() / "s04_classes").iterdir(), key=lambda e: e.name
    ):
        if entry.name.endswith(".json"):
            out[entry.name.removeprefix("class_").removesuffix(".json")] = _load(entry)
    return out


def load_track_file(path: str | Path) -> TrainTrack:
    """Read a track from a JSON file on disk (CLI seed/act inputs)."""
    return from_json_dict(json.loads(Path(path).read_text()))
