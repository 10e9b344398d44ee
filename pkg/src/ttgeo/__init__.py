"""Exact train track complexes on the once-punctured torus and 4-punctured sphere.

Everything is computed over exact rational arithmetic; no floating point
enters any topological decision.
"""

__version__ = "0.1.0"

SURFACES = ("s11", "s04")


def check_surface(surface: str) -> str:
    if surface not in SURFACES:
        raise ValueError(f"unknown surface {surface!r}; expected one of {SURFACES}")
    return surface
