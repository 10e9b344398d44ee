"""Command line driver.

Every subcommand is a thin client of the HTTP service: by default it
drives the app in process through the test transport, and with --server
it talks to a running instance instead, so scripted output is identical
either way.
"""
from __future__ import annotations

import json
import sys
from typing import Dict, Optional

import click

from . import SURFACES, __version__
from .suites import SUITES


class ServiceClient:
    """In-process or remote HTTP client with one call surface."""

    def __init__(self, server: Optional[str]):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # The bundled test transport is the supported in-process
                # path here; the upstream migration notice is noise.
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def get(self, path: str, **params):
        return self._client.get(path, params=params)

    def post(self, path: str, payload: Dict):
        return self._client.post(path, json=payload)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_json(doc: Dict, out: Optional[str]) -> None:
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", out)


def _require(resp) -> None:
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(f"service error {resp.status_code}: {detail}")


def _load_track_doc(path: str) -> Dict:
    with open(path) as fh:
        return json.load(fh)


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--server",
    default=None,
    envvar="TTGEO_SERVER",
    help="Base URL of a running service; omitted, the app runs in process.",
)
@click.pass_context
def main(ctx: click.Context, server: Optional[str]) -> None:
    """Exact train track complexes of the punctured torus and sphere."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.option("--surface", type=click.Choice(SURFACES), required=True)
@click.option("--up-to-mirror", is_flag=True, help="Identify mirror pairs.")
@click.option("--expect", type=int, default=None, help="Fail unless the count matches.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def enumerate(client: ServiceClient, surface, up_to_mirror, expect, out) -> None:
    """Enumerate the diffeomorphism classes of complete tracks."""
    resp = client.get("/enumerate", surface=surface, up_to_mirror=up_to_mirror)
    _require(resp)
    doc = resp.json()
    _emit_json(doc, out)
    if expect is not None and doc["count"] != expect:
        raise click.ClickException(f"expected {expect} classes, found {doc['count']}")


@main.command()
@click.option("--surface", type=click.Choice(SURFACES), default=None)
@click.option("--radius", type=int, required=True)
@click.option(
    "--seed",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Track JSON file to grow from instead of the shipped seed.",
)
@click.option("--format", "fmt", type=click.Choice(("json", "dot")), default="json")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def ball(client: ServiceClient, surface, radius, seed, fmt, out) -> None:
    """Build a certified ball of the complex and export it."""
    payload: Dict = {"radius": radius, "format": fmt}
    if seed:
        payload["track"] = _load_track_doc(seed)
    elif surface:
        payload["surface"] = surface
    else:
        raise click.UsageError("need --surface or --seed")
    resp = client.post("/ball", payload)
    _require(resp)
    if fmt == "dot":
        _emit(resp.text, out)
    else:
        _emit_json(resp.json(), out)


@main.command()
@click.option("--surface", type=click.Choice(SURFACES), default=None)
@click.option("--radius", type=int, default=None, help="Complex ball export.")
@click.option("--depth", type=int, default=None, help="Farey graph export.")
@click.option("--format", "fmt", type=click.Choice(("json", "dot")), default="json")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def export(client: ServiceClient, surface, radius, depth, fmt, out) -> None:
    """Export a complex ball (--surface/--radius) or Farey window (--depth)."""
    if depth is not None:
        resp = client.get("/farey", depth=depth, format=fmt)
    elif surface is not None and radius is not None:
        resp = client.post("/ball", {"surface": surface, "radius": radius, "format": fmt})
    else:
        raise click.UsageError("need --depth, or --surface with --radius")
    _require(resp)
    if fmt == "dot":
        _emit(resp.text, out)
    else:
        _emit_json(resp.json(), out)


@main.command()
@click.option(
    "--suite",
    type=click.Choice(sorted(SUITES) + ["all"]),
    required=True,
)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def verify(client: ServiceClient, suite, out) -> None:
    """Run a verification suite; exits nonzero on any failed check."""
    resp = client.post("/verify", {"suite": suite})
    _require(resp)
    doc = resp.json()
    _emit_json(doc, out)
    if not doc["pass"]:
        sys.exit(1)


@main.command()
@click.option("--matrix", required=True, help="Matrix as 'a,b;c,d'.")
@click.option("--klein", default="0,0", help="Klein tag as 'kx,ky' (sphere only).")
@click.option("--seed", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def act(client: ServiceClient, matrix, klein, seed, out) -> None:
    """Apply a mapping class to a track file."""
    resp = client.post(
        "/act", {"matrix": matrix, "klein": klein, "track": _load_track_doc(seed)}
    )
    _require(resp)
    _emit_json(resp.json(), out)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
