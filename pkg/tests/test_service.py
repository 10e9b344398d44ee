"""HTTP service endpoints."""
import pytest
from fastapi.testclient import TestClient

from ttgeo.fixtures import seed_track
from ttgeo.service import create_app
from ttgeo.tracks import canonical_key, to_json_dict


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    doc = client.get("/health").json()
    assert doc["status"] == "ok"


def test_enumerate_torus(client):
    resp = client.get("/enumerate", params={"surface": "s11"})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["count"] == 1
    assert doc["classes"][0]["switches"] == 2
    assert doc["classes"][0]["branches"] == 3


def test_enumerate_sphere_mirror(client):
    doc = client.get(
        "/enumerate", params={"surface": "s04", "up_to_mirror": "true"}
    ).json()
    assert doc["count"] == 8


def test_enumerate_bad_surface(client):
    assert client.get("/enumerate", params={"surface": "s99"}).status_code == 422


def test_seed_endpoint(client):
    doc = client.get("/seed", params={"surface": "s04"}).json()
    assert doc["canonical_key"] == canonical_key(seed_track("s04"))
    assert doc["vertex_cycles"] == ["0/1", "1/0"]


def test_ball_json(client):
    resp = client.post("/ball", json={"surface": "s11", "radius": 2})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["vertex_count"] == 17 and doc["edge_count"] == 16
    assert {v["farey_edge"] for v in doc["vertices"] if v["depth"] == 0} == {
        "0/1|1/0"
    }


def test_ball_dot(client):
    resp = client.post("/ball", json={"surface": "s11", "radius": 1, "format": "dot"})
    assert resp.status_code == 200
    assert resp.text.startswith("graph ball {")


def test_ball_custom_track(client):
    track = to_json_dict(seed_track("s04"))
    resp = client.post("/ball", json={"radius": 1, "track": track})
    assert resp.status_code == 200
    assert resp.json()["vertex_count"] == 5


def test_ball_rejects_bad_requests(client):
    assert client.post("/ball", json={"radius": 2}).status_code == 422
    assert (
        client.post("/ball", json={"surface": "s11", "radius": 99}).status_code == 422
    )


def test_farey_export(client):
    doc = client.get("/farey", params={"depth": 2}).json()
    assert doc["depth"] == 2 and "0/1" in doc["vertices"]
    dot = client.get("/farey", params={"depth": 2, "format": "dot"}).text
    assert dot.startswith("graph G {")
    assert client.get("/farey", params={"depth": 99}).status_code == 422


def test_verify_suite(client):
    resp = client.post("/verify", json={"suite": "cayley"})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["suite"] == "cayley" and doc["pass"] is True
    assert client.post("/verify", json={"suite": "bogus"}).status_code == 422


def test_act_endpoint(client):
    track = to_json_dict(seed_track("s11"))
    resp = client.post(
        "/act", json={"matrix": "1,1;0,1", "track": track}
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["element"] == "1,1;0,1|0,0"
    assert doc["canonical_key"] != canonical_key(seed_track("s11"))
    same = client.post("/act", json={"matrix": "1,0;0,1", "track": track}).json()
    assert same["canonical_key"] == canonical_key(seed_track("s11"))


def test_act_rejects_bad_matrix(client):
    track = to_json_dict(seed_track("s11"))
    assert (
        client.post("/act", json={"matrix": "šč", "track": track}).status_code == 422
    )
