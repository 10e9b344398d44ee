"""Command line interface, driven in process."""
import json

import pytest
from click.testing import CliRunner

from ttgeo.cli import main
from ttgeo.fixtures import seed_track
from ttgeo.tracks import canonical_key, to_json_dict


@pytest.fixture()
def runner():
    return CliRunner()


def test_enumerate_expect_pass(runner):
    result = runner.invoke(main, ["enumerate", "--surface", "s11", "--expect", "1"])
    assert result.exit_code == 0
    assert json.loads(result.output)["count"] == 1


def test_enumerate_expect_mismatch_fails(runner):
    result = runner.invoke(main, ["enumerate", "--surface", "s11", "--expect", "3"])
    assert result.exit_code != 0


def test_ball_json_to_file(runner, tmp_path):
    out = tmp_path / "ball.json"
    result = runner.invoke(
        main,
        ["ball", "--surface", "s04", "--radius", "2", "--out", str(out)],
    )
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["vertex_count"] == 13


def test_ball_custom_seed(runner, tmp_path):
    seed = tmp_path / "seed.json"
    seed.write_text(json.dumps(to_json_dict(seed_track("s11"))))
    result = runner.invoke(
        main, ["ball", "--seed", str(seed), "--radius", "1", "--format", "dot"]
    )
    assert result.exit_code == 0
    assert result.output.startswith("graph ball {")


def test_ball_needs_surface_or_seed(runner):
    result = runner.invoke(main, ["ball", "--radius", "2"])
    assert result.exit_code != 0


def test_export_farey_dot(runner):
    result = runner.invoke(main, ["export", "--depth", "3", "--format", "dot"])
    assert result.exit_code == 0
    assert result.output.startswith("graph G {")


def test_export_ball_json(runner):
    result = runner.invoke(
        main, ["export", "--surface", "s11", "--radius", "2"]
    )
    assert result.exit_code == 0
    assert json.loads(result.output)["vertex_count"] == 17


def test_export_requires_a_target(runner):
    assert runner.invoke(main, ["export"]).exit_code != 0


def test_verify_suite_exit_zero(runner):
    result = runner.invoke(main, ["verify", "--suite", "cayley"])
    assert result.exit_code == 0
    assert json.loads(result.output)["pass"] is True


def test_act_matches_library(runner, tmp_path):
    from ttgeo.action import act_on_track, mapping_class_from_text

    seed = tmp_path / "seed.json"
    seed.write_text(json.dumps(to_json_dict(seed_track("s04"))))
    result = runner.invoke(
        main,
        ["act", "--matrix", "1,1;0,1", "--klein", "0,1", "--seed", str(seed)],
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    expected = act_on_track(
        mapping_class_from_text("1,1;0,1", "0,1"), seed_track("s04")
    )
    assert doc["canonical_key"] == canonical_key(expected)


def test_version_flag(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
