"""End-to-end command-line behaviour via click's test runner."""

import json

import pytest
from click.testing import CliRunner

from fractsurf.cli import main
from fractsurf.config import parse_config_document, serialize_config
from fractsurf.fixtures import fixture_config


@pytest.fixture()
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, list(args))


def test_help_lists_all_commands(runner):
    result = run(runner, "--help")
    assert result.exit_code == 0
    for command in ("validate", "build", "surface", "dimension", "report"):
        assert command in result.output


def test_validate_fixture(runner):
    result = run(runner, "validate", "--fixture", "flat2x2")
    assert result.exit_code == 0
    assert "'flat2x2': valid" in result.output
    assert "fields certified" in result.output
    assert "admissible" in result.output


def test_validate_config_file_matches_fixture(runner, tmp_path):
    cfg = parse_config_document(fixture_config("flat2x2"))
    path = tmp_path / "job.json"
    path.write_text(serialize_config(cfg), encoding="utf-8")
    via_file = run(runner, "validate", "--config", str(path))
    via_name = run(runner, "validate", "--fixture", "flat2x2")
    assert via_file.exit_code == via_name.exit_code == 0
    assert via_file.output == via_name.output


def test_config_and_fixture_are_mutually_exclusive(runner, tmp_path):
    path = tmp_path / "job.json"
    path.write_text(serialize_config(parse_config_document(fixture_config("flat2x2"))),
                    encoding="utf-8")
    neither = run(runner, "validate")
    both = run(runner, "validate", "--config", str(path), "--fixture", "flat2x2")
    assert neither.exit_code == 2
    assert both.exit_code == 2
    assert "exactly one of --config or --fixture" in neither.output + neither.stderr
    assert "exactly one of --config or --fixture" in both.output + both.stderr


def test_unknown_fixture_is_rejected_by_the_option(runner):
    result = run(runner, "validate", "--fixture", "nonesuch")
    assert result.exit_code == 2
    assert "nonesuch" in result.output + result.stderr


def test_build_writes_certificate(runner, tmp_path):
    result = run(runner, "build", "--fixture", "flat2x2", "--out", str(tmp_path))
    assert result.exit_code == 0
    text = (tmp_path / "flat2x2.certificate.txt").read_text(encoding="utf-8")
    assert "c_s=0" in text
    assert "theta_max=inf" in text


def test_surface_writes_heightmap_image_and_cloud(runner, tmp_path):
    result = run(runner, "surface", "--fixture", "flat2x2",
                 "--out", str(tmp_path), "--resolution", "17")
    assert result.exit_code == 0
    csv_text = (tmp_path / "flat2x2.heightmap.csv").read_text(encoding="utf-8")
    header = csv_text.splitlines()[0]
    assert header.split(",")[0] == "17"
    rows = csv_text.splitlines()[1:]
    assert len(rows) == 17
    assert all(len(row.split(",")) == 17 for row in rows)
    pgm = (tmp_path / "flat2x2.pgm").read_bytes()
    assert pgm.startswith(b"P5")
    xyz = (tmp_path / "flat2x2.xyz").read_text(encoding="utf-8")
    assert len(xyz.splitlines()) == 100000


def test_same_seed_is_byte_identical_and_new_seed_moves_points(runner, tmp_path):
    out_a, out_b, out_c = (tmp_path / k for k in "abc")
    run(runner, "surface", "--fixture", "bilinear2x2", "--out", str(out_a),
        "--resolution", "17", "--seed", "7")
    run(runner, "surface", "--fixture", "bilinear2x2", "--out", str(out_b),
        "--resolution", "17", "--seed", "7")
    run(runner, "surface", "--fixture", "bilinear2x2", "--out", str(out_c),
        "--resolution", "17", "--seed", "8")
    name = "bilinear2x2.xyz"
    assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    assert (out_a / name).read_bytes() != (out_c / name).read_bytes()
    heightmap = "bilinear2x2.heightmap.csv"
    assert (out_a / heightmap).read_bytes() == (out_c / heightmap).read_bytes()


def test_dimension_writes_counts_and_report(runner, tmp_path):
    result = run(runner, "dimension", "--fixture", "flat2x2", "--out", str(tmp_path))
    assert result.exit_code == 0
    counts = (tmp_path / "flat2x2.counts.csv").read_text(encoding="utf-8")
    assert counts.splitlines()[0] == "delta,count"
    assert len(counts.splitlines()) == 1 + 5
    report = (tmp_path / "flat2x2.dimension.txt").read_text(encoding="utf-8")
    assert "estimate=2" in report
    assert "applicable=" in report


def test_report_writes_every_artifact(runner, tmp_path):
    result = run(runner, "report", "--fixture", "flat2x2",
                 "--out", str(tmp_path), "--resolution", "17")
    assert result.exit_code == 0
    for suffix in (".certificate.txt", ".heightmap.csv", ".pgm", ".xyz",
                   ".counts.csv", ".dimension.txt", ".config.json", ".summary.txt"):
        assert (tmp_path / f"flat2x2{suffix}").exists(), suffix
    saved = json.loads((tmp_path / "flat2x2.config.json").read_text(encoding="utf-8"))
    assert saved["name"] == "flat2x2"
    summary = (tmp_path / "flat2x2.summary.txt").read_text(encoding="utf-8")
    assert "elapsed" not in summary     # on-disk outputs stay deterministic


def test_magnitude_violation_exits_two_with_witness(runner, tmp_path):
    doc = fixture_config("example2a")
    doc["scaling"]["fields"][0]["psi"] = 2305.0
    path = tmp_path / "too_steep.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    result = run(runner, "validate", "--config", str(path))
    assert result.exit_code == 2
    err = result.output + result.stderr
    assert "magnitude violation" in err
    assert "witness" in err


def test_invalid_config_file_exits_one(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    result = run(runner, "validate", "--config", str(path))
    assert result.exit_code == 1
    assert "not valid JSON" in result.output + result.stderr


def test_misaligned_resolution_override_exits_one(runner, tmp_path):
    result = run(runner, "surface", "--fixture", "flat2x2",
                 "--out", str(tmp_path), "--resolution", "18")
    assert result.exit_code == 1
    assert "error:" in result.output + result.stderr
