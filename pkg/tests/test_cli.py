import json

import pytest
from click.testing import CliRunner

from obata_holonomy import suites
from obata_holonomy.cli import cli


def _strip_timing(report: dict) -> dict:
    return {**report, "checks": [{k: v for k, v in c.items() if k != "elapsed_ms"}
                                 for c in report["checks"]]}


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


def test_help_lists_commands(runner):
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for cmd in ("verify", "holonomy", "transport", "invariants", "dump"):
        assert cmd in result.output


def test_verify_holonomy_json(runner):
    result = runner.invoke(cli, ["verify", "--suite", "holonomy", "--format", "json"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    checks = {c["id"]: c for c in report["checks"]}
    assert checks["holonomy.dim"]["actual"] == "16"
    assert report["summary"]["failed"] == 0
    ids = [c["id"] for c in report["checks"]]
    assert ids == sorted(ids)


def test_verify_text_format(runner):
    result = runner.invoke(cli, ["verify", "--suite", "hypercomplex", "--format", "text"])
    assert result.exit_code == 0
    assert "[PASS] joyce-su3.nijenhuis.I: 0/28 pairs nonzero" in result.output


def test_verify_is_deterministic(runner):
    args = ["verify", "--suite", "holonomy", "--seed", "42"]
    a = json.loads(runner.invoke(cli, args).output)
    b = json.loads(runner.invoke(cli, args).output)
    assert _strip_timing(a) == _strip_timing(b)


@pytest.mark.parametrize("args", [
    ["verify", "--suite", "transport", "--loops", "0"],
    ["verify", "--suite", "transport", "--scale", "0.9"],
    ["verify", "--suite", "nope"],
    ["verify", "--format", "yaml"],
    ["verify", "--loops", "many"],
    ["invariants", "--valence", "3,3"],
    ["dump", "--what", "nothing"],
    ["dump", "--what", "ijk", "--format", "text"],
    ["holonomy", "--method", "ambrose"],
    ["no-such-command"],
])
def test_config_errors_exit_3(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 3, result.output


def test_failed_check_exits_2(runner, monkeypatch):
    from obata_holonomy.report import CheckReport

    def broken(cfg):
        rep = CheckReport()
        rep.add("algebra.forced", "test", 1, 2)
        return rep

    monkeypatch.setitem(suites._RUNNERS, "algebra", broken)
    result = runner.invoke(cli, ["verify", "--suite", "algebra"])
    assert result.exit_code == 2
    assert json.loads(result.output)["summary"]["failed"] == 1


def test_config_file_and_flag_precedence(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# transport settings\nloops = 200\nseed = 5\nformat = json\n")
    result = runner.invoke(cli, ["transport", "--config", str(cfg), "--seed", "6"])
    assert result.exit_code == 0, result.output
    echo = json.loads(result.output)["config"]
    assert echo["loops"] == 200 and echo["seed"] == 6 and echo["suite"] == "transport"


def test_config_file_unknown_key(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert runner.invoke(cli, ["verify", "--config", str(cfg)]).exit_code == 3


def test_out_path(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(cli, ["verify", "--suite", "algebra", "--out", str(out)])
    assert result.exit_code == 0
    assert json.loads(out.read_text())["summary"]["failed"] == 0


def test_holonomy_command(runner):
    result = runner.invoke(cli, ["holonomy", "--method", "nomizu", "--format", "json"])
    assert result.exit_code == 0
    d = json.loads(result.output)
    assert d["dim"] == 16 and d["commutant_dim"] == 16 and d["equals_commutant"]
    assert d["invariant_tensor_dims"]["endos"] == 4


@pytest.mark.parametrize("valence,dim", [("1,1", 4), ("0,2s", 0), ("top", 0), ("1,0", 0)])
def test_invariants_command(runner, valence, dim):
    result = runner.invoke(cli, ["invariants", "--valence", valence])
    assert result.exit_code == 0
    assert json.loads(result.output)["dim"] == dim


def test_dump_structure_constants(runner):
    result = runner.invoke(cli, ["dump", "--what", "structure-constants"])
    d = json.loads(result.output)
    sc = d["structure_constants"]
    assert len(sc) == 8 and all(len(row) == 8 and all(len(v) == 8 for v in row) for row in sc)
    assert all("/" in x for row in sc for v in row for x in v)


def test_dump_ijk_and_holonomy_basis(runner):
    d = json.loads(runner.invoke(cli, ["dump", "--what", "ijk"]).output)
    assert "alpha" in d and "sign_choices" in d
    d = json.loads(runner.invoke(cli, ["dump", "--what", "holonomy-basis"]).output)
    assert len(d["basis"]) == 16 and all(len(v) == 64 for v in d["basis"])


def test_dump_curvature_keys(runner):
    d = json.loads(runner.invoke(cli, ["dump", "--what", "curvature"]).output)
    assert len(d["curvature"]) == 28 and "0,1" in d["curvature"]


def test_dump_is_stable(runner):
    a = runner.invoke(cli, ["dump", "--what", "lambda"]).output
    b = runner.invoke(cli, ["dump", "--what", "lambda"]).output
    assert a == b
