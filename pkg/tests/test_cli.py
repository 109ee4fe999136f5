import csv
import io
import json

from teamforge.cli import main
from teamforge.game_exact import ProposerOrder
from teamforge.prefs import PreferenceProfile, save_profile


def write_cycle(tmp_path):
    path = tmp_path / "cycle.json"
    save_profile(PreferenceProfile(3, ((1, 2), (2, 0), (0, 1))), path)
    return path


def test_generate_and_rpm(tmp_path, capsys):
    out = tmp_path / "gen"
    assert main(["generate", "--model", "scale-free", "--n", "10", "--m", "2", "--trials", "2",
                 "--seed", "1", "--out", str(out)]) == 0
    files = sorted(out.glob("*.json"))
    assert len(files) == 2
    capsys.readouterr()
    assert main(["rpm", "--profile", str(files[0]), "--seed", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert sorted(p for t in doc["partition"] for p in t) == list(range(10))
    assert "nodes" in doc["stats"]


def test_rpm_with_order_file(tmp_path, capsys):
    prof = write_cycle(tmp_path)
    order = tmp_path / "order.txt"
    order.write_text(ProposerOrder.from_blocks([0, 1, 2], 4).to_text())
    assert main(["rpm", "--profile", str(prof), "--order", str(order)]) == 0
    assert json.loads(capsys.readouterr().out)["partition"] == [[0, 1], [2]]


def test_other_commands(tmp_path, capsys):
    prof = str(write_cycle(tmp_path))
    assert main(["ims", "--profile", prof]) == 0
    assert json.loads(capsys.readouterr().out)["residual"] == [0, 1, 2]
    for cmd in (["rpm-alpha", "--alpha", "0.2"], ["hrpm", "--beta", "0.5", "--omega", "3"], ["rsd"]):
        assert main(cmd + ["--profile", prof, "--seed", "2"]) == 0
        json.loads(capsys.readouterr().out)
    for mech in ("rpm", "rpm-alpha", "hrpm"):
        assert main(["audit", "--profile", prof, "--mech", mech, "--seed", "2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["dedup"] <= doc["sum"]


def test_run_and_compare(tmp_path, capsys):
    out = tmp_path / "res.csv"
    argv = ["run", "--model", "scale-free", "--n", "12", "--m", "2", "--trials", "5", "--seed", "7",
            "--mech", "rpm-alpha", "--mech", "rsd", "--out", str(out), "--no-time"]
    assert main(argv) == 0
    first = out.read_text()
    assert main(argv) == 0
    assert out.read_text() == first
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 10
    capsys.readouterr()
    assert main(["compare", "--csv", str(out), "--a", "rpm-alpha", "--b", "rsd"]) == 0
    assert json.loads(capsys.readouterr().out)["pairs"] == 5


def test_run_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "karate", "trials": 1, "mechanisms": ["rsd"]}))
    assert main(["run", "--config", str(cfg), "--no-time"]) == 0
    text = capsys.readouterr().out
    assert len(text.strip().splitlines()) == 2


def test_run_reports_errors(tmp_path, capsys):
    rc = main(["run", "--model", "scale-free", "--n", "12", "--trials", "1", "--mech",
               "rpm:use_ims=false,node_budget=1", "--no-time"])
    assert rc == 1
    assert "error: trial 0" in capsys.readouterr().err


def test_bad_profile_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "edges": [[0, 1]], "rankings": {"0": [1], "1": []}}))
    assert main(["rpm", "--profile", str(bad)]) == 2
    assert "ranking-incomplete" in capsys.readouterr().err
