import csv
import io
import json

import pytest

from ydgrow.cli import main
from ydgrow.grid import Configuration, dumps, loads
from ydgrow.harness import read_trials_csv
from ydgrow.render import read_ppm


def test_theory_text(capsys):
    assert main(["theory"]) == 0
    out = capsys.readouterr().out
    assert "65/6" in out and "[5/3, 2]" in out


def test_theory_csv(capsys):
    assert main(["theory", "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert ["15", "65/6", "4"] in rows
    assert sum(1 for r in rows if r and r[1:2] == ["yes"]) == 13


def test_estimate_t_flags_override_config(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"zeroset": "2 1", "rho": 2, "p": [0.5], "trials": 3}))
    out = tmp_path / "t.csv"
    code = main(["estimate-t", "--config", str(conf), "--p", "0.05", "--trials", "7",
                 "--csv", str(out)])
    assert code == 0
    rows = read_trials_csv(out.read_text())
    assert len(rows) == 7 and {r.p for r in rows} == {0.05}
    assert "median_T" in capsys.readouterr().out


def test_estimate_power_and_lc(tmp_path, capsys):
    assert main(["estimate-power", "--zeroset", "2 1", "--rho", "2", "--p", "0.1", "0.07", "0.05",
                 "--trials", "20", "--json", str(tmp_path / "s.json")]) == 0
    assert json.loads((tmp_path / "s.json").read_text())["fit"]["slope"] is not None
    assert main(["estimate-lc", "--zeroset", "2 2", "--rho", "2", "--p", "0.1", "--trials", "20",
                 "--aggregate", str(tmp_path / "a.csv")]) == 0
    assert "n_star=" in capsys.readouterr().out


def test_density(capsys):
    assert main(["density", "--zeroset", "2 2", "--rho", "2", "--p", "0.05", "--n", "16",
                 "--trials", "3", "--boundary", "periodic"]) == 0
    assert "density=" in capsys.readouterr().out


def test_simulate_dump_and_render(tmp_path):
    dump_path, ppm = tmp_path / "s.txt", tmp_path / "s.ppm"
    assert main(["simulate", "--zeroset", "3 2 1", "--rho", "3", "--n", "24", "--pattern",
                 "packed-strip", "--trials", "1", "--t-max", "1000", "--dump", str(dump_path),
                 "--ppm", str(ppm)]) == 0
    assert loads(dump_path.read_text()).is_full()
    assert read_ppm(ppm.read_bytes()).shape == (24, 24, 3)

    seed = Configuration(20, 20)
    seed.set(3, 3)
    seed.set(4, 3)
    src = tmp_path / "seed.txt"
    src.write_text(dumps(seed))
    out = tmp_path / "r.ppm"
    assert main(["render", str(src), str(out), "--zeroset", "1", "--rho", "1"]) == 0
    img = read_ppm(out.read_bytes())
    assert (img < 255).all()
    assert main(["render", str(src), str(out)]) == 0
    assert (read_ppm(out.read_bytes()) == 0).all(axis=2).sum() == 2
    assert main(["render", str(src), str(out), "--zeroset", "2 1"]) == 2


def test_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "speed-of-light", "--scale", "0.02"]) == 0
    out = capsys.readouterr().out
    assert "speed-of-light" in out and "oracle" not in out


def test_verify_failure_exit_code(monkeypatch):
    import ydgrow.cli as cli
    from ydgrow.verify import Report, SuiteResult

    monkeypatch.setattr(cli, "verify", lambda *a, **k: Report([SuiteResult("x", 0, 1, 0.0)]))
    assert main(["verify"]) == 1


@pytest.mark.parametrize("argv", [
    ["estimate-t", "--zeroset", "3 2", "--rho", "1", "--p", "0.1"],
    ["estimate-t", "--rho", "2", "--p", "0.1"],
    ["estimate-t", "--zeroset", "2 1", "--rho", "2", "--p", "2"],
    ["estimate-t", "--config", "/nonexistent.json", "--zeroset", "2 1", "--rho", "2"],
])
def test_config_errors_exit_2(argv):
    assert main(argv) == 2


def test_resource_error_exit_3():
    assert main(["estimate-t", "--zeroset", "2 1", "--rho", "2", "--p", "0.001", "--t-max", "5000",
                 "--t-max-cap", "5000", "--trials", "1", "--memory-budget", "1000000"]) == 3
    assert main(["estimate-lc", "--zeroset", "2 2", "--rho", "2", "--p", "0.0001", "--trials", "4",
                 "--n-min", "4", "--n-max", "8"]) == 3
