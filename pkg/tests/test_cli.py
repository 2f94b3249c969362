import json

import pytest

from cartan_git.cli import SCENARIOS, main, parse_vector, parse_weights


def test_registry_size():
    assert len(SCENARIOS) >= 10


@pytest.mark.parametrize("name", ["certify", "futaki-constancy", "slope", "stability", "descend", "extremal",
                                  "density-geodesic"])
def test_scenario_passes_and_is_deterministic(name, tmp_path):
    assert main([name, "--out", str(tmp_path / "a")]) == 0
    assert main([name, "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / f"{name}.json").read_text()
    assert a == (tmp_path / "b" / f"{name}.json").read_text()
    report = json.loads(a)
    assert report["scenario"] == name and report["checks"]
    assert all({"name", "anchor", "value", "tolerance", "pass", "kind"} <= set(c) for c in report["checks"])


def test_tolerance_override_fails(tmp_path):
    assert main(["certify", "--out", str(tmp_path), "--tol", "1e-30"]) == 1


def test_unstable_descent_fails(tmp_path):
    assert main(["descend", "--weights", "1,-1", "--vector", "1,0", "--shift", "0", "--starts", "0",
                 "--out", str(tmp_path)]) == 1


@pytest.mark.parametrize("argv", [["nope"], ["slope", "--weights", "a,b"], ["slope", "--vector", "1,2,3"],
                                  ["certify", "--tol", "-1"]])
def test_usage_errors(argv, tmp_path):
    assert main(argv + (["--out", str(tmp_path)] if argv[0] != "nope" else [])) == 2


def test_parsers():
    assert parse_weights("1,1;-1,1").shape == (2, 2)
    assert parse_weights("1,-1").shape == (2, 1)
    assert parse_vector("1,2i")[1] == 2j


def test_list(capsys):
    assert main(["list"]) == 0
    assert "cp1-descend" in capsys.readouterr().out
