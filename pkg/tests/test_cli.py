import csv
import io
import json

import pytest

from cubictheta.cli import main
from cubictheta.theta import ThetaSeries


@pytest.fixture(autouse=True)
def _cache_in_tmp(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBICTHETA_CACHE_DIR", str(tmp_path / "envcache"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_range_json(capsys, caplog):
    caplog.set_level("INFO", logger="cubictheta")
    code, out, err = run(capsys, "verify", "--range", "2", "1000", "--precision", "1000", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert isinstance(data, list) and all(r["verdict"] == "PASS" for r in data)
    assert "d=229 count=1 PASS" in caplog.text and "d=229" not in out


def test_verify_text_and_csv(capsys):
    code, out, _ = run(capsys, "verify", "--disc", "229")
    assert code == 0 and "(4, 1, 43)" in out and "PASS" in out
    code, out, _ = run(capsys, "verify", "--range", "200", "300", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows and rows[0]["d"] == "201"
    assert {r["d"]: r["count"] for r in rows}["229"] == "1"


def test_verify_non_fundamental_is_usage_error(capsys):
    code, out, err = run(capsys, "verify", "--disc", "9")
    assert code == 2 and out == ""
    assert "9 is not a fundamental discriminant" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--disc", "5", "--range", "1", "2")[0] == 2
    assert run(capsys, "verify", "--range", "10", "5")[0] == 2
    assert run(capsys, "verify", "--disc", "5", "--precision", "0")[0] == 2
    assert run(capsys, "verify", "--disc", "5", "--jobs", "0")[0] == 2
    assert run(capsys, "frobnicate", "--disc", "5")[0] == 2


def test_theta_json(capsys):
    code, out, _ = run(capsys, "theta", "--disc", "229", "--precision", "50", "--format", "json")
    assert code == 0
    series = [ThetaSeries.from_dict(x) for x in json.loads(out)]
    assert len(series) == 1 and series[0].precision == 50 and series[0].character == -687
    assert series[0].coeffs[:5] == (1, 0, 0, 0, 2)


def test_theta_text_and_csv(capsys):
    code, out, _ = run(capsys, "theta", "--disc", "229", "--precision", "50")
    assert code == 0 and "level=687" in out
    code, out, _ = run(capsys, "theta", "--disc", "229", "--precision", "20", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["level"] == "687" and len(rows[0]["coeffs"].split()) == 21


def test_enumerate_and_classgroup(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--range", "225", "232", "--format", "json", "--cache-dir", str(tmp_path / "c"))
    assert code == 0
    assert {o["d"]: o["fields"] for o in json.loads(out)}[229] == [[1, 0, -4, -1]]
    assert (tmp_path / "c" / "cubic.jsonl").exists()
    code, out, _ = run(capsys, "classgroup", "--disc", "-23", "--format", "json")
    (g,) = json.loads(out)
    assert code == 0 and g["class_number"] == 3 and g["three_rank"] == 1
    code, out, _ = run(capsys, "classgroup", "--disc", "229", "--format", "json")
    (g,) = json.loads(out)
    assert g["class_number"] == 3 and g["three_rank"] == 1 and g["narrow"]
    code, out, _ = run(capsys, "classgroup", "--range", "-30", "-20", "--format", "csv")
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == 3  # -20, -23, -24


def test_env_cache_dir(capsys, tmp_path):
    run(capsys, "verify", "--disc", "229")
    assert (tmp_path / "envcache" / "cubic.jsonl").exists()


def test_exit_code_one_on_failure(capsys, monkeypatch):
    import cubictheta.pipeline as pl

    real = pl.enumerate_cubic_fields
    monkeypatch.setattr(pl, "enumerate_cubic_fields", lambda d: real(d)[:-1] if d == 229 else real(d))
    code, out, _ = run(capsys, "verify", "--disc", "229", "--format", "json")
    assert code == 1 and json.loads(out)[0]["verdict"] == "FAIL"
