import io
import json
from importlib import resources

import jsonschema
import pytest

from cphi.cli import CACHE_ENV, CliConfig, UsageError, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("cphi").joinpath("data/report.schema.json").read_text())


def test_compute_values():
    assert run("compute", "--k", "2", "--n", "2") == (0, "9\n")
    assert run("compute", "--k", "1", "--n", "4") == (0, "5\n")
    assert run("compute", "--k", "5", "--n", "1", "--method", "enumerate") == (0, "25\n")
    assert run("compute", "--k", "5", "--n", "1", "--method", "lattice") == (0, "25\n")


def test_compute_series_json():
    code, text = run("compute", "--k", "3", "--series", "--prec", "10", "--format", "json")
    rows = json.loads(text)
    assert code == 0 and [r["coefficient"] for r in rows[:4]] == ["1", "9", "27", "82"]
    assert all(isinstance(r["coefficient"], str) for r in rows)


def test_enumeration_refused_when_large():
    code, _ = run("compute", "--k", "12", "--n", "30", "--method", "enumerate")
    assert code == 2


def test_usage_errors():
    assert run("compute", "--k", "2", "--n", "2", "--prec", "5")[0] == 2
    assert run("verify")[0] == 2
    assert run("bogus")[0] == 2
    with pytest.raises(UsageError):
        CliConfig(precision=5)


def test_verify_exit_codes():
    assert run("verify", "--id", "CPHI5-PROD", "--prec", "60")[0] == 0
    code, text = run("verify", "--id", "NOPE")
    assert code == 2 and "NOPE" in text
    assert run("verify", "--id", "CPHI5-THETA40", "--prec", "30")[0] == 1


def test_verify_json_matches_schema(schema):
    code, text = run("verify", "--id", "CPHI5-*", "--prec", "30", "--format", "json")
    data = json.loads(text)
    jsonschema.validate(data, schema)
    assert code == 1 and len(data) == 4
    bad = [r for r in data if r["status"] == "fail"]
    assert bad and all(r["first_mismatch"]["exponent"] for r in bad)


def test_schema_rejects_fail_without_mismatch(schema):
    row = {"id": "x", "kind": "series-identity", "status": "fail", "bound": "10",
           "first_mismatch": None, "known_issue": None, "message": None}
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate([row], schema)


def test_verify_deterministic_across_jobs():
    argv = ("verify", "--id", "C-GEN", "--id", "CPHI7-*", "--prec", "40", "--n-max", "100",
            "--format", "json", "--no-time")
    serial = run(*argv)
    parallel = run(*argv, "--jobs", "3")
    assert serial == parallel


def test_verify_output_file(tmp_path):
    target = tmp_path / "report.csv"
    code, _ = run("verify", "--id", "RAMA*", "--prec", "30", "--format", "csv", "--output", str(target))
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0].startswith("id,") and len(lines) == 3


def test_enumerate_listing():
    code, text = run("enumerate", "--k", "2", "--n", "2")
    rows = text.splitlines()
    assert code == 0 and rows[-1] == "9 symbols"
    assert sum("order 1 " in r for r in rows) == 1
    code, text = run("enumerate", "--k", "1", "--n", "0")
    assert text.splitlines() == ["( | )  order 1  m 0", "1 symbols"]


def test_enumerate_refined():
    code, text = run("enumerate", "--k", "2", "--n", "2", "--refined")
    assert "m-histogram {-1: 2, 0: 5, 1: 2}" in text
    code, text = run("enumerate", "--k", "2", "--n", "2", "--refined", "--format", "json")
    body = json.loads(text)
    assert body["by_difference"] == body["by_difference_engine"] == {"-1": "2", "0": "5", "1": "2"}


def test_cache_round_trip(tmp_path, monkeypatch):
    argv = ("compute", "--k", "4", "--series", "--prec", "20", "--cache-dir", str(tmp_path))
    first = run(*argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    assert run(*argv) == first
    assert run(*argv, "--verify-cache")[0] == 0
    # a corrupted record is detected rather than served
    text = files[0].read_text()
    files[0].write_text(text.replace("\n1 16/1\n", "\n1 17/1\n"))
    assert files[0].read_text() != text
    assert run(*argv, "--verify-cache")[0] == 1
    files[0].unlink()
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    run("compute", "--k", "4", "--series", "--prec", "20")
    assert len(list(tmp_path.iterdir())) == 1
