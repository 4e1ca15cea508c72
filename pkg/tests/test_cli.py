import csv
import io
import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from w6j.cli import COMPARE_COLUMNS, main
from w6j.exact import to_float
from w6j.symbols import SixJArgs, six_j_racah

CORPUS = Path(__file__).parent / "data" / "networks"


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def schema(name):
    text = resources.files("w6j").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def check_json(result, name):
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    jsonschema.validate(doc, schema(name))
    return doc


def rows(result):
    assert result.exit_code == 0, result.output
    return list(csv.reader(io.StringIO(result.output)))


class TestExact:
    def test_text(self):
        assert run("exact", 1, 1, 1, 1, 1, 1).output.strip() == "1/6·√1 ≈ 0.166667"
        assert run("exact", 1, 1, 3, 1, 1, 1).output.strip() == "0"

    def test_oracle_same(self):
        assert run("exact", 2, 2, 2, 2, 2, 2, "--oracle").output == run("exact", 2, 2, 2, 2, 2, 2).output

    def test_json(self):
        doc = check_json(run("exact", "1/2", "1/2", 1, 1, 1, "1/2", "--format", "json", "--pr"), "exact")
        want = six_j_racah(SixJArgs.of("1/2", "1/2", 1, 1, 1, "1/2"))
        assert doc["value"] == str(want) and doc["float"] == to_float(want)

    def test_precision(self):
        out = run("exact", 1, 1, 1, 1, 1, 1, "--precision", 200).output.splitlines()
        assert out[1].startswith("0.1666666666666666666666666666666666666")

    def test_usage_errors(self):
        assert run("exact", 1, 1, 1).exit_code == 2
        assert run("exact", "1/3", 1, 1, 1, 1, 1).exit_code == 2
        assert run("exact", 1, 1, 1, 1, 1, 1, "--precision", 20).exit_code == 2

    def test_domain_error(self):
        r = run("exact", 1, 1, 1, 1, 1, 3, "--pr")
        assert r.exit_code == 3

    def test_resource_error(self):
        assert run("exact", 400, 400, 400, 400, 400, 400).exit_code == 4


class TestCompare:
    def test_seven_rows(self):
        out = rows(run("compare", "9/2", 3, "11/2", 6, "9/2"))
        assert out[0] == COMPARE_COLUMNS
        assert len(out) == 8

    def test_json(self):
        doc = check_json(run("compare", "9/2", 3, "11/2", 6, "9/2", "--format", "json"), "compare")
        assert len(doc["rows"]) == 7
        for r in doc["rows"]:
            assert r["region"] in {"U", "A", "F", "C", "B"}
            if r["region"] != "A":
                assert r["pr"] is None

    def test_values_match_exact(self):
        doc = json.loads(run("compare", 1, 1, 1, 1, 1, "--format", "json").output)
        for r in doc["rows"]:
            assert r["exact"] == to_float(six_j_racah(SixJArgs.of(1, 1, 1, 1, 1, r["j23"])))

    def test_scaling_improves(self):
        def median_err(twice):
            js = [f"{t}/2" for t in twice]
            doc = json.loads(run("compare", *js[:4], js[4], "--format", "json").output)
            errs = sorted(r["rel_err"] for r in doc["rows"] if r["rel_err"] is not None)
            return errs[len(errs) // 2]

        base = (9, 6, 11, 12, 9)
        assert median_err([4 * t for t in base]) < median_err(base)

    def test_forbidden_slice(self):
        doc = json.loads(run("compare", "1/2", "3/2", "1/2", 2, "3/2", "--format", "json").output)
        assert doc["rows"] and all(r["region"] == "F" for r in doc["rows"])
        assert all(r["pr"] is None for r in doc["rows"])

    def test_bad_j12(self):
        assert run("compare", "9/2", 3, "11/2", 6, 20).exit_code == 3

    def test_parallel_identical(self):
        a = run("compare", 5, 4, 6, 5, 5, "--parallel", 1).output
        b = run("compare", 5, 4, 6, 5, 5, "--parallel", 3).output
        assert a == b


class TestRegion:
    def test_square_and_spots(self):
        doc = check_json(run("region", 5, 3.5, 6, 6.5, "--classical", "--grid", 8, "--format", "json"), "region")
        assert doc["j12_range"] == [1.5, 8.5] and doc["j23_range"] == [2.5, 9.5]
        spots = [p for p in doc["points"] if p["kind"] == "spot"]
        assert len(spots) == 49
        assert {p["region"] for p in doc["points"]} <= {"U", "A", "F", "C", "B"}

    def test_spins_same_as_lengths(self):
        a = run("region", "9/2", 3, "11/2", 6, "--grid", 8).output
        b = run("region", 5, 3.5, 6, 6.5, "--classical", "--grid", 8).output
        assert a == b

    def test_parallel_identical(self):
        a = run("region", "9/2", 3, "11/2", 6, "--grid", 12).output
        b = run("region", "9/2", 3, "11/2", 6, "--grid", 12, "--parallel", 2).output
        assert a == b

    def test_grid_floor_and_polygon(self):
        assert run("region", 1, 1, 1, 1, "--grid", 4).exit_code == 2
        assert run("region", 1, 1, 1, 9, "--classical").exit_code == 3


class TestCausticSphere:
    def test_caustic(self):
        doc = check_json(run("caustic", "9/2", 3, "11/2", 6, "--grid", 8, "--format", "json"), "caustic")
        assert len(doc["points"]) >= 8
        out = rows(run("caustic", "9/2", 3, "11/2", 6, "--grid", 8))
        assert out[0] == ["J12", "J23"]

    def test_sphere(self):
        doc = check_json(run("sphere", "9/2", 3, "11/2", 6, "--grid", 16, "--format", "json"), "sphere")
        j12 = [c for c in doc["curves"] if c["observable"] == "J12"]
        assert len(j12) == 7
        for c in j12:
            zs = {round(p[2], 12) for p in c["points"]}
            assert len(zs) == 1
        for c in doc["curves"]:
            for x, y, z in c["points"]:
                assert x * x + y * y + z * z == pytest.approx(1, abs=1e-12)

    def test_sphere_deterministic(self):
        a = run("sphere", 1, 1, 1, 1, "--grid", 8).output
        assert a == run("sphere", 1, 1, 1, 1, "--grid", 8).output
        assert "\r" not in a


class TestNetwork:
    def test_tetra_matches_exact(self):
        path = CORPUS / "tetra_111111_yutsis.json"
        a = run("network", path).output
        b = run("exact", 1, 1, 1, 1, 1, 1).output
        assert a == b

    def test_theta(self):
        assert run("network", CORPUS / "theta_111_standard.json").output.startswith("1·√1")

    def test_json(self):
        check_json(run("network", CORPUS / "theta_mixed_standard.json", "--format", "json"), "network_value")

    def test_standardize(self):
        doc = check_json(run("network", CORPUS / "tetra_111111_yutsis.json", "--standardize"), "network")
        assert len(doc["nodes"]) == 10

    def test_all_corpus_files_validate(self):
        for p in CORPUS.glob("*.json"):
            if p.name != "expected.json":
                jsonschema.validate(json.loads(p.read_text()), schema("network"))

    def test_malformed(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"nodes": [\n  {"id": "A",, }]}')
        r = run("network", bad)
        assert r.exit_code == 2
        assert "bad.json:2:" in r.output

    def test_missing_file(self):
        assert run("network", "/nonexistent.json").exit_code == 2


def test_selftest():
    r = run("selftest")
    assert r.exit_code == 0
    assert "FAIL" not in r.output
