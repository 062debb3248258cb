"""
End-to-end CLI tests: argv in, JSON on stdout, exit code out.

Usage:
    pytest scripts/test_cli.py
"""
import json

import pytest

from app.cli.common import normalize_argv
from app.main import main
from app.models.reports import PropertyResult, SuiteResult
from app.services import families


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def betti(payload, k):
    return next(d["betti"] for d in payload["homology"] if d["k"] == k)


def csv(values):
    return ",".join(str(x) for x in values)


# ============================================================================
# Argument handling
# ============================================================================

def test_normalize_argv_glues_negative_values():
    assert normalize_argv(["--interval", "-2:0", "--deep"]) == ["--interval=-2:0", "--deep"]
    assert normalize_argv(["--w2", "0,0,-1"]) == ["--w2", "0,0,-1"]
    assert normalize_argv(["--into", "--deep"]) == ["--into", "--deep"]


@pytest.mark.parametrize(
    "argv",
    [
        ["finiteness", "--w1", "1,0,0"],
        ["finiteness", "--w1", "1,x,0", "--w2", "0,0,-1"],
        ["building", "ball", "--p", "4", "--dim", "2", "--radius", "1"],
        ["building", "ball", "--p", "3", "--dim", "2", "--radius", "1", "--model", "affine"],
        ["building", "slice-homology", "--p", "2", "--dim", "2", "--radius", "1", "--w", "1,-1", "--interval", "1"],
        ["verify", "--suite", "nope"],
        ["frobnicate"],
    ],
)
def test_bad_flags_exit_one(capsys, argv):
    code, payload = run_json(capsys, *argv)
    assert code == 1
    assert payload["error"] == "BadFlag"


# ============================================================================
# finiteness
# ============================================================================

def test_finiteness_abels_pair(capsys):
    code, report = run_json(capsys, "finiteness", "--w1", "1,0,0", "--w2", "0,0,-1")
    assert code == 0
    assert report["command"] == "finiteness"
    results = report["results"]
    assert (results["classical"], results["bredon"], results["m"]) == (1, 0, 1)
    assert results["witness"] == [[1, 3], [2]]
    assert results["sign_group_order"] == 2
    assert "timings" not in report


def test_finiteness_prescribed_pair(capsys):
    code, report = run_json(capsys, "finiteness", "--w1", "2,2,2,2", "--w2", "1,1,0,-2")
    assert code == 0
    assert (report["results"]["classical"], report["results"]["bredon"]) == (2, 1)


def test_finiteness_rejects_non_monotone(capsys):
    code, payload = run_json(capsys, "finiteness", "--w1", "0,1", "--w2", "0,-1")
    assert code == 1
    assert payload["error"] == "NotMonotone"


def test_finiteness_oracle(capsys):
    code, report = run_json(capsys, "finiteness", "--w1", "1,1,1,0,0", "--w2", "0,0,-1,-1,-1", "--oracle")
    assert code == 0
    assert report["results"]["oracle_agrees"] is True
    assert report["parameters"]["oracle"] is True


def test_finiteness_reports_stated_value(capsys):
    pair = families.overlap_pair(2)
    code, report = run_json(capsys, "finiteness", "--w1", csv(pair.w1), "--w2", csv(pair.w2))
    assert code == 0
    stated = report["results"]["stated"]
    assert stated["k"] == 2 and stated["doubled"] is False
    assert stated["computed_m"] == report["results"]["m"] == 2
    assert stated["published"]["minimal_admissible_essential_dimension"] == 3
    assert stated["discrepancy"] is True


def test_finiteness_is_deterministic(capsys):
    argv = ("finiteness", "--w1", "2,2,2,2", "--w2", "1,1,0,-2")
    first, second = run(capsys, *argv), run(capsys, *argv)
    assert first == second


def test_finiteness_timings_opt_in(capsys):
    _, report = run_json(capsys, "finiteness", "--w1", "1,0,0", "--w2", "0,0,-1", "--timings")
    assert "total_seconds" in report["timings"]


def test_text_format(capsys):
    code, out = run(capsys, "finiteness", "--w1", "1,0,0", "--w2", "0,0,-1", "--format", "text")
    assert code == 0
    assert out.startswith("finiteness\n")
    assert "  classical: 1\n" in out


# ============================================================================
# building
# ============================================================================

def test_ball_tree(capsys):
    code, report = run_json(capsys, "building", "ball", "--p", "3", "--dim", "2", "--radius", "1", "--model", "quotient")
    assert code == 0
    results = report["results"]
    assert (results["vertices"], results["edges"]) == (5, 4)
    assert results["euler_characteristic"] == 1
    assert results["neighbor_count"] == 4
    assert report["truncation"]["radius"] == 1


def test_ball_cap_exits_two(capsys):
    code, payload = run_json(capsys, "building", "ball", "--p", "2", "--dim", "3", "--radius", "2", "--cap", "20")
    assert code == 2
    assert payload["error"] == "CapExceeded"


def test_ball_exports(capsys, tmp_path):
    dot, dump = tmp_path / "ball.dot", tmp_path / "ball.json"
    code, _ = run(
        capsys,
        "building", "ball", "--p", "3", "--dim", "2", "--radius", "1",
        "--w", "1,-1", "--dot", str(dot), "--json-dump", str(dump),
    )
    assert code == 0
    assert dot.read_text().count(" -- ") == 4
    assert len(json.loads(dump.read_text())["vertices"]) == 5


# negative heights point toward the end fixed by upper triangular matrices
@pytest.mark.parametrize("interval, expected", [("0:2", 1), ("-2:0", 0)])
def test_slice_homology_tree(capsys, interval, expected):
    code, report = run_json(
        capsys,
        "building", "slice-homology", "--p", "2", "--dim", "2", "--radius", "4",
        "--w", "1,-1", "--interval", interval, "--deep",
    )
    assert code == 0
    assert betti(report["results"], 0) == expected
    assert report["truncation"]["deep"] is True


def test_slice_homology_induced_map(capsys):
    code, report = run_json(
        capsys,
        "building", "slice-homology", "--p", "2", "--dim", "2", "--radius", "6",
        "--w", "1,-1", "--interval", "-1:0", "--into", "-3:0", "--deep",
    )
    assert code == 0
    assert betti(report["results"], 0) == 3
    assert betti(report["results"]["into"], 0) == 1
    assert report["results"]["induced_maps"]["0"]["kind"] == "zero"


def test_slice_homology_empty_slice(capsys):
    code, report = run_json(
        capsys,
        "building", "slice-homology", "--p", "3", "--dim", "2", "--radius", "1",
        "--w", "1,-1", "--interval", "5:6",
    )
    assert code == 0
    assert report["results"] == {"vertices": 0, "empty": True}


def test_slice_homology_length_mismatch(capsys):
    code, payload = run_json(
        capsys,
        "building", "slice-homology", "--p", "3", "--dim", "2", "--radius", "1",
        "--w", "1,0,-1", "--interval", "0:1",
    )
    assert code == 1
    assert payload["error"] == "LengthMismatch"


def test_fixed_points_at_two(capsys):
    code, report = run_json(capsys, "building", "fixed-points", "--p", "2", "--dim", "2", "--radius", "2", "--signs", "+-")
    assert code == 0
    tallies = report["results"]["tallies"]
    assert tallies["fixed_not_split"] >= 1
    assert report["results"]["fixed_not_split_examples"]


def test_fixed_points_odd_prime_is_a_product(capsys):
    code, report = run_json(capsys, "building", "fixed-points", "--p", "3", "--dim", "3", "--radius", "1", "--signs", "+-+")
    assert code == 0
    assert report["results"]["product_check"] is True
    assert report["results"]["tallies"]["fixed_not_split"] == 0


def test_fixed_points_needs_extended_model(capsys):
    code, payload = run_json(
        capsys, "building", "fixed-points", "--p", "3", "--dim", "2", "--radius", "1", "--signs", "+-", "--model", "quotient"
    )
    assert code == 1
    assert payload["error"] == "ClassModelMismatch"


# ============================================================================
# verify
# ============================================================================

def test_verify_single_suite(capsys):
    code, report = run_json(capsys, "verify", "--suite", "homology")
    assert code == 0
    assert report["results"]["passed"] is True
    assert report["parameters"]["seed"] == 7
    assert set(report["results"]["suites"]) == {"homology"}


@pytest.mark.slow
def test_verify_all_is_reproducible(capsys):
    first = run(capsys, "verify", "--suite", "all", "--seed", "7")
    second = run(capsys, "verify", "--suite", "all", "--seed", "7")
    assert first[0] == 0
    assert first == second


def test_verify_failure_exits_three(capsys, monkeypatch):
    import app.worker.tasks as tasks

    def failing(suite, seed):
        bad = PropertyResult(name="always_fails", passed=False, cases=1, counterexample={"x": 1})
        return SuiteResult(suite=suite, seed=seed, properties=[bad])

    monkeypatch.setattr(tasks, "run_property_suite", failing)
    code, payload = run_json(capsys, "verify", "--suite", "lattice")
    assert code == 3
    assert payload["error"] == "PropertyFailed"
    assert payload["counterexample"]["lattice"][0]["counterexample"] == {"x": 1}
