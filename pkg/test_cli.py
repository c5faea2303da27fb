#!/usr/bin/env python3
"""
Tests for the command-line front end: exit codes, output formats and report stability.
"""

import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

from tateforge.cli import EXIT_ENGINE, EXIT_INVALID, EXIT_OK, build_parser, config_from_args, join_range_flags, main
from tateforge.reports import Report, render_tsv


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_margolis_json():
    code, out, _ = run_cli("margolis", "--space", "y1", "--q", "1", "--max-degree", "12", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert sorted(report) == ["certified_window", "config", "provenance", "tables", "verdicts"]
    assert report["certified_window"]["hi"] == 9
    names = {v["name"]: v for v in report["verdicts"]}
    assert names["closed_form"]["passed"]
    assert names["qm_two_paths"]["passed"]


def test_json_output_is_deterministic():
    argv = ("tate-e3", "--n", "1", "--cols", "-2..2", "--max-degree", "10", "--format", "json")
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first[0] == second[0] == EXIT_OK
    assert first[1] == second[1]


def test_tate_chart_tsv():
    code, out, _ = run_cli("tate-e3", "--n", "1", "--cols", "-1..1", "--max-degree", "8", "--format", "tsv")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "column\tinternal_degree\tdimension\tpage"
    assert len(lines) == 1 + 3 * 9
    assert lines[1] == "-1\t0\t1\t3"


def test_negative_ranges():
    code, _, err = run_cli("tate-e3", "--n", "1", "--cols", "-6..6", "--max-degree", "12")
    assert code == EXIT_OK, err
    code, out, err = run_cli(
        "tower", "--side", "tp", "--n", "1", "--q", "2", "--i-range", "-3..0",
        "--max-degree", "10", "--window", "4", "--format", "json",
    )
    assert code == EXIT_OK, err
    assert [row["i"] for row in json.loads(out)["tables"]["tower"]] == [-3, -2, -1, 0]
    assert join_range_flags(["tate-e3", "--cols", "-2..2", "--n", "1"]) == ["tate-e3", "--cols=-2..2", "--n", "1"]
    assert join_range_flags(["tate-e3", "--cols"]) == ["tate-e3", "--cols"]


def test_tcminus_tower_at_degree_cap():
    code, out, err = run_cli(
        "tower", "--side", "tcminus", "--n", "2", "--q", "0", "--i-range", "1..2",
        "--max-degree", "14", "--format", "json",
    )
    assert code == EXIT_OK, err
    assert [row["i"] for row in json.loads(out)["tables"]["limits"]] == [1, 2]


def test_output_file():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "report.json")
        code, out, _ = run_cli("catalog", "--space", "thhy1", "--max-degree", "8", "--output", path)
        assert code == EXIT_OK
        assert out == ""
        with open(path, encoding="utf-8") as handle:
            report = json.load(handle)
    assert report["tables"]["comodule"]["exotic_rules"]
    assert report["tables"]["dims"][2] == {"degree": 2, "dim": 2}


def test_hochschild_command():
    code, out, _ = run_cli("hochschild", "--algebra", "z1sq", "--max-degree", "10", "--s-max", "4", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["config"]["max_degree"] == 10
    assert all(v["passed"] for v in report["verdicts"])


def test_tower_command():
    code, out, _ = run_cli(
        "tower", "--side", "tp", "--n", "1", "--q", "1", "--i-range", "0..2",
        "--max-degree", "10", "--window", "5", "--format", "json",
    )
    assert code == EXIT_OK
    report = json.loads(out)
    assert [row["verdict"] for row in report["tables"]["tower"]] == ["ZERO", "ZERO", "ZERO"]


def test_chromatic_command():
    code, out, _ = run_cli(
        "chromatic", "--n", "1", "--m-max", "2", "--i-range", "0..2",
        "--max-degree", "14", "--window", "5", "--format", "json",
    )
    assert code == EXIT_OK
    rows = json.loads(out)["tables"]["chromatic"]
    assert [row["m"] for row in rows] == [0, 1, 2]
    assert not rows[1]["y_localized_e2_vanishes"]
    assert rows[1]["tp_pro_trivial"]
    assert not rows[0]["tp_pro_trivial"]


def test_text_format():
    code, out, _ = run_cli("margolis", "--space", "hz", "--q", "0", "--max-degree", "10")
    assert code == EXIT_OK
    assert "tateforge margolis" in out
    assert "Verdicts" in out


def test_invalid_input_exit_codes():
    cases = [
        ("bogus",),
        ("margolis", "--space", "y1"),
        ("margolis", "--space", "q7", "--q", "1"),
        ("margolis", "--space", "y1", "--q", "1", "--max-degree", "4"),
        ("margolis", "--space", "y1", "--q", "12"),
        ("tate-e3", "--n", "abc"),
        ("tate-e3", "--n", "1", "--cols", "3..1"),
        ("tower", "--n", "0", "--q", "1"),
        ("hfp-e3", "--n", "1", "--cols", "-2..2"),
    ]
    for argv in cases:
        code, out, err = run_cli(*argv)
        assert code == EXIT_INVALID, (argv, code, err)
        assert out == ""
        assert "invalid input" in err


def test_engine_error_exit_code():
    code, _, err = run_cli("hochschild", "--algebra", "y1", "--max-degree", "30")
    assert code == EXIT_ENGINE
    assert "SizeGuard" in err


def test_n_inf_flag():
    args = build_parser().parse_args(["tate-e3", "--n", "inf", "--max-degree", "10"])
    config = config_from_args(args)
    assert config.n_inf and config.n is None
    assert config.to_dict()["n"] == "inf"


def test_report_exit_code():
    report = Report({"command": "margolis"})
    report.add_verdict("soft", False, certified=False)
    assert report.exit_code == 0
    report.add_verdict("hard", False)
    assert report.exit_code == 1
    assert [v.name for v in report.failed] == ["hard"]
    assert "verdict\thard\tFAIL" in render_tsv(report)


TESTS = [
    test_margolis_json,
    test_json_output_is_deterministic,
    test_tate_chart_tsv,
    test_negative_ranges,
    test_tcminus_tower_at_degree_cap,
    test_output_file,
    test_hochschild_command,
    test_tower_command,
    test_chromatic_command,
    test_text_format,
    test_invalid_input_exit_codes,
    test_engine_error_exit_code,
    test_n_inf_flag,
    test_report_exit_code,
]


def main_tests():
    print("=" * 60)
    print("CLI TESTS")
    print("=" * 60)
    failed = 0
    for test in TESTS:
        try:
            test()
            print(f"✅ {test.__name__}")
        except AssertionError as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print("=" * 60)
    return failed


if __name__ == "__main__":
    raise SystemExit(main_tests())
