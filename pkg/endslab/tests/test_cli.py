#  SPDX-FileCopyrightText: 2026 endslab contributors
#  SPDX-License-Identifier: GPL-3.0-or-later

import json
import pytest

from endslab import cli


def _main(argv):
    with pytest.raises(SystemExit) as e:
        cli.main(argv)
    return e.value.code


def test_parse_check(capsys):
    assert _main(["parse-check", "product( free(2),Z )"]) == cli.EXIT_OK
    assert capsys.readouterr().out == "product(free(2), Z): 3 generators\n"


def test_parse_check_syntax_error(capsys):
    assert _main(["parse-check", "product(free(2) Z)"]) == cli.EXIT_PARSE
    assert "1:17" in capsys.readouterr().err


def test_parse_check_constraint_error():
    assert _main(["parse-check", "cyclic(4, 5)"]) == cli.EXIT_PARSE


def test_analyze_json(capsys):
    assert _main(["analyze", "Z", "--rmax", "1", "--Rmax", "6"]) == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["group"] == "Z"
    assert doc["classification"] == "two"
    assert doc["stable_e"] == 2
    assert {"r": 1, "R": 6, "e": 2} in doc["profile"]
    assert doc["budget"]["complete"]


def test_analyze_table(capsys):
    assert _main(["analyze", "Z^2", "--rmax", "1", "--Rmax", "6", "--format", "table"]) == cli.EXIT_OK
    assert "classification: one" in capsys.readouterr().out


def test_analyze_selected_analyses(capsys):
    argv = ["analyze", "product(Z, cyclic(2))", "--rmax", "2", "--Rmax", "8", "--analyses", "action,profile"]
    assert _main(argv) == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert [a["g"] for a in doc["actions"]] == ["a", "b"]
    assert all(a["fixes_all"] for a in doc["actions"])


def test_analyze_unknown_analysis(capsys):
    assert _main(["analyze", "Z", "--analyses", "profile,ends"]) == 2
    assert "unknown analyses" in capsys.readouterr().err


def test_analyze_request_file(capsys, fixtures_dir):
    assert _main(["analyze", "--request", str(fixtures_dir / "request1.yaml")]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("group: semidirect_fz(table(s3.table), 1)\n")


def test_analyze_request_file_format_override(capsys, fixtures_dir):
    argv = ["analyze", "--request", str(fixtures_dir / "request1.yaml"), "--format", "json"]
    assert _main(argv) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["classification"] == "two"


def test_analyze_invalid_request(fixtures_dir):
    assert _main(["analyze", "--request", str(fixtures_dir / "request-invalid.yaml")]) == cli.EXIT_ERROR


def test_analyze_margin_violated():
    assert _main(["analyze", "Z", "--rmax", "3", "--Rmax", "9"]) == cli.EXIT_ERROR


def test_analyze_needs_a_spec():
    assert _main(["analyze"]) == cli.EXIT_ERROR


def test_analyze_budget_exceeded(capsys):
    assert _main(["analyze", "free(2)", "--rmax", "1", "--Rmax", "8", "--budget", "1500"]) == cli.EXIT_BUDGET
    doc = json.loads(capsys.readouterr().out)
    assert not doc["budget"]["complete"]
    assert doc["budget"]["overflow_radius"] == 7


def test_analyze_dot(capsys):
    assert _main(["analyze", "Z", "--rmax", "1", "--Rmax", "6", "--format", "dot", "--radius", "2"]) == cli.EXIT_OK
    assert capsys.readouterr().out.count("->") == 4


def test_export_dot(capsys):
    assert _main(["export-dot", "free(2)", "--radius", "1"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('digraph "free(2)" {')
    assert out.count("->") == 4


def test_export_ball(capsys):
    assert _main(["export-ball", "rel(Z^2, [(1, 0)])", "--radius", "2"]) == cli.EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["generators"] == ["a", "b"]
    assert len(data["vertices"]) == 5


def test_export_ball_budget(capsys):
    assert _main(["export-ball", "free(2)", "--radius", "6", "--budget", "100"]) == cli.EXIT_BUDGET
    assert "vertex budget 100" in capsys.readouterr().err
