"""Tests for the `effdom complexity` command group.

Audit tables are rendered by rich; assertions stick to the plain lines
printed after the table and to the CSV and JSON emitters.
"""

import json

from typer.testing import CliRunner

from effdom.cli import app
from effdom.complexity import read_audit_csv

runner = CliRunner()


def _audit_csv(*args: str) -> str:
    result = runner.invoke(app, ["complexity", "audit", *args, "--emit", "csv"])
    assert result.exit_code == 0, result.output
    return result.output


# ---------------------------------------------------------------------------
# complexity audit
# ---------------------------------------------------------------------------


def test_audit_one_preset(default_config):
    """φ₀ meets 2^(n+2) + 12 but no polynomial dominates its cost.

    Expected:
        - Exit code 0.
        - Closing lines give the polynomial verdict, then PASS.
    """
    result = runner.invoke(app, ["complexity", "audit", "--element", "one", "-n", "8"])

    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[-2] == "no polynomial fit ≤ degree 3 on n < 8"
    assert lines[-1] == "PASS"


def test_audit_sqrt2_is_linear(default_config):
    result = runner.invoke(app, ["complexity", "audit", "-e", "sqrt2", "-n", "16"])

    assert result.exit_code == 0
    assert "dominated by 11·(n+1)^1 on n < 16" in result.output


def test_audit_short_run_is_inconclusive(default_config):
    """Three rows give no (m, 2m+1) pair, so no degree is claimed."""
    result = runner.invoke(app, ["complexity", "audit", "--element", "sqrt2", "--take", "3"])

    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[-2] == "inconclusive: 0 doubling pairs on n < 3, need 2"
    assert "dominated by" not in result.output


def test_audit_tight_bound_fails(default_config):
    result = runner.invoke(
        app, ["complexity", "audit", "-e", "one", "-n", "6", "-t", "2**(n+1) + 11"]
    )

    assert result.exit_code == 1
    assert result.output.splitlines()[-1] == "FAIL at n=[0, 1, 2, 3, 4, 5]"


def test_audit_bundled_table_bound(default_config):
    """one_bound.table lists the exact step counts, so every row passes."""
    result = runner.invoke(
        app, ["complexity", "audit", "-e", "one", "-n", "8", "-t", "one_bound.table"]
    )

    assert result.exit_code == 0
    assert result.output.splitlines()[-1] == "PASS"


def test_audit_table_shorter_than_rows(default_config, tmp_path):
    table_file = tmp_path / "short.table"
    table_file.write_text("100\n100\n")

    result = runner.invoke(
        app, ["complexity", "audit", "-e", "one", "-n", "4", "-t", str(table_file)]
    )

    assert result.exit_code == 2


def test_audit_function_preset(default_config):
    result = runner.invoke(app, ["complexity", "audit", "--function", "identity", "-n", "10"])

    assert result.exit_code == 0
    assert result.output.splitlines()[-1] == "PASS"


def test_audit_csv(default_config):
    report = read_audit_csv(_audit_csv("-e", "sqrt2", "-n", "5"))

    assert [row.n for row in report.rows] == [0, 1, 2, 3, 4]
    assert [row.steps for row in report.rows] == [11, 15, 19, 23, 27]


def test_audit_json(default_config):
    result = runner.invoke(app, ["complexity", "audit", "-e", "one", "-n", "3", "--emit", "json"])

    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["measurement"] == "unit"
    assert [row["steps"] for row in data["rows"]] == [14, 16, 20]


def test_audit_needs_exactly_one_subject(default_config):
    neither = runner.invoke(app, ["complexity", "audit"])
    both = runner.invoke(app, ["complexity", "audit", "-e", "one", "--function", "identity"])

    assert neither.exit_code == 2
    assert both.exit_code == 2
    assert "exactly one of --element or --function" in both.output


def test_audit_unknown_format(default_config):
    result = runner.invoke(app, ["complexity", "audit", "-e", "one", "--emit", "xml"])

    assert result.exit_code == 2
    assert "unknown format 'xml'" in result.output


def test_audit_unknown_preset(default_config):
    result = runner.invoke(app, ["complexity", "audit", "-e", "e"])

    assert result.exit_code == 2
    assert "unknown preset" in result.output


def test_audit_bad_bound(default_config):
    result = runner.invoke(app, ["complexity", "audit", "-e", "one", "-t", "n / 2"])

    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# complexity diff
# ---------------------------------------------------------------------------


def test_diff_identical(default_config, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    first.write_text(_audit_csv("-e", "sqrt2", "-n", "6"))
    second.write_text(_audit_csv("-e", "sqrt2", "-n", "6", "-t", "4*n + 11"))

    result = runner.invoke(app, ["complexity", "diff", str(first), str(second)])

    assert result.exit_code == 0
    assert result.output.strip() == "identical: 6 rows"


def test_diff_reports_step_changes(default_config, tmp_path):
    """Row-by-row differences are listed and the command exits 1.

    Scenario:
        - Two rows of the φ₀ audit against two rows of the √2 audit.
    Expected:
        - One line per differing row, naming both step counts.
    """
    first, second = tmp_path / "one.csv", tmp_path / "sqrt2.csv"
    first.write_text(_audit_csv("-e", "one", "-n", "2"))
    second.write_text(_audit_csv("-e", "sqrt2", "-n", "2"))

    result = runner.invoke(app, ["complexity", "diff", str(first), str(second)])

    assert result.exit_code == 1
    assert result.output.splitlines() == ["n=0: steps 14 != 11", "n=1: steps 16 != 15"]


def test_diff_missing_file(default_config, tmp_path):
    result = runner.invoke(
        app, ["complexity", "diff", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]
    )

    assert result.exit_code == 2


# ---------------------------------------------------------------------------
# complexity measure / fan
# ---------------------------------------------------------------------------


def test_measure_unit_induces(default_config):
    result = runner.invoke(app, ["complexity", "measure", "unit", "-N", "32"])

    assert result.exit_code == 0
    assert result.output.splitlines()[-1] == "verdict: induces"


def test_measure_length_is_not_enough(default_config):
    """Strict monotonicity holds but interval(0,1) is not conditionally connected."""
    result = runner.invoke(app, ["complexity", "measure", "length", "-N", "16"])

    assert result.exit_code == 0
    assert "not conditionally connected: [0, 1/3] and [1/3, 1] below [1/3, 1/3]" in result.output
    assert result.output.splitlines()[-1] == "verdict: strictness insufficient, see docs"


def test_measure_wrong_domain(default_config):
    result = runner.invoke(app, ["complexity", "measure", "length", "-d", "cantor"])

    assert result.exit_code == 2
    assert "does not apply to cantor" in result.output


def test_measure_unknown(default_config):
    result = runner.invoke(app, ["complexity", "measure", "entropy"])

    assert result.exit_code == 2


def test_fan(default_config):
    result = runner.invoke(app, ["complexity", "fan", "-k", "4", "--seed", "1"])

    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0].startswith("O′ thresholds: ")
    assert len(lines[0].removeprefix("O′ thresholds: ").split()) == 4
    assert [line.split(":")[0] for line in lines[1:]] == [f"candidate {i}" for i in range(4)]
