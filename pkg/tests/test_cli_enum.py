"""Tests for the `effdom enum` command group."""

from typer.testing import CliRunner

from effdom.cli import app
from effdom.codes import unpair
from effdom.machine import identity, table, take

runner = CliRunner()


def test_trace_identity(default_config):
    """Each line is n, f(n) and the steps evaluation spent."""
    expected = [f"{n}\t{ev.value}\t{ev.steps}" for n, ev in enumerate(take(identity(), 4))]

    result = runner.invoke(app, ["enum", "trace", "identity", "-n", "4"])

    assert result.exit_code == 0
    assert result.output.splitlines() == expected


def test_trace_start_offset(default_config):
    result = runner.invoke(app, ["enum", "trace", "table:7,8,9", "-n", "2", "--start", "4"])

    assert result.exit_code == 0
    assert [line.split("\t")[:2] for line in result.output.splitlines()] == [
        ["4", "8"],
        ["5", "9"],
    ]


def test_trace_schedule_cells(default_config):
    """`enum trace --schedule shell` prints the (g,h) cell visited at each n."""
    result = runner.invoke(app, ["enum", "trace", "--schedule", "shell", "--take", "5"])

    assert result.exit_code == 0
    assert result.output.splitlines() == [
        "0\t(0,0)",
        "1\t(1,1)",
        "2\t(0,1)",
        "3\t(1,0)",
        "4\t(2,2)",
    ]


def test_trace_diagonal_cells_follow_unpair(default_config):
    result = runner.invoke(app, ["enum", "trace", "--schedule", "diagonal", "-n", "6"])

    assert result.exit_code == 0
    assert result.output.splitlines() == [
        f"{n}\t({unpair(n)[0]},{unpair(n)[1]})" for n in range(6)
    ]


def test_trace_needs_program_or_schedule(default_config):
    neither = runner.invoke(app, ["enum", "trace"])
    both = runner.invoke(app, ["enum", "trace", "identity", "--schedule", "shell"])

    assert neither.exit_code == 2
    assert both.exit_code == 2
    assert "either a program or --schedule" in both.output


def test_range_lists_first_outputs_with_steps(default_config):
    """`enum range --take 3` on 3, 1, 4, 1: each new value with its argument and total steps.

    Expected:
        - One line per distinct output in order of first appearance.
        - The step column is the running total up to that argument.
    """
    runs = take(table([3, 1, 4, 1]), 3)
    totals = [sum(ev.steps for ev in runs[: n + 1]) for n in range(3)]

    result = runner.invoke(app, ["enum", "range", "table:3,1,4,1", "--take", "3"])

    assert result.exit_code == 0
    assert result.output.splitlines() == [
        f"0\t3\t{totals[0]}",
        f"1\t1\t{totals[1]}",
        f"2\t4\t{totals[2]}",
    ]


def test_range_skips_repeats(default_config):
    result = runner.invoke(app, ["enum", "range", "table:1,1,2", "--take", "2"])

    assert [line.split("\t")[:2] for line in result.output.splitlines()] == [
        ["0", "1"],
        ["2", "2"],
    ]


def test_range_of_finite_set_stops_at_budget(default_config):
    result = runner.invoke(app, ["enum", "range", "table:5", "--take", "4", "--budget", "10"])

    assert result.exit_code == 0
    assert [line.split("\t")[1] for line in result.output.splitlines()] == ["5"]


def test_scan_found(default_config):
    result = runner.invoke(app, ["enum", "scan", "table:5,7,9,11,13", "13"])

    assert result.exit_code == 0
    assert result.output.strip() == "found at n=4"


def test_scan_not_found_is_inconclusive(default_config):
    """A miss within the budget exits 1 without claiming non-membership.

    Expected:
        - Exit code 1.
        - Output names the scanned count and says "inconclusive".
    """
    result = runner.invoke(app, ["enum", "scan", "table:1,2", "9", "--budget", "6"])

    assert result.exit_code == 1
    assert result.output.strip() == "not found within 6 (inconclusive)"


def test_scan_element_stream(default_config):
    """evens emits 2n, so 10 appears at n = 5."""
    result = runner.invoke(app, ["enum", "scan", "evens", "10"])

    assert result.output.strip() == "found at n=5"


def test_merge_walks_square_shells(default_config):
    result = runner.invoke(app, ["enum", "merge", "identity", "identity", "-n", "4"])

    assert result.exit_code == 0
    cells = [line.split("\t")[1] for line in result.output.splitlines()]
    assert cells == ["default", "(0,0)", "(1,1)", "(0,1)"]


def test_merge_diagonal(default_config):
    result = runner.invoke(
        app, ["enum", "merge", "identity", "identity", "-n", "3", "--schedule", "diagonal"]
    )

    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 3


def test_fair_default_window(default_config):
    result = runner.invoke(app, ["enum", "fair"])

    assert result.exit_code == 0
    assert result.output.strip() == "PASS: shell covers 32×32"


def test_fair_short_horizon_misses_last_cell(default_config):
    """Shell 31 ends with (31, 30), the cell at step 1023."""
    result = runner.invoke(app, ["enum", "fair", "--horizon", "1023"])

    assert result.exit_code == 1
    assert result.output.strip() == "FAIL: 1 cells missing, first (31,30)"


def test_fair_diagonal_needs_longer_horizon(default_config):
    failing = runner.invoke(app, ["enum", "fair", "--schedule", "diagonal", "--horizon", "1984"])
    passing = runner.invoke(app, ["enum", "fair", "--schedule", "diagonal", "--horizon", "1985"])

    assert failing.exit_code == 1
    assert "first (31,31)" in failing.output
    assert passing.exit_code == 0


def test_unknown_schedule(default_config):
    result = runner.invoke(app, ["enum", "fair", "--schedule", "zigzag"])

    assert result.exit_code == 2
    assert "unknown schedule" in result.output


def test_unknown_program(default_config):
    result = runner.invoke(app, ["enum", "trace", "fibonacci"])

    assert result.exit_code == 2
    assert "unknown program" in result.output


def test_bad_table_entries(default_config):
    result = runner.invoke(app, ["enum", "range", "table:1,x"])

    assert result.exit_code == 2
    assert "naturals" in result.output


def test_fuel_from_config(default_config):
    """A tiny fuel ceiling stops the π stream at its first expensive emission."""
    default_config.fuel = 3

    result = runner.invoke(app, ["enum", "trace", "pi", "-n", "4"])

    assert result.exit_code == 2
    assert "Error:" in result.output
