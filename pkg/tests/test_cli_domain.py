"""Tests for the `effdom domain` command group.

Poset files are resolved through the samples bundled in effdom.data,
so bare file names work from any working directory.
"""

from typer.testing import CliRunner

from effdom.cli import app

runner = CliRunner()


# ---------------------------------------------------------------------------
# domain check --file
# ---------------------------------------------------------------------------


def test_check_two_chain(default_config):
    """⊥ ⪯ ⊤ has opens ∅, {⊤} and everything.

    Expected:
        - Exit code 0.
        - Both elements compact; three Scott opens; T0 holds.
    """
    result = runner.invoke(app, ["domain", "check", "--file", "two_chain.poset"])

    assert result.exit_code == 0
    assert result.output.splitlines() == [
        "poset two_chain (2 elements)",
        "compact: 0 1",
        "Scott opens (3):",
        "  {}",
        "  {1}",
        "  {0, 1}",
        "T0: yes",
        "conditionally connected: yes",
    ]


def test_check_diamond_reports_witness(default_config):
    result = runner.invoke(app, ["domain", "check", "-f", "diamond.poset"])

    assert result.exit_code == 0
    assert "Scott opens (6):" in result.output
    assert "conditionally connected: no, witness (1, 2, 3)" in result.output


def test_check_file_on_disk(default_config, tmp_path):
    poset_file = tmp_path / "three.poset"
    poset_file.write_text("poset three 3\ncover 0 1\ncover 1 2\n")

    result = runner.invoke(app, ["domain", "check", "-f", str(poset_file)])

    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "poset three (3 elements)"


def test_check_rejects_large_poset(default_config, tmp_path):
    """Six elements exceed the default scott_cap of 5."""
    poset_file = tmp_path / "six.poset"
    poset_file.write_text("poset six 6\n")

    result = runner.invoke(app, ["domain", "check", "-f", str(poset_file)])

    assert result.exit_code == 2
    assert "Error:" in result.output


def test_check_missing_file(default_config):
    result = runner.invoke(app, ["domain", "check", "-f", "nowhere.poset"])

    assert result.exit_code == 2
    assert "no such file" in result.output


def test_check_needs_exactly_one_source(default_config):
    neither = runner.invoke(app, ["domain", "check"])
    both = runner.invoke(app, ["domain", "check", "cantor", "-f", "diamond.poset"])

    assert neither.exit_code == 2
    assert both.exit_code == 2
    assert "either a domain name or --file" in both.output


# ---------------------------------------------------------------------------
# domain check NAME
# ---------------------------------------------------------------------------


def test_check_cantor(default_config):
    result = runner.invoke(app, ["domain", "check", "cantor", "-N", "16"])

    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "domain cantor (N=16)"
    assert lines[-2].endswith("0 mismatches")
    assert lines[-1] == "  conditionally connected: yes"


def test_check_interval_not_connected(default_config):
    """[0,1/3] and [1/3,1] both lie below the point 1/3 but have no meet above them."""
    result = runner.invoke(app, ["domain", "check", "interval(0,1)", "-N", "16"])

    assert result.exit_code == 0
    assert (
        "  conditionally connected: no, [0, 1/3] and [1/3, 1] below [1/3, 1/3]"
        in result.output
    )


def test_check_weak_basis_domain(default_config):
    result = runner.invoke(app, ["domain", "check", "turing", "-N", "8"])

    assert "  way-below: none (weak basis only)" in result.output


def test_check_unknown_domain(default_config):
    result = runner.invoke(app, ["domain", "check", "hilbert"])

    assert result.exit_code == 2
    assert "unknown domain" in result.output


# ---------------------------------------------------------------------------
# domain wb
# ---------------------------------------------------------------------------


def test_wb_cantor(default_config):
    """`domain wb --name cantor --a "01" --b "011"`: prefixes are way-below."""
    yes = runner.invoke(app, ["domain", "wb", "--name", "cantor", "--a", "01", "--b", "011"])
    no = runner.invoke(app, ["domain", "wb", "--name", "cantor", "--a", "01", "--b", "001"])

    assert yes.exit_code == 0
    assert yes.output.strip() == "yes"
    assert no.output.strip() == "no"


def test_wb_defaults_to_cantor(default_config):
    yes = runner.invoke(app, ["domain", "wb", "--a", "0", "--b", "01"])
    no = runner.invoke(app, ["domain", "wb", "--a", "1", "--b", "01"])

    assert yes.output.strip() == "yes"
    assert no.output.strip() == "no"


def test_wb_interval(default_config):
    """The ambient interval is way-below everything; a point is way-below nothing wider."""
    yes = runner.invoke(
        app, ["domain", "wb", "--name", "interval(0,1)", "--a", "[0, 1]", "--b", "[1/3, 1/2]"]
    )
    no = runner.invoke(
        app, ["domain", "wb", "-d", "interval(0,1)", "--a", "[1/3, 1/3]", "--b", "[1/3, 1/3]"]
    )

    assert yes.output.strip() == "yes"
    assert no.output.strip() == "no"


def test_wb_poset_file(default_config):
    below = runner.invoke(app, ["domain", "wb", "--a", "0", "--b", "3", "-f", "diamond.poset"])
    apart = runner.invoke(app, ["domain", "wb", "--a", "1", "--b", "2", "-f", "diamond.poset"])

    assert below.output.strip() == "yes"
    assert apart.output.strip() == "no"


def test_wb_poset_index_out_of_range(default_config):
    result = runner.invoke(app, ["domain", "wb", "--a", "0", "--b", "9", "-f", "diamond.poset"])

    assert result.exit_code == 2
    assert "0..3" in result.output


def test_wb_weak_basis(default_config):
    """turing has no way-below relation to decide."""
    result = runner.invoke(app, ["domain", "wb", "--name", "turing", "--a", "0", "--b", "1"])

    assert result.exit_code == 2


def test_wb_needs_both_values(default_config):
    result = runner.invoke(app, ["domain", "wb", "--a", "0"])

    assert result.exit_code == 2
    assert "--b" in result.output


# ---------------------------------------------------------------------------
# domain witness / sample
# ---------------------------------------------------------------------------


def test_witness_flipped_unit(default_config):
    result = runner.invoke(app, ["domain", "witness", "flipped_unit", "1/4", "-K", "20"])

    assert result.exit_code == 0
    assert "(1/2, 1]" in result.output
    assert result.output.splitlines()[-1] == "PASS: 20 members checked"


def test_witness_fan_branch(default_config):
    """A point of branch 2 is avoided by climbing branch 3."""
    result = runner.invoke(app, ["domain", "witness", "fan", "2:5", "-K", "30"])

    assert result.exit_code == 0
    assert "I_3" in result.output
    assert "PASS: 30 members checked" in result.output


def test_witness_q_domain(default_config):
    result = runner.invoke(app, ["domain", "witness", "q_domain", "5/2", "-K", "25"])

    assert result.exit_code == 0
    assert "PASS: 25 members checked" in result.output


def test_witness_unknown_for_cantor(default_config):
    result = runner.invoke(app, ["domain", "witness", "cantor", "0"])

    assert result.exit_code == 2
    assert "no witness limit known" in result.output


def test_sample_random_posets(default_config):
    result = runner.invoke(
        app, ["domain", "sample", "--count", "5", "--size", "5", "--seed", "3"]
    )

    assert result.exit_code == 0
    assert result.output.strip() == "PASS: 5 posets of size 5, oracle agrees with the order"


def test_sample_rejects_carrier_above_cap(default_config):
    result = runner.invoke(app, ["domain", "sample", "--count", "1", "--size", "13"])

    assert result.exit_code == 2
