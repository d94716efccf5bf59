"""Tests for the built-in domains, limits, audits and not-way-below witnesses."""

from fractions import Fraction
from itertools import islice

import pytest

from effdom.codes import CodeError, Interval, encode_string, pair
from effdom.domains import (
    EVENS,
    Q_TOP,
    ZEROS,
    LimitMismatch,
    NoWitnessKnown,
    UnknownDomain,
    Witness,
    builtin_domain,
    check_axioms,
    check_conditionally_connected,
    check_effective_basis,
    flipped_half_limit,
    flipped_unit_domain,
    fan_domain,
    interval_chain_semi_oracle,
    is_connectivity_witness,
    not_way_below_witness,
    permutation_maps,
    point_limit,
    q_domain,
    q_leq,
    rational_limit,
    real_limit,
    relabel_domain,
    split_segment_domain,
    top_limit,
    triadic_unit_interval_domain,
    turing_domain,
    way_below_graph,
)
from effdom.machine import evaluate


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def test_builtin_domain_names() -> None:
    assert builtin_domain("cantor").name == "cantor"
    assert builtin_domain("interval").ambient == (Fraction(0), Fraction(1))
    assert builtin_domain("interval(1, 2)").ambient == (Fraction(1), Fraction(2))
    assert builtin_domain("interval(-1/2,3)").name == "interval(-1/2,3)"


def test_builtin_domain_unknown() -> None:
    with pytest.raises(UnknownDomain):
        builtin_domain("reals")


def test_interval_domain_rejects_empty_ambient() -> None:
    with pytest.raises(CodeError):
        builtin_domain("interval(2,1)")


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------


def test_cantor_prefix_order(cantor) -> None:
    zero, zero_one = encode_string("0"), encode_string("01")

    assert cantor.leq(0, zero_one)
    assert cantor.leq(zero, zero_one)
    assert not cantor.leq(zero_one, zero)
    assert cantor.way_below(zero, zero_one)
    assert cantor.describe(zero_one) == '"01"'


def test_unit_way_below(unit) -> None:
    """q ≪ q′ iff q < q′ or q = 0, so only 0 is way-below itself."""
    half = unit.encode(Fraction(1, 2))

    assert unit.way_below(0, 0)
    assert not unit.way_below(half, half)
    assert unit.way_below(unit.encode(Fraction(1, 3)), half)


def test_interval_way_below_treats_ambient_ends_as_interior(interval01) -> None:
    whole = interval01.encode(Interval(Fraction(0), Fraction(1)))
    left = interval01.encode(Interval(Fraction(0), Fraction(1, 2)))
    inner = interval01.encode(Interval(Fraction(1, 3), Fraction(1, 2)))

    assert whole == 0
    assert interval01.way_below(whole, inner)
    assert not interval01.way_below(left, inner)
    assert interval01.leq(left, inner)


def test_turing_domain_is_weak() -> None:
    d = turing_domain()

    assert not d.is_continuous
    assert d.leq(2, 5)
    with pytest.raises(LimitMismatch):
        d.way_below(2, 5)


def test_flipped_unit_order() -> None:
    d = flipped_unit_domain()

    assert d.decode(0) == 0
    assert d.decode(1) == 1
    assert d.decode(2) == Fraction(1, 2)
    assert d.leq(d.encode(Fraction(1, 4)), d.encode(Fraction(1, 2)))
    assert d.leq(d.encode(Fraction(3, 4)), d.encode(Fraction(1, 2)))
    assert not d.leq(d.encode(Fraction(1, 4)), d.encode(Fraction(3, 4)))


def test_q_domain_codes() -> None:
    d = q_domain()

    assert [d.decode(c) for c in (0, 1, 2, 3)] == [0, -1, Fraction(1, 2), -2]
    assert d.encode(Fraction(1, 2)) == 2
    with pytest.raises(CodeError):
        d.encode(Fraction(2))
    with pytest.raises(CodeError):
        d.encode(Fraction(-1, 2))


def test_q_leq() -> None:
    """A non-integer y in (n, n+1) sits above exactly the x with n < x ≤ y."""
    assert q_leq(Fraction(0), Fraction(3))
    assert q_leq(Fraction(5, 4), Fraction(3, 2))
    assert not q_leq(Fraction(1), Fraction(3, 2))
    assert not q_leq(Fraction(1, 2), Fraction(3, 2))
    assert q_leq(Fraction(-1), Fraction(-2))
    assert not q_leq(Fraction(0), Fraction(-1))
    assert q_leq(Fraction(-7), Q_TOP)
    assert not q_leq(Q_TOP, Fraction(0))


def test_q_leq_extended_negatives() -> None:
    assert not q_leq(Fraction(-5, 4), Fraction(-3, 2))
    assert q_leq(Fraction(-5, 4), Fraction(-3, 2), extended=True)
    assert not q_leq(Fraction(-1), Fraction(-3, 2), extended=True)


def test_fan_parse_and_order() -> None:
    d = fan_domain()

    assert d.parse("2:3") == pair(2, 3)
    assert d.leq(pair(2, 1), pair(2, 3))
    assert not d.leq(pair(1, 1), pair(2, 3))
    with pytest.raises(CodeError):
        d.parse("2")


def test_split_segment() -> None:
    d = split_segment_domain()

    assert d.decode(1) == Fraction(3, 2)
    assert not d.leq(d.encode(Fraction(1, 2)), d.encode(Fraction(3, 2)))
    with pytest.raises(CodeError):
        d.encode(Fraction(1))


# ---------------------------------------------------------------------------
# Laws and the effective basis
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name", ["cantor", "unit_interval", "triadic_unit_interval", "interval", "turing", "fan"]
)
def test_axioms_hold(name: str) -> None:
    report = check_axioms(builtin_domain(name), 24)

    assert report.passed, report.violations


@pytest.mark.parametrize("name", ["cantor", "unit_interval", "interval(1,2)"])
def test_effective_basis_matches_rule(name: str) -> None:
    report = check_effective_basis(builtin_domain(name), 16)

    assert report.passed
    assert report.true_pairs > 0


def test_way_below_graph_failure_output(unit) -> None:
    """A failed check emits ⟨0,0⟩ = 0."""
    graph = way_below_graph(unit)
    half = unit.encode(Fraction(1, 2))

    assert evaluate(graph, pair(half, half)).value == 0
    assert evaluate(graph, pair(0, half)).value == pair(0, half)


def test_way_below_graph_needs_continuity() -> None:
    with pytest.raises(LimitMismatch):
        way_below_graph(turing_domain())


# ---------------------------------------------------------------------------
# Conditional connectedness
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cantor", "unit_interval", "turing"])
def test_chains_are_conditionally_connected(name: str) -> None:
    assert check_conditionally_connected(builtin_domain(name), 24).connected


def test_interval_domain_not_conditionally_connected(interval01) -> None:
    """[0, 1/3] and [1/3, 1] are incomparable yet both below [1/3, 1/3].

    Expected:
        The scan returns the first such triple in code order.
    """
    report = check_conditionally_connected(interval01, 16)

    assert not report.connected
    assert report.witness == (3, 4, 5)
    assert is_connectivity_witness(interval01, *report.witness)


def test_flipped_unit_not_conditionally_connected() -> None:
    d = flipped_unit_domain()

    report = check_conditionally_connected(d, 8)

    assert not report.connected
    assert is_connectivity_witness(d, *report.witness)


def test_interval_chain_semi_oracle(interval01) -> None:
    """[0, 1/2] ≪ [1/3, 1/3] is confirmed by the second halving."""
    outer = interval01.encode(Interval(Fraction(0), Fraction(1, 2)))
    point = interval01.encode(Interval(Fraction(1, 3), Fraction(1, 3)))
    touching = interval01.encode(Interval(Fraction(1, 3), Fraction(1, 2)))

    assert interval_chain_semi_oracle(interval01, 0, point, 0)
    assert not interval_chain_semi_oracle(interval01, outer, point, 1)
    assert interval_chain_semi_oracle(interval01, outer, point, 2)
    assert not interval_chain_semi_oracle(interval01, outer, touching, 40)


def test_interval_chain_semi_oracle_rejects_other_domains(cantor) -> None:
    with pytest.raises(LimitMismatch):
        interval_chain_semi_oracle(cantor, 0, 1, 3)


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------


def test_string_limit(cantor) -> None:
    assert cantor.below_limit(encode_string("000"), ZEROS)
    assert not cantor.below_limit(encode_string("01"), ZEROS)
    assert cantor.way_below_limit(encode_string("00"), ZEROS)


def test_set_limit() -> None:
    d = turing_domain()

    assert d.below_limit(4, EVENS)
    assert not d.below_limit(3, EVENS)


def test_limit_carrier_mismatch(cantor) -> None:
    with pytest.raises(LimitMismatch):
        cantor.below_limit(0, EVENS)
    with pytest.raises(LimitMismatch):
        real_limit(cantor, "x", lambda q: 0)


def test_rational_limit_on_unit(unit) -> None:
    one = rational_limit(unit, 1)

    assert one.exact == 1
    assert unit.below_limit(unit.encode(Fraction(2, 3)), one)
    assert unit.way_below_limit(unit.encode(Fraction(2, 3)), one)


def test_rational_limit_on_interval(interval01) -> None:
    third = rational_limit(interval01, Fraction(1, 3))

    assert interval01.below_limit(interval01.encode(Interval(Fraction(0), Fraction(1, 2))), third)
    assert not interval01.way_below_limit(
        interval01.encode(Interval(Fraction(1, 3), Fraction(1, 2))), third
    )


def test_triadic_basis_shares_unit_limits(unit) -> None:
    triadic = triadic_unit_interval_domain()
    half = rational_limit(unit, Fraction(1, 2))

    assert triadic.below_limit(triadic.encode(Fraction(1, 3)), half)
    assert not triadic.below_limit(triadic.encode(Fraction(2, 3)), half)


def test_point_and_top_limits(unit) -> None:
    half = unit.encode(Fraction(1, 2))
    point = point_limit(unit, half)
    top = top_limit(q_domain(), "∞")

    assert point.label == "1/2"
    assert unit.below_limit(half, point)
    assert not unit.way_below_limit(half, point)
    assert q_domain().below_limit(7, top)


# ---------------------------------------------------------------------------
# Relabelling
# ---------------------------------------------------------------------------


def test_relabel_keeps_values(cantor) -> None:
    forward, backward = permutation_maps([0, 2, 1])
    relabelled = relabel_domain(cantor, forward, backward)

    assert relabelled.decode(1) == "1"
    assert relabelled.decode(2) == "0"
    assert relabelled.encode("0") == 2
    assert relabelled.leq(2, encode_string("01"))


def test_relabel_must_fix_bottom(cantor) -> None:
    forward, backward = permutation_maps([1, 0])

    with pytest.raises(CodeError):
        relabel_domain(cantor, forward, backward)


def test_permutation_maps_rejects_non_permutation() -> None:
    with pytest.raises(CodeError):
        permutation_maps([0, 0])


# ---------------------------------------------------------------------------
# Not-way-below witnesses
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("value", ["1/4", "3/4", "0", "1"])
def test_flipped_unit_witness(value: str) -> None:
    d = flipped_unit_domain()

    w = not_way_below_witness(d, d.parse(value), flipped_half_limit(d))
    check = w.verify(60)

    assert check.passed, check.failures
    assert check.checked == 60


def test_q_domain_witness() -> None:
    d = q_domain()

    w = not_way_below_witness(d, d.encode(Fraction(1, 2)), top_limit(d, "∞"))

    assert w.verify(50).passed
    assert w.description.startswith("ℤ⁻")


def test_fan_witness_uses_next_branch() -> None:
    d = fan_domain()

    w = not_way_below_witness(d, pair(0, 3), top_limit(d, "p"))

    assert w.verify(50).passed
    assert all(d.decode(code)[0] == 1 for code in islice(w.members(), 20))
    assert w.description.startswith("I_1")


def test_witness_rejects_continuous_domains(cantor) -> None:
    with pytest.raises(NoWitnessKnown):
        not_way_below_witness(cantor, 1, ZEROS)


def test_broken_family_is_reported() -> None:
    """A family that climbs above the avoided element fails verification."""
    d = flipped_unit_domain()
    w = not_way_below_witness(d, d.parse("1/4"), flipped_half_limit(d))
    bad = Witness(d, w.avoided, w.limit, "codes 2..39", lambda: iter(range(2, 40)))

    check = bad.verify(20)

    assert not check.passed
    assert check.failures
