"""Acceptance-scale checks of elements, enclosures, recoding and complexity audits."""

from fractions import Fraction
from importlib.resources import files
from pathlib import Path

import pytest

from effdom.catalog import (
    SQRT2_POLY,
    constant_element,
    element_preset,
    sqrt2_element,
    zeros_element,
)
from effdom.codes import Interval, unpair
from effdom.complexity import (
    ComplexityBound,
    builtin_measurement,
    check_strict_monotone,
    element_complexity_audit,
    generic_measurement,
    inducing_by_strictness,
    polytime_check,
)
from effdom.domains import builtin_domain, triadic_unit_interval_domain
from effdom.elements import (
    apply_function,
    basis_bridge,
    change_basis,
    identity_function,
    recode_element,
    target_audit,
)
from effdom.machine import SquareShell, permutation
from effdom.reals import bisection_trace, enclose, pi_element

pytestmark = pytest.mark.slow


# ---------------------------------------------------------------------------
# Reals
# ---------------------------------------------------------------------------


def test_sqrt2_bisection_widths() -> None:
    for n, interval in enumerate(sqrt2_element().decoded(31)):
        assert interval.width == Fraction(1, 2**n)
        assert interval.lo**2 <= 2 <= interval.hi**2
    assert len(bisection_trace(SQRT2_POLY, 1, 2, 30)) == 30


def test_pi_enclosures_contain_reference(pi_reference: Interval) -> None:
    pi = pi_element()
    for n in range(13):
        found = enclose(pi, n, budget=1 << 14)
        assert found.width <= Fraction(1, 2**n)
        assert found.lo <= pi_reference.lo
        assert pi_reference.hi <= found.hi


# ---------------------------------------------------------------------------
# Complexity of x = 1
# ---------------------------------------------------------------------------


def test_one_audit_against_bundled_table() -> None:
    """μ-gap 2^-(n+1) on n ≤ 16, steps within the shipped table, no polynomial fit."""
    preset = element_preset("one")
    bound = ComplexityBound.from_file(Path(str(files("effdom.data").joinpath("one_bound.table"))))
    mu = builtin_measurement("unit")

    report = element_complexity_audit(preset.phi, bound, mu, preset.element.target, 17)

    assert report.passed
    assert [row.gap for row in report.rows] == [f"1/{2 ** (n + 1)}" for n in range(17)]
    assert not polytime_check(report).polynomial


# ---------------------------------------------------------------------------
# Function application
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("factory", [zeros_element, constant_element])
def test_identity_application_is_the_way_below_closure(factory) -> None:
    """Over the default and k×k cells, id(x) emits exactly the n with b_n ≪ b_m for some emitted b_m."""
    k = 24
    x = factory()
    d = x.domain
    emitted = x.emissions(k)

    fx = apply_function(identity_function(d), x, SquareShell())

    expected = {
        n
        for n, m in map(unpair, range(k))
        if m in emitted and d.way_below(n, m)
    }
    assert set(fx.emissions(k * k + 1)) - {0} == expected - {0}


# ---------------------------------------------------------------------------
# Model independence
# ---------------------------------------------------------------------------


def test_recode_under_random_permutations(acceptance_rng) -> None:
    x = zeros_element()
    original = x.decoded(12)
    for _ in range(50):
        mapping = [0, *acceptance_rng.sample(range(1, 64), 63)]
        forward = permutation(mapping)
        inverse = permutation([mapping.index(i) for i in range(64)])

        moved = recode_element(x, forward, inverse, sample=64)

        assert moved.decoded(12) == original
        assert moved.emissions(1) == [0]


def test_change_basis_keeps_the_target() -> None:
    unit, triadic = builtin_domain("unit_interval"), triadic_unit_interval_domain()
    x = constant_element()

    moved = change_basis(x, basis_bridge(unit, triadic), triadic)

    assert moved.target is x.target
    assert target_audit(moved, 128) == []


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------


def test_cantor_length_strict_below_256() -> None:
    mu = builtin_measurement("cantor")

    report = check_strict_monotone(mu, mu.domain, 256)

    assert report.passed
    assert report.checked > 256


@pytest.mark.parametrize("name", ["cantor", "unit_interval"])
def test_generic_measurement_monotone(name: str) -> None:
    d = builtin_domain(name)

    report = check_strict_monotone(generic_measurement(d, 7), d, 64)

    assert report.kind != "monotone"


def test_connectivity_gate() -> None:
    cantor = inducing_by_strictness(builtin_measurement("cantor"), builtin_domain("cantor"), 32)
    interval = inducing_by_strictness(
        builtin_measurement("length"), builtin_domain("interval(0,1)"), 32
    )

    assert cantor.connectivity_witness is None
    assert interval.connectivity_witness == (3, 4, 5)
