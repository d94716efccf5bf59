"""Effective domain descriptors over enumerated bases.

An ``EffectiveDomain`` knows how to decode basis codes into values and
decides ⪯ (and, for continuous domains, ≪) on codes. Non-basis points
are described by ``LimitDescriptor`` objects whose predicates act on
decoded values, so one descriptor serves every basis of the same
carrier.
"""

import logging
import re
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import count, islice
from typing import Any

from effdom.codes import (
    CodeError,
    Interval,
    as_exact,
    decode_fraction,
    decode_interval,
    decode_string,
    decode_triadic,
    encode_fraction,
    encode_interval,
    encode_string,
    encode_triadic,
    format_fraction,
    pair,
    parse_fraction,
    parse_interval,
    unpair,
)
from effdom.machine import CostedEnumerator, evaluate, native

logger = logging.getLogger(__name__)


class UnknownDomain(KeyError):
    """Raised when a built-in domain name is not recognised."""

    pass


class NoWitnessKnown(LookupError):
    """Raised when no not-way-below family is known for the requested pair."""

    pass


class LimitMismatch(ValueError):
    """Raised when a limit descriptor is used with a domain of another carrier."""

    pass


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitDescriptor:
    """A non-basis element x given by decidable predicates on basis values.

    Attributes:
        label: Symbolic identity, e.g. "√2" or "0^ω".
        carrier: Carrier name the predicates understand.
        kind: One of "real", "string", "set", "top", "point".
        below: value ⪯ x.
        way_below: value ≪ x, or None when the carrier has no way-below.
        exact: Exact value when x is rational, else None.
        compare: sign(q − x) for real limits.
    """

    label: str
    carrier: str
    kind: str
    below: Callable[[Any], bool] = field(compare=False)
    way_below: Callable[[Any], bool] | None = field(default=None, compare=False)
    exact: Fraction | None = None
    compare: Callable[[Fraction], int] | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class EffectiveDomain:
    """Basis-indexed domain descriptor.

    The order lives on carrier values; ``leq`` and ``way_below`` lift it to
    basis codes through ``decode``.

    Attributes:
        name: Registry name, e.g. "cantor" or "interval(1,2)".
        carrier: Name of the value space shared by all bases of the domain.
        decode: Basis code → value.
        encode: Value → basis code.
        parse: Text → basis code.
        value_leq: ⪯ on carrier values.
        value_way_below: ≪ on carrier values, None for weak-basis-only domains.
        render: Value → text.
        has_bottom: Whether code 0 is a least element.
        ambient: (A, B) for interval domains.
    """

    name: str
    carrier: str
    decode: Callable[[int], Any] = field(compare=False)
    encode: Callable[[Any], int] = field(compare=False)
    parse: Callable[[str], int] = field(compare=False)
    value_leq: Callable[[Any, Any], bool] = field(compare=False)
    value_way_below: Callable[[Any, Any], bool] | None = field(compare=False)
    render: Callable[[Any], str] = field(default=str, compare=False)
    has_bottom: bool = True
    ambient: tuple[Fraction, Fraction] | None = None

    @property
    def is_continuous(self) -> bool:
        return self.value_way_below is not None

    def leq(self, a: int, b: int) -> bool:
        return self.value_leq(self.decode(a), self.decode(b))

    def way_below(self, a: int, b: int) -> bool:
        if self.value_way_below is None:
            raise LimitMismatch(f"{self.name} is weak-basis-only")
        return self.value_way_below(self.decode(a), self.decode(b))

    def describe(self, code: int) -> str:
        return self.render(self.decode(code))

    def _check_limit(self, limit: LimitDescriptor) -> None:
        if limit.carrier != self.carrier:
            raise LimitMismatch(
                f"limit {limit.label} lives on {limit.carrier}, not {self.carrier}"
            )

    def below_limit(self, code: int, limit: LimitDescriptor) -> bool:
        self._check_limit(limit)
        return limit.below(self.decode(code))

    def way_below_limit(self, code: int, limit: LimitDescriptor) -> bool:
        self._check_limit(limit)
        if limit.way_below is None:
            raise LimitMismatch(f"{self.name} has no way-below relation to {limit.label}")
        return limit.way_below(self.decode(code))


def _cached(fn: Callable[[int], Any]) -> Callable[[int], Any]:
    return lru_cache(maxsize=1 << 16)(fn)


# ---------------------------------------------------------------------------
# Built-in domains
# ---------------------------------------------------------------------------


def _is_prefix(s: str, t: str) -> bool:
    return t.startswith(s)


def cantor_domain() -> EffectiveDomain:
    """Finite binary strings under the prefix order; every string is compact."""
    return EffectiveDomain(
        name="cantor",
        carrier="cantor",
        decode=_cached(decode_string),
        encode=encode_string,
        parse=lambda text: encode_string(text.strip().strip("\"'")),
        value_leq=_is_prefix,
        value_way_below=_is_prefix,
        render=lambda s: f'"{s}"',
    )


def interval_domain(a: Fraction | int, b: Fraction | int) -> EffectiveDomain:
    """Rational subintervals of [a, b] under reverse inclusion.

    [u, v] ≪ [x, y] iff (u = a or u < x) and (v = b or y < v): the
    ambient endpoints count as interior.
    """
    lo, hi = as_exact(a), as_exact(b)
    if lo >= hi:
        raise CodeError(f"empty ambient interval [{lo}, {hi}]")
    ambient = (lo, hi)

    def leq(i: Interval, j: Interval) -> bool:
        return j.within(i)

    def way_below(i: Interval, j: Interval) -> bool:
        return (i.lo == lo or i.lo < j.lo) and (i.hi == hi or j.hi < i.hi)

    bounds = f"{format_fraction(lo)},{format_fraction(hi)}"
    return EffectiveDomain(
        name=f"interval({bounds})",
        carrier=f"interval[{bounds}]",
        decode=_cached(lambda code: decode_interval(code, ambient)),
        encode=lambda value: encode_interval(value, ambient),
        parse=lambda text: encode_interval(parse_interval(text), ambient),
        value_leq=leq,
        value_way_below=way_below,
        ambient=ambient,
    )


def _unit_leq(p: Fraction, q: Fraction) -> bool:
    return p <= q


def _unit_way_below(p: Fraction, q: Fraction) -> bool:
    return p < q or p == 0


def unit_interval_domain() -> EffectiveDomain:
    """[0,1] with the rationals of [0,1) as basis, q ≪ q′ iff q < q′ or q = 0."""
    return EffectiveDomain(
        name="unit_interval",
        carrier="unit_interval",
        decode=_cached(decode_fraction),
        encode=encode_fraction,
        parse=lambda text: encode_fraction(parse_fraction(text)),
        value_leq=_unit_leq,
        value_way_below=_unit_way_below,
        render=format_fraction,
    )


def triadic_unit_interval_domain() -> EffectiveDomain:
    """[0,1] with the triadic rationals k/3^j of [0,1) as basis.

    Shares its carrier with ``unit_interval``, so limits and bridges carry
    over between the two bases.
    """
    return EffectiveDomain(
        name="triadic_unit_interval",
        carrier="unit_interval",
        decode=_cached(decode_triadic),
        encode=encode_triadic,
        parse=lambda text: encode_triadic(parse_fraction(text)),
        value_leq=_unit_leq,
        value_way_below=_unit_way_below,
        render=format_fraction,
    )


def _parse_natural(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise CodeError(f"not a natural number: {text!r}") from None
    if value < 0:
        raise CodeError(f"not a natural number: {text!r}")
    return value


def turing_domain() -> EffectiveDomain:
    """ℕ ∪ P_inf(ℕ) with basis ℕ ordered by ≤.

    n ⪯ A iff n ∈ A, and infinite sets are ordered by ⊆.
    """
    return EffectiveDomain(
        name="turing",
        carrier="turing",
        decode=lambda code: code,
        encode=lambda value: value,
        parse=_parse_natural,
        value_leq=lambda x, y: x <= y,
        value_way_below=None,
    )


HALF = Fraction(1, 2)


def flipped_leq(x: Fraction, y: Fraction) -> bool:
    """≤ on [0,½], ≥ on [½,1], nothing across."""
    if x <= HALF and y <= HALF:
        return x <= y
    if x >= HALF and y >= HALF:
        return y <= x
    return False


def _decode_flipped(code: int) -> Fraction:
    return Fraction(code) if code < 2 else decode_fraction(code - 1)


def _encode_flipped(value: Fraction) -> int:
    value = as_exact(value)
    if value == 0 or value == 1:
        return int(value)
    return encode_fraction(value) + 1


def flipped_unit_domain() -> EffectiveDomain:
    """[0,1] flipped at ½; ½ is the top and 0, 1 are both minimal.

    Codes: 0 ↦ 0, 1 ↦ 1, k ≥ 2 ↦ the (k−1)-th fraction.
    """
    return EffectiveDomain(
        name="flipped_unit",
        carrier="flipped_unit",
        decode=_cached(_decode_flipped),
        encode=_encode_flipped,
        parse=lambda text: _encode_flipped(parse_fraction(text)),
        value_leq=flipped_leq,
        value_way_below=None,
        render=format_fraction,
        has_bottom=False,
    )


class _QTop:
    __slots__ = ()

    def __repr__(self) -> str:
        return "∞"

    __str__ = __repr__


Q_TOP = _QTop()


def q_leq(x: Fraction | _QTop, y: Fraction | _QTop, extended: bool = False) -> bool:
    """The Q-domain order on values.

    Non-negative integers form a chain; a non-integer y in (n, n+1) is above
    exactly the x with n < x ≤ y; negative integers are ordered by ≥; every
    value is below ∞. With ``extended`` the negative unit intervals
    [−(n+1), −n) are added in reversed order, mirroring the positive side.
    """
    if y is Q_TOP:
        return True
    if x is Q_TOP:
        return False
    if x == y:
        return True
    if x >= 0 and y >= 0:
        if y.denominator == 1:
            return x <= y
        return y.numerator // y.denominator < x <= y
    if x < 0 and y < 0:
        if not extended and (x.denominator != 1 or y.denominator != 1):
            return False
        if y.denominator == 1:
            return y <= x
        ceiling = -((-y.numerator) // y.denominator)
        return y <= x < ceiling
    return False


def _decode_q(code: int) -> Fraction:
    half, odd = divmod(code, 2)
    if odd:
        return Fraction(-(half + 1))
    if half == 0:
        return Fraction(0)
    whole, index = unpair(half - 1)
    return whole + decode_fraction(index + 1)


def _encode_q(value: Fraction) -> int:
    value = as_exact(value)
    if value == 0:
        return 0
    if value < 0:
        if value.denominator != 1:
            raise CodeError(f"{value} is not in the Q-domain basis")
        return -2 * int(value) - 1
    if value.denominator == 1:
        raise CodeError(f"positive integer {value} is excluded from the basis")
    whole = value.numerator // value.denominator
    return 2 * (pair(whole, encode_fraction(value - whole) - 1) + 1)


def q_domain() -> EffectiveDomain:
    """[0,∞] ∪ ℤ⁻ with the basis B′ that excludes the positive integers.

    Codes: even 2j ↦ 0 (j = 0) or n + f with (n, i) = unpair(j−1) and f
    the (i+1)-th fraction; odd c ↦ −(c+1)/2.
    """
    return EffectiveDomain(
        name="q_domain",
        carrier="q_domain",
        decode=_cached(_decode_q),
        encode=_encode_q,
        parse=lambda text: _encode_q(parse_fraction(text)),
        value_leq=q_leq,
        value_way_below=None,
        render=format_fraction,
        has_bottom=False,
    )


def _parse_fan(text: str) -> int:
    branch, sep, depth = text.partition(":")
    if not sep:
        raise CodeError(f"fan points are written n:k, got {text!r}")
    return pair(_parse_natural(branch.strip()), _parse_natural(depth.strip()))


def _fan_leq(x: tuple[int, int], y: tuple[int, int]) -> bool:
    return x[0] == y[0] and x[1] <= y[1]


def fan_domain() -> EffectiveDomain:
    """Countably many copies I_n of ℕ joined at a top point p.

    Code ⟨n, k⟩ is the point k of branch n.
    """
    return EffectiveDomain(
        name="fan",
        carrier="fan",
        decode=unpair,
        encode=lambda value: pair(*value),
        parse=_parse_fan,
        value_leq=_fan_leq,
        value_way_below=None,
        render=lambda value: f"{value[0]}:{value[1]}",
        has_bottom=False,
    )


def _decode_split(code: int) -> Fraction:
    half, odd = divmod(code, 2)
    if odd:
        return 1 + decode_fraction(half + 1)
    return decode_fraction(half)


def _encode_split(value: Fraction) -> int:
    value = as_exact(value)
    if 0 <= value < 1:
        return 2 * encode_fraction(value)
    if 1 < value < 2:
        return 2 * (encode_fraction(value - 1) - 1) + 1
    raise CodeError(f"{value} is not in the rational basis of [0,2]")


def _split_leq(x: Fraction, y: Fraction) -> bool:
    return (y < 1) == (x < 1) and x <= y


def split_segment_domain() -> EffectiveDomain:
    """[0,2] ordered by ≤ on [0,1] and on (1,2] separately, with 2 on top.

    The rational basis offers no joint bound for a point below 1 and a
    point above 1, so streams mixing both sides never become directed.
    """
    return EffectiveDomain(
        name="split_segment",
        carrier="split_segment",
        decode=_cached(_decode_split),
        encode=_encode_split,
        parse=lambda text: _encode_split(parse_fraction(text)),
        value_leq=_split_leq,
        value_way_below=None,
        render=format_fraction,
        has_bottom=False,
    )


_BUILTINS: dict[str, Callable[[], EffectiveDomain]] = {
    "cantor": cantor_domain,
    "unit_interval": unit_interval_domain,
    "triadic_unit_interval": triadic_unit_interval_domain,
    "turing": turing_domain,
    "flipped_unit": flipped_unit_domain,
    "q_domain": q_domain,
    "fan": fan_domain,
    "split_segment": split_segment_domain,
}

_INTERVAL_NAME = re.compile(r"^interval\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)$")

BUILTIN_NAMES = ("interval", *_BUILTINS)


def builtin_domain(
    name: str, ambient: tuple[Fraction | int, Fraction | int] | None = None
) -> EffectiveDomain:
    """Look up a built-in domain.

    Args:
        name: One of ``BUILTIN_NAMES``; intervals may be written ``interval(A,B)``.
        ambient: Ambient (A, B) for ``interval``; defaults to (0, 1).

    Returns:
        EffectiveDomain: A fresh descriptor.

    Raises:
        UnknownDomain: If the name is not recognised.
    """
    key = name.strip()
    match = _INTERVAL_NAME.match(key)
    if match:
        return interval_domain(parse_fraction(match[1]), parse_fraction(match[2]))
    if key == "interval":
        lo, hi = ambient or (0, 1)
        return interval_domain(lo, hi)
    try:
        return _BUILTINS[key]()
    except KeyError:
        raise UnknownDomain(f"unknown domain {name!r}") from None


def relabel_domain(
    d: EffectiveDomain,
    forward: Callable[[int], int],
    backward: Callable[[int], int],
    name: str | None = None,
) -> EffectiveDomain:
    """The same basis under a second finite map.

    ``forward`` sends old codes to new ones and ``backward`` inverts it.
    Relations act on values, so only the coding changes.
    """
    if d.has_bottom and forward(0) != 0:
        raise CodeError("relabelling must keep the bottom at code 0")
    return replace(
        d,
        name=name or f"{d.name}~relabelled",
        decode=lambda code: d.decode(backward(code)),
        encode=lambda value: forward(d.encode(value)),
        parse=lambda text: forward(d.parse(text)),
    )


def permutation_maps(
    mapping: Sequence[int],
) -> tuple[Callable[[int], int], Callable[[int], int]]:
    """Forward and inverse maps of a finite permutation, identity beyond it.

    Raises:
        CodeError: If ``mapping`` is not a permutation of its index range.
    """
    forward_table = list(mapping)
    if sorted(forward_table) != list(range(len(forward_table))):
        raise CodeError("mapping is not a permutation of 0..n-1")
    inverse_table = [0] * len(forward_table)
    for old, new in enumerate(forward_table):
        inverse_table[new] = old

    def forward(code: int) -> int:
        return forward_table[code] if code < len(forward_table) else code

    def backward(code: int) -> int:
        return inverse_table[code] if code < len(inverse_table) else code

    return forward, backward


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------


def string_limit(label: str, bit: Callable[[int], str]) -> LimitDescriptor:
    """Infinite binary string whose i-th symbol is ``bit(i)``."""

    def is_prefix(word: str) -> bool:
        return all(ch == bit(i) for i, ch in enumerate(word))

    return LimitDescriptor(label, "cantor", "string", is_prefix, is_prefix)


ZEROS = string_limit("0^ω", lambda i: "0")


def sign_against(x: Fraction) -> Callable[[Fraction], int]:
    """Comparison oracle sign(q − x) for a rational x."""
    return lambda q: (q > x) - (q < x)


def real_limit(
    d: EffectiveDomain,
    label: str,
    compare: Callable[[Fraction], int],
    exact: Fraction | None = None,
) -> LimitDescriptor:
    """A real x given by ``compare(q) = sign(q − x)``.

    Supported carriers are the interval domains and the unit interval.

    Raises:
        LimitMismatch: For any other carrier.
    """
    if d.ambient is not None:
        lo, hi = d.ambient

        def below(i: Interval) -> bool:
            return compare(i.lo) <= 0 <= compare(i.hi)

        def way_below(i: Interval) -> bool:
            return (i.lo == lo or compare(i.lo) < 0) and (i.hi == hi or compare(i.hi) > 0)

        return LimitDescriptor(label, d.carrier, "real", below, way_below, exact, compare)
    if d.carrier == "unit_interval":
        return LimitDescriptor(
            label,
            d.carrier,
            "real",
            lambda q: compare(q) <= 0,
            lambda q: q == 0 or compare(q) < 0,
            exact,
            compare,
        )
    raise LimitMismatch(f"no real limits on {d.name}")


def rational_limit(d: EffectiveDomain, x: Fraction | int) -> LimitDescriptor:
    x = as_exact(x)
    return real_limit(d, format_fraction(x), sign_against(x), exact=x)


def set_limit(label: str, member: Callable[[int], bool]) -> LimitDescriptor:
    """Infinite subset A of ℕ in the Turing domain; n ⪯ A iff n ∈ A."""
    return LimitDescriptor(label, "turing", "set", member)


EVENS = set_limit("evens", lambda n: n % 2 == 0)


def top_limit(d: EffectiveDomain, label: str) -> LimitDescriptor:
    """The top element (∞ of the Q-domain, p of the fan, 2 of the split segment)."""
    return LimitDescriptor(label, d.carrier, "top", lambda value: True)


def point_limit(d: EffectiveDomain, code: int) -> LimitDescriptor:
    """A basis element viewed as a limit."""
    value = d.decode(code)
    exact = value if isinstance(value, Fraction) else None
    way_below = None
    if d.value_way_below is not None:
        way_below = lambda v: d.value_way_below(v, value)  # noqa: E731
    compare = sign_against(value) if exact is not None and d.carrier == "unit_interval" else None
    return LimitDescriptor(
        d.render(value),
        d.carrier,
        "point",
        lambda v: d.value_leq(v, value),
        way_below,
        exact,
        compare,
    )


# ---------------------------------------------------------------------------
# Relation graphs and audits
# ---------------------------------------------------------------------------


def way_below_graph(d: EffectiveDomain) -> CostedEnumerator:
    """Enumerator of {⟨a, b⟩ : a ≪ b}; failed checks emit ⟨0,0⟩ = 0.

    Raises:
        LimitMismatch: If ``d`` is weak-basis-only.
    """
    if not d.is_continuous:
        raise LimitMismatch(f"{d.name} is weak-basis-only")

    def step(n: int) -> tuple[int, int]:
        a, b = unpair(n)
        return (n if d.way_below(a, b) else 0), 1

    return native(f"≪[{d.name}]", step)


@dataclass
class EffectiveBasisReport:
    """Cross-check of the way-below enumerator against the rule.

    Attributes:
        domain: Domain name.
        size: Codes below this bound were checked.
        true_pairs: Number of pairs (a, b) with a ≪ b.
        mismatches: (a, b) pairs where the enumerator and the rule disagree.
    """

    domain: str
    size: int
    true_pairs: int
    mismatches: list[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_effective_basis(d: EffectiveDomain, size: int) -> EffectiveBasisReport:
    """Compare the range of ``way_below_graph(d)`` with ≪ on codes < size.

    Every pair of codes < size has its Cantor code ≤ pair(size−1, size−1),
    so scanning that prefix of the enumerator is exhaustive.
    """
    graph = way_below_graph(d)
    last = pair(size - 1, size - 1)
    emitted = set()
    for n in range(last + 1):
        a, b = unpair(evaluate(graph, n).value)
        if a < size and b < size:
            emitted.add((a, b))
    expected = {(a, b) for a in range(size) for b in range(size) if d.way_below(a, b)}
    # ⟨0,0⟩ doubles as the failure output; it is a true pair whenever 0 ≪ 0.
    if (0, 0) not in expected:
        emitted.discard((0, 0))
    mismatches = sorted(emitted ^ expected)
    logger.info(
        "effective basis %s N=%d: %d true pairs, %d mismatches",
        d.name, size, len(expected), len(mismatches),
    )
    return EffectiveBasisReport(d.name, size, len(expected), mismatches)


@dataclass
class AxiomReport:
    """Sampled order and way-below law violations, keyed by law name."""

    domain: str
    size: int
    violations: dict[str, list[tuple[int, ...]]]

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())


def check_axioms(d: EffectiveDomain, size: int) -> AxiomReport:
    """Check partial-order laws and the way-below laws on codes < size."""
    codes = range(size)
    leq = [[d.leq(a, b) for b in codes] for a in codes]
    violations: dict[str, list[tuple[int, ...]]] = {
        "reflexive": [(a,) for a in codes if not leq[a][a]],
        "antisymmetric": [
            (a, b) for a in codes for b in codes if a < b and leq[a][b] and leq[b][a]
        ],
        "transitive": [
            (a, b, c)
            for a in codes for b in codes if leq[a][b]
            for c in codes if leq[b][c] and not leq[a][c]
        ],
    }
    if d.is_continuous:
        wb = [[d.way_below(a, b) for b in codes] for a in codes]
        violations["way_below_implies_leq"] = [
            (a, b) for a in codes for b in codes if wb[a][b] and not leq[a][b]
        ]
        violations["leq_then_way_below"] = [
            (a, b, c)
            for a in codes for b in codes if leq[a][b]
            for c in codes if wb[b][c] and not wb[a][c]
        ]
        if d.has_bottom:
            violations["bottom_way_below"] = [(b,) for b in codes if not wb[0][b]]
    failed = {law: len(found) for law, found in violations.items() if found}
    logger.info("axioms %s N=%d: %s", d.name, size, failed or "all laws hold")
    return AxiomReport(d.name, size, violations)


@dataclass
class ConnectivityReport:
    """Outcome of a conditional-connectedness scan.

    Attributes:
        connected: True when no counterexample was found.
        witness: (x, y, z) with x, y ⪯ z and x, y incomparable.
    """

    connected: bool
    witness: tuple[int, int, int] | None = None


def is_connectivity_witness(d: EffectiveDomain, x: int, y: int, z: int) -> bool:
    """True when x, y ⪯ z but x and y are incomparable."""
    return d.leq(x, z) and d.leq(y, z) and not d.leq(x, y) and not d.leq(y, x)


def check_conditionally_connected(d: EffectiveDomain, size: int) -> ConnectivityReport:
    """Search codes < size for two incomparable elements below a common one."""
    for z in range(size):
        lower = [c for c in range(size) if d.leq(c, z)]
        for i, x in enumerate(lower):
            for y in lower[i + 1:]:
                if not d.leq(x, y) and not d.leq(y, x):
                    logger.info(
                        "%s not conditionally connected: %s, %s below %s",
                        d.name, d.describe(x), d.describe(y), d.describe(z),
                    )
                    return ConnectivityReport(False, (x, y, z))
    return ConnectivityReport(True)


def interval_chain_semi_oracle(d: EffectiveDomain, a: int, b: int, depth: int) -> bool:
    """Semi-decide a ≪ b on an interval domain with halving chains.

    The k-th chain element [x − (x−A)/2^k, y + (B−y)/2^k] converges onto
    b = [x, y] from outside; a ≪ b is confirmed once some element is
    above a.

    Raises:
        LimitMismatch: If ``d`` is not an interval domain.
    """
    if d.ambient is None:
        raise LimitMismatch(f"{d.name} is not an interval domain")
    lo, hi = d.ambient
    outer, inner = d.decode(a), d.decode(b)
    for k in range(depth + 1):
        scale = Fraction(1, 2**k)
        link = Interval(inner.lo - (inner.lo - lo) * scale, inner.hi + (hi - inner.hi) * scale)
        if link.within(outer):
            return True
    return False


# ---------------------------------------------------------------------------
# Not-way-below witnesses
# ---------------------------------------------------------------------------


@dataclass
class WitnessCheck:
    passed: bool
    checked: int
    failures: list[str]


@dataclass
class Witness:
    """A directed family D with ⊔D ⪰ limit and no member above ``avoided``.

    Attributes:
        domain: The weak-basis domain.
        avoided: Basis code a.
        limit: The limit the family climbs to.
        description: Symbolic description of D.
        members: Factory for a fresh iterator over D's codes.
    """

    domain: EffectiveDomain
    avoided: int
    limit: LimitDescriptor
    description: str
    members: Callable[[], Iterator[int]]

    def verify(self, count: int = 100) -> WitnessCheck:
        """Check the first ``count`` members: below the limit, directed, none ⪰ a.

        Directedness is checked pairwise: any two members must have a
        joint upper bound among the checked members.
        """
        d = self.domain
        head = list(islice(self.members(), count))
        failures = []
        for code in head:
            if not d.below_limit(code, self.limit):
                failures.append(f"{d.describe(code)} is not below {self.limit}")
            if d.leq(self.avoided, code):
                failures.append(f"{d.describe(code)} is above {d.describe(self.avoided)}")
        above = {x: {z for z in head if d.leq(x, z)} for x in head}
        for i, x in enumerate(head):
            for y in head[i + 1:]:
                if not above[x] & above[y]:
                    failures.append(f"{d.describe(x)} and {d.describe(y)} have no joint bound")
        logger.debug("witness %s: %d members, %d failures", self.description, len(head), len(failures))
        return WitnessCheck(not failures, len(head), failures)


def _codes_where(
    decode: Callable[[int], Any], keep: Callable[[Any], bool]
) -> Callable[[], Iterator[int]]:
    return lambda: (code for code in count() if keep(decode(code)))


def not_way_below_witness(
    d: EffectiveDomain, a: int, limit: LimitDescriptor
) -> Witness:
    """Exhibit why a is not way-below ``limit`` in a weak-basis domain.

    - flipped_unit, limit ½: D₀ = ℚ ∩ (½, 1] when a ≤ ½, else D₁ = ℚ ∩ [0, ½).
    - q_domain, limit ∞, a ≥ 0: the chain −1, −2, −3, …
    - fan, limit p, a on branch n: the branch I_{n+1}.

    Raises:
        NoWitnessKnown: For other domains, limits or basis elements.
    """
    value = d.decode(a)
    if d.name == "flipped_unit" and limit.exact == HALF:
        if value <= HALF:
            members = _codes_where(d.decode, lambda v: v > HALF)
            return Witness(d, a, limit, "D₀ = ℚ ∩ (1/2, 1]", members)
        members = _codes_where(d.decode, lambda v: v < HALF)
        return Witness(d, a, limit, "D₁ = ℚ ∩ [0, 1/2)", members)
    if d.name == "q_domain" and limit.kind == "top" and value >= 0:
        return Witness(d, a, limit, "ℤ⁻ = −1, −2, −3, …", lambda: (2 * k + 1 for k in count()))
    if d.name == "fan" and limit.kind == "top":
        branch = value[0] + 1
        return Witness(
            d, a, limit, f"I_{branch} = ⟨{branch}, 0⟩, ⟨{branch}, 1⟩, …",
            lambda: (pair(branch, k) for k in count()),
        )
    raise NoWitnessKnown(f"no witness known for {d.describe(a)} against {limit} in {d.name}")


def flipped_half_limit(d: EffectiveDomain) -> LimitDescriptor:
    """½ as a limit of the flipped unit interval, the top of that order."""
    return LimitDescriptor("1/2", d.carrier, "point", lambda v: flipped_leq(v, HALF), exact=HALF)
