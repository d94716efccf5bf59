"""Finite maps between the natural numbers and countable basis carriers.

Every carrier used by the built-in domains is reached through one of the
bijections in this module:

- Cantor pairing ``pair``/``unpair`` on ℕ².
- Reduced fractions in [0,1), denominator-major then numerator-minor
  (``decode_fraction``/``encode_fraction``).
- Finite binary strings, length-major then value-minor, with the empty
  string at 0 (``decode_string``/``encode_string``).
- Rational subintervals of an ambient [A,B] with index 0 the ambient
  itself (``decode_interval``/``encode_interval``).
- Triadic rationals k/3^j in [0,1), the thirds-based sub-basis.

Interval code layout
--------------------
Endpoints are normalised to t = (x - A)/(B - A) in [0,1]. A normalised
endpoint t gets a *unit code*::

    unit(t) = 0                      if t == 0
            = 1                      if t == 1
            = 1 + dyadic_first(t)    otherwise

where ``dyadic_first`` enumerates (0,1) with dyadic rationals on even
positions (2d -> d-th dyadic in heap order: 1/2, 1/4, 3/4, 1/8, ...) and
the remaining reduced fractions, denominator-major, on odd positions
(2j+1 -> 1/3, 2/3, 1/5, ...). An interval with endpoint unit codes
i <= j gets the triangular index j(j+1)/2 + i, and the indices 0 and 1
are exchanged so that 0 decodes to [A,B] and 1 to [A,A].

Everything is exact: ``fractions.Fraction`` and Python integers.
"""

import threading
from bisect import bisect_right
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor, gcd, isqrt, prod

from sympy import primefactors, sieve


class CodeError(ValueError):
    """Raised when a value or index lies outside a finite map's domain."""

    pass


# ---------------------------------------------------------------------------
# Cantor pairing
# ---------------------------------------------------------------------------


def _check_natural(value: int, what: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise CodeError(f"{what} must be a natural number, got {value!r}")


def pair(n: int, m: int) -> int:
    """Cantor pairing ½(n² + 2nm + m² + 3n + m).

    Args:
        n: First component.
        m: Second component.

    Returns:
        int: The pair code ⟨n, m⟩.
    """
    _check_natural(n, "n")
    _check_natural(m, "m")
    s = n + m
    return s * (s + 1) // 2 + n


def unpair(k: int) -> tuple[int, int]:
    """Inverse of ``pair``.

    Args:
        k: A pair code.

    Returns:
        tuple[int, int]: (π₁(k), π₂(k)).
    """
    _check_natural(k, "k")
    w = (isqrt(8 * k + 1) - 1) // 2
    n = k - w * (w + 1) // 2
    return n, w - n


def fst(k: int) -> int:
    """π₁."""
    return unpair(k)[0]


def snd(k: int) -> int:
    """π₂."""
    return unpair(k)[1]


# ---------------------------------------------------------------------------
# Exact rationals
# ---------------------------------------------------------------------------


def as_exact(value: object, what: str = "value") -> Fraction:
    """Coerce ints and Fractions to Fraction; reject floats and anything else.

    Raises:
        CodeError: If the value is not an exact rational.
    """
    if isinstance(value, bool):
        raise CodeError(f"{what} must be an exact rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise CodeError(f"{what} must be an exact rational, got {value!r}")


def parse_fraction(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal into a Fraction.

    Decimal and exponent notation are rejected so that input stays exact.
    The Unicode minus sign is accepted.

    Args:
        text: Literal such as ``"3/4"``, ``"-2"`` or ``"−1/3"``.

    Returns:
        Fraction: The parsed value.

    Raises:
        CodeError: If the literal is not an exact fraction.
    """
    cleaned = text.strip().replace("−", "-")
    if not cleaned or any(ch in cleaned for ch in ".eE"):
        raise CodeError(f"not an exact fraction: {text!r}")
    num, sep, den = cleaned.partition("/")
    try:
        numerator = int(num)
        denominator = int(den) if sep else 1
    except ValueError:
        raise CodeError(f"not an exact fraction: {text!r}") from None
    if denominator == 0:
        raise CodeError(f"zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_fraction(value: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` for integers)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int, upward: bool = False) -> str:
    """Render with ``digits`` decimals, rounded toward −∞ (toward +∞ when ``upward``)."""
    scaled = value * 10**digits
    n = ceil(scaled) if upward else floor(scaled)
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


# ---------------------------------------------------------------------------
# Reduced fractions in [0,1)
# ---------------------------------------------------------------------------


class _TotientPrefix:
    """Summatory totient Φ(d) = Σ_{k≤d} φ(k), grown on demand.

    Φ(q-1) is the index of the first fraction with denominator q.
    """

    def __init__(self) -> None:
        self._prefix = [0]
        self._lock = threading.Lock()

    def _extend(self, limit: int) -> None:
        with self._lock:
            start = len(self._prefix)
            if limit < start:
                return
            stop = max(limit, 2 * start) + 1
            total = self._prefix[-1]
            extension = []
            for value in sieve.totientrange(start, stop):
                total += value
                extension.append(total)
            self._prefix.extend(extension)

    def summatory(self, d: int) -> int:
        if d >= len(self._prefix):
            self._extend(d)
        return self._prefix[d]

    def first_above(self, index: int) -> int:
        """Smallest d with Φ(d) > index."""
        while self._prefix[-1] <= index:
            self._extend(2 * len(self._prefix))
        return bisect_right(self._prefix, index)


_TOTIENTS = _TotientPrefix()


def _coprime_count(x: int, primes: list[int]) -> int:
    """Number of k in [1, x] coprime to every prime in ``primes``."""
    if x <= 0:
        return 0
    total = 0
    for size in range(len(primes) + 1):
        sign = -1 if size % 2 else 1
        for subset in combinations(primes, size):
            total += sign * (x // prod(subset))
    return total


def _coprime_rank(p: int, q: int) -> int:
    """Position of numerator p among numerators coprime to q."""
    if q == 1:
        return 0
    return _coprime_count(p - 1, primefactors(q))


def _coprime_select(rank: int, q: int) -> int:
    """Inverse of ``_coprime_rank``: the numerator with the given rank."""
    if q == 1:
        return 0
    primes = primefactors(q)
    lo, hi = 1, q - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _coprime_count(mid, primes) >= rank + 1:
            hi = mid
        else:
            lo = mid + 1
    return lo


def decode_fraction(index: int) -> Fraction:
    """Decode a fraction index.

    Index 0 is 0; then 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ... with unreduced
    fractions such as 2/4 skipped.

    Args:
        index: Natural number.

    Returns:
        Fraction: A reduced rational in [0,1).
    """
    _check_natural(index, "index")
    q = _TOTIENTS.first_above(index)
    rank = index - _TOTIENTS.summatory(q - 1)
    return Fraction(_coprime_select(rank, q), q)


def encode_fraction(value: Fraction | tuple[int, int]) -> int:
    """Encode a rational in [0,1) given as a Fraction or a ``(p, q)`` pair.

    A ``(p, q)`` pair must already be in lowest terms.

    Args:
        value: The rational to encode.

    Returns:
        int: Its fraction index.

    Raises:
        CodeError: If the value is outside [0,1), unreduced or inexact.
    """
    if isinstance(value, tuple):
        p, q = value
        if q <= 0 or gcd(p, q) != 1:
            raise CodeError(f"{p}/{q} is not in lowest terms")
        value = Fraction(p, q)
    value = as_exact(value)
    if not 0 <= value < 1:
        raise CodeError(f"{value} is outside [0,1)")
    p, q = value.numerator, value.denominator
    return _TOTIENTS.summatory(q - 1) + _coprime_rank(p, q)


def fraction_scan_cost(value: Fraction) -> int:
    """Table cells a direct evaluation of ``encode_fraction`` consults.

    One cell per denominator whose block is summed plus one per
    inclusion-exclusion term for the numerator rank.
    """
    q = value.denominator
    return max(q - 1, 0) + 2 ** len(primefactors(q))


# ---------------------------------------------------------------------------
# Binary strings
# ---------------------------------------------------------------------------


def decode_string(index: int) -> str:
    """Decode a string index (length block m starts at 2^m − 1)."""
    _check_natural(index, "index")
    length = (index + 1).bit_length() - 1
    offset = index - (2**length - 1)
    return format(offset, f"0{length}b") if length else ""


def encode_string(word: str) -> int:
    """Encode a finite binary string.

    Raises:
        CodeError: If the word contains characters other than 0 and 1.
    """
    if any(ch not in "01" for ch in word):
        raise CodeError(f"not a binary string: {word!r}")
    return 2 ** len(word) - 1 + (int(word, 2) if word else 0)


def rotate_within_length_block(index: int) -> int:
    """Second finite map for Σ*: rotate each length block by one position."""
    word = decode_string(index)
    length = len(word)
    if length == 0:
        return index
    offset = (int(word, 2) + 1) % 2**length
    return 2**length - 1 + offset


def unrotate_within_length_block(index: int) -> int:
    """Inverse of ``rotate_within_length_block``."""
    word = decode_string(index)
    length = len(word)
    if length == 0:
        return index
    offset = (int(word, 2) - 1) % 2**length
    return 2**length - 1 + offset


# ---------------------------------------------------------------------------
# Triadic rationals in [0,1)
# ---------------------------------------------------------------------------


def decode_triadic(index: int) -> Fraction:
    """Decode the thirds-based basis: 0, 1/3, 2/3, 1/9, 2/9, 4/9, ..."""
    _check_natural(index, "index")
    if index == 0:
        return Fraction(0)
    level = 1
    while 3**level <= index:
        level += 1
    offset = index - 3 ** (level - 1)
    return Fraction(offset + offset // 2 + 1, 3**level)


def encode_triadic(value: Fraction) -> int:
    """Encode k/3^j in [0,1).

    Raises:
        CodeError: If the value is not a triadic rational in [0,1).
    """
    value = as_exact(value)
    if not 0 <= value < 1:
        raise CodeError(f"{value} is outside [0,1)")
    if value == 0:
        return 0
    k, q = value.numerator, value.denominator
    level = 0
    while q % 3 == 0:
        q //= 3
        level += 1
    if q != 1:
        raise CodeError(f"{value} is not a triadic rational")
    return 3 ** (level - 1) + k - k // 3 - 1


# ---------------------------------------------------------------------------
# Rational intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed rational interval [lo, hi].

    Attributes:
        lo: Left endpoint.
        hi: Right endpoint, never below ``lo``.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", as_exact(self.lo, "lo"))
        object.__setattr__(self, "hi", as_exact(self.hi, "hi"))
        if self.hi < self.lo:
            raise CodeError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: "Interval") -> bool:
        """True when self ⊆ other."""
        return other.lo <= self.lo and self.hi <= other.hi

    def decimal(self, digits: int) -> str:
        """Outward-rounded decimal rendering; the result still contains ``self``."""
        lo = format_decimal(self.lo, digits)
        hi = format_decimal(self.hi, digits, upward=True)
        return f"[{lo}, {hi}]"

    def __str__(self) -> str:
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


def parse_interval(text: str) -> Interval:
    """Parse ``[a, b]`` or ``a,b`` with exact fraction endpoints."""
    body = text.strip().removeprefix("[").removesuffix("]")
    parts = body.split(",")
    if len(parts) != 2:
        raise CodeError(f"not an interval: {text!r}")
    return Interval(parse_fraction(parts[0]), parse_fraction(parts[1]))


def _decode_dyadic(d: int) -> Fraction:
    if d == 0:
        return Fraction(0)
    level = d.bit_length()
    return Fraction(2 * (d - 2 ** (level - 1)) + 1, 2**level)


def _encode_dyadic(value: Fraction) -> int:
    if value == 0:
        return 0
    level = value.denominator.bit_length() - 1
    return 2 ** (level - 1) + (value.numerator - 1) // 2


def _non_dyadic_through(q: int) -> int:
    """Count of reduced non-dyadic fractions in (0,1) with denominator ≤ q."""
    if q < 1:
        return 0
    return _TOTIENTS.summatory(q) - 2 ** (q.bit_length() - 1)


def _decode_non_dyadic(j: int) -> Fraction:
    hi = 4
    while _non_dyadic_through(hi) <= j:
        hi *= 2
    lo = 3
    while lo < hi:
        mid = (lo + hi) // 2
        if _non_dyadic_through(mid) > j:
            hi = mid
        else:
            lo = mid + 1
    rank = j - _non_dyadic_through(lo - 1)
    return Fraction(_coprime_select(rank, lo), lo)


def _encode_non_dyadic(value: Fraction) -> int:
    q = value.denominator
    return _non_dyadic_through(q - 1) + _coprime_rank(value.numerator, q)


def _is_dyadic(value: Fraction) -> bool:
    q = value.denominator
    return q & (q - 1) == 0


def _decode_dyadic_first(k: int) -> Fraction:
    half, odd = divmod(k, 2)
    return _decode_non_dyadic(half) if odd else _decode_dyadic(half)


def _encode_dyadic_first(value: Fraction) -> int:
    if _is_dyadic(value):
        return 2 * _encode_dyadic(value)
    return 2 * _encode_non_dyadic(value) + 1


def decode_unit_rational(k: int) -> Fraction:
    """Bijection ℕ → ℚ ∩ [0,1] with 0 ↦ 0 and 1 ↦ 1."""
    _check_natural(k, "k")
    if k < 2:
        return Fraction(k)
    return _decode_dyadic_first(k - 1)


def encode_unit_rational(value: Fraction) -> int:
    """Inverse of ``decode_unit_rational``."""
    value = as_exact(value)
    if not 0 <= value <= 1:
        raise CodeError(f"{value} is outside [0,1]")
    if value == 0 or value == 1:
        return int(value)
    return 1 + _encode_dyadic_first(value)


def _check_ambient(ambient: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    lo, hi = (as_exact(x, "ambient endpoint") for x in ambient)
    if not lo < hi:
        raise CodeError(f"ambient [{lo}, {hi}] must have positive width")
    return lo, hi


def decode_interval(index: int, ambient: tuple[Fraction, Fraction]) -> Interval:
    """Decode an interval index relative to the ambient [A,B].

    Args:
        index: Interval code; 0 is the ambient interval itself.
        ambient: (A, B) with A < B.

    Returns:
        Interval: A rational subinterval of [A,B].
    """
    _check_natural(index, "index")
    a, b = _check_ambient(ambient)
    tri = {0: 1, 1: 0}.get(index, index)
    j = (isqrt(8 * tri + 1) - 1) // 2
    i = tri - j * (j + 1) // 2
    s, t = sorted((decode_unit_rational(i), decode_unit_rational(j)))
    return Interval(a + (b - a) * s, a + (b - a) * t)


def encode_interval(interval: Interval, ambient: tuple[Fraction, Fraction]) -> int:
    """Encode a rational subinterval of the ambient [A,B].

    Raises:
        CodeError: If the interval leaves the ambient.
    """
    a, b = _check_ambient(ambient)
    if not interval.within(Interval(a, b)):
        raise CodeError(f"{interval} is not contained in [{a}, {b}]")
    i, j = sorted(
        encode_unit_rational((x - a) / (b - a)) for x in (interval.lo, interval.hi)
    )
    tri = j * (j + 1) // 2 + i
    return {0: 1, 1: 0}.get(tri, tri)


# ---------------------------------------------------------------------------
# Carriers as text
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Carrier:
    """One finite map rendered as text: fractions ``p/q``, quoted strings, intervals.

    Attributes:
        name: Carrier name used on the command line.
        render: Index to its printed value.
        read: Printed value back to its index.
    """

    name: str
    render: Callable[[int], str]
    read: Callable[[str], int]


def _read_string(text: str) -> int:
    return encode_string(text.strip().removeprefix('"').removesuffix('"'))


_UNIT = (Fraction(0), Fraction(1))

CARRIERS: dict[str, Carrier] = {
    "fraction": Carrier(
        "fraction",
        lambda k: format_fraction(decode_fraction(k)),
        lambda text: encode_fraction(parse_fraction(text)),
    ),
    "string": Carrier("string", lambda k: f'"{decode_string(k)}"', _read_string),
    "interval": Carrier(
        "interval",
        lambda k: str(decode_interval(k, _UNIT)),
        lambda text: encode_interval(parse_interval(text), _UNIT),
    ),
}
