"""Reals through the interval domain: bisection, the π series, enclosures.

A real only ever appears as an exact rational or as an enclosing interval.
The representation ρ sends a degenerate interval [x, x] to x and is
undefined elsewhere; a computable real is the supremum of a stream of
shrinking intervals.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from sympy import Poly, QQ, Rational, Symbol

from effdom.codes import CodeError, Interval, as_exact, format_fraction, parse_fraction
from effdom.domains import EffectiveDomain, LimitDescriptor, interval_domain, real_limit
from effdom.elements import ComputableElement
from effdom.machine import evaluate, native

logger = logging.getLogger(__name__)

X = Symbol("x")

DEFAULT_ENCLOSE_BUDGET = 4096


class NoSignChange(ValueError):
    """Raised when a bisection bracket does not straddle a sign change."""

    pass


class PolynomialFormatError(ValueError):
    """Raised when polynomial coefficients cannot be parsed exactly."""

    pass


class PrecisionNotReached(RuntimeError):
    """Raised when no emission within the budget is narrow enough.

    Attributes:
        best: Narrowest interval seen.
        index: Emission index of ``best``.
    """

    def __init__(self, message: str, best: Interval, index: int) -> None:
        super().__init__(message)
        self.best = best
        self.index = index


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with exact rational coefficients, lowest degree first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coefficients = tuple(as_exact(c, "coefficient") for c in self.coefficients)
        while len(coefficients) > 1 and coefficients[-1] == 0:
            coefficients = coefficients[:-1]
        object.__setattr__(self, "coefficients", coefficients or (Fraction(0),))

    @classmethod
    def parse(cls, text: str) -> "RationalPoly":
        """Parse comma-separated exact coefficients, e.g. ``"-2,0,1"`` for x²−2.

        Raises:
            PolynomialFormatError: On empty input, decimals or stray text.
        """
        parts = [part.strip() for part in text.split(",")]
        if not text.strip() or any(not part for part in parts):
            raise PolynomialFormatError(f"expected comma-separated coefficients, got {text!r}")
        try:
            return cls(tuple(parse_fraction(part) for part in parts))
        except CodeError as exc:
            raise PolynomialFormatError(str(exc)) from None

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; −1 for the zero polynomial."""
        if self.coefficients == (0,):
            return -1
        return len(self.coefficients) - 1

    @cached_property
    def poly(self) -> Poly:
        return Poly(
            [Rational(c.numerator, c.denominator) for c in reversed(self.coefficients)],
            X,
            domain=QQ,
        )

    def __call__(self, q: Fraction) -> Fraction:
        return eval_poly(self, q)

    def count_roots(self, a: Fraction, b: Fraction) -> int:
        """Real roots in [a, b], with multiplicity ignored."""
        return int(self.poly.count_roots(_rational(a), _rational(b)))

    def rational_roots(self) -> list[Fraction]:
        return sorted(
            Fraction(int(r.p), int(r.q)) for r in self.poly.ground_roots()
        )

    def __str__(self) -> str:
        return str(self.poly.as_expr())


def _rational(q: Fraction) -> Rational:
    return Rational(q.numerator, q.denominator)


def eval_poly(p: RationalPoly, q: Fraction | int) -> Fraction:
    """Exact Horner evaluation."""
    q = as_exact(q)
    total = Fraction(0)
    for c in reversed(p.coefficients):
        total = total * q + c
    return total


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def root_limit(
    p: RationalPoly, a: Fraction, b: Fraction, d: EffectiveDomain | None = None
) -> LimitDescriptor:
    """The zero of ``p`` bracketed by a sign change on [a, b].

    ``compare(q) = sign(q − x)`` follows from the sign of p(q) against p(a);
    it is exact when p changes sign once in [a, b].

    Raises:
        NoSignChange: If p(a)·p(b) ≥ 0.
    """
    a, b = as_exact(a), as_exact(b)
    left = _sign(eval_poly(p, a))
    if left * _sign(eval_poly(p, b)) >= 0:
        raise NoSignChange(f"{p} has no sign change on [{a}, {b}]")

    def compare(q: Fraction) -> int:
        if q <= a:
            return -1
        if q >= b:
            return 1
        s = _sign(eval_poly(p, q))
        if s == 0:
            return 0
        return -1 if s == left else 1

    exact = next((r for r in p.rational_roots() if a < r < b), None)
    label = f"root of {p} in [{format_fraction(a)}, {format_fraction(b)}]"
    return real_limit(d or interval_domain(a, b), label, compare, exact)


# ---------------------------------------------------------------------------
# Bisection
# ---------------------------------------------------------------------------


class _BisectionTrace:
    """Memoised bracket sequence; safe to extend from several threads."""

    def __init__(self, p: RationalPoly, a: Fraction, b: Fraction) -> None:
        self._p = p
        self._left_sign = _sign(eval_poly(p, a))
        self._brackets = [Interval(a, b)]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> Interval:
        with self._lock:
            while len(self._brackets) <= n:
                self._brackets.append(self._halve(self._brackets[-1]))
            return self._brackets[n]

    def _halve(self, i: Interval) -> Interval:
        if i.degenerate:
            return i
        m = i.midpoint
        s = _sign(eval_poly(self._p, m))
        if s == 0:
            logger.debug("exact zero at %s", format_fraction(m))
            return Interval(m, m)
        # The sign at i.lo stays the sign at a: the kept half always straddles the zero.
        if s == self._left_sign:
            return Interval(m, i.hi)
        return Interval(i.lo, m)


def bisection_element(p: RationalPoly, a: Fraction | int, b: Fraction | int) -> ComputableElement:
    """The zero of ``p`` in [a, b] as a stream over interval(a, b).

    Emission n is the bracket after n halvings; an exact zero at a midpoint
    m yields [m, m] from then on. Emission n costs 1 + n·(deg p + 2) steps:
    one Horner pass plus a comparison per halving.

    Raises:
        NoSignChange: If p(a)·p(b) ≥ 0.
    """
    a, b = as_exact(a), as_exact(b)
    d = interval_domain(a, b)
    target = root_limit(p, a, b, d)
    if p.degree > 1:
        roots = p.count_roots(a, b)
        if roots > 1:
            logger.warning("%s has %d roots in [%s, %s]; bisection keeps one", p, roots, a, b)
    trace = _BisectionTrace(p, a, b)
    cost = p.degree + 2

    def step(n: int) -> tuple[int, int]:
        return d.encode(trace[n]), 1 + n * cost

    label = f"bisect({p}, [{format_fraction(a)}, {format_fraction(b)}])"
    return ComputableElement(d, native(label, step), target, label)


def bisection_trace(p: RationalPoly, a: Fraction | int, b: Fraction | int, n: int) -> str:
    """The first ``n`` bisection choices as a binary string, 0 for the left half.

    The string stops early when a midpoint is an exact zero.
    """
    a, b = as_exact(a), as_exact(b)
    if _sign(eval_poly(p, a)) * _sign(eval_poly(p, b)) >= 0:
        raise NoSignChange(f"{p} has no sign change on [{a}, {b}]")
    trace = _BisectionTrace(p, a, b)
    bits = []
    for k in range(n):
        current, following = trace[k], trace[k + 1]
        if following.degenerate:
            break
        bits.append("0" if following.lo == current.lo else "1")
    return "".join(bits)


def string_to_interval(s: str, a: Fraction | int, b: Fraction | int) -> Interval:
    """Read a binary string as bisection choices on [a, b]."""
    i = Interval(as_exact(a), as_exact(b))
    for bit in s:
        if bit not in "01":
            raise CodeError(f"not a binary string: {s!r}")
        m = i.midpoint
        i = Interval(i.lo, m) if bit == "0" else Interval(m, i.hi)
    return i


# ---------------------------------------------------------------------------
# π from the grouped Leibniz series
# ---------------------------------------------------------------------------


PI_AMBIENT = (Fraction(3), Fraction(4))


@lru_cache(maxsize=4096)
def _pi_bracket(k: int) -> tuple[Fraction, Fraction]:
    """Rounded enclosure of π from the first k+1 grouped Leibniz terms.

    With a_k = 8 Σ_{j≤k} 1/((4j+1)(4j+3)), the tail π − a_k lies in
    [1/(2(k+2)), 1/(2(k+1))]. Sums run in fixed point with enough guard
    bits that outward rounding to the 2^-(k+8) grid keeps π inside.
    """
    grid = k + 8
    guard = (k + 1).bit_length() + 2
    scale = 1 << (grid + guard)
    low = high = 0
    for j in range(k + 1):
        q, r = divmod(8 * scale, (4 * j + 1) * (4 * j + 3))
        low += q
        high += q + (r > 0)
    low += scale // (2 * (k + 2))
    high += -(-scale // (2 * (k + 1)))
    lo = Fraction(low >> guard, 1 << grid)
    hi = Fraction(-(-high >> guard), 1 << grid)
    return max(lo, PI_AMBIENT[0]), min(hi, PI_AMBIENT[1])


def pi_interval(n: int) -> Interval:
    """Emission n: the intersection of the first n+1 brackets, so the stream nests."""
    lo, hi = PI_AMBIENT
    for k in range(n + 1):
        k_lo, k_hi = _pi_bracket(k)
        lo, hi = max(lo, k_lo), min(hi, k_hi)
    return Interval(lo, hi)


def pi_element() -> ComputableElement:
    """π over interval(3, 4); emission n has width ≤ 1/(2(n+1)) and costs n+1 terms."""
    d = interval_domain(*PI_AMBIENT)
    target = real_limit(d, "π", _compare_pi)

    def step(n: int) -> tuple[int, int]:
        return d.encode(pi_interval(n)), n + 1

    return ComputableElement(d, native("leibniz-π", step), target, "π")


def _compare_pi(q: Fraction) -> int:
    """sign(q − π), refining brackets until q falls outside one.

    Never returns 0: π is irrational.
    """
    n = 0
    while True:
        i = pi_interval(n)
        if q < i.lo:
            return -1
        if q > i.hi:
            return 1
        n = 2 * n + 1


# ---------------------------------------------------------------------------
# Enclosures
# ---------------------------------------------------------------------------


def enclose(
    e: ComputableElement, precision: int, budget: int = DEFAULT_ENCLOSE_BUDGET
) -> Interval:
    """First emitted interval of width ≤ 2^-precision.

    Emission widths must be non-increasing (a nested stream); the search
    gallops over indices 1, 2, 4, … and then bisects.

    Raises:
        PrecisionNotReached: If no emission below ``budget`` is narrow enough.
    """
    goal = Fraction(1, 2) ** precision
    first = _emission(e, 0)
    if first.width <= goal:
        return first
    lo, hi, best, best_index = 0, 1, first, 0
    while True:
        if hi >= budget:
            hi = budget - 1
        current = _emission(e, hi)
        if current.width < best.width:
            best, best_index = current, hi
        if current.width <= goal:
            break
        if hi == budget - 1:
            raise PrecisionNotReached(
                f"{e.name}: width {format_fraction(best.width)} after {budget} emissions",
                best,
                best_index,
            )
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _emission(e, mid).width <= goal:
            hi = mid
        else:
            lo = mid
    found = _emission(e, hi)
    logger.debug("%s: emission %d has width %s", e.name, hi, found.width)
    return found


def _emission(e: ComputableElement, n: int) -> Interval:
    return e.domain.decode(evaluate(e.stream, n).value)


@dataclass(frozen=True)
class Representation:
    """ρ from interval(A, B) onto [A, B]: [x, x] ↦ x, undefined elsewhere."""

    domain: EffectiveDomain

    def rho(self, code: int) -> Fraction | None:
        i = self.domain.decode(code)
        return i.lo if i.degenerate else None

    def enclosure(self, e: ComputableElement, precision: int) -> Interval:
        if e.domain.carrier != self.domain.carrier:
            raise CodeError(f"{e.name} does not live on {self.domain.name}")
        return enclose(e, precision)
