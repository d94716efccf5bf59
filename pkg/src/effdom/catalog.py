"""Named elements, functions and audit presets used by the CLI and the tests."""

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from effdom.codes import (
    Interval,
    decode_string,
    encode_fraction,
    encode_string,
    fraction_scan_cost,
    unpair,
)
from effdom.domains import (
    EVENS,
    ZEROS,
    EffectiveDomain,
    cantor_domain,
    flipped_half_limit,
    flipped_unit_domain,
    point_limit,
    rational_limit,
    split_segment_domain,
    top_limit,
    turing_domain,
    unit_interval_domain,
)
from effdom.elements import (
    ComputableElement,
    ComputableFunction,
    broken_function,
    constant_function,
    identity_function,
    scale3_function,
)
from effdom.machine import (
    Arith,
    Call,
    Const,
    CostedEnumerator,
    Input,
    Let,
    Native,
    Var,
    constant,
    native,
)
from effdom.reals import RationalPoly, bisection_element, pi_element


class UnknownEntry(KeyError):
    """Raised when a catalog name is not recognised."""

    pass


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


def _fraction_index(p: int, q: int) -> tuple[int, int]:
    return encode_fraction((p, q)), fraction_scan_cost(Fraction(p, q))


def one_program() -> CostedEnumerator:
    """φ₀(n) = code of (2^(n+1) − 1)/2^(n+1), located by scanning the fraction table.

    Costs 2^(n+1) + 12 steps.
    """
    q = Arith("**", Const(2), Arith("+", Input(), Const(1)))
    index = Native("fraction_index", _fraction_index, (Arith("-", Var("q"), Const(1)), Var("q")))
    return CostedEnumerator("φ₀", Let("q", q, index))


def zeros_element() -> ComputableElement:
    d = cantor_domain()
    stream = native("0^n", lambda n: (encode_string("0" * n), n + 1))
    return ComputableElement(d, stream, ZEROS, "zeros")


def evens_element() -> ComputableElement:
    """0, 2, 4, … in the Turing domain, climbing to the set of evens."""
    return ComputableElement(
        turing_domain(), CostedEnumerator("2n", Arith("*", Const(2), Input())), EVENS, "evens"
    )


def forked_element() -> ComputableElement:
    """¼, ¾, ¼, … in the flipped unit interval: both below ½, never joined."""
    d = flipped_unit_domain()
    codes = (d.encode(Fraction(1, 4)), d.encode(Fraction(3, 4)))
    stream = native("fork", lambda n: (codes[n % 2], 1))
    return ComputableElement(d, stream, flipped_half_limit(d), "forked")


def constant_element() -> ComputableElement:
    d = unit_interval_domain()
    code = d.encode(Fraction(1, 2))
    return ComputableElement(d, constant(code), point_limit(d, code), "constant")


def split_element() -> ComputableElement:
    """½, 3/2, ½, … in the split segment; the two sides have no joint bound."""
    d = split_segment_domain()
    codes = (d.encode(Fraction(1, 2)), d.encode(Fraction(3, 2)))
    stream = native("split", lambda n: (codes[n % 2], 1))
    return ComputableElement(d, stream, top_limit(d, "2"), "split")


def one_element() -> ComputableElement:
    d = unit_interval_domain()
    return ComputableElement(d, one_program(), rational_limit(d, 1), "one")


SQRT2_POLY = RationalPoly.parse("-2,0,1")
SQRT2M1_POLY = RationalPoly.parse("-1,2,1")


def sqrt2_element() -> ComputableElement:
    return bisection_element(SQRT2_POLY, 1, 2)


def sqrt2m1_element() -> ComputableElement:
    """√2 − 1 as the root of x² + 2x − 1 on [0, 1]."""
    return bisection_element(SQRT2M1_POLY, 0, 1)


ELEMENTS: dict[str, Callable[[], ComputableElement]] = {
    "zeros": zeros_element,
    "evens": evens_element,
    "forked": forked_element,
    "constant": constant_element,
    "split": split_element,
    "one": one_element,
    "sqrt2": sqrt2_element,
    "sqrt2m1": sqrt2m1_element,
    "pi": pi_element,
}


def element(name: str) -> ComputableElement:
    try:
        return ELEMENTS[name]()
    except KeyError:
        raise UnknownEntry(f"unknown element {name!r}; known: {', '.join(ELEMENTS)}") from None


# ---------------------------------------------------------------------------
# Functions
# ---------------------------------------------------------------------------


FUNCTIONS: dict[str, Callable[[EffectiveDomain], ComputableFunction]] = {
    "identity": identity_function,
    "constant": lambda d: constant_function(d, d, 1),
    "scale3": scale3_function,
    "broken": lambda d: broken_function(),
}


def function(name: str, domain: EffectiveDomain) -> ComputableFunction:
    """Look up a function; ``identity`` and ``constant`` act on ``domain``."""
    try:
        return FUNCTIONS[name](domain)
    except KeyError:
        raise UnknownEntry(f"unknown function {name!r}; known: {', '.join(FUNCTIONS)}") from None


# ---------------------------------------------------------------------------
# Audit presets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementPreset:
    """φ, a default bound, μ and the element it computes.

    Attributes:
        name: Preset name.
        phi: Program emitting basis codes.
        bound: Default closed form for t(n).
        measurement: Built-in measurement name.
        element: The audited element; supplies domain and target.
    """

    name: str
    phi: CostedEnumerator
    bound: str
    measurement: str
    element: ComputableElement


def _one_preset() -> ElementPreset:
    return ElementPreset("one", one_program(), "2**(n+2) + 12", "unit", one_element())


def _sqrt2_preset() -> ElementPreset:
    # Bisection after n+1 halvings is 2^-(n+1) wide, strictly under the tolerance.
    e = sqrt2_element()
    phi = CostedEnumerator("√2-φ", Call(e.stream, Arith("+", Input(), Const(1))))
    return ElementPreset("sqrt2", phi, "4*n + 16", "length", e)


def _pi_preset() -> ElementPreset:
    # k = 2^(n/2 + 1) terms leave a tail below 2^-(n+1).
    e = pi_element()
    k = Arith("**", Const(2), Arith("//", Arith("+", Input(), Const(2)), Const(2)))
    phi = CostedEnumerator("π-φ", Let("k", k, Call(e.stream, Var("k"))))
    return ElementPreset("pi", phi, "2**(n//2 + 2) + 16", "length", e)


ELEMENT_PRESETS: dict[str, Callable[[], ElementPreset]] = {
    "one": _one_preset,
    "sqrt2": _sqrt2_preset,
    "pi": _pi_preset,
}


def element_preset(name: str) -> ElementPreset:
    try:
        return ELEMENT_PRESETS[name]()
    except KeyError:
        raise UnknownEntry(
            f"unknown preset {name!r}; known: {', '.join(ELEMENT_PRESETS)}"
        ) from None


@dataclass(frozen=True)
class FunctionPreset:
    """φ(⟨m, p⟩) approximating f(b_m) to precision p."""

    name: str
    function: ComputableFunction
    phi: CostedEnumerator
    bound: str
    measurement: str


def _identity_preset() -> FunctionPreset:
    d = cantor_domain()

    def truncate(n: int) -> tuple[int, int]:
        m, p = unpair(n)
        s = decode_string(m)
        return encode_string(s[:p]), min(p, len(s)) + 1

    return FunctionPreset(
        "identity", identity_function(d), native("truncate", truncate), "p + 8", "cantor"
    )


def _constant_preset() -> FunctionPreset:
    d = unit_interval_domain()
    code = d.encode(Fraction(1, 2))
    f = constant_function(d, d, code)
    return FunctionPreset("constant", f, constant(code), "1", "unit")


def _scale3_preset() -> FunctionPreset:
    f = scale3_function()

    def rounded(n: int) -> tuple[int, int]:
        m, p = unpair(n)
        i = f.source.decode(m)
        grid = 2 ** (p + 3)
        lo = Fraction(floor(i.lo * grid), grid)
        hi = Fraction(ceil(i.hi * grid), grid)
        return f.target.encode(Interval(3 * lo, 3 * hi)), p + 1

    return FunctionPreset("scale3", f, native("scale3-φ", rounded), "p + 8", "length")


FUNCTION_PRESETS: dict[str, Callable[[], FunctionPreset]] = {
    "identity": _identity_preset,
    "constant": _constant_preset,
    "scale3": _scale3_preset,
}


def function_preset(name: str) -> FunctionPreset:
    try:
        return FUNCTION_PRESETS[name]()
    except KeyError:
        raise UnknownEntry(
            f"unknown preset {name!r}; known: {', '.join(FUNCTION_PRESETS)}"
        ) from None
