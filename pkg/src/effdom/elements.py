"""Computable elements, computable functions and the combinators between them.

An element is a stream of basis codes that is audited, never assumed, to be
directed. A function carries a pointwise basis image (for audits) and the
r.e. way-below graph {⟨n, m⟩ : b′_n ≪ f(b_m)} that application runs on.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from effdom.codes import Interval, unpair
from effdom.domains import (
    EffectiveDomain,
    LimitDescriptor,
    Q_TOP,
    interval_domain,
    point_limit,
    q_leq,
    real_limit,
    relabel_domain,
)
from effdom.machine import (
    CostedEnumerator,
    Evaluation,
    Schedule,
    dovetail_merge2,
    evaluate,
    native,
    recode,
    take,
)

logger = logging.getLogger(__name__)

DEFAULT_AUDIT_BUDGET = 64


class DomainMismatch(ValueError):
    """Raised when an element is fed to a function over another domain."""

    pass


class WeakBasisTarget(ValueError):
    """Raised when application needs ≪ on a weak-basis-only domain."""

    pass


class NoComparableRepresentative(LookupError):
    """Raised when no emission bounds the audited prefix of a stream."""

    pass


class UnsoundBridge(ValueError):
    """Raised when a sampled bridge pair violates b′_n ≪ b_m."""

    def __init__(self, bad_pairs: list[tuple[int, int]]) -> None:
        self.bad_pairs = bad_pairs
        shown = ", ".join(f"⟨{n},{m}⟩" for n, m in bad_pairs[:5])
        super().__init__(f"bridge emits {len(bad_pairs)} unsound pairs: {shown}")


class NonBijectiveTranslation(ValueError):
    """Raised when a code translation fails the sampled bijection check."""

    pass


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComputableElement:
    """A stream of basis codes approximating ``target``.

    Attributes:
        domain: Domain the codes belong to.
        stream: Enumerator of basis codes.
        target: The element approximated, when known symbolically.
        label: Display name; defaults to the stream name.
    """

    domain: EffectiveDomain
    stream: CostedEnumerator
    target: LimitDescriptor | None = None
    label: str | None = None

    @property
    def name(self) -> str:
        return self.label or self.stream.name

    def evaluations(self, count: int, fuel: int | None = None) -> list[Evaluation]:
        return take(self.stream, count, fuel=fuel)

    def emissions(self, count: int, fuel: int | None = None) -> list[int]:
        """Codes emitted at 0 .. count−1."""
        return [ev.value for ev in self.evaluations(count, fuel)]

    def decoded(self, count: int, fuel: int | None = None) -> list:
        return [self.domain.decode(code) for code in self.emissions(count, fuel)]


@dataclass
class DirectednessReport:
    """Outcome of a bounded directedness audit.

    Attributes:
        element: Element name.
        checked: Emissions whose pairs were checked.
        budget: Emissions searched for joint bounds.
        witness: First pair of codes with no joint bound found, if any.
    """

    element: str
    checked: int
    budget: int
    witness: tuple[int, int] | None = None

    @property
    def passed(self) -> bool:
        return self.witness is None


def _above_masks(d: EffectiveDomain, heads: list[int], pool: list[int]) -> dict[int, int]:
    """For each distinct head code, a bitmask over ``pool`` of the codes above it."""
    masks: dict[int, int] = {}
    for code in heads:
        if code not in masks:
            masks[code] = sum(1 << k for k, other in enumerate(pool) if d.leq(code, other))
    return masks


def directedness_audit(
    e: ComputableElement, size: int, budget: int = DEFAULT_AUDIT_BUDGET
) -> DirectednessReport:
    """Check that every pair among the first ``size`` emissions has a joint
    upper bound among the first ``max(size, budget)`` emissions.

    A failure is a semi-decision: a later emission might still bound the pair.
    """
    budget = max(size, budget)
    pool = e.emissions(budget)
    heads = pool[:size]
    masks = _above_masks(e.domain, heads, pool)
    witness = None
    for i, a in enumerate(heads):
        for b in heads[i + 1:]:
            if not masks[a] & masks[b]:
                witness = (a, b)
                break
        if witness:
            break
    if witness:
        logger.info(
            "%s: %s and %s have no joint bound within %d emissions",
            e.name, e.domain.describe(witness[0]), e.domain.describe(witness[1]), budget,
        )
    else:
        logger.debug("%s: first %d emissions directed", e.name, size)
    return DirectednessReport(e.name, size, budget, witness)


def target_audit(e: ComputableElement, size: int) -> list[int]:
    """Indices among the first ``size`` emissions that are not below the target."""
    if e.target is None:
        return []
    return [
        n for n, code in enumerate(e.emissions(size))
        if not e.domain.below_limit(code, e.target)
    ]


def approximant(
    e: ComputableElement, size: int, budget: int = DEFAULT_AUDIT_BUDGET
) -> int:
    """Best approximation so far: an emission above all of the first ``size``.

    Emissions among the first ``size`` are tried first, then the rest of
    the audit budget.

    Raises:
        NoComparableRepresentative: If no emission bounds the prefix.
    """
    d = e.domain
    pool = e.emissions(max(size, budget))
    heads = list(dict.fromkeys(pool[:size]))
    for candidate in pool:
        if all(d.leq(code, candidate) for code in heads):
            return candidate
    raise NoComparableRepresentative(
        f"no emission of {e.name} within {len(pool)} bounds its first {size}"
    )


# ---------------------------------------------------------------------------
# Functions
# ---------------------------------------------------------------------------


Image = int | LimitDescriptor


@dataclass(frozen=True)
class ComputableFunction:
    """A Scott-continuous map between effective domains.

    Attributes:
        label: Display name.
        source: Domain of the argument.
        target: Domain of the value.
        image: Basis code of ``source`` ↦ basis code of ``target`` or a limit.
        graph: Enumerator of {⟨n, m⟩ : b′_n ≪ f(b_m)}; None when ``target``
            has no way-below.
        limit_image: Symbolic image of a source limit, when known.
    """

    label: str
    source: EffectiveDomain
    target: EffectiveDomain
    image: Callable[[int], Image] = field(compare=False)
    graph: CostedEnumerator | None = field(default=None, compare=False)
    limit_image: Callable[[LimitDescriptor], LimitDescriptor] | None = field(
        default=None, compare=False
    )


def _target_leq(f: ComputableFunction, code: int, value: Image) -> bool:
    if isinstance(value, LimitDescriptor):
        return f.target.below_limit(code, value)
    return f.target.leq(code, value)


def _target_way_below(f: ComputableFunction, code: int, value: Image) -> bool:
    if isinstance(value, LimitDescriptor):
        return f.target.way_below_limit(code, value)
    return f.target.way_below(code, value)


def function_from_image(
    source: EffectiveDomain,
    target: EffectiveDomain,
    image: Callable[[int], Image],
    label: str,
    limit_image: Callable[[LimitDescriptor], LimitDescriptor] | None = None,
) -> ComputableFunction:
    """Build a function whose graph decides b′_n ≪ image(m) at ⟨n, m⟩.

    The graph emits ⟨n, m⟩ on success and ⟨0, 0⟩ = 0 otherwise; target
    domains with ≪ have their bottom at code 0, so the default is sound.

    Raises:
        WeakBasisTarget: If ``target`` has no way-below.
    """
    if not target.is_continuous:
        raise WeakBasisTarget(f"{target.name} has no way-below; {label} has no graph")
    f = ComputableFunction(label, source, target, image, None, limit_image)

    def step(k: int) -> tuple[int, int]:
        n, m = unpair(k)
        return (k if _target_way_below(f, n, image(m)) else 0), 2

    return ComputableFunction(
        label, source, target, image, native(f"graph[{label}]", step), limit_image
    )


def identity_function(d: EffectiveDomain) -> ComputableFunction:
    return function_from_image(d, d, lambda m: m, f"id[{d.name}]", lambda limit: limit)


def constant_function(
    source: EffectiveDomain, target: EffectiveDomain, code: int
) -> ComputableFunction:
    """x ↦ b′_code."""
    value = point_limit(target, code)
    return function_from_image(
        source, target, lambda m: code, f"const[{target.describe(code)}]", lambda limit: value
    )


def scale3_function(source: EffectiveDomain | None = None) -> ComputableFunction:
    """x ↦ 3x from interval(A,B) to interval(3A,3B); interval(0,1) by default.

    A ``source`` that is not an interval domain falls back to interval(0,1).
    """
    if source is None or source.ambient is None:
        source = interval_domain(0, 1)
    lo, hi = source.ambient
    target = interval_domain(3 * lo, 3 * hi)

    def image(m: int) -> int:
        i = source.decode(m)
        return target.encode(Interval(3 * i.lo, 3 * i.hi))

    def limit_image(limit: LimitDescriptor) -> LimitDescriptor:
        if limit.compare is None:
            raise WeakBasisTarget(f"{limit.label} has no comparison oracle to scale")
        exact = None if limit.exact is None else 3 * limit.exact
        return real_limit(target, f"3·({limit.label})", lambda q: limit.compare(q / 3), exact)

    return function_from_image(source, target, image, "scale3", limit_image)


BROKEN_OUTER = Interval(Fraction(1), Fraction(2))
BROKEN_INNER = Interval(Fraction(6, 5), Fraction(9, 5))


def broken_function() -> ComputableFunction:
    """A non-monotone map interval(1,2) → interval(0,3).

    [1,2] ↦ [0,1] and [6/5, 9/5] ↦ [2,3]; everything else goes to bottom.
    """
    source, target = interval_domain(1, 2), interval_domain(0, 3)
    outer, inner = source.encode(BROKEN_OUTER), source.encode(BROKEN_INNER)
    low = target.encode(Interval(Fraction(0), Fraction(1)))
    high = target.encode(Interval(Fraction(2), Fraction(3)))

    def image(m: int) -> int:
        if m == outer:
            return low
        if m == inner:
            return high
        return 0

    return function_from_image(source, target, image, "broken")


def apply_function(
    f: ComputableFunction, e: ComputableElement, schedule: Schedule | None = None
) -> ComputableElement:
    """f(x) as the element {b′_n : b′_n ≪ f(b_m) for some emitted b_m}.

    Raises:
        DomainMismatch: If ``e`` lives on another domain than ``f.source``.
        WeakBasisTarget: If ``f`` has no way-below graph.
    """
    if e.domain.name != f.source.name:
        raise DomainMismatch(f"{f.label} expects {f.source.name}, got {e.domain.name}")
    if f.graph is None or not f.target.is_continuous:
        raise WeakBasisTarget(f"{f.target.name} has no way-below relation")
    target = None
    if e.target is not None and f.limit_image is not None:
        target = f.limit_image(e.target)
    stream = dovetail_merge2(e.stream, f.graph, schedule, name=f"{f.label}({e.name})")
    logger.debug("applying %s to %s", f.label, e.name)
    return ComputableElement(f.target, stream, target, f"{f.label}({e.name})")


@dataclass
class MonotonicityReport:
    function: str
    checked: int
    witness: tuple[int, int] | None = None

    @property
    def passed(self) -> bool:
        return self.witness is None


def monotonicity_audit(
    f: ComputableFunction, size: int, codes: list[int] | None = None
) -> MonotonicityReport:
    """Check a ⪯ b ⇒ f(a) ⪯ f(b) on source codes < size plus ``codes``.

    Pairs whose smaller image is a limit are skipped: ⪯ between limits is
    not decidable here.
    """
    sample = list(dict.fromkeys([*range(size), *(codes or [])]))
    images = {a: f.image(a) for a in sample}
    checked = 0
    for a in sample:
        if isinstance(images[a], LimitDescriptor):
            continue
        for b in sample:
            if a == b or not f.source.leq(a, b):
                continue
            checked += 1
            if not _target_leq(f, images[a], images[b]):
                logger.info(
                    "%s not monotone: %s ⪯ %s but images are not ordered",
                    f.label, f.source.describe(a), f.source.describe(b),
                )
                return MonotonicityReport(f.label, checked, (a, b))
    return MonotonicityReport(f.label, checked)


@dataclass
class SoundnessReport:
    function: str
    checked: int
    unsound: list[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return not self.unsound


def graph_soundness_audit(f: ComputableFunction, count: int) -> SoundnessReport:
    """Replay the first ``count`` graph outputs against ≪ and the basis image."""
    if f.graph is None:
        raise WeakBasisTarget(f"{f.label} has no graph")
    unsound = []
    for ev in take(f.graph, count):
        n, m = unpair(ev.value)
        if not _target_way_below(f, n, f.image(m)):
            unsound.append((n, m))
    logger.info("%s graph: %d outputs replayed, %d unsound", f.label, count, len(unsound))
    return SoundnessReport(f.label, count, unsound)


# ---------------------------------------------------------------------------
# Model independence
# ---------------------------------------------------------------------------


def basis_bridge(source: EffectiveDomain, target: EffectiveDomain) -> CostedEnumerator:
    """Enumerator of {⟨n, m⟩ : b′_n ≪ b_m} between two bases of one carrier.

    b′ ranges over ``target`` and b over ``source``.

    Raises:
        DomainMismatch: If the carriers differ.
        WeakBasisTarget: If ``target`` has no way-below.
    """
    if source.carrier != target.carrier:
        raise DomainMismatch(f"{source.name} and {target.name} have different carriers")
    if not target.is_continuous:
        raise WeakBasisTarget(f"{target.name} has no way-below relation")

    def step(k: int) -> tuple[int, int]:
        n, m = unpair(k)
        return (k if target.value_way_below(target.decode(n), source.decode(m)) else 0), 1

    return native(f"bridge[{source.name}→{target.name}]", step)


def change_basis(
    e: ComputableElement,
    bridge: CostedEnumerator,
    target_domain: EffectiveDomain | None = None,
    sample: int = 256,
    schedule: Schedule | None = None,
) -> ComputableElement:
    """Re-express ``e`` over a second basis of the same carrier.

    Args:
        e: Element over the first basis.
        bridge: Enumerator of {⟨n, m⟩ : b′_n ≪ b_m}.
        target_domain: The second basis; defaults to ``e.domain``.
        sample: Bridge outputs replayed before the merge is built.
        schedule: Dovetail schedule.

    Returns:
        ComputableElement: Same target, codes of ``target_domain``.

    Raises:
        DomainMismatch: If the carriers differ.
        UnsoundBridge: If a sampled bridge output violates b′_n ≪ b_m.
    """
    d = target_domain or e.domain
    if d.carrier != e.domain.carrier:
        raise DomainMismatch(f"{e.domain.name} and {d.name} have different carriers")
    if not d.is_continuous:
        raise WeakBasisTarget(f"{d.name} has no way-below relation")
    bad = []
    for ev in take(bridge, sample):
        if ev.value == 0:
            continue
        n, m = unpair(ev.value)
        if not d.value_way_below(d.decode(n), e.domain.decode(m)):
            bad.append((n, m))
    if bad:
        raise UnsoundBridge(bad)
    stream = dovetail_merge2(e.stream, bridge, schedule, name=f"{bridge.name}({e.name})")
    return ComputableElement(d, stream, e.target, f"{e.name}@{d.name}")


def recode_element(
    e: ComputableElement,
    translation: CostedEnumerator,
    inverse: CostedEnumerator,
    sample: int = 256,
) -> ComputableElement:
    """Move ``e`` to a second finite map of the same basis.

    The result decodes through ``inverse`` so its decoded emissions are
    those of ``e``.

    Raises:
        NonBijectiveTranslation: If translation and inverse fail to undo each
            other on codes < sample.
    """
    forward_of = {k: evaluate(translation, k).value for k in range(sample)}
    for k, image in forward_of.items():
        if evaluate(inverse, image).value != k:
            raise NonBijectiveTranslation(f"{translation.name} is not inverted at {k}")
        if evaluate(translation, evaluate(inverse, k).value).value != k:
            raise NonBijectiveTranslation(f"{inverse.name} is not inverted at {k}")
    if len(set(forward_of.values())) != sample:
        raise NonBijectiveTranslation(f"{translation.name} is not injective below {sample}")
    domain = relabel_domain(
        e.domain,
        lambda code: evaluate(translation, code).value,
        lambda code: evaluate(inverse, code).value,
        name=f"{e.domain.name}~{translation.name}",
    )
    return ComputableElement(domain, recode(e.stream, translation), e.target, e.label)


# ---------------------------------------------------------------------------
# Two weak bases of the Q-domain
# ---------------------------------------------------------------------------


@dataclass
class TwoBasisDemo:
    """Chains to ∞ through two weak bases of the extended Q-domain.

    Attributes:
        naturals: 0, 1, 2, … in the basis that drops ℤ⁻.
        negatives: −1, −2, … in the basis that drops ℕ.
        cross_relations: Pairs (x, y) across the chains with x ⪯ y.
        chains: Whether both lists are ⪯-chains below ∞.
    """

    naturals: list[Fraction]
    negatives: list[Fraction]
    cross_relations: list[tuple[Fraction, Fraction]]
    chains: bool

    @property
    def disconnected(self) -> bool:
        return not self.cross_relations


def q_domain_two_bases(count: int) -> TwoBasisDemo:
    """Both chains climb to ∞ yet no element of one is related to the other."""
    naturals = [Fraction(k) for k in range(count)]
    negatives = [Fraction(-(k + 1)) for k in range(count)]
    chains = all(
        q_leq(x, y, extended=True) and q_leq(y, Q_TOP, extended=True)
        for chain in (naturals, negatives)
        for x, y in zip(chain, chain[1:])
    )
    cross = [
        (x, y)
        for a, b in ((naturals, negatives), (negatives, naturals))
        for x in a
        for y in b
        if q_leq(x, y, extended=True)
    ]
    logger.info("two-basis demo: %d cross relations over %d-element chains", len(cross), count)
    return TwoBasisDemo(naturals, negatives, cross, chains)

