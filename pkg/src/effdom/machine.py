"""Costed, total programs ℕ → ℕ and the dovetailing combinators.

A ``CostedEnumerator`` wraps an expression tree in a small deterministic
language. ``evaluate`` walks the tree and charges one micro-step per node
visit; ``Native`` nodes wrap host primitives that report their own step
counts. The range of an enumerator is the recursively enumerable set it
stands for.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from math import isqrt
from typing import Protocol

from effdom.codes import pair, unpair
from effdom.config import resolve_fuel

logger = logging.getLogger(__name__)

INPUT = "n"


class FuelExhausted(RuntimeError):
    """Raised when an evaluation exceeds its fuel ceiling.

    Attributes:
        steps: Micro-steps spent when the ceiling was hit.
    """

    def __init__(self, name: str, n: int, steps: int) -> None:
        super().__init__(f"{name} at {n} exceeded fuel after {steps} steps")
        self.steps = steps


class MachineError(ValueError):
    """Raised for malformed programs (empty tables, unbound variables)."""

    pass


class _Run:
    __slots__ = ("steps", "fuel", "name", "n")

    def __init__(self, fuel: int, name: str, n: int) -> None:
        self.steps = 0
        self.fuel = fuel
        self.name = name
        self.n = n

    def charge(self, amount: int) -> None:
        self.steps += amount
        if self.steps > self.fuel:
            raise FuelExhausted(self.name, self.n, self.steps)


# ---------------------------------------------------------------------------
# Expression language
# ---------------------------------------------------------------------------


class Expr(Protocol):
    def run(self, ctx: _Run, env: dict[str, int]) -> int: ...


@dataclass(frozen=True, slots=True)
class Const:
    value: int

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return self.value


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        try:
            return env[self.name]
        except KeyError:
            raise MachineError(f"unbound variable {self.name!r}") from None


def Input() -> Var:
    """The enumerator's argument."""
    return Var(INPUT)


def _monus(a: int, b: int) -> int:
    return a - b if a > b else 0


_ARITH: dict[str, Callable[[int, int], int]] = {
    "+": lambda a, b: a + b,
    "-": _monus,
    "*": lambda a, b: a * b,
    "//": lambda a, b: a // b if b else 0,
    "%": lambda a, b: a % b if b else a,
    "**": lambda a, b: a**b,
}


@dataclass(frozen=True, slots=True)
class Arith:
    """Binary arithmetic on naturals; ``-`` is truncated subtraction."""

    op: str
    left: Expr
    right: Expr

    def __post_init__(self) -> None:
        if self.op not in _ARITH:
            raise MachineError(f"unknown operator {self.op!r}")

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return _ARITH[self.op](self.left.run(ctx, env), self.right.run(ctx, env))


@dataclass(frozen=True, slots=True)
class Isqrt:
    arg: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return isqrt(self.arg.run(ctx, env))


@dataclass(frozen=True, slots=True)
class Pair:
    left: Expr
    right: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return pair(self.left.run(ctx, env), self.right.run(ctx, env))


@dataclass(frozen=True, slots=True)
class Fst:
    arg: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return unpair(self.arg.run(ctx, env))[0]


@dataclass(frozen=True, slots=True)
class Snd:
    arg: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return unpair(self.arg.run(ctx, env))[1]


_COMPARE: dict[str, Callable[[int, int], bool]] = {
    "==": lambda a, b: a == b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
}


@dataclass(frozen=True, slots=True)
class If:
    """``then`` when ``left op right`` holds, else ``otherwise``."""

    op: str
    left: Expr
    right: Expr
    then: Expr
    otherwise: Expr

    def __post_init__(self) -> None:
        if self.op not in _COMPARE:
            raise MachineError(f"unknown comparison {self.op!r}")

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        if _COMPARE[self.op](self.left.run(ctx, env), self.right.run(ctx, env)):
            return self.then.run(ctx, env)
        return self.otherwise.run(ctx, env)


@dataclass(frozen=True, slots=True)
class Let:
    name: str
    value: Expr
    body: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        bound = self.value.run(ctx, env)
        return self.body.run(ctx, {**env, self.name: bound})


@dataclass(frozen=True, slots=True)
class Lookup:
    """Cyclic table lookup ``table[index mod len(table)]``."""

    table: tuple[int, ...]
    index: Expr

    def __post_init__(self) -> None:
        if not self.table:
            raise MachineError("lookup table must be non-empty")

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return self.table[self.index.run(ctx, env) % len(self.table)]


@dataclass(frozen=True, slots=True)
class Call:
    """Composition: run another enumerator on the value of ``arg``."""

    callee: "CostedEnumerator"
    arg: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        return self.callee.body.run(ctx, {INPUT: self.arg.run(ctx, env)})


@dataclass(frozen=True, slots=True)
class Least:
    """Bounded minimisation: least k < bound with cond ≠ 0, else bound."""

    name: str
    bound: Expr
    cond: Expr

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        limit = self.bound.run(ctx, env)
        for k in range(limit):
            if self.cond.run(ctx, {**env, self.name: k}):
                return k
        return limit


@dataclass(frozen=True, slots=True)
class Native:
    """Host primitive returning ``(value, steps)``; its steps are charged."""

    name: str
    fn: Callable[..., tuple[int, int]] = field(compare=False)
    args: tuple[Expr, ...] = ()

    def run(self, ctx: _Run, env: dict[str, int]) -> int:
        ctx.charge(1)
        value, steps = self.fn(*(a.run(ctx, env) for a in self.args))
        ctx.charge(steps)
        return value


# ---------------------------------------------------------------------------
# Enumerators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CostedEnumerator:
    """A named total program ℕ → ℕ.

    Attributes:
        name: Label used in traces and error messages.
        body: Expression with the argument bound to ``Input()``.
    """

    name: str
    body: Expr


@dataclass(frozen=True, slots=True)
class Evaluation:
    value: int
    steps: int


def evaluate(e: CostedEnumerator, n: int, fuel: int | None = None) -> Evaluation:
    """Run ``e`` at ``n`` under the cost model.

    Args:
        e: Enumerator to run.
        n: Argument.
        fuel: Step ceiling; defaults to ``EFFDOM_FUEL`` or the configured value.

    Returns:
        Evaluation: The value and the micro-steps spent.

    Raises:
        FuelExhausted: If the ceiling is exceeded.
    """
    ctx = _Run(resolve_fuel(fuel), e.name, n)
    value = e.body.run(ctx, {INPUT: n})
    return Evaluation(value, ctx.steps)


def take(
    e: CostedEnumerator, count: int, start: int = 0, fuel: int | None = None
) -> list[Evaluation]:
    """Evaluate ``e`` on ``start .. start+count-1``."""
    return [evaluate(e, n, fuel) for n in range(start, start + count)]


def identity() -> CostedEnumerator:
    return CostedEnumerator("identity", Input())


def constant(value: int) -> CostedEnumerator:
    return CostedEnumerator(f"constant-{value}", Const(value))


def successor() -> CostedEnumerator:
    return CostedEnumerator("successor", Arith("+", Input(), Const(1)))


def integer_sqrt() -> CostedEnumerator:
    """⌊√n⌋ by bounded search for the least k with (k+1)² > n."""
    k1 = Arith("+", Var("k"), Const(1))
    cond = If("<", Input(), Arith("*", k1, k1), Const(1), Const(0))
    return CostedEnumerator(
        "isqrt", Least("k", Arith("+", Input(), Const(1)), cond)
    )


def table(values: Sequence[int], name: str | None = None) -> CostedEnumerator:
    """Finite-range enumerator cycling through ``values``."""
    values = tuple(values)
    return CostedEnumerator(name or f"table{list(values)}", Lookup(values, Input()))


def permutation(mapping: Sequence[int], name: str = "permutation") -> CostedEnumerator:
    """Code translation acting as ``mapping`` below ``len(mapping)``, identity above."""
    mapping = tuple(mapping)
    if sorted(mapping) != list(range(len(mapping))):
        raise MachineError("mapping is not a permutation of its index range")
    body = If("<", Input(), Const(len(mapping)), Lookup(mapping, Input()), Input())
    return CostedEnumerator(name, body)


def native(
    name: str, fn: Callable[[int], tuple[int, int]]
) -> CostedEnumerator:
    """Enumerator backed by a host primitive."""
    return CostedEnumerator(name, Native(name, fn, (Input(),)))


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ScheduleCell:
    g_index: int
    h_index: int


class SquareShell:
    """Square shells: shell k = ⌊√n⌋ covers the cells with max index k.

    With j = n − k², positions j ≤ k compare h(k) with g(k−j) and the rest
    compare g(k) with h(j−k−1). Every cell (p, q) is reached before
    (max(p, q) + 1)².
    """

    name = "shell"

    def cell(self, n: int) -> ScheduleCell:
        k = isqrt(n)
        j = n - k * k
        if j <= k:
            return ScheduleCell(k - j, k)
        return ScheduleCell(k, j - k - 1)

    def wrap(self, body: Expr) -> Expr:
        k, j = Var("k"), Var("j")
        g_index = If("<=", j, k, Arith("-", k, j), k)
        h_index = If("<=", j, k, k, Arith("-", Arith("-", j, k), Const(1)))
        return Let(
            "k",
            Isqrt(Input()),
            Let(
                "j",
                Arith("-", Input(), Arith("*", k, k)),
                Let("g_index", g_index, Let("h_index", h_index, body)),
            ),
        )


class CantorDiagonal:
    """Anti-diagonals: n = ⟨g_index, h_index⟩."""

    name = "diagonal"

    def cell(self, n: int) -> ScheduleCell:
        g, h = unpair(n)
        return ScheduleCell(g, h)

    def wrap(self, body: Expr) -> Expr:
        return Let("g_index", Fst(Input()), Let("h_index", Snd(Input()), body))


Schedule = SquareShell | CantorDiagonal

SCHEDULES: dict[str, Schedule] = {
    SquareShell.name: SquareShell(),
    CantorDiagonal.name: CantorDiagonal(),
}


def schedule_trace(schedule: Schedule, count: int) -> list[ScheduleCell]:
    return [schedule.cell(n) for n in range(count)]


def fairness_audit(schedule: Schedule, window: int, horizon: int) -> set[ScheduleCell]:
    """Cells of the window×window square not visited before ``horizon``.

    Returns:
        set[ScheduleCell]: Missing cells; empty when the schedule is fair there.
    """
    seen = {schedule.cell(n) for n in range(horizon)}
    wanted = {ScheduleCell(g, h) for g in range(window) for h in range(window)}
    missing = wanted - seen
    logger.debug(
        "fairness audit %s window=%d horizon=%d missing=%d",
        schedule.name, window, horizon, len(missing),
    )
    return missing


# ---------------------------------------------------------------------------
# Combinators
# ---------------------------------------------------------------------------


def _reserve_default(inner: CostedEnumerator) -> Expr:
    """n = 0 emits the default 0; n ≥ 1 runs ``inner`` at n − 1."""
    return If("==", Input(), Const(0), Const(0), Call(inner, Arith("-", Input(), Const(1))))


def merge_cell(schedule: Schedule, n: int) -> ScheduleCell | None:
    """Cell compared at argument n of a two-way merge; None for the reserved n = 0."""
    return schedule.cell(n - 1) if n else None


def dovetail_merge2(
    g: CostedEnumerator,
    h: CostedEnumerator,
    schedule: Schedule | None = None,
    name: str | None = None,
) -> CostedEnumerator:
    """Join range(g) against the second components of range(h).

    Argument 0 emits 0. At n ≥ 1 the schedule picks the cell for n − 1;
    the output is π₁(h(q)) when π₂(h(q)) = g(p), and 0 otherwise, so 0
    is in the range even when every comparison succeeds.
    """
    schedule = schedule or SquareShell()
    name = name or f"merge({g.name},{h.name})"
    h_value = Var("h_value")
    body = Let(
        "h_value",
        Call(h, Var("h_index")),
        If("==", Snd(h_value), Call(g, Var("g_index")), Fst(h_value), Const(0)),
    )
    cells = CostedEnumerator(f"{name}/cells", schedule.wrap(body))
    return CostedEnumerator(name, _reserve_default(cells))


def dovetail_merge3(
    g: CostedEnumerator,
    h: CostedEnumerator,
    j: CostedEnumerator,
    name: str | None = None,
) -> CostedEnumerator:
    """Chain three pair-emitting enumerators.

    Argument 0 emits 0. At n ≥ 1, n − 1 = ⟨r, ⟨s, t⟩⟩ emits
    ⟨π₁g(r), π₂j(t)⟩ when π₂g(r) = π₁h(s) and π₂h(s) = π₁j(t), else 0.
    """
    name = name or f"merge3({g.name},{h.name},{j.name})"
    gv, hv, jv = Var("g_value"), Var("h_value"), Var("j_value")
    joined = If(
        "==",
        Snd(gv),
        Fst(hv),
        If("==", Snd(hv), Fst(jv), Pair(Fst(gv), Snd(jv)), Const(0)),
        Const(0),
    )
    body = Let(
        "g_value",
        Call(g, Fst(Input())),
        Let(
            "h_value",
            Call(h, Fst(Snd(Input()))),
            Let("j_value", Call(j, Snd(Snd(Input()))), joined),
        ),
    )
    return CostedEnumerator(name, _reserve_default(CostedEnumerator(f"{name}/cells", body)))


def recode(e: CostedEnumerator, translation: CostedEnumerator) -> CostedEnumerator:
    """Post-compose ``translation`` onto ``e``."""
    return CostedEnumerator(
        f"{translation.name}∘{e.name}", Call(translation, Call(e, Input()))
    )


# ---------------------------------------------------------------------------
# Enumerated sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ScanResult:
    """Outcome of a membership scan.

    Attributes:
        found: True when the value was emitted within the budget.
        index: First n with f(n) = v, if found.
        scanned: Number of indices examined.
    """

    found: bool
    index: int | None
    scanned: int


@dataclass(frozen=True, slots=True)
class EnumeratedSet:
    """The range of ``source``."""

    source: CostedEnumerator

    def scan(self, v: int, budget: int, fuel: int | None = None) -> ScanResult:
        return membership_scan(self, v, budget, fuel)


def membership_scan(
    s: EnumeratedSet, v: int, budget: int, fuel: int | None = None
) -> ScanResult:
    """Semi-decide v ∈ range by scanning f(0), …, f(budget−1).

    A negative answer is inconclusive.
    """
    for n in range(budget):
        if evaluate(s.source, n, fuel).value == v:
            return ScanResult(True, n, n + 1)
    logger.debug("%d not found in %s within %d", v, s.source.name, budget)
    return ScanResult(False, None, budget)
