"""Measurements and complexity audits.

A measurement μ maps basis codes to non-negative rationals, decreasing
along the order. An element audit replays a program φ emitting basis codes
and checks, row by row, the step bound t(n), the gap μ(b_φ(n)) − μ(x)
against base^-n, and that every emission lies below x.
"""

import ast
import csv
import io
import logging
import operator
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel

from effdom.codes import format_fraction, pair, parse_fraction, unpair
from effdom.domains import (
    EffectiveDomain,
    LimitDescriptor,
    LimitMismatch,
    cantor_domain,
    check_conditionally_connected,
    interval_domain,
    unit_interval_domain,
)
from effdom.elements import (
    ComputableElement,
    ComputableFunction,
    Image,
    directedness_audit,
)
from effdom.machine import CostedEnumerator, evaluate

logger = logging.getLogger(__name__)


class UnknownMeasurement(KeyError):
    """Raised when a built-in measurement name is not recognised."""

    pass


class BoundFormatError(ValueError):
    """Raised when a complexity bound expression or table is malformed."""

    pass


class LimitValueUndefined(ValueError):
    """Raised when μ has no symbolic value at a limit."""

    pass


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Measurement:
    """μ on a domain's basis, with symbolic values at supported limits.

    Attributes:
        name: Display name.
        domain: Domain whose codes μ reads.
        basis_value: Basis code ↦ μ(b_code).
        limit_value: Limit ↦ μ(x); raises ``LimitValueUndefined`` when unknown.
    """

    name: str
    domain: EffectiveDomain
    basis_value: Callable[[int], Fraction] = field(compare=False)
    limit_value: Callable[[LimitDescriptor], Fraction] = field(compare=False)

    def __call__(self, code: int) -> Fraction:
        return self.basis_value(code)

    def of(self, value: Image) -> Fraction:
        """μ of a basis code or a limit."""
        if isinstance(value, LimitDescriptor):
            return self.limit_value(value)
        return self.basis_value(value)


def _unit_measurement(d: EffectiveDomain) -> Measurement:
    def limit_value(limit: LimitDescriptor) -> Fraction:
        if limit.exact is None:
            raise LimitValueUndefined(f"1−x is not symbolic at {limit.label}")
        return 1 - limit.exact

    return Measurement("unit", d, lambda code: 1 - d.decode(code), limit_value)


def _cantor_measurement(d: EffectiveDomain) -> Measurement:
    def limit_value(limit: LimitDescriptor) -> Fraction:
        if limit.kind == "string":
            return Fraction(0)
        raise LimitValueUndefined(f"ℓ is not symbolic at {limit.label}")

    return Measurement(
        "cantor", d, lambda code: Fraction(1, 2 ** len(d.decode(code))), limit_value
    )


def _length_measurement(d: EffectiveDomain) -> Measurement:
    def limit_value(limit: LimitDescriptor) -> Fraction:
        if limit.kind == "real":
            return Fraction(0)
        raise LimitValueUndefined(f"length is not symbolic at {limit.label}")

    return Measurement("length", d, lambda code: d.decode(code).width, limit_value)


_MEASUREMENTS: dict[str, tuple[Callable[[EffectiveDomain], Measurement], Callable[[], EffectiveDomain]]] = {
    "unit": (_unit_measurement, unit_interval_domain),
    "cantor": (_cantor_measurement, cantor_domain),
    "length": (_length_measurement, lambda: interval_domain(0, 1)),
}


def builtin_measurement(name: str, domain: EffectiveDomain | None = None) -> Measurement:
    """Look up a built-in measurement.

    - ``unit``: μ(x) = 1 − x on unit-interval bases.
    - ``cantor``: ℓ(s) = 2^-|s| on finite strings, 0 on infinite ones.
    - ``length``: μ([u, v]) = v − u on interval domains, 0 on reals.

    Args:
        name: One of "unit", "cantor", "length".
        domain: Basis to read codes from; defaults to the natural one.

    Raises:
        UnknownMeasurement: If the name is not recognised.
        LimitMismatch: If ``domain`` has the wrong carrier.
    """
    try:
        build, default = _MEASUREMENTS[name]
    except KeyError:
        raise UnknownMeasurement(f"unknown measurement {name!r}") from None
    d = domain or default()
    applies = d.ambient is not None if name == "length" else d.carrier == default().carrier
    if not applies:
        raise LimitMismatch(f"measurement {name} does not apply to {d.name}")
    return build(d)


def generic_measurement(d: EffectiveDomain, size: int) -> Measurement:
    """μ(x) = 1 − Σ_{n<size} 2^-(n+1)·[b_n ≪ x].

    Raises:
        LimitMismatch: If ``d`` has no way-below.
    """
    if not d.is_continuous:
        raise LimitMismatch(f"{d.name} is weak-basis-only")

    def basis_value(code: int) -> Fraction:
        return 1 - sum(
            (Fraction(1, 2 ** (n + 1)) for n in range(size) if d.way_below(n, code)),
            Fraction(0),
        )

    def limit_value(limit: LimitDescriptor) -> Fraction:
        return 1 - sum(
            (Fraction(1, 2 ** (n + 1)) for n in range(size) if d.way_below_limit(n, limit)),
            Fraction(0),
        )

    return Measurement(f"generic[{size}]", d, basis_value, limit_value)


# ---------------------------------------------------------------------------
# Strictness and inducing
# ---------------------------------------------------------------------------


@dataclass
class StrictnessReport:
    """Sampled monotonicity and strictness of μ.

    Attributes:
        measurement: Measurement name.
        checked: Ordered pairs a ⪯ b examined.
        witness: First (a, b) breaking the check.
        kind: "monotone" when μ(a) < μ(b), "strict" when a ≺ b but μ(a) = μ(b).
    """

    measurement: str
    checked: int
    witness: tuple[int, int] | None = None
    kind: str | None = None

    @property
    def passed(self) -> bool:
        return self.witness is None


def check_strict_monotone(mu: Measurement, d: EffectiveDomain, size: int) -> StrictnessReport:
    """Check a ⪯ b ⇒ μ(a) ≥ μ(b) and a ≺ b ⇒ μ(a) > μ(b) on codes < size."""
    values = [mu(code) for code in range(size)]
    checked = 0
    for a in range(size):
        for b in range(size):
            if a == b or not d.leq(a, b):
                continue
            checked += 1
            if values[a] < values[b]:
                return StrictnessReport(mu.name, checked, (a, b), "monotone")
            if values[a] == values[b]:
                return StrictnessReport(mu.name, checked, (a, b), "strict")
    return StrictnessReport(mu.name, checked)


INDUCES = "induces"
STRICTNESS_INSUFFICIENT = "strictness insufficient, see docs"
NOT_STRICT = "not strictly monotone"


@dataclass
class InducingVerdict:
    """Whether strictness alone shows that μ induces the Scott topology.

    The argument applies to conditionally connected domains only, so the
    connectivity scan gates the verdict.
    """

    verdict: str
    strictness: StrictnessReport
    connectivity_witness: tuple[int, int, int] | None = None


def inducing_by_strictness(mu: Measurement, d: EffectiveDomain, size: int) -> InducingVerdict:
    strictness = check_strict_monotone(mu, d, size)
    if not strictness.passed:
        return InducingVerdict(NOT_STRICT, strictness)
    connectivity = check_conditionally_connected(d, size)
    if not connectivity.connected:
        return InducingVerdict(STRICTNESS_INSUFFICIENT, strictness, connectivity.witness)
    logger.info("%s induces the Scott topology on %s (sampled N=%d)", mu.name, d.name, size)
    return InducingVerdict(INDUCES, strictness)


# ---------------------------------------------------------------------------
# Complexity bounds
# ---------------------------------------------------------------------------


_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}
_FUNCTIONS = {"max": max, "min": min}


def _compile_bound(text: str) -> Callable[[int], int]:
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError:
        raise BoundFormatError(f"not an arithmetic expression: {text!r}") from None

    def walk(node: ast.AST, env: dict[str, int]) -> int:
        match node:
            case ast.Expression(body=body):
                return walk(body, env)
            case ast.Constant(value=int() as value) if not isinstance(value, bool):
                return value
            case ast.Name(id=name) if name in env:
                return env[name]
            case ast.BinOp(left=left, op=op, right=right) if type(op) in _BINARY:
                return _BINARY[type(op)](walk(left, env), walk(right, env))
            case ast.UnaryOp(op=ast.USub(), operand=operand):
                return -walk(operand, env)
            case ast.Call(func=ast.Name(id=fn), args=args, keywords=[]) if fn in _FUNCTIONS:
                return _FUNCTIONS[fn](*(walk(a, env) for a in args))
        raise BoundFormatError(f"unsupported syntax in bound {text!r}: {ast.dump(node)}")

    walk(tree, {"n": 0, "m": 0, "p": 0})

    def bound(n: int) -> int:
        m, p = unpair(n)
        return walk(tree, {"n": n, "m": m, "p": p})

    return bound


@dataclass(frozen=True)
class ComplexityBound:
    """t: ℕ → ℕ as a closed form in n (with m, p = unpair(n)) or a table."""

    label: str
    fn: Callable[[int], int] = field(compare=False)

    def __call__(self, n: int) -> int:
        return self.fn(n)

    @classmethod
    def from_expression(cls, text: str) -> "ComplexityBound":
        """Arithmetic over n, m, p with + - * // % ** and max/min.

        Raises:
            BoundFormatError: On any other syntax.
        """
        return cls(text.strip(), _compile_bound(text))

    @classmethod
    def from_table(cls, values: Sequence[int], label: str = "table") -> "ComplexityBound":
        table = tuple(values)
        if not table or any(v < 0 for v in table):
            raise BoundFormatError("bound table must be a non-empty list of naturals")

        def lookup(n: int) -> int:
            if n >= len(table):
                raise BoundFormatError(f"bound table has no entry for n={n}")
            return table[n]

        return cls(label, lookup)

    @classmethod
    def from_file(cls, path: Path) -> "ComplexityBound":
        """One natural per line or comma-separated; ``#`` starts a comment."""
        tokens = []
        for line in path.read_text().splitlines():
            tokens += [t for t in line.split("#", 1)[0].replace(",", " ").split() if t]
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise BoundFormatError(f"{path} holds non-integer entries") from None
        return cls.from_table(values, label=path.name)

    @classmethod
    def parse(cls, text: str) -> "ComplexityBound":
        """An expression, or a table file when ``text`` names an existing file."""
        candidate = Path(text)
        if candidate.is_file():
            return cls.from_file(candidate)
        return cls.from_expression(text)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class AuditRow(BaseModel):
    """One audited index.

    Attributes:
        n: Program argument.
        m: Source basis index (function audits).
        p: Precision index (function audits).
        code: Emitted basis code.
        steps: Micro-steps spent.
        bound: t(n).
        gap: μ(emission) − μ(target), exact.
        tolerance: base^-n (or base^-p), exact.
        below_target: Emission lies below the target.
    """

    n: int
    m: int | None = None
    p: int | None = None
    code: int
    steps: int
    bound: int
    gap: str
    tolerance: str
    below_target: bool

    @property
    def steps_ok(self) -> bool:
        return self.steps <= self.bound

    @property
    def gap_ok(self) -> bool:
        return parse_fraction(self.gap) < parse_fraction(self.tolerance)

    @property
    def passed(self) -> bool:
        return self.steps_ok and self.gap_ok and self.below_target


class AuditReport(BaseModel):
    """Per-row verdicts plus the directedness or chain check.

    Attributes:
        subject: Element or function audited.
        measurement: μ name.
        bound: t label.
        rows: Audited rows in index order.
        directed: Result of the stream-level check.
        failures: Free-form stream-level findings.
    """

    subject: str
    measurement: str
    bound: str
    rows: list[AuditRow]
    directed: bool = True
    failures: list[str] = []

    @property
    def passed(self) -> bool:
        return self.directed and all(row.passed for row in self.rows)

    @property
    def failing_rows(self) -> list[int]:
        return [row.n for row in self.rows if not row.passed]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(_csv_record(row))
        return buffer.getvalue()


CSV_COLUMNS = [
    "n", "m", "p", "code", "steps", "bound", "gap", "tolerance",
    "steps_ok", "gap_ok", "below_target", "passed",
]


def _csv_record(row: AuditRow) -> dict[str, str]:
    record = {key: "" if value is None else str(value) for key, value in row.model_dump().items()}
    record.update(
        steps_ok=str(row.steps_ok), gap_ok=str(row.gap_ok), passed=str(row.passed)
    )
    return {key: record[key] for key in CSV_COLUMNS}


def read_audit_csv(text: str, subject: str = "csv") -> AuditReport:
    """Rebuild a report from ``AuditReport.to_csv`` output.

    Raises:
        BoundFormatError: If the header or a row is malformed.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_COLUMNS:
        raise BoundFormatError(f"unexpected audit columns: {reader.fieldnames}")
    rows = []
    for record in reader:
        try:
            rows.append(
                AuditRow(
                    n=int(record["n"]),
                    m=int(record["m"]) if record["m"] else None,
                    p=int(record["p"]) if record["p"] else None,
                    code=int(record["code"]),
                    steps=int(record["steps"]),
                    bound=int(record["bound"]),
                    gap=record["gap"],
                    tolerance=record["tolerance"],
                    below_target=record["below_target"] == "True",
                )
            )
        except (KeyError, ValueError) as exc:
            raise BoundFormatError(f"malformed audit row {record}: {exc}") from None
    return AuditReport(subject=subject, measurement="", bound="", rows=rows)


def diff_reports(a: AuditReport, b: AuditReport) -> list[str]:
    """Rows whose verdicts or step counts differ, plus rows present in one only."""
    left = {row.n: row for row in a.rows}
    right = {row.n: row for row in b.rows}
    found = []
    for n in sorted(left.keys() | right.keys()):
        if n not in right:
            found.append(f"n={n}: only in first report")
        elif n not in left:
            found.append(f"n={n}: only in second report")
        else:
            x, y = left[n], right[n]
            if x.steps != y.steps:
                found.append(f"n={n}: steps {x.steps} != {y.steps}")
            if x.passed != y.passed:
                found.append(f"n={n}: verdict {x.passed} != {y.passed}")
    return found


# ---------------------------------------------------------------------------
# Audits
# ---------------------------------------------------------------------------


def element_complexity_audit(
    phi: CostedEnumerator,
    t: ComplexityBound,
    mu: Measurement,
    target: LimitDescriptor,
    size: int,
    base: int = 2,
    fuel: int | None = None,
) -> AuditReport:
    """Audit φ as a t-time computation of ``target`` under μ for n < size.

    Each row checks steps ≤ t(n), μ(b_φ(n)) − μ(x) < base^-n and
    b_φ(n) ⪯ x; the stream is also audited for directedness.

    Raises:
        LimitValueUndefined: If μ has no symbolic value at ``target``.
    """
    d = mu.domain
    limit_mu = mu.limit_value(target)
    rows = []
    for n in range(size):
        ev = evaluate(phi, n, fuel)
        rows.append(
            AuditRow(
                n=n,
                code=ev.value,
                steps=ev.steps,
                bound=t(n),
                gap=format_fraction(mu(ev.value) - limit_mu),
                tolerance=format_fraction(Fraction(1, base**n)),
                below_target=d.below_limit(ev.value, target),
            )
        )
        logger.debug("row %d: code=%d steps=%d gap=%s", n, ev.value, ev.steps, rows[-1].gap)
    directed = directedness_audit(ComputableElement(d, phi, target), size, size)
    failures = []
    if not directed.passed:
        a, b = directed.witness
        failures.append(f"{d.describe(a)} and {d.describe(b)} have no joint bound")
    report = AuditReport(
        subject=phi.name,
        measurement=mu.name,
        bound=t.label,
        rows=rows,
        directed=directed.passed,
        failures=failures,
    )
    logger.info(
        "audit %s: %d rows, failing %s", phi.name, size, report.failing_rows or "none"
    )
    return report


def function_complexity_audit(
    f: ComputableFunction,
    phi: CostedEnumerator,
    t: ComplexityBound,
    mu: Measurement,
    size: int,
    base: int = 2,
    fuel: int | None = None,
) -> AuditReport:
    """Audit φ(⟨m, p⟩) as a t-time approximation of f(b_m) to base^-p.

    Rows cover pair codes n < size. For every m seen, the emissions
    φ(⟨m, 0⟩), φ(⟨m, 1⟩), … must form a ⪯-chain.
    """
    d = f.target
    rows = []
    by_source: dict[int, list[tuple[int, int]]] = {}
    for n in range(size):
        m, p = unpair(n)
        image = f.image(m)
        ev = evaluate(phi, n, fuel)
        if isinstance(image, LimitDescriptor):
            below = d.below_limit(ev.value, image)
        else:
            below = d.leq(ev.value, image)
        rows.append(
            AuditRow(
                n=n,
                m=m,
                p=p,
                code=ev.value,
                steps=ev.steps,
                bound=t(n),
                gap=format_fraction(mu(ev.value) - mu.of(image)),
                tolerance=format_fraction(Fraction(1, base**p)),
                below_target=below,
            )
        )
        by_source.setdefault(m, []).append((p, ev.value))
    failures = []
    for m, emitted in sorted(by_source.items()):
        codes = [code for _, code in sorted(emitted)]
        for x, y in zip(codes, codes[1:]):
            if not d.leq(x, y):
                failures.append(f"m={m}: {d.describe(x)} is not below {d.describe(y)}")
                break
    report = AuditReport(
        subject=f"{f.label}/{phi.name}",
        measurement=mu.name,
        bound=t.label,
        rows=rows,
        directed=not failures,
        failures=failures,
    )
    logger.info(
        "function audit %s: %d rows, failing %s", f.label, size, report.failing_rows or "none"
    )
    return report


MIN_DOUBLINGS = 2


@dataclass
class PolytimeVerdict:
    """Least polynomial degree consistent with the observed step counts.

    Attributes:
        degree: Least d ≤ max_degree passing the doubling test, or None.
        constant: C with steps(n) ≤ C·(n+1)^d on the audited range.
        max_degree: Largest degree tried.
        audited: Number of rows used.
        doublings: Pairs (m, 2m+1) the test compared.
    """

    degree: int | None
    constant: Fraction | None
    max_degree: int
    audited: int
    doublings: int = MIN_DOUBLINGS

    @property
    def inconclusive(self) -> bool:
        return self.doublings < MIN_DOUBLINGS

    @property
    def polynomial(self) -> bool:
        return self.degree is not None

    def __str__(self) -> str:
        if self.inconclusive:
            return (
                f"inconclusive: {self.doublings} doubling pairs on n < {self.audited}, "
                f"need {MIN_DOUBLINGS}"
            )
        if self.degree is None:
            return f"no polynomial fit ≤ degree {self.max_degree} on n < {self.audited}"
        return (
            f"dominated by {format_fraction(self.constant)}·(n+1)^{self.degree} "
            f"on n < {self.audited}"
        )


def polytime_check(report: AuditReport, max_degree: int = 3) -> PolytimeVerdict:
    """Doubling-ratio test on the step counts of ``report``.

    A polynomial of degree d at most multiplies by 2^d when its argument
    n+1 doubles, so d is accepted when steps(2m+1) ≤ 2^d·steps(m) for
    every audited m ≥ 1. Row m = 0 is skipped: additive constants dominate it.
    Fewer than ``MIN_DOUBLINGS`` pairs give an inconclusive verdict with no degree.
    """
    steps = {row.n: row.steps for row in report.rows}
    pairs = [(steps[m], steps[2 * m + 1]) for m in range(1, len(steps)) if 2 * m + 1 in steps]
    audited = len(steps)
    if len(pairs) < MIN_DOUBLINGS:
        logger.info("%s: %d doubling pairs, verdict inconclusive", report.subject, len(pairs))
        return PolytimeVerdict(None, None, max_degree, audited, len(pairs))
    for d in range(max_degree + 1):
        if all(later <= 2**d * earlier for earlier, later in pairs):
            constant = max(
                (Fraction(s, (n + 1) ** d) for n, s in steps.items()), default=Fraction(0)
            )
            logger.info("%s: degree %d fits", report.subject, d)
            return PolytimeVerdict(d, constant, max_degree, audited, len(pairs))
    logger.info("%s: no polynomial fit up to degree %d", report.subject, max_degree)
    return PolytimeVerdict(None, None, max_degree, audited, len(pairs))


# ---------------------------------------------------------------------------
# Fan open witness
# ---------------------------------------------------------------------------


@dataclass
class FanOpenWitness:
    """The open O′ at the fan's top escaping every candidate neighbourhood.

    A Scott open around p holds a tail {k ≥ b_n} of every branch n, so it
    is given by its thresholds. Candidate i is not inside O′ because the
    point ⟨i, b^i_i⟩ lies in candidate i but not in O′.

    Attributes:
        thresholds: b′_n = b^n_n + 1 for n < k.
        escapes: For each candidate i, the fan code ⟨i, b^i_i⟩.
    """

    thresholds: list[int]
    escapes: list[int]
    candidates: list[list[int]]

    def in_candidate(self, i: int, code: int) -> bool:
        branch, k = unpair(code)
        return branch < len(self.candidates[i]) and k >= self.candidates[i][branch]

    def in_open(self, code: int) -> bool:
        branch, k = unpair(code)
        return branch < len(self.thresholds) and k >= self.thresholds[branch]

    @property
    def passed(self) -> bool:
        return all(
            self.in_candidate(i, code) and not self.in_open(code)
            for i, code in enumerate(self.escapes)
        )


def fan_open_witness(candidates: Sequence[Sequence[int]]) -> FanOpenWitness:
    """Diagonalise against k candidate opens given by their branch thresholds.

    Args:
        candidates: candidates[i][n] is candidate i's threshold on branch n;
            every row needs at least k entries.

    Raises:
        ValueError: If a row is shorter than the number of candidates.
    """
    k = len(candidates)
    rows = [list(row) for row in candidates]
    if any(len(row) < k for row in rows):
        raise ValueError(f"each candidate needs thresholds on branches 0..{k - 1}")
    thresholds = [rows[n][n] + 1 for n in range(k)]
    escapes = [pair(i, rows[i][i]) for i in range(k)]
    logger.debug("fan O′ thresholds %s", thresholds)
    return FanOpenWitness(thresholds, escapes, rows)
