"""effdom CLI entry point."""

import logging
import random
from collections.abc import Iterator
from contextlib import contextmanager
from importlib.resources import files
from math import ceil
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from effdom import __version__
from effdom.catalog import (
    ELEMENT_PRESETS,
    ELEMENTS,
    FUNCTION_PRESETS,
    UnknownEntry,
    element,
    element_preset,
    function,
    function_preset,
)
from effdom.codes import (
    CARRIERS,
    Carrier,
    CodeError,
    Interval,
    format_fraction,
    pair,
    parse_fraction,
    unpair,
)
from effdom.complexity import (
    AuditReport,
    BoundFormatError,
    ComplexityBound,
    LimitValueUndefined,
    UnknownMeasurement,
    builtin_measurement,
    diff_reports,
    element_complexity_audit,
    fan_open_witness,
    function_complexity_audit,
    inducing_by_strictness,
    polytime_check,
    read_audit_csv,
)
from effdom.config import EffdomConfig, load_config
from effdom.domains import (
    EffectiveDomain,
    LimitDescriptor,
    LimitMismatch,
    NoWitnessKnown,
    UnknownDomain,
    builtin_domain,
    check_axioms,
    check_conditionally_connected,
    check_effective_basis,
    flipped_half_limit,
    not_way_below_witness,
    top_limit,
)
from effdom.elements import (
    DomainMismatch,
    NoComparableRepresentative,
    WeakBasisTarget,
    apply_function,
    approximant,
    directedness_audit,
    monotonicity_audit,
    target_audit,
)
from effdom.machine import (
    SCHEDULES,
    CostedEnumerator,
    EnumeratedSet,
    FuelExhausted,
    MachineError,
    Schedule,
    dovetail_merge2,
    evaluate,
    fairness_audit,
    identity,
    integer_sqrt,
    merge_cell,
    successor,
    table,
    take,
)
from effdom.posets import (
    CarrierTooLarge,
    PosetFormatError,
    is_compact,
    load_poset,
    random_poset,
    scott_opens,
    separates_points,
    way_below_oracle,
)
from effdom.posets import check_conditionally_connected as check_poset_connected
from effdom.reals import (
    NoSignChange,
    PolynomialFormatError,
    PrecisionNotReached,
    RationalPoly,
    bisection_element,
    enclose,
    pi_element,
)

app = typer.Typer(
    name="effdom",
    help="effdom: computable elements of effective domains.",
    no_args_is_help=True,
)

console = Console()

_USER_ERRORS = (
    CodeError,
    MachineError,
    FuelExhausted,
    UnknownDomain,
    NoWitnessKnown,
    LimitMismatch,
    CarrierTooLarge,
    PosetFormatError,
    UnknownEntry,
    DomainMismatch,
    WeakBasisTarget,
    NoComparableRepresentative,
    NoSignChange,
    PolynomialFormatError,
    PrecisionNotReached,
    BoundFormatError,
    UnknownMeasurement,
    LimitValueUndefined,
    OSError,
)


@contextmanager
def _user_errors() -> Iterator[None]:
    """Map library errors on user input to exit code 2."""
    try:
        yield
    except _USER_ERRORS as exc:
        # KeyError subclasses quote their message in str().
        message = exc.args[0] if exc.args else exc.__class__.__name__
        typer.echo(f"Error: {message}", err=True)
        raise typer.Exit(code=2)


def _usage_error(message: str) -> typer.Exit:
    typer.echo(f"Error: {message}", err=True)
    return typer.Exit(code=2)


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        typer.echo(f"effdom {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        False,
        "--version",
        "-V",
        help="Show version and exit.",
        callback=version_callback,
        is_eager=True,
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
    config_path: Optional[Path] = typer.Option(
        None, "--config", help="Config file (default ~/.config/effdom/config.toml)."
    ),
) -> None:
    """effdom: computable elements of effective domains."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
    ctx.ensure_object(dict)
    try:
        ctx.obj["config"] = load_config(config_path)
    except (ValidationError, ValueError, OSError) as exc:
        raise _usage_error(f"invalid configuration: {exc}")


def _config(ctx: typer.Context) -> EffdomConfig:
    return ctx.obj["config"]


# ---------------------------------------------------------------------------
# Codes
# ---------------------------------------------------------------------------


@app.command("pair")
def pair_cmd(
    n: int = typer.Argument(..., help="First component."),
    m: int = typer.Argument(..., help="Second component."),
) -> None:
    """Print the Cantor code ⟨n, m⟩."""
    with _user_errors():
        typer.echo(pair(n, m))


@app.command("unpair")
def unpair_cmd(k: int = typer.Argument(..., help="Cantor code.")) -> None:
    """Print π₁(k) and π₂(k), one per line."""
    with _user_errors():
        n, m = unpair(k)
    typer.echo(n)
    typer.echo(m)


_CARRIER_HELP = "fraction, string, interval, or a built-in domain such as interval(3,4)."


def _carrier(name: str) -> Carrier:
    """A raw finite map by name, else the codes of a built-in domain."""
    if name in CARRIERS:
        return CARRIERS[name]
    d = builtin_domain(name)
    return Carrier(d.name, d.describe, d.parse)


@app.command("decode")
def decode_cmd(
    codes: list[int] = typer.Argument(..., help="Indices."),
    carrier: str = typer.Option("string", "--carrier", "-c", help=_CARRIER_HELP),
) -> None:
    """Print the value at each index, one per line."""
    with _user_errors():
        c = _carrier(carrier)
        for code in codes:
            typer.echo(c.render(code))


@app.command("encode")
def encode_cmd(
    values: list[str] = typer.Argument(..., help="Values, e.g. 1/3, 01 or [1/2, 1]."),
    carrier: str = typer.Option("string", "--carrier", "-c", help=_CARRIER_HELP),
) -> None:
    """Print the index of each value, one per line."""
    with _user_errors():
        c = _carrier(carrier)
        for text in values:
            typer.echo(c.read(text))


# ---------------------------------------------------------------------------
# enum subcommand group
# ---------------------------------------------------------------------------

enum_app = typer.Typer(name="enum", help="Trace costed enumerators.", no_args_is_help=True)
app.add_typer(enum_app)

_PROGRAMS = {"identity": identity, "successor": successor, "isqrt": integer_sqrt}


def _program(name: str) -> CostedEnumerator:
    """A built-in program, ``table:3,1,4`` or the stream of a catalog element."""
    if name.startswith("table:"):
        try:
            values = [int(v) for v in name.removeprefix("table:").split(",") if v.strip()]
        except ValueError:
            raise CodeError(f"table entries must be naturals: {name!r}") from None
        if any(v < 0 for v in values):
            raise CodeError(f"table entries must be naturals: {name!r}")
        return table(values)
    if name in _PROGRAMS:
        return _PROGRAMS[name]()
    if name in ELEMENTS:
        return element(name).stream
    raise UnknownEntry(
        f"unknown program {name!r}; use table:…, {', '.join(_PROGRAMS)} or an element name"
    )


def _schedule(name: str) -> Schedule:
    try:
        return SCHEDULES[name]
    except KeyError:
        raise _usage_error(f"unknown schedule {name!r}; known: {', '.join(SCHEDULES)}")


@enum_app.command("trace")
def enum_trace(
    ctx: typer.Context,
    program: Optional[str] = typer.Argument(None, help="Program name."),
    schedule: Optional[str] = typer.Option(
        None, "--schedule", help="Trace the cells of shell or diagonal instead."
    ),
    count: int = typer.Option(10, "--take", "-n", help="Number of arguments."),
    start: int = typer.Option(0, "--start", help="First argument."),
) -> None:
    """Print n, f(n) and the steps spent; with --schedule, n and the (g,h) cell."""
    if (program is None) == (schedule is None):
        raise _usage_error("give either a program or --schedule")
    if schedule is not None:
        sched = _schedule(schedule)
        for n in range(start, start + count):
            cell = sched.cell(n)
            typer.echo(f"{n}\t({cell.g_index},{cell.h_index})")
        return
    with _user_errors():
        e = _program(program)
        rows = take(e, count, start, fuel=_config(ctx).fuel)
    for n, ev in enumerate(rows, start):
        typer.echo(f"{n}\t{ev.value}\t{ev.steps}")


@enum_app.command("range")
def enum_range(
    ctx: typer.Context,
    program: str = typer.Argument(..., help="Program name."),
    count: int = typer.Option(10, "--take", "-n", help="Distinct outputs listed."),
    budget: int = typer.Option(1000, "--budget", help="Arguments scanned."),
) -> None:
    """List the first distinct outputs with the argument and total steps that reached them."""
    fuel = _config(ctx).fuel
    seen: set[int] = set()
    spent = 0
    with _user_errors():
        e = _program(program)
        for n in range(budget):
            if len(seen) == count:
                break
            ev = evaluate(e, n, fuel)
            spent += ev.steps
            if ev.value not in seen:
                seen.add(ev.value)
                typer.echo(f"{n}\t{ev.value}\t{spent}")


@enum_app.command("scan")
def enum_scan(
    ctx: typer.Context,
    program: str = typer.Argument(..., help="Program name."),
    value: int = typer.Argument(..., help="Value searched for."),
    budget: int = typer.Option(1000, "--budget", help="Arguments scanned."),
) -> None:
    """Semi-decide membership in the range; exit 1 when not found within budget."""
    with _user_errors():
        result = EnumeratedSet(_program(program)).scan(value, budget, _config(ctx).fuel)
    if result.found:
        typer.echo(f"found at n={result.index}")
        return
    typer.echo(f"not found within {result.scanned} (inconclusive)")
    raise typer.Exit(code=1)


@enum_app.command("merge")
def enum_merge(
    ctx: typer.Context,
    g: str = typer.Argument(..., help="Program emitting values."),
    h: str = typer.Argument(..., help="Program emitting pairs ⟨value, key⟩."),
    count: int = typer.Option(16, "--take", "-n", help="Number of arguments."),
    schedule: str = typer.Option("shell", "--schedule", help="shell or diagonal."),
) -> None:
    """Trace the dovetail merge emitting π₁h(j) whenever π₂h(j) = g(i)."""
    sched = _schedule(schedule)
    with _user_errors():
        merged = dovetail_merge2(_program(g), _program(h), sched)
        rows = take(merged, count, fuel=_config(ctx).fuel)
    for n, ev in enumerate(rows):
        cell = merge_cell(sched, n)
        shown = "default" if cell is None else f"({cell.g_index},{cell.h_index})"
        typer.echo(f"{n}\t{shown}\t{ev.value}\t{ev.steps}")


@enum_app.command("fair")
def enum_fair(
    schedule: str = typer.Option("shell", "--schedule", help="shell or diagonal."),
    window: int = typer.Option(32, "--window", help="Side of the audited square."),
    horizon: Optional[int] = typer.Option(
        None, "--horizon", help="Steps allowed; defaults to window²."
    ),
) -> None:
    """Check that every cell of the window is visited within the horizon."""
    sched = _schedule(schedule)
    missing = fairness_audit(sched, window, horizon or window * window)
    if missing:
        first = min(missing, key=lambda c: (c.g_index, c.h_index))
        typer.echo(f"FAIL: {len(missing)} cells missing, first ({first.g_index},{first.h_index})")
        raise typer.Exit(code=1)
    typer.echo(f"PASS: {sched.name} covers {window}×{window}")


# ---------------------------------------------------------------------------
# domain subcommand group
# ---------------------------------------------------------------------------

domain_app = typer.Typer(name="domain", help="Inspect domains and finite posets.", no_args_is_help=True)
app.add_typer(domain_app)


def _data_path(path: Path) -> Path:
    """The file itself, else the sample of that name shipped with the package."""
    if path.exists():
        return path
    bundled = files("effdom.data").joinpath(path.name)
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"no such file: {path}")


def _render_set(s: frozenset[int]) -> str:
    return "{" + ", ".join(str(x) for x in sorted(s)) + "}"


@domain_app.command("check")
def domain_check(
    ctx: typer.Context,
    name: Optional[str] = typer.Argument(None, help="Built-in domain name."),
    file: Optional[Path] = typer.Option(None, "--file", "-f", help="Finite poset file."),
    size: int = typer.Option(32, "--size", "-N", help="Codes sampled for built-in domains."),
) -> None:
    """Check a finite poset exhaustively or a built-in domain on sampled codes.

    For a poset file: compact elements, Scott opens, T₀ separation and
    conditional connectedness. For a built-in domain: order and way-below
    laws, the way-below enumerator against the rule, and connectivity.
    """
    config = _config(ctx)
    if (name is None) == (file is None):
        raise _usage_error("give either a domain name or --file")
    if file is not None:
        with _user_errors():
            p = load_poset(_data_path(file))
            compact = [a for a in range(p.size) if is_compact(p, a)]
            opens = scott_opens(p, cap=config.scott_cap)
        typer.echo(f"poset {p.name} ({p.size} elements)")
        typer.echo("compact: " + " ".join(str(a) for a in compact))
        typer.echo(f"Scott opens ({len(opens)}):")
        for o in opens:
            typer.echo(f"  {_render_set(o)}")
        unseparated = separates_points(p, opens)
        typer.echo("T0: " + ("yes" if not unseparated else f"no, {unseparated[0]} not separated"))
        connected = check_poset_connected(p)
        typer.echo(
            "conditionally connected: "
            + ("yes" if connected.connected else f"no, witness {connected.witness}")
        )
        return
    with _user_errors():
        d = builtin_domain(name)
        axioms = check_axioms(d, size)
        basis = check_effective_basis(d, size) if d.is_continuous else None
        connectivity = check_conditionally_connected(d, size)
    typer.echo(f"domain {d.name} (N={size})")
    for law, found in axioms.violations.items():
        typer.echo(f"  {law}: " + ("ok" if not found else f"{len(found)} violations, first {found[0]}"))
    if basis is None:
        typer.echo("  way-below: none (weak basis only)")
    else:
        typer.echo(
            f"  effective basis: {basis.true_pairs} pairs, "
            + ("0 mismatches" if basis.passed else f"{len(basis.mismatches)} mismatches")
        )
    if connectivity.connected:
        typer.echo("  conditionally connected: yes")
    else:
        x, y, z = connectivity.witness
        typer.echo(
            f"  conditionally connected: no, {d.describe(x)} and {d.describe(y)} "
            f"below {d.describe(z)}"
        )
    if not axioms.passed or (basis is not None and not basis.passed):
        raise typer.Exit(code=1)


@domain_app.command("wb")
def domain_wb(
    ctx: typer.Context,
    a: str = typer.Option(..., "--a", help="First basis value."),
    b: str = typer.Option(..., "--b", help="Second basis value."),
    name: str = typer.Option("cantor", "--name", "-d", help="Built-in domain name."),
    file: Optional[Path] = typer.Option(None, "--file", "-f", help="Finite poset file."),
) -> None:
    """Decide a ≪ b; with --file, a and b are carrier indices."""
    with _user_errors():
        if file is not None:
            p = load_poset(_data_path(file))
            try:
                x, y = int(a), int(b)
            except ValueError:
                raise CodeError("poset elements are carrier indices") from None
            if not (0 <= x < p.size and 0 <= y < p.size):
                raise CodeError(f"indices must lie in 0..{p.size - 1}")
            result = way_below_oracle(p, x, y, cap=_config(ctx).oracle_cap)
        else:
            d = builtin_domain(name)
            result = d.way_below(d.parse(a), d.parse(b))
    typer.echo("yes" if result else "no")


def _witness_limit(d: EffectiveDomain) -> LimitDescriptor:
    if d.name == "flipped_unit":
        return flipped_half_limit(d)
    if d.name == "q_domain":
        return top_limit(d, "∞")
    if d.name == "fan":
        return top_limit(d, "p")
    raise NoWitnessKnown(f"no witness limit known for {d.name}")


@domain_app.command("witness")
def domain_witness(
    name: str = typer.Argument(..., help="flipped_unit, q_domain or fan."),
    a: str = typer.Argument(..., help="Basis value that is not way-below the limit."),
    count: int = typer.Option(100, "--count", "-K", help="Family members checked."),
) -> None:
    """Replay a directed family climbing to the limit while avoiding ↑a."""
    with _user_errors():
        d = builtin_domain(name)
        w = not_way_below_witness(d, d.parse(a), _witness_limit(d))
        check = w.verify(count)
    typer.echo(f"{d.describe(w.avoided)} is not way-below {w.limit}: {w.description}")
    if check.passed:
        typer.echo(f"PASS: {check.checked} members checked")
        return
    for failure in check.failures[:10]:
        typer.echo(f"  {failure}")
    typer.echo(f"FAIL: {len(check.failures)} failures")
    raise typer.Exit(code=1)


@domain_app.command("sample")
def domain_sample(
    ctx: typer.Context,
    count: int = typer.Option(50, "--count", help="Random posets generated."),
    size: int = typer.Option(6, "--size", help="Carrier size."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed; defaults to the config seed."),
) -> None:
    """Check the way-below oracle against ⪯ on random finite posets.

    In a finite poset every directed set has a top, so a ≪ b iff a ⪯ b.
    """
    config = _config(ctx)
    rng = random.Random(config.seed if seed is None else seed)
    mismatches = 0
    with _user_errors():
        for _ in range(count):
            p = random_poset(size, rng)
            mismatches += sum(
                way_below_oracle(p, a, b, cap=config.oracle_cap) != p.leq(a, b)
                for a in range(p.size)
                for b in range(p.size)
            )
    if mismatches:
        typer.echo(f"FAIL: {mismatches} mismatches over {count} posets")
        raise typer.Exit(code=1)
    typer.echo(f"PASS: {count} posets of size {size}, oracle agrees with the order")


# ---------------------------------------------------------------------------
# element subcommand group
# ---------------------------------------------------------------------------

element_app = typer.Typer(name="element", help="Audit computable elements.", no_args_is_help=True)
app.add_typer(element_app)


@element_app.command("audit")
def element_audit(
    ctx: typer.Context,
    name: str = typer.Option(..., "--name", help=f"One of {', '.join(ELEMENTS)}."),
    count: int = typer.Option(8, "--take", "-n", help="Emissions audited."),
    budget: Optional[int] = typer.Option(
        None, "--budget", help="Emissions searched for joint bounds."
    ),
) -> None:
    """Print emissions and check directedness and the target bound."""
    config = _config(ctx)
    with _user_errors():
        e = element(name)
        emissions = e.evaluations(count, fuel=config.fuel)
        directed = directedness_audit(e, count, budget or config.audit_budget)
        off_target = target_audit(e, count)
    for n, ev in enumerate(emissions):
        typer.echo(f"{n}\t{e.domain.describe(ev.value)}\t{ev.steps}")
    if directed.passed:
        typer.echo(f"directed: yes (first {count}, budget {directed.budget})")
    else:
        a, b = directed.witness
        typer.echo(
            f"directed: no, {e.domain.describe(a)} and {e.domain.describe(b)} "
            f"have no joint bound within {directed.budget}"
        )
    if e.target is not None:
        typer.echo(
            f"below {e.target}: " + ("yes" if not off_target else f"no, at n={off_target}")
        )
    if not directed.passed or off_target:
        raise typer.Exit(code=1)


@element_app.command("apply")
def element_apply(
    ctx: typer.Context,
    fn: str = typer.Option(..., "--fn", help="identity, constant, scale3 or broken."),
    name: str = typer.Option(..., "--element", "-e", help="Element name."),
    count: int = typer.Option(16, "--take", "-n", help="Emissions of f(x) printed."),
    schedule: str = typer.Option("shell", "--schedule", help="shell or diagonal."),
) -> None:
    """Apply a function to an element and print the non-bottom emissions.

    Exits 1 when the function fails the sampled monotonicity audit.
    """
    config = _config(ctx)
    sched = _schedule(schedule)
    with _user_errors():
        e = element(name)
        f = function(fn, e.domain)
        result = apply_function(f, e, sched)
        codes = result.emissions(count, fuel=config.fuel)
        monotone = monotonicity_audit(f, 16, e.emissions(8, fuel=config.fuel))
    shown = list(dict.fromkeys(c for c in codes if c != 0))
    typer.echo(f"{result.name}:")
    for code in shown:
        typer.echo(f"  {result.domain.describe(code)}")
    try:
        best = result.domain.describe(approximant(result, count, config.audit_budget))
    except NoComparableRepresentative:
        best = "none (emissions not yet bounded)"
    typer.echo(f"best so far: {best}")
    if not monotone.passed:
        a, b = monotone.witness
        typer.echo(
            f"not monotone: {f.source.describe(a)} ⪯ {f.source.describe(b)} "
            "but the images are not ordered"
        )
        raise typer.Exit(code=1)


# ---------------------------------------------------------------------------
# real subcommand group
# ---------------------------------------------------------------------------

real_app = typer.Typer(name="real", help="Exact real enclosures.", no_args_is_help=True)
app.add_typer(real_app)


def _print_enclosure(found: Interval, precision: int) -> None:
    """Exact endpoints, the width, then decimals fine enough to show 2^-precision."""
    typer.echo(str(found))
    typer.echo(f"width {format_fraction(found.width)}")
    typer.echo(f"decimal {found.decimal(len(str(2**precision)) + 1)}")


@real_app.command("compute")
def real_compute(
    poly: str = typer.Option(..., "--poly", help='Coefficients from x^0 up, e.g. "-2,0,1".'),
    interval: tuple[str, str] = typer.Option(..., "--interval", help="Bracket A B."),
    precision: int = typer.Option(10, "--precision", "-p", help="Width at most 2^-p."),
) -> None:
    """Enclose the root of a polynomial bracketed by a sign change."""
    with _user_errors():
        p = RationalPoly.parse(poly)
        a, b = (parse_fraction(x) for x in interval)
        if a >= b:
            raise CodeError(f"empty bracket [{interval[0]}, {interval[1]}]")
        # Emission n has width (b − a)/2^n.
        budget = precision + ceil(b - a).bit_length() + 2
        found = enclose(bisection_element(p, a, b), precision, budget=budget)
    _print_enclosure(found, precision)


@real_app.command("pi")
def real_pi(
    precision: int = typer.Option(10, "--precision", "-p", help="Width at most 2^-p."),
    budget: int = typer.Option(1 << 14, "--budget", help="Emissions searched."),
) -> None:
    """Enclose π from the grouped Leibniz series."""
    with _user_errors():
        found = enclose(pi_element(), precision, budget=budget)
    _print_enclosure(found, precision)


# ---------------------------------------------------------------------------
# complexity subcommand group
# ---------------------------------------------------------------------------

complexity_app = typer.Typer(
    name="complexity", help="Measurements and complexity audits.", no_args_is_help=True
)
app.add_typer(complexity_app)


def _bound(text: str) -> ComplexityBound:
    """A closed form, or a table file (bundled samples are found by name)."""
    if text.endswith(".table"):
        return ComplexityBound.from_file(_data_path(Path(text)))
    return ComplexityBound.parse(text)


def _print_report(report: AuditReport) -> None:
    has_pairs = any(row.m is not None for row in report.rows)
    grid = Table(title=f"{report.subject} under {report.measurement}, t = {report.bound}")
    grid.add_column("n", justify="right")
    if has_pairs:
        grid.add_column("m", justify="right")
        grid.add_column("p", justify="right")
    grid.add_column("steps", justify="right")
    grid.add_column("bound", justify="right")
    grid.add_column("μ-gap")
    grid.add_column("tolerance")
    grid.add_column("verdict")
    for row in report.rows:
        cells = [str(row.n)]
        if has_pairs:
            cells += [str(row.m), str(row.p)]
        problems = [
            label
            for label, ok in (
                ("steps", row.steps_ok), ("gap", row.gap_ok), ("order", row.below_target)
            )
            if not ok
        ]
        verdict = "ok" if not problems else "FAIL " + ",".join(problems)
        grid.add_row(*cells, str(row.steps), str(row.bound), row.gap, row.tolerance, verdict)
    console.print(grid)


@complexity_app.command("audit")
def complexity_audit(
    ctx: typer.Context,
    element_name: Optional[str] = typer.Option(
        None, "--element", "-e", help=f"One of {', '.join(ELEMENT_PRESETS)}."
    ),
    function_name: Optional[str] = typer.Option(
        None, "--function", help=f"One of {', '.join(FUNCTION_PRESETS)}."
    ),
    bound: Optional[str] = typer.Option(
        None, "--bound", "-t", help="Closed form in n (m, p) or a table file."
    ),
    count: int = typer.Option(12, "--take", "-n", help="Rows audited."),
    emit: str = typer.Option("table", "--emit", help="table, csv or json."),
    max_degree: int = typer.Option(3, "--max-degree", help="Largest polynomial degree tried."),
) -> None:
    """Audit a preset φ against a step bound and the μ-gap tolerance.

    Exits 1 when any row or the stream-level check fails.
    """
    config = _config(ctx)
    if (element_name is None) == (function_name is None):
        raise _usage_error("give exactly one of --element or --function")
    if emit not in ("table", "csv", "json"):
        raise _usage_error(f"unknown format {emit!r}; use table, csv or json")
    with _user_errors():
        if element_name is not None:
            preset = element_preset(element_name)
            t = _bound(bound or preset.bound)
            mu = builtin_measurement(preset.measurement, preset.element.domain)
            report = element_complexity_audit(
                preset.phi, t, mu, preset.element.target, count, config.precision_base, config.fuel
            )
        else:
            preset = function_preset(function_name)
            t = _bound(bound or preset.bound)
            mu = builtin_measurement(preset.measurement, preset.function.target)
            report = function_complexity_audit(
                preset.function, preset.phi, t, mu, count, config.precision_base, config.fuel
            )
    if emit == "csv":
        typer.echo(report.to_csv(), nl=False)
    elif emit == "json":
        typer.echo(report.model_dump_json(indent=2))
    else:
        _print_report(report)
        for failure in report.failures:
            typer.echo(failure)
        typer.echo(str(polytime_check(report, max_degree)))
        typer.echo("PASS" if report.passed else f"FAIL at n={report.failing_rows}")
    if not report.passed:
        raise typer.Exit(code=1)


@complexity_app.command("diff")
def complexity_diff(
    first: Path = typer.Argument(..., help="CSV from complexity audit --emit csv."),
    second: Path = typer.Argument(..., help="CSV to compare against."),
) -> None:
    """Compare two audit CSVs row by row; exit 1 when they differ."""
    with _user_errors():
        a = read_audit_csv(first.read_text(), first.name)
        b = read_audit_csv(second.read_text(), second.name)
    found = diff_reports(a, b)
    if not found:
        typer.echo(f"identical: {len(a.rows)} rows")
        return
    for line in found:
        typer.echo(line)
    raise typer.Exit(code=1)


@complexity_app.command("measure")
def complexity_measure(
    measurement: str = typer.Argument(..., help="unit, cantor or length."),
    name: Optional[str] = typer.Option(None, "--domain", "-d", help="Domain the codes belong to."),
    size: int = typer.Option(64, "--size", "-N", help="Codes sampled."),
) -> None:
    """Check strict monotonicity and whether it suffices to induce the Scott topology."""
    with _user_errors():
        d = builtin_domain(name) if name else None
        mu = builtin_measurement(measurement, d)
        verdict = inducing_by_strictness(mu, mu.domain, size)
    strictness = verdict.strictness
    if strictness.passed:
        typer.echo(f"{mu.name} on {mu.domain.name}: strictly monotone on {strictness.checked} pairs")
    else:
        a, b = strictness.witness
        typer.echo(
            f"{mu.name} on {mu.domain.name}: {strictness.kind} check fails at "
            f"{mu.domain.describe(a)} ⪯ {mu.domain.describe(b)}"
        )
    if verdict.connectivity_witness is not None:
        x, y, z = verdict.connectivity_witness
        typer.echo(
            f"not conditionally connected: {mu.domain.describe(x)} and "
            f"{mu.domain.describe(y)} below {mu.domain.describe(z)}"
        )
    typer.echo(f"verdict: {verdict.verdict}")
    if not strictness.passed:
        raise typer.Exit(code=1)


@complexity_app.command("fan")
def complexity_fan(
    ctx: typer.Context,
    k: int = typer.Option(8, "--candidates", "-k", help="Candidate opens."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for the candidate thresholds."),
) -> None:
    """Build the fan open O′ escaping k random candidate neighbourhoods of p."""
    rng = random.Random(_config(ctx).seed if seed is None else seed)
    candidates = [[rng.randrange(16) for _ in range(k)] for _ in range(k)]
    w = fan_open_witness(candidates)
    typer.echo("O′ thresholds: " + " ".join(str(b) for b in w.thresholds))
    fan = builtin_domain("fan")
    for i, code in enumerate(w.escapes):
        typer.echo(f"candidate {i}: contains {fan.describe(code)}, which O′ misses")
    if not w.passed:
        raise typer.Exit(code=1)
