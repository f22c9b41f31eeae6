import json
import random
import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Sequence

import click
import typer

from ..classify import (
    classify,
    construct_counterexample,
    correspondence_dimension_check,
    counterexample_digits,
    quadratic_correspondence_demo,
)
from ..config.config import DEFAULT_PROFILE
from ..errors import CombpolError, ParseError, PreconditionError
from ..field import field_make, parse_field, set_table_limit
from ..forms import SymmetricForm, is_characteristic, realize, recover_small_arity
from ..log import setup_logging
from ..poly import FunctionTable, PointSpace, SparsePolynomial, interpolate, parse_poly, reduce_poly
from ..polarize import (
    comb_degree,
    comb_degree_oracle,
    defect_table,
    formal_defect,
    last_link_profile,
    longest_regular_chains,
)
from .commands.catalog import catalog_app
from .render import check_format, emit, error
from .settings import Settings, resolve_settings

app = typer.Typer(
    add_completion=False,
    help="combpol - combinatorial polarization of polynomial mappings\n\nExamples:\n"
         "  combpol classify --field 2^2 --dim 5 --n 5 \"x1*x2*x3*x4*x5 + x1^2*x2^2*x3^2*x4^2\"\n"
         "  combpol chains --p 3 \"(7,4)\"\n"
         "  combpol combdeg --field Q \"x1^3*x2\"",
)

app.add_typer(catalog_app, name="catalog", help="Worked examples with expected verdicts")

FIELD_HELP = "Field: p^e, p or Q"
FORMAT_HELP = "Output format: json or text"


@app.callback()
def main(
    ctx: typer.Context,
    profile: str = typer.Option(DEFAULT_PROFILE, "--profile", help="Config profile"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr"),
):
    setup_logging(verbose)
    ctx.obj = {"profile": profile}


@contextmanager
def handle_errors() -> Iterator[None]:
    """Every library error becomes a one-line diagnostic and exit status 2"""
    try:
        yield
    except CombpolError as e:
        error(str(e))
        raise typer.Exit(2)


def _settings(ctx: typer.Context, budget: Optional[int] = None, seed: Optional[int] = None,
              samples: Optional[int] = None) -> Settings:
    profile = (ctx.obj or {}).get("profile")
    settings = resolve_settings(profile, budget, seed, samples)
    set_table_limit(settings.field_table_limit)
    return settings


def _read_poly_text(text: Optional[str]) -> str:
    if text is None:
        if sys.stdin is None or sys.stdin.isatty():
            raise ParseError("no polynomial given; pass it as an argument or on stdin")
        text = sys.stdin.read()
    if not text.strip():
        raise ParseError("empty polynomial text")
    return text.strip()


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: {e}")


def _poly_document(f: SparsePolynomial) -> dict:
    return f.to_json()


# ----- commands ----------------------------------------------------------------------

@app.command("polarize")
def polarize_cmd(
    ctx: typer.Context,
    poly: Optional[str] = typer.Argument(None, help="Polynomial (read from stdin when omitted)"),
    table: Optional[Path] = typer.Option(None, "--table", help="FunctionTable JSON file instead of a polynomial"),
    field: str = typer.Option("2", "--field", help=FIELD_HELP),
    dim: Optional[int] = typer.Option(None, "--dim", help="Variable count (default: largest index used)"),
    n: int = typer.Option(2, "--n", help="Arity of the defect"),
    method: str = typer.Option("multinomial", "--method", help="Formal expansion: multinomial or subsets"),
    samples: Optional[int] = typer.Option(None, "--samples", help="Sampled tuples when V^n exceeds the budget"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
    seed: Optional[int] = typer.Option(None, "--seed", help="Sampling seed"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Table budget override"),
):
    """n-th defect: formal for a polynomial, table-based for a --table file"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx, budget, seed, samples)
        if table is not None:
            tab = FunctionTable.from_json(_read_json(table))
            space = PointSpace(tab.spec, tab.d)
            if space.size ** n <= settings.table_budget:
                result = defect_table(tab, n, budget=settings.table_budget)
            else:
                rng = random.Random(settings.seed)
                tuples = [[space.random_point(rng) for _ in range(n)] for _ in range(settings.sample_count)]
                result = defect_table(tab, n, tuples=tuples, seed=settings.seed)
            emit(result.to_json(), fmt, f"Delta^{n} table")
            return
        spec = parse_field(field)
        f = parse_poly(_read_poly_text(poly), spec, dim)
        defect = formal_defect(f, n, method=method, budget=settings.expansion_budget)
        emit(defect.to_json(), fmt, f"Delta^{n} {f}")


@app.command("combdeg")
def combdeg_cmd(
    ctx: typer.Context,
    poly: Optional[str] = typer.Argument(None, help="Polynomial (read from stdin when omitted)"),
    field: str = typer.Option("2", "--field", help=FIELD_HELP),
    dim: Optional[int] = typer.Option(None, "--dim", help="Variable count"),
    verify: bool = typer.Option(False, "--verify", help="Also run the symbolic-expansion oracle"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
    budget: Optional[int] = typer.Option(None, "--budget", help="Expansion budget override"),
):
    """Combinatorial degree via p-weights"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx)
        f = parse_poly(_read_poly_text(poly), parse_field(field), dim)
        result = {"field": f.spec.label, "poly": str(f), "comb_degree": comb_degree(f)}
        if verify:
            oracle = comb_degree_oracle(f, budget=budget or settings.expansion_budget)
            result["oracle"] = oracle
            result["agree"] = oracle == result["comb_degree"]
        emit(result, fmt, "combinatorial degree")
    if verify and not result["agree"]:
        raise typer.Exit(1)


@app.command("reduce")
def reduce_cmd(
    poly: Optional[str] = typer.Argument(None, help="Polynomial (read from stdin when omitted)"),
    field: str = typer.Option("2", "--field", help=FIELD_HELP),
    dim: Optional[int] = typer.Option(None, "--dim", help="Variable count"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
):
    """Reduced representative (all exponents < q)"""
    check_format(fmt)
    with handle_errors():
        f = parse_poly(_read_poly_text(poly), parse_field(field), dim)
        emit(_poly_document(reduce_poly(f)), fmt, "reduced")


@app.command("realize")
def realize_cmd(
    ctx: typer.Context,
    form: Path = typer.Option(..., "--form", help="SymmetricForm JSON file"),
    small_arity: bool = typer.Option(False, "--small-arity", help="Use phi(n*u)/n! (needs n < chr F)"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
    budget: Optional[int] = typer.Option(None, "--budget", help="Characteristic-check budget"),
):
    """Polynomial whose n-th defect is the given characteristic form"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx, budget)
        phi = SymmetricForm.from_json(_read_json(form))
        verdict = is_characteristic(phi, budget=settings.table_budget)
        if not verdict:
            raise PreconditionError(f"form is not characteristic: phi(p*u, v) = {verdict.witness['value']} "
                                    f"at u={verdict.witness['u']}, v={verdict.witness['v']}")
        alpha = recover_small_arity(phi) if small_arity else realize(phi)
        emit(_poly_document(alpha), fmt, "realization")


@app.command("classify")
def classify_cmd(
    ctx: typer.Context,
    poly: Optional[str] = typer.Argument(None, help="Reduced polynomial (read from stdin when omitted)"),
    field: str = typer.Option("2", "--field", help=FIELD_HELP),
    dim: Optional[int] = typer.Option(None, "--dim", help="Variable count"),
    n: int = typer.Option(2, "--n", help="Arity"),
    semantic: bool = typer.Option(True, "--semantic/--no-semantic", help="Cross-check against the definition"),
    samples: Optional[int] = typer.Option(None, "--samples", help="Sampled tuples for the linearity check"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
    seed: Optional[int] = typer.Option(None, "--seed", help="Sampling seed"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Linearity budget override"),
):
    """Is the mapping an n-application? Exit 0 if yes, 1 if not"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx, budget, seed, samples)
        f = parse_poly(_read_poly_text(poly), parse_field(field), dim)
        report = classify(
            f, n,
            semantic=semantic,
            homogeneity_budget=settings.homogeneity_budget,
            linearity_budget=settings.linearity_budget,
            samples=settings.sample_count,
            seed=settings.seed,
        )
        emit(report.to_json(), fmt, f"{n}-application check")
    raise typer.Exit(0 if report.is_n_application else 1)


_TUPLE = re.compile(r"^\(?\s*\d+(\s*,\s*\d+)*\s*,?\s*\)?$")


def _parse_multiexponent(text: str) -> List[int]:
    if not _TUPLE.match(text.strip()):
        raise ParseError(f"multiexponent must look like (7,4), got {text!r}")
    return [int(k) for k in re.findall(r"\d+", text)]


@app.command("chains")
def chains_cmd(
    ctx: typer.Context,
    m: str = typer.Argument(..., help="Multiexponent, e.g. \"(7,4)\""),
    p: str = typer.Option("2", "--p", help="Characteristic: a prime or inf"),
    enumerate_all: bool = typer.Option(True, "--all/--length-only", help="List the chains"),
    limit: Optional[int] = typer.Option(None, "--limit", help="Maximum number of chains listed"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
):
    """Longest regular chains below a multiexponent"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx)
        spec = parse_field("Q") if p.strip().lower() in ("inf", "q", "infinity") else field_make(_int(p, "--p"))
        exponents = _parse_multiexponent(m)
        listing = longest_regular_chains(exponents, spec, enumerate_all, limit or settings.chain_limit)
        result = listing.to_json()
        result["last_links"] = [list(x) for x in sorted(last_link_profile(exponents, spec))]
        result["totally_reduced"] = all(k < spec.p for k in exponents)
        emit(result, fmt, f"chains below {tuple(exponents)}")


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer or inf, got {text!r}")


@app.command("counterexample")
def counterexample_cmd(
    field: str = typer.Option("2^2", "--field", help="Non-prime finite field p^e"),
    n: int = typer.Option(5, "--n", help="Arity (n >= max(5, q))"),
    dim: Optional[int] = typer.Option(None, "--dim", help="Variable count (default n)"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
):
    """A non-homogeneous n-application of degree n+q-1"""
    check_format(fmt)
    with handle_errors():
        spec = parse_field(field)
        f = construct_counterexample(spec, n, dim or n)
        result = _poly_document(f)
        result["n"] = n
        result["digits"] = list(counterexample_digits(spec, n))
        result["degree"] = n + spec.q - 1
        emit(result, fmt, "counterexample")


@app.command("interp")
def interp_cmd(
    table: Path = typer.Argument(..., help="FunctionTable JSON file"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
):
    """Reduced polynomial realizing a function table"""
    check_format(fmt)
    with handle_errors():
        f = interpolate(FunctionTable.from_json(_read_json(table)))
        emit(_poly_document(f), fmt, "interpolation")


@app.command("demo")
def demo_cmd(
    ctx: typer.Context,
    field: str = typer.Option("3", "--field", help=FIELD_HELP),
    dim: int = typer.Option(2, "--dim", help="Dimension d"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
    budget: Optional[int] = typer.Option(None, "--budget", help="Enumeration budget"),
):
    """Quadratic forms versus 2-applications"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx, budget)
        demo = quadratic_correspondence_demo(parse_field(field), dim, budget=settings.table_budget)
        emit(demo.to_json(), fmt, "quadratic correspondence")
    raise typer.Exit(0 if demo.bijective and demo.recovered else 1)


@app.command("dimcheck")
def dimcheck_cmd(
    ctx: typer.Context,
    field: str = typer.Option("2", "--field", help=FIELD_HELP),
    dim: int = typer.Option(2, "--dim", help="Dimension d"),
    n: int = typer.Option(2, "--n", help="Arity"),
    fmt: str = typer.Option("json", "--format", help=FORMAT_HELP),
    budget: Optional[int] = typer.Option(None, "--budget", help="Enumeration budget"),
):
    """Monomial count of (tpl ∩ dpl)/(pl_(n-1) ∩ dpl) against dim C_n(V)"""
    check_format(fmt)
    with handle_errors():
        settings = _settings(ctx, budget)
        report = correspondence_dimension_check(parse_field(field), dim, n, budget=settings.table_budget)
        emit(report.to_json(), fmt, "dimension check")
    raise typer.Exit(0 if report.agree else 1)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one invocation and return its exit status"""
    try:
        result = app(args=list(argv) if argv is not None else None, prog_name="combpol", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    app()
