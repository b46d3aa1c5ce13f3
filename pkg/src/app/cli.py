import logging
import re
import sys

import click
import pandas as pd

from src.app.models import (
    CensusRunDetailResponse,
    CensusRunListResponse,
    ExpansionResponse,
    ExpansionTerm,
    QueryRecord,
    TableauModel,
    VanishResponse,
)
from src.backend.census_store import CensusStore
from src.backend.config import EngineConfig
from src.backend.edge_tableaux import render_tableau
from src.backend.errors import BudgetExceededError, PartitionError
from src.backend.factorial_schur import expand_product, rewrite_in_beta
from src.backend.lr_polytope import (
    build_constraints,
    constraints_to_json,
    render_constraints_text,
)
from src.backend.partitions import parse_partition, render
from src.backend.polynomials import render_polynomial
from src.backend.row_statistics import RowStatistics
from src.backend.vanishing_engine import CENSUS_COLUMNS, VanishingEngine

EXIT_VANISHES = 1
EXIT_BUDGET = 3
EXIT_DISAGREEMENT = 4


class PartitionType(click.ParamType):
    """Comma-separated nonnegative integers; the empty string is the empty partition."""

    name = "partition"

    def convert(self, value, param, ctx):
        try:
            return parse_partition(value)
        except PartitionError as e:
            self.fail(str(e), param, ctx)


PARTITION = PartitionType()


def parse_box(ctx, param, value: str):
    match = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", value)
    if not match:
        raise click.BadParameter("expected ROWSxCOLS, e.g. 3x3")
    return int(match.group(1)), int(match.group(2))


def shape_options(*names):
    flags = {
        "lam": ("-l", "--lambda", "lam"),
        "mu": ("-m", "--mu", "mu"),
        "nu": ("-n", "--nu", "nu"),
    }

    def decorate(command):
        for name in reversed(names):
            command = click.option(
                *flags[name], type=PARTITION, required=True, help=f"Partition {name}, e.g. 2,1."
            )(command)
        return command

    return decorate


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML file with engine settings.",
)
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@click.pass_context
def cli(ctx, config_path, verbose):
    """Decide vanishing of Littlewood-Richardson polynomials."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    ctx.obj = EngineConfig.from_yaml(config_path) if config_path else EngineConfig()


@cli.command()
@shape_options("lam", "mu", "nu")
@click.option("--witness", is_flag=True, help="Search an integer point and print its tableau.")
@click.option("--classical", is_flag=True, help="Decide the classical coefficient c instead of C.")
@click.option("--json", "as_json", is_flag=True, help="Print the result as JSON.")
@click.pass_context
def vanish(ctx, lam, mu, nu, witness, classical, as_json):
    """Print VANISHES or NONVANISHING; exit 1 when the coefficient vanishes."""
    engine = VanishingEngine(config=ctx.obj)
    mode = "classical" if classical else ("witness" if witness else "verdict")
    query = QueryRecord(lam=render(lam), mu=render(mu), nu=render(nu), mode=mode)

    if classical:
        response = VanishResponse(
            query=query, vanishes=engine.decide_classical_vanishing(lam, mu, nu)
        )
        verdict = None
    else:
        verdict = engine.decide_vanishing(lam, mu, nu, with_witness=witness)
        response = VanishResponse(
            query=query,
            vanishes=verdict.vanishes,
            rational_point=verdict.rational_point,
            integer_point=verdict.integer_point,
            witness=TableauModel.from_tableau(verdict.witness) if verdict.witness else None,
            witness_budget_exceeded=verdict.witness_budget_exceeded,
        )

    if as_json:
        click.echo(response.model_dump_json(indent=2))
    else:
        click.echo("VANISHES" if response.vanishes else "NONVANISHING")
        if verdict is not None and verdict.witness is not None:
            stats = RowStatistics.from_vector(verdict.integer_point, nu.length, mu.length)
            click.echo(
                "point: " + " ".join(f"{k}={v}" for k, v in stats.nonzero().items())
            )
            click.echo(render_tableau(verdict.witness))
        elif response.witness_budget_exceeded:
            click.echo("witness: search budget exceeded")
    if response.vanishes:
        ctx.exit(EXIT_VANISHES)


@cli.command()
@shape_options("lam", "mu")
@click.option("--json", "as_json", is_flag=True, help="Print the expansion as JSON.")
@click.pass_context
def expand(ctx, lam, mu, as_json):
    """Print every nu with nonzero C^nu_{lambda,mu}, in Y and in beta variables."""
    config = ctx.obj
    n = max(lam.length + mu.length, 1)
    try:
        expansion = expand_product(
            lam,
            mu,
            n,
            max_size=config.oracle_max_size,
            max_variables=config.oracle_max_variables,
        )
    except BudgetExceededError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_BUDGET)

    terms = [
        ExpansionTerm(
            nu=str(nu),
            coefficient=render_polynomial(coefficient),
            beta=render_polynomial(rewrite_in_beta(coefficient)),
        )
        for nu, coefficient in expansion.items()
    ]
    if as_json:
        response = ExpansionResponse(lam=render(lam), mu=render(mu), n=n, terms=terms)
        click.echo(response.model_dump_json(indent=2))
        return
    for term in terms:
        if term.beta == term.coefficient:
            click.echo(f"{term.nu}: {term.coefficient}")
        else:
            click.echo(f"{term.nu}: {term.coefficient}  (beta: {term.beta})")


@cli.command()
@click.option("--box", "box", default="3x3", callback=parse_box, help="Box ROWSxCOLS for lambda and nu.")
@click.option("--mu-max", type=click.IntRange(min=0), default=4, help="Largest |mu|.")
@click.option("--workers", type=click.IntRange(min=1), default=1, help="Worker processes.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Write the CSV summary here.")
@click.option("--db", "db_url", default=None, help="SQLAlchemy URL to store the run in.")
@click.option("--run-name", default=None, help="Name of the stored run.")
@click.pass_context
def census(ctx, box, mu_max, workers, csv_path, db_url, run_name):
    """Cross-check every triple in a box; exit 4 on any disagreement."""
    rows, cols = box
    box_text = f"{rows}x{cols}"
    engine = VanishingEngine(config=ctx.obj)
    try:
        report = engine.run_census(rows, cols, mu_max, workers=workers)
    except BudgetExceededError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_BUDGET)

    if csv_path:
        report.to_csv(csv_path)
    if db_url:
        store = CensusStore(db_url=db_url)
        store.save_run(run_name or f"census-{box_text}-mu{mu_max}", box_text, mu_max, report)

    click.echo(f"{len(report.rows)} triples, {len(report.disagreements)} disagreements")
    if not report.ok:
        (lam, mu, nu), problem = report.disagreements[0]
        click.echo(f"first disagreement: {problem}", err=True)
        click.echo(
            f"reproducer: vanish -l '{render(lam)}' -m '{render(mu)}' -n '{render(nu)}'",
            err=True,
        )
        ctx.exit(EXIT_DISAGREEMENT)


@cli.command()
@shape_options("lam", "mu", "nu")
@click.option("--json", "as_json", is_flag=True, help="Dense JSON instead of one line per row.")
def dump(lam, mu, nu, as_json):
    """Print the constraint system of the polytope for (lambda, mu, nu)."""
    system = build_constraints(lam, mu, nu)
    if as_json:
        click.echo(constraints_to_json(system))
    else:
        click.echo(f"# {system.num_vars} variables, {len(system.rows)} rows")
        text = render_constraints_text(system)
        if text:
            click.echo(text)


@cli.command()
@click.option("--db", "db_url", default="sqlite:///census.db", help="SQLAlchemy URL of the store.")
@click.option("--show", "show_id", type=int, default=None, help="Print the rows of one run.")
@click.option("--delete", "delete_id", type=int, default=None, help="Delete one run.")
@click.option("--json", "as_json", is_flag=True, help="Print the runs as JSON.")
def runs(db_url, show_id, delete_id, as_json):
    """List stored census runs, or show or delete one of them."""
    store = CensusStore(db_url=db_url)
    if delete_id is not None:
        if not store.delete_run(delete_id):
            raise click.BadParameter(f"no stored run with ID {delete_id}.", param_hint="--delete")
        click.echo(f"deleted run {delete_id}")
        return
    if show_id is not None:
        run = store.load_run(show_id)
        if run is None:
            raise click.BadParameter(f"no stored run with ID {show_id}.", param_hint="--show")
        if as_json:
            click.echo(CensusRunDetailResponse(**run).model_dump_json(indent=2))
            return
        click.echo(
            f"{run['id']}\t{run['run_name']}\t{run['box']}\tmu<={run['mu_max']}\t"
            f"{run['disagreements']} disagreements"
        )
        click.echo(pd.DataFrame(run["rows"], columns=CENSUS_COLUMNS).to_string(index=False))
        return

    stored = store.list_runs()
    if as_json:
        click.echo(CensusRunListResponse(runs=stored).model_dump_json(indent=2))
        return
    for run in stored:
        click.echo(
            f"{run['id']}\t{run['run_name']}\t{run['box']}\tmu<={run['mu_max']}\t"
            f"{run['disagreements']} disagreements\t{run['updated_at']}"
        )
