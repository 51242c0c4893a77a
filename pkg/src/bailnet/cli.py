"""Command-line interface.

Thin client over the same service operations as the HTTP API, so both
produce byte-identical documents.  Exit codes: 0 ok, 2 input error,
3 capacity refused, 4 internal invariant violation.
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction
from typing import Optional

import click

from . import documents
from .documents import ParseError, ParsedNetwork
from .money import parse_rational
from .netmodel import BailnetError, CapacityError, FinancialNetwork, InvalidNetworkError
from .objectives import InfeasiblePlanError
from .service import ops

EXIT_INPUT = 2
EXIT_CAPACITY = 3
EXIT_INTERNAL = 4


def _fail(code: int, tag: str, message: str):
    click.echo(f"error:{tag}: {message}", err=True)
    sys.exit(code)


def engine_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, InvalidNetworkError, InfeasiblePlanError) as exc:
            _fail(EXIT_INPUT, "input", str(exc))
        except (ValueError, KeyError, OSError) as exc:
            _fail(EXIT_INPUT, "input", str(exc))
        except CapacityError as exc:
            _fail(EXIT_CAPACITY, "capacity", str(exc))
        except BailnetError as exc:
            _fail(EXIT_INTERNAL, "internal", str(exc))

    return wrapper


def _load_network(path: str, beta: Optional[str] = None) -> ParsedNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        parsed = documents.parse_network(fh.read())
    if beta is not None:
        net = parsed.network
        override = FinancialNetwork(
            net.banks, net.liabilities, parse_rational(beta), net.central_bank
        )
        parsed = ParsedNetwork(override, parsed.metadata)
    return parsed


def _objective_dict(objective: str, budget: Optional[str], lam: Optional[str]) -> dict:
    kind, _, bank = objective.partition(":")
    obj: dict = {"kind": kind}
    if bank:
        obj["bank"] = bank
    if budget is not None:
        obj["budget"] = budget
    if lam is not None:
        obj["lambda"] = lam
    return obj


def _emit(doc: dict) -> None:
    click.echo(documents.to_text(doc), nl=False)


@click.group()
def main():
    """Clearing, bailout optimization and manipulation search for
    financial networks."""


@main.command("clear")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--beta", default=None, help="Override the document's beta.")
@engine_errors
def clear_cmd(file: str, beta: Optional[str]):
    """Clear a network and print the clearing document."""
    _emit(ops.op_clear(_load_network(file, beta)))


@main.command("optimize")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--objective",
    required=True,
    help="total | own:<bank id> | saved | welfare",
)
@click.option("--budget", default=None, help="Budget as an exact rational.")
@click.option("--lambda", "lam", default=None, help="Welfare-loss lambda.")
@click.option(
    "--method",
    default="exact",
    type=click.Choice(["exact", "greedy", "analytic"]),
)
@click.option("--max-insolvent", default=20, show_default=True)
@engine_errors
def optimize_cmd(file, objective, budget, lam, method, max_insolvent):
    """Find the best bailout plan under an objective."""
    parsed = _load_network(file)
    spec = ops.parse_objective(_objective_dict(objective, budget, lam))
    _emit(ops.op_optimize(parsed, spec, method, max_insolvent=max_insolvent))


@main.command("whatif")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--bailout", required=True, help="Comma-separated bank ids.")
@click.option("--objective", default=None, help="total | own:<id> | saved | welfare")
@click.option("--budget", default=None)
@click.option("--lambda", "lam", default=None)
@engine_errors
def whatif_cmd(file, bailout, objective, budget, lam):
    """Evaluate one candidate bailout set."""
    parsed = _load_network(file)
    spec = (
        ops.parse_objective(_objective_dict(objective, budget, lam))
        if objective is not None
        else None
    )
    chosen = [b for b in bailout.split(",") if b]
    _emit(ops.op_whatif(parsed, chosen, spec))


@main.command("generate")
@click.argument(
    "family",
    type=click.Choice(
        ["vertex-cover", "densest-k", "independent-set", "welfare", "total-value"]
    ),
)
@click.option(
    "--graph",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help='JSON file {"n": <int>, "edges": [[u, v], ...]}.',
)
@click.option("--k", default=None, type=int)
@click.option("--beta", default=None)
@engine_errors
def generate_cmd(family, graph, k, beta):
    """Generate a hardness-construction instance from a graph."""
    with open(graph, "r", encoding="utf-8") as fh:
        graph_doc = json.load(fh)
    _emit(ops.op_generate(family, graph_doc, k, beta))


@main.command("abuse-search")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--objective", required=True)
@click.option("--budget", default=None)
@click.option("--lambda", "lam", default=None)
@click.option("--step", default="1", show_default=True, help="Principal grid step.")
@click.option("--max-face", default="4", show_default=True)
@click.option("--face-step", default=None)
@click.option("--max-insolvent", default=20, show_default=True)
@engine_errors
def abuse_cmd(file, objective, budget, lam, step, max_face, face_step, max_insolvent):
    """Search for mutually beneficial contracts that exploit the policy."""
    parsed = _load_network(file)
    spec = ops.parse_objective(_objective_dict(objective, budget, lam))
    _emit(
        ops.op_abuse(
            parsed,
            spec,
            parse_rational(step),
            parse_rational(max_face),
            parse_rational(face_step) if face_step else None,
            max_insolvent=max_insolvent,
        )
    )


@main.command("examples")
@click.argument("name", required=False)
@engine_errors
def examples_cmd(name: Optional[str]):
    """List bundled example networks, or print one by name."""
    if name is None:
        _emit(ops.op_examples())
    else:
        _emit(ops.op_example(name))


@main.command("serve")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--static",
    default=None,
    type=click.Path(exists=True, file_okay=False),
    help="Serve a static frontend directory at /.",
)
@engine_errors
def serve_cmd(port: int, host: str, static: Optional[str]):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(static_dir=static), host=host, port=port)


if __name__ == "__main__":
    main()
