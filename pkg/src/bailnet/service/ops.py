"""Service operations shared by the CLI and the HTTP endpoints.

Each operation takes already-parsed inputs and returns a plain document
dict.  The CLI prints ``documents.to_text(doc)`` and the HTTP layer sends
the same bytes, so the two interfaces are byte-identical by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional

from .. import abuse as abuse_mod
from .. import documents, optimizer, reductions
from ..documents import ParsedNetwork, ParseError
from ..money import format_exact, parse_rational
from ..netmodel import CapacityError, FinancialNetwork, clear
from ..objectives import ObjectiveSpec, apply_exact_bailouts, evaluate

DEFAULT_DEADLINE_SECONDS = 30.0


def parse_objective(obj: dict[str, Any]) -> ObjectiveSpec:
    """Objective from its document form: {kind, bank?, budget?, lambda?}."""
    if not isinstance(obj, dict):
        raise ParseError([("objective", "must be an object")])
    kind = obj.get("kind")
    if kind not in ("total", "own", "saved", "welfare"):
        raise ParseError([("objective.kind", f"unknown objective kind {kind!r}")])
    def rat(field: str) -> Optional[Fraction]:
        raw = obj.get(field)
        if raw is None:
            return None
        try:
            return parse_rational(raw)
        except (ValueError, TypeError) as exc:
            raise ParseError([(f"objective.{field}", str(exc))]) from exc
    try:
        return ObjectiveSpec(
            kind=kind,
            bank=obj.get("bank"),
            budget=rat("budget"),
            lam=rat("lambda"),
        )
    except ValueError as exc:
        raise ParseError([("objective", str(exc))]) from exc


def default_objective(parsed: ParsedNetwork) -> ObjectiveSpec:
    """Fallback objective for what-if requests that name none: welfare
    loss when the document designates a central bank (lambda from the
    document metadata, default 1), otherwise total value."""
    net = parsed.network
    if net.central_bank is not None:
        lam = parse_rational(parsed.metadata.get("lambda", "1"))
        return ObjectiveSpec("welfare", lam=lam)
    return ObjectiveSpec("total")


def op_clear(parsed: ParsedNetwork) -> dict:
    return documents.clearing_document(parsed.network, clear(parsed.network))


def op_optimize(
    parsed: ParsedNetwork,
    spec: ObjectiveSpec,
    method: str = "exact",
    *,
    max_insolvent: int = optimizer.DEFAULT_MAX_INSOLVENT,
    deadline_seconds: Optional[float] = DEFAULT_DEADLINE_SECONDS,
) -> dict:
    net = parsed.network
    if method == "exact":
        report = optimizer.optimize_exact(
            net, spec, max_insolvent=max_insolvent, deadline_seconds=deadline_seconds
        )
        if not report.optimal:
            raise CapacityError(
                "exact search exceeded the wall-clock cap; use the greedy method"
            )
    elif method == "greedy":
        report = optimizer.optimize_greedy(net, spec)
    elif method == "analytic":
        if spec.kind != "total" or spec.budget is not None:
            raise ParseError(
                [("method", "analytic applies only to unlimited total value")]
            )
        report = optimizer.analytic_unlimited_total_value(net)
    else:
        raise ParseError([("method", f"unknown method {method!r}")])
    return documents.plan_document(net, spec, report)


def op_whatif(
    parsed: ParsedNetwork, bailout: list[str], spec: Optional[ObjectiveSpec] = None
) -> dict:
    net = parsed.network
    if spec is None:
        spec = default_objective(parsed)
    plan = evaluate(net, spec, set(bailout))

    class _Shim:
        best = plan
        method = "whatif"
        explored = 1
        ties_broken = 0
        optimal = False

    return documents.plan_document(net, spec, _Shim(), kind="whatif")


def _graph_from_doc(graph: dict[str, Any]) -> reductions.SimpleGraph:
    if not isinstance(graph, dict):
        raise ParseError([("graph", "must be an object")])
    n = graph.get("n")
    edges = graph.get("edges", [])
    if not isinstance(n, int) or n < 0:
        raise ParseError([("graph.n", "must be a nonnegative integer")])
    try:
        return reductions.SimpleGraph.make(n, [tuple(e) for e in edges])
    except (ValueError, TypeError) as exc:
        raise ParseError([("graph.edges", str(exc))]) from exc


_FAMILIES = {
    "vertex-cover": lambda g, k, beta: reductions.gen_vertex_cover(g, beta),
    "densest-k": lambda g, k, beta: reductions.gen_densest_k(g, k, beta),
    "independent-set": lambda g, k, beta: reductions.gen_independent_set(g, k),
    "welfare": lambda g, k, beta: reductions.gen_welfare_blackhole(g, k, beta),
    "total-value": lambda g, k, beta: reductions.gen_total_value_budget(g, k, beta),
}


def op_generate(
    family: str,
    graph: dict[str, Any],
    k: Optional[int] = None,
    beta: Optional[str] = None,
) -> dict:
    if family not in _FAMILIES:
        raise ParseError(
            [("family", f"unknown family {family!r}; one of {sorted(_FAMILIES)}")]
        )
    g = _graph_from_doc(graph)
    beta_val = parse_rational(beta) if beta is not None else Fraction(1, 2)
    k_val = k if k is not None else 1
    try:
        inst = _FAMILIES[family](g, k_val, beta_val)
    except ValueError as exc:
        raise ParseError([("params", str(exc))]) from exc
    metadata = {
        "family": inst.family,
        "params": {
            key: format_exact(v) if isinstance(v, Fraction) else v
            for key, v in inst.params.items()
        },
        "vertex_banks": list(inst.vertex_bank_ids),
        "edge_banks": list(inst.edge_bank_ids),
    }
    doc = documents.serialize_network(inst.network, metadata)
    doc["kind"] = "network"
    return doc


def op_abuse(
    parsed: ParsedNetwork,
    spec: ObjectiveSpec,
    principal_step: Fraction,
    max_face: Fraction,
    face_step: Optional[Fraction] = None,
    *,
    max_insolvent: int = optimizer.DEFAULT_MAX_INSOLVENT,
) -> dict:
    reports = abuse_mod.find_exploits(
        parsed.network,
        spec,
        principal_step=principal_step,
        max_face=max_face,
        face_step=face_step,
        max_insolvent=max_insolvent,
    )
    return documents.abuse_document(reports)


def op_examples() -> dict:
    doc = {"examples": list(reductions.EXAMPLE_NAMES)}
    return documents._stamp(doc, "examples")


def op_example(name: str) -> dict:
    try:
        return reductions.load_example_document(name)
    except KeyError as exc:
        raise ParseError([("name", str(exc))]) from exc
