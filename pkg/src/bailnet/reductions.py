"""Hardness-construction instance generators and bundled example networks.

Each generator turns a simple undirected graph into a financial network in
which the optimal bailout decision encodes a classic graph problem
(vertex cover, densest-k-subgraph, independent set).  Generated instances
carry their certificate parameters so tests can cross-check the optimizer
against brute-forced graph optima.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

from .documents import ParsedNetwork, parse_network
from .netmodel import Bank, FinancialNetwork, Liability

ZERO = Fraction(0)
ONE = Fraction(1)

EXAMPLE_NAMES = (
    "fig1",
    "fig2_indirect",
    "fig3_too_big_to_fail",
    "fig4_welfare",
    "fig5a_abuse",
    "fig5b_abuse",
)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) references a missing vertex")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add(key)

    @staticmethod
    def make(n: int, edges) -> "SimpleGraph":
        norm = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        return SimpleGraph(n, norm)

    def degree(self, v: int) -> int:
        return sum(1 for a, b in self.edges if v in (a, b))


@dataclass(frozen=True)
class ReductionInstance:
    network: FinancialNetwork
    family: str  # VertexCover | DensestK | IndependentSet | WelfareBlackHole | TotalValueBudget
    params: dict[str, Any]
    vertex_bank_ids: tuple[str, ...]
    edge_bank_ids: tuple[str, ...]


def _vertex_id(v: int) -> str:
    return f"v{v}"


def _edge_id(u: int, v: int) -> str:
    return f"e{min(u, v)}_{max(u, v)}"


def _warn_isolated(graph: SimpleGraph) -> None:
    isolated = [v for v in range(graph.n) if graph.degree(v) == 0]
    if isolated:
        warnings.warn(
            f"graph has isolated vertices {isolated}: their vertex banks have "
            "no liabilities and are trivially solvent",
            stacklevel=3,
        )


def _vertex_banks_and_debts(
    graph: SimpleGraph, eps: Fraction
) -> tuple[list[Bank], list[Liability]]:
    """Vertex bank v: cash d_v, debt 1 + eps/d_v to each incident edge bank."""
    banks, liabs = [], []
    for v in range(graph.n):
        d = graph.degree(v)
        banks.append(Bank(_vertex_id(v), Fraction(d)))
        if d == 0:
            continue
        amount = 1 + eps / d
        for a, b in graph.edges:
            if v in (a, b):
                liabs.append(Liability(_vertex_id(v), _edge_id(a, b), amount))
    return banks, liabs


def gen_vertex_cover(graph: SimpleGraph, beta: Fraction) -> ReductionInstance:
    """Own-value construction: bank 0's best achievable market value is
    n + (1+beta)|E| - eps*VC(G) where VC(G) is the minimum vertex cover."""
    beta = Fraction(beta)
    if not 0 <= beta < 1:
        raise ValueError("beta must be in [0, 1)")
    _warn_isolated(graph)
    eps = (1 - beta) / 2
    n, m = graph.n, len(graph.edges)
    banks = [Bank("0", Fraction(n))]
    liabs: list[Liability] = []
    for a, b in graph.edges:
        banks.append(Bank(_edge_id(a, b), ZERO))
        liabs.append(Liability(_edge_id(a, b), "0", 1 + beta))
    vbanks, vliabs = _vertex_banks_and_debts(graph, eps)
    banks += vbanks
    liabs += vliabs
    net = FinancialNetwork(tuple(banks), tuple(liabs), beta)
    params = {
        "eps": eps,
        "beta": beta,
        "kprime_base": n + (1 + beta) * m,  # k' = base - k*eps
        "kprime_step": eps,
    }
    return ReductionInstance(
        net,
        "VertexCover",
        params,
        tuple(_vertex_id(v) for v in range(n)),
        tuple(_edge_id(a, b) for a, b in graph.edges),
    )


def gen_densest_k(graph: SimpleGraph, k: int, beta: Fraction) -> ReductionInstance:
    """Saved-count construction: with budget k*eps the optimum saves
    k + (edges of the densest k-subgraph) banks."""
    beta = Fraction(beta)
    if not 0 <= beta < 1:
        raise ValueError("beta must be in [0, 1)")
    if not 0 <= k <= graph.n:
        raise ValueError("k must be between 0 and the vertex count")
    _warn_isolated(graph)
    eps = (1 - beta) / 3
    banks = [Bank("0", ZERO)]
    liabs: list[Liability] = []
    for a, b in graph.edges:
        banks.append(Bank(_edge_id(a, b), ZERO))
        liabs.append(Liability(_edge_id(a, b), "0", Fraction(2)))
    vbanks, vliabs = _vertex_banks_and_debts(graph, eps)
    banks += vbanks
    liabs += vliabs
    net = FinancialNetwork(tuple(banks), tuple(liabs), beta)
    params = {"eps": eps, "beta": beta, "k": k, "budget": k * eps}
    return ReductionInstance(
        net,
        "DensestK",
        params,
        tuple(_vertex_id(v) for v in range(graph.n)),
        tuple(_edge_id(a, b) for a, b in graph.edges),
    )


def gen_independent_set(graph: SimpleGraph, k: int) -> ReductionInstance:
    """No-default-cost construction (beta = 1): with budget |E|+k exactly
    |E|+k banks can be saved iff G has an independent set of size k."""
    if not 0 <= k <= graph.n:
        raise ValueError("k must be between 0 and the vertex count")
    m = len(graph.edges)
    banks = [Bank("0", ZERO), Bank("1", ZERO)]
    liabs: list[Liability] = []
    for a, b in graph.edges:
        banks.append(Bank(_edge_id(a, b), ZERO))
        liabs.append(Liability(_edge_id(a, b), "0", ONE))
    for v in range(graph.n):
        banks.append(Bank(_vertex_id(v), ZERO))
        for a, b in graph.edges:
            if v in (a, b):
                liabs.append(Liability(_vertex_id(v), _edge_id(a, b), ONE))
        liabs.append(Liability(_vertex_id(v), "1", ONE))
    net = FinancialNetwork(tuple(banks), tuple(liabs), ONE)
    params = {"k": k, "budget": Fraction(m + k), "target_saved": m + k}
    return ReductionInstance(
        net,
        "IndependentSet",
        params,
        tuple(_vertex_id(v) for v in range(graph.n)),
        tuple(_edge_id(a, b) for a, b in graph.edges),
    )


def blackhole_length(n: int, beta: Fraction) -> int:
    """Smallest m with beta^m <= 1/(4 n^2)."""
    target = Fraction(1, 4 * n * n)
    m = 0
    power = ONE
    while power > target:
        power *= beta
        m += 1
    return m


def gen_welfare_blackhole(
    graph: SimpleGraph, k: int, beta: Fraction
) -> ReductionInstance:
    """Welfare-loss construction with the attenuation chain ("black hole").

    The central bank's cash stands in for "unlimited": the sum of all
    liabilities plus one, which no clearing can distinguish from infinity.
    The threshold k'(lambda) = (2 - beta(1+beta))|E| + lambda*k*eps.
    """
    beta = Fraction(beta)
    if not 0 < beta < 1:
        raise ValueError("beta must be strictly between 0 and 1")
    if not 0 <= k <= graph.n:
        raise ValueError("k must be between 0 and the vertex count")
    _warn_isolated(graph)
    n, m_edges = graph.n, len(graph.edges)
    eps = beta * (1 - beta) / 2
    m = blackhole_length(n, beta)
    chain_amount = Fraction(6 * n * n)

    banks: list[Bank] = []
    liabs: list[Liability] = []
    bh_ids = [f"BH{i}" for i in range(m + 1)]
    for bh in bh_ids:
        banks.append(Bank(bh, ZERO))
    for i in range(m):
        liabs.append(Liability(bh_ids[i], bh_ids[i + 1], chain_amount))
    for a, b in graph.edges:
        banks.append(Bank(_edge_id(a, b), ZERO))
        liabs.append(Liability(_edge_id(a, b), "0", beta * (1 + beta), senior=True))
        liabs.append(Liability(_edge_id(a, b), bh_ids[0], Fraction(5)))
    vbanks, vliabs = _vertex_banks_and_debts(graph, eps)
    banks += vbanks
    liabs += vliabs
    central_cash = sum((l.amount for l in liabs), ZERO) + 1
    banks.insert(0, Bank("0", central_cash))
    net = FinancialNetwork(tuple(banks), tuple(liabs), beta, central_bank="0")
    params = {
        "eps": eps,
        "beta": beta,
        "k": k,
        "m": m,
        "kprime_base": (2 - beta * (1 + beta)) * m_edges,
        "kprime_lambda_coeff": k * eps,  # k'(lambda) = base + lambda * coeff
    }
    return ReductionInstance(
        net,
        "WelfareBlackHole",
        params,
        tuple(_vertex_id(v) for v in range(n)),
        tuple(_edge_id(a, b) for a, b in graph.edges),
    )


def gen_total_value_budget(
    graph: SimpleGraph, k: int, beta: Fraction
) -> ReductionInstance:
    """Budgeted total-value construction: the densest-k network with edge
    banks given cash 2n and debt 2n+2 so that saving an edge bank is
    worth more than saving any two vertex banks."""
    base = gen_densest_k(graph, k, beta)
    n = graph.n
    banks = tuple(
        Bank(b.id, Fraction(2 * n)) if b.id in base.edge_bank_ids else b
        for b in base.network.banks
    )
    liabs = tuple(
        Liability(l.debtor, l.creditor, Fraction(2 * n + 2), l.senior)
        if l.debtor in base.edge_bank_ids
        else l
        for l in base.network.liabilities
    )
    net = FinancialNetwork(banks, liabs, base.network.beta)
    params = dict(base.params)
    params["edge_cash"] = Fraction(2 * n)
    params["edge_debt"] = Fraction(2 * n + 2)
    return ReductionInstance(
        net, "TotalValueBudget", params, base.vertex_bank_ids, base.edge_bank_ids
    )


# ---------------------------------------------------------------------------
# Bundled example networks
# ---------------------------------------------------------------------------


def load_example_document(name: str) -> dict:
    if name not in EXAMPLE_NAMES:
        raise KeyError(f"unknown example {name!r}; available: {EXAMPLE_NAMES}")
    text = resources.files("bailnet.data").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def load_example(name: str) -> ParsedNetwork:
    return parse_network(load_example_document(name))


def paper_examples() -> dict[str, FinancialNetwork]:
    """The six bundled worked-example networks, parsed from data files."""
    return {name: load_example(name).network for name in EXAMPLE_NAMES}
