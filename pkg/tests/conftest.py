"""Shared test helpers: random instance generators, an independent
payment-prescription oracle, and brute-force graph-problem solvers.

Everything here is deliberately written from first principles rather than
by calling into the engine, so the tests cross-check two independent
implementations of the same definitions.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional

from bailnet import (
    Bank,
    ClearingResult,
    FinancialNetwork,
    Liability,
    SimpleGraph,
    validate,
)

ZERO = Fraction(0)

CASH_CHOICES = [
    Fraction(0),
    Fraction(0),
    Fraction(1, 2),
    Fraction(1),
    Fraction(2),
    Fraction(3),
    Fraction(5),
    Fraction(10),
]
AMOUNT_CHOICES = [
    Fraction(1, 2),
    Fraction(1),
    Fraction(3, 2),
    Fraction(2),
    Fraction(3),
    Fraction(4),
    Fraction(7),
]


def random_network(
    rng: random.Random,
    *,
    n_max: int = 8,
    n_min: int = 2,
    beta: Optional[Fraction] = None,
    edge_prob: float = 0.35,
    with_central: Optional[bool] = None,
    positive_cash: bool = False,
) -> FinancialNetwork:
    """A seeded random network that always passes validation."""
    n = rng.randint(n_min, n_max)
    if beta is None:
        beta = rng.choice(
            [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
        )
    if with_central is None:
        with_central = rng.random() < 0.5
    ids = [f"b{i}" for i in range(n)]
    central = ids[0] if with_central else None
    banks = []
    for i in ids:
        cash = rng.choice(CASH_CHOICES)
        if positive_cash and cash == 0:
            cash = Fraction(1, 2)
        banks.append(Bank(i, cash))
    liabs = []
    for u, v in itertools.permutations(ids, 2):
        if rng.random() < edge_prob:
            liabs.append(Liability(u, v, rng.choice(AMOUNT_CHOICES)))
    if central is not None:
        for u in ids[1:]:
            if rng.random() < 0.4:
                liabs.append(
                    Liability(u, central, rng.choice(AMOUNT_CHOICES), senior=True)
                )
    net = FinancialNetwork(tuple(banks), tuple(liabs), beta, central)
    assert validate(net) == []
    return net


# ---------------------------------------------------------------------------
# Independent payment prescription (fixed-point oracle)
# ---------------------------------------------------------------------------


def prescribe_payments(
    net: FinancialNetwork, result: ClearingResult
) -> dict[tuple[str, str], Fraction]:
    """One application of the payment rule to the result's asset vector,
    computed from the definitions without reusing the engine:

    - assets a_u = cash + payments received under ``result``;
    - a bank with a_u >= total liabilities pays every claim in full;
    - otherwise it pays beta * a_u, senior claims first, the remainder
      pro-rata across junior claims.
    """
    assets: dict[str, Fraction] = {b.id: b.cash for b in net.banks}
    for (u, v), amt in result.payments.items():
        assets[v] += amt
    sen: dict[str, list[Liability]] = {b.id: [] for b in net.banks}
    jun: dict[str, list[Liability]] = {b.id: [] for b in net.banks}
    for l in net.liabilities:
        (sen if l.senior else jun)[l.debtor].append(l)
    out: dict[tuple[str, str], Fraction] = {}
    for b in net.banks:
        u = b.id
        l_sen = sum((l.amount for l in sen[u]), ZERO)
        l_jun = sum((l.amount for l in jun[u]), ZERO)
        l_tot = l_sen + l_jun
        if l_tot == 0:
            continue
        if assets[u] >= l_tot:
            for l in sen[u] + jun[u]:
                out[(u, l.creditor)] = out.get((u, l.creditor), ZERO) + l.amount
            continue
        pool = net.beta * assets[u]
        sen_paid = min(pool, l_sen)
        for l in sen[u]:
            share = sen_paid * l.amount / l_sen
            out[(u, l.creditor)] = out.get((u, l.creditor), ZERO) + share
        rem = min(pool - sen_paid, l_jun)
        if l_jun > 0 and rem > 0:
            for l in jun[u]:
                share = rem * l.amount / l_jun
                out[(u, l.creditor)] = out.get((u, l.creditor), ZERO) + share
    return out


def payments_nonzero(p: dict[tuple[str, str], Fraction]) -> dict:
    return {k: v for k, v in p.items() if v != 0}


# ---------------------------------------------------------------------------
# Graph enumeration and brute-force graph problems
# ---------------------------------------------------------------------------


def connected_graphs(n: int) -> list[SimpleGraph]:
    """All connected simple graphs on n vertices, one per isomorphism
    class (canonical form by minimum edge set over all permutations)."""
    vertices = list(range(n))
    all_edges = list(itertools.combinations(vertices, 2))
    seen: set[frozenset] = set()
    out: list[SimpleGraph] = []
    for bits in range(1 << len(all_edges)):
        edges = [e for i, e in enumerate(all_edges) if bits >> i & 1]
        if not _is_connected(n, edges):
            continue
        canon = min(
            tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
            for perm in itertools.permutations(vertices)
        )
        if canon in seen:
            continue
        seen.add(canon)
        out.append(SimpleGraph.make(n, edges))
    return out


def _is_connected(n: int, edges: list[tuple[int, int]]) -> bool:
    if n == 0:
        return True
    adj = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def min_vertex_cover(g: SimpleGraph) -> int:
    for size in range(g.n + 1):
        for sub in itertools.combinations(range(g.n), size):
            s = set(sub)
            if all(a in s or b in s for a, b in g.edges):
                return size
    raise AssertionError("unreachable")


def min_vertex_covers(g: SimpleGraph) -> list[frozenset[int]]:
    size = min_vertex_cover(g)
    return [
        frozenset(sub)
        for sub in itertools.combinations(range(g.n), size)
        if all(a in sub or b in sub for a, b in g.edges)
    ]


def densest_subgraph_edges(g: SimpleGraph, k: int) -> int:
    best = 0
    for sub in itertools.combinations(range(g.n), k):
        s = set(sub)
        best = max(best, sum(1 for a, b in g.edges if a in s and b in s))
    return best


def max_independent_set(g: SimpleGraph) -> int:
    for size in range(g.n, -1, -1):
        for sub in itertools.combinations(range(g.n), size):
            s = set(sub)
            if all(not (a in s and b in s) for a, b in g.edges):
                return size
    return 0
