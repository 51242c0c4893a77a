"""Generator tests: constructed amounts, initial-insolvency and flow
invariants, and exact agreement between the optimizer on generated
instances and brute-forced graph problems on small graphs."""

from fractions import Fraction

import pytest

from bailnet import (
    ObjectiveSpec,
    SimpleGraph,
    blackhole_length,
    clear,
    gen_densest_k,
    gen_independent_set,
    gen_total_value_budget,
    gen_vertex_cover,
    gen_welfare_blackhole,
    optimize_exact,
)
from conftest import (
    densest_subgraph_edges,
    max_independent_set,
    min_vertex_cover,
    min_vertex_covers,
)

HALF = Fraction(1, 2)
K3 = SimpleGraph.make(3, [(0, 1), (1, 2), (0, 2)])
C4 = SimpleGraph.make(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
P3 = SimpleGraph.make(3, [(0, 1), (1, 2)])
EDGE = SimpleGraph.make(2, [(0, 1)])


def test_simple_graph_validation():
    with pytest.raises(ValueError):
        SimpleGraph.make(2, [(0, 0)])  # self loop
    with pytest.raises(ValueError):
        SimpleGraph.make(2, [(0, 5)])  # out of range
    with pytest.raises(ValueError):
        SimpleGraph.make(2, [(0, 1), (1, 0)])  # duplicate edge
    g = SimpleGraph.make(3, [(2, 0)])
    assert g.edges == ((0, 2),)


# ---------------------------------------------------------------------------
# Vertex cover
# ---------------------------------------------------------------------------


def test_vertex_cover_construction_k3():
    inst = gen_vertex_cover(K3, HALF)
    net = inst.network
    assert len(net.banks) == 7
    assert net.bank("0").cash == 3
    assert inst.params["eps"] == Fraction(1, 4)
    amounts = {
        (l.debtor, l.creditor): l.amount for l in net.liabilities
    }
    for e in inst.edge_bank_ids:
        assert amounts[(e, "0")] == Fraction(3, 2)  # 1 + beta
    for v in inst.vertex_bank_ids:
        assert net.bank(v).cash == 2  # degree
        incident = [a for (d, _), a in amounts.items() if d == v]
        assert incident == [Fraction(9, 8), Fraction(9, 8)]  # 1 + eps/d


def test_vertex_cover_invariants_k3():
    inst = gen_vertex_cover(K3, HALF)
    res = clear(inst.network)
    # everyone but bank 0 starts insolvent
    assert res.defaults == set(inst.vertex_bank_ids) | set(inst.edge_bank_ids)
    # each edge bank receives exactly beta from each incident vertex bank
    for (debtor, creditor), amt in res.payments.items():
        if debtor in inst.vertex_bank_ids and creditor in inst.edge_bank_ids:
            assert amt == HALF
    # vertex-bank shortfall is exactly eps
    for v in inst.vertex_bank_ids:
        assert res.shortfall[v] == inst.params["eps"]


def test_vertex_cover_optimum_k3():
    inst = gen_vertex_cover(K3, HALF)
    report = optimize_exact(inst.network, ObjectiveSpec("own", bank="0"))
    assert report.best.objective_value == Fraction(7)  # 3 + (3/2)*3 - (1/4)*2
    assert report.best.set in {
        frozenset(f"v{i}" for i in cover) for cover in min_vertex_covers(K3)
    }


def test_vertex_cover_optimum_single_edge():
    inst = gen_vertex_cover(EDGE, HALF)
    report = optimize_exact(inst.network, ObjectiveSpec("own", bank="0"))
    assert len(report.best.set & set(inst.vertex_bank_ids)) == 1


def test_isolated_vertices_warn():
    lonely = SimpleGraph.make(3, [(0, 1)])
    with pytest.warns(UserWarning):
        gen_vertex_cover(lonely, HALF)


# ---------------------------------------------------------------------------
# Densest k-subgraph
# ---------------------------------------------------------------------------


def test_densest_k_c4():
    inst = gen_densest_k(C4, 2, HALF)
    assert inst.params["eps"] == Fraction(1, 6)
    assert inst.params["budget"] == Fraction(1, 3)
    spec = ObjectiveSpec("saved", budget=inst.params["budget"])
    report = optimize_exact(inst.network, spec)
    assert report.best.objective_value == 2 + densest_subgraph_edges(C4, 2)  # = 3


def test_densest_k_k3_whole_triangle():
    inst = gen_densest_k(K3, 3, HALF)
    spec = ObjectiveSpec("saved", budget=inst.params["budget"])
    report = optimize_exact(inst.network, spec)
    assert report.best.objective_value == 6


def test_densest_k_zero_budget():
    inst = gen_densest_k(K3, 0, HALF)
    assert inst.params["budget"] == 0
    spec = ObjectiveSpec("saved", budget=Fraction(0))
    report = optimize_exact(inst.network, spec)
    assert report.best.objective_value == 0
    assert report.best.set == frozenset()


# ---------------------------------------------------------------------------
# Independent set
# ---------------------------------------------------------------------------


def test_independent_set_k3():
    inst = gen_independent_set(K3, 1)
    assert inst.network.beta == 1
    spec = ObjectiveSpec("saved", budget=inst.params["budget"])
    report = optimize_exact(inst.network, spec)
    assert inst.params["budget"] == 4
    assert report.best.objective_value == 4  # |E| + max IS = 3 + 1


def test_independent_set_p3():
    inst = gen_independent_set(P3, 2)
    spec = ObjectiveSpec("saved", budget=inst.params["budget"])
    report = optimize_exact(inst.network, spec)
    assert report.best.objective_value == 4
    assert {"v0", "v2"} <= report.best.set  # the two endpoints


def test_independent_set_empty_graph():
    g = SimpleGraph.make(3, [])
    inst = gen_independent_set(g, 3)
    assert inst.params["budget"] == 3
    spec = ObjectiveSpec("saved", budget=inst.params["budget"])
    report = optimize_exact(inst.network, spec)
    assert report.best.objective_value == 3
    assert all(amt == 1 for amt in report.best.amounts.values())


def test_independent_set_k_too_large_refused():
    with pytest.raises(ValueError):
        gen_independent_set(K3, 4)


# ---------------------------------------------------------------------------
# Welfare black hole
# ---------------------------------------------------------------------------


def test_blackhole_length_values():
    assert blackhole_length(3, HALF) == 6  # (1/2)^6 = 1/64 <= 1/36? no: 1/64 <= 1/36
    assert blackhole_length(2, HALF) == 4
    assert blackhole_length(3, Fraction(3, 4)) == 13


def test_welfare_blackhole_construction_k3():
    inst = gen_welfare_blackhole(K3, 2, HALF)
    net = inst.network
    assert inst.params["m"] == 6
    assert inst.params["eps"] == Fraction(1, 8)
    chain = [l for l in net.liabilities if l.debtor.startswith("BH")]
    assert len(chain) == 6
    assert all(l.amount == 54 for l in chain)
    for l in net.liabilities:
        if l.debtor in inst.edge_bank_ids:
            if l.senior:
                assert l.amount == Fraction(3, 4)  # beta(1+beta)
            else:
                assert l.amount == 5


def test_welfare_blackhole_optimum_is_min_cover():
    for graph in (K3, EDGE, P3):
        inst = gen_welfare_blackhole(graph, 2, HALF)
        spec = ObjectiveSpec("welfare", lam=Fraction(1))
        report = optimize_exact(inst.network, spec, max_insolvent=30)
        chosen = {int(v[1:]) for v in report.best.set}
        assert report.best.set <= set(inst.vertex_bank_ids)
        assert len(chosen) == min_vertex_cover(graph)
        assert all(a in chosen or b in chosen for a, b in graph.edges)


def test_welfare_blackhole_rejects_degenerate_beta():
    with pytest.raises(ValueError):
        gen_welfare_blackhole(K3, 1, Fraction(0))
    with pytest.raises(ValueError):
        gen_welfare_blackhole(K3, 1, Fraction(1))


def test_blackhole_attenuation_exact():
    for beta in (Fraction(1, 4), HALF, Fraction(3, 4)):
        inst = gen_welfare_blackhole(K3, 1, beta)
        net = inst.network
        m = inst.params["m"]
        base = clear(net)
        for amount in (Fraction(1, 3), Fraction(1), Fraction(7, 2), Fraction(10)):
            bumped = clear(net.with_cash_added({"BH0": amount}))
            assert bumped.defaults == base.defaults
            gained = bumped.assets[f"BH{m}"] - base.assets[f"BH{m}"]
            assert gained == beta**m * amount


# ---------------------------------------------------------------------------
# Budgeted total value
# ---------------------------------------------------------------------------


def test_total_value_budget_k3():
    inst = gen_total_value_budget(K3, 2, HALF)
    net = inst.network
    for e in inst.edge_bank_ids:
        assert net.bank(e).cash == 6  # 2n
    for l in net.liabilities:
        if l.debtor in inst.edge_bank_ids:
            assert l.amount == 8  # 2n + 2
    spec = ObjectiveSpec("total", budget=inst.params["budget"])
    report = optimize_exact(net, spec)
    assert report.best.set <= set(inst.vertex_bank_ids)
    assert len(report.best.set) == 2


def test_total_value_budget_zero_k():
    inst = gen_total_value_budget(K3, 0, HALF)
    spec = ObjectiveSpec("total", budget=inst.params["budget"])
    report = optimize_exact(inst.network, spec)
    assert report.best.set == frozenset()
