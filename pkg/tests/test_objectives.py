"""Objective evaluation: exact bailouts, the four objective kinds, budget
accounting and infeasibility handling."""

import random
from fractions import Fraction

import pytest

from bailnet import (
    InfeasiblePlanError,
    ObjectiveSpec,
    clear,
    evaluate,
    network,
    paper_examples,
    welfare_loss,
)
from bailnet.objectives import apply_exact_bailouts
from conftest import random_network

HALF = Fraction(1, 2)
TWO = Fraction(2)


@pytest.fixture(scope="module")
def examples():
    return paper_examples()


def test_objective_spec_validation():
    with pytest.raises(ValueError):
        ObjectiveSpec("nonsense")
    with pytest.raises(ValueError):
        ObjectiveSpec("own")  # needs a bank
    with pytest.raises(ValueError):
        ObjectiveSpec("saved")  # needs a budget
    with pytest.raises(ValueError):
        ObjectiveSpec("welfare")  # needs lambda
    with pytest.raises(ValueError):
        ObjectiveSpec("total", budget=Fraction(-1))


def test_empty_set_equals_unmodified_clearing(examples):
    for name, net in examples.items():
        plan = evaluate(net, ObjectiveSpec("total"), set())
        res = clear(net)
        total = sum((res.market_value[b] for b in net.bank_ids()), Fraction(0))
        assert plan.total == 0
        assert plan.objective_value == total, name


def test_exact_bailout_tops_up_to_solvency(examples):
    net = examples["fig1"]
    aug, amounts = apply_exact_bailouts(net, {"d"})
    assert amounts == {"d": Fraction(1)}
    res = clear(aug)
    assert res.defaults == frozenset()
    # exactness: the bailed-out bank ends at market value zero
    assert res.market_value["d"] == 0


def test_bailing_solvent_bank_is_infeasible(examples):
    net = examples["fig1"]
    with pytest.raises(InfeasiblePlanError):
        apply_exact_bailouts(net, {"u"})
    with pytest.raises(InfeasiblePlanError):
        apply_exact_bailouts(net, {"nope"})


def test_joint_bailout_cheaper_than_separate(examples):
    # fig2: saving d directly costs its shortfall 9, but saving the
    # chain {v, w} first makes d whole for 4 in total
    net = examples["fig2_indirect"]
    _, direct = apply_exact_bailouts(net, {"d"})
    assert sum(direct.values()) == Fraction(9)
    aug, via_chain = apply_exact_bailouts(net, {"v", "w"})
    assert sum(via_chain.values()) == Fraction(4)
    assert "d" not in clear(aug).defaults


def test_too_big_to_fail(examples):
    # fig3: d's shortfall is 100, but the five small banks cost 5 total
    net = examples["fig3_too_big_to_fail"]
    _, direct = apply_exact_bailouts(net, {"d"})
    assert sum(direct.values()) == Fraction(100)
    aug, small = apply_exact_bailouts(net, {"f", "g", "h", "j", "k"})
    assert sum(small.values()) == Fraction(5)
    # the five small banks are cheap to rescue; d alone stays down
    assert clear(aug).defaults == {"d"}


def test_welfare_loss_fig4(examples):
    net = examples["fig4_welfare"]
    assert welfare_loss(net, TWO, Fraction(0)) == Fraction(31)
    aug_w, amounts_w = apply_exact_bailouts(net, {"w"})
    assert welfare_loss(aug_w, TWO, sum(amounts_w.values())) == Fraction(36)
    aug_uw, amounts_uw = apply_exact_bailouts(net, {"u", "w"})
    spend = sum(amounts_uw.values())
    assert spend == Fraction(7)
    assert welfare_loss(aug_uw, TWO, spend) == Fraction(14)


def test_welfare_objective_is_negated_loss(examples):
    net = examples["fig4_welfare"]
    spec = ObjectiveSpec("welfare", lam=TWO)
    plan = evaluate(net, spec, {"u", "w"})
    assert plan.objective_value == Fraction(-14)
    assert plan.total == Fraction(7)


def test_total_value_deducts_spend():
    # single defaulter: bailing it out moves value around but the spend
    # is deducted from the objective
    net = network(
        banks=[("a", 1), ("b", 0)],
        liabilities=[("a", "b", 2)],
        beta=HALF,
    )
    spec = ObjectiveSpec("total")
    empty = evaluate(net, spec, set())
    bailed = evaluate(net, spec, {"a"})
    assert bailed.total == Fraction(1)
    # with beta = 1/2 the bailout stops a loss of (1-beta)*assets = 1/2,
    # so net of spend it is worse than doing nothing
    assert empty.objective_value == HALF
    assert bailed.objective_value == Fraction(2) - Fraction(1)


def test_own_value_objective(examples):
    net = examples["fig1"]
    spec = ObjectiveSpec("own", bank="u")
    # bailing d makes everyone pay in full; u holds 4 cash + 5 incoming
    # against 3 owed, minus the spend of 1
    plan = evaluate(net, spec, {"d"})
    assert plan.objective_value == Fraction(4 + 5 - 3 - 1)


def test_saved_objective_counts_rescued_banks(examples):
    net = examples["fig1"]
    spec = ObjectiveSpec("saved", budget=Fraction(1))
    plan = evaluate(net, spec, {"d"})
    assert plan.objective_value == 3  # d, s, t all leave default
    assert plan.feasible


def test_budget_violation_marks_infeasible(examples):
    net = examples["fig2_indirect"]
    spec = ObjectiveSpec("saved", budget=Fraction(1))
    plan = evaluate(net, spec, {"d"})  # costs 9 > budget 1
    assert not plan.feasible


def test_amounts_sum_to_total_on_random_instances():
    rng = random.Random(5150)
    for _ in range(100):
        net = random_network(rng, n_max=6)
        res = clear(net)
        if not res.defaults:
            continue
        subset = {
            b for b in res.defaults if rng.random() < 0.6
        } or set(list(res.defaults)[:1])
        plan = evaluate(net, ObjectiveSpec("total"), subset)
        assert sum(plan.amounts.values(), Fraction(0)) == plan.total
        assert set(plan.amounts) <= subset
        # every bailed bank is solvent afterwards
        for b in subset:
            assert b not in plan.clearing_after.defaults
