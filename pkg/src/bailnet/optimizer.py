"""Optimal bailout search.

Only exact bailouts of insolvent banks can be optimal, so the search space
is the power set of the insolvent banks.  ``optimize_exact`` explores it
with depth-first branch and bound.  The bounds rest on one proven fact:
payments (and hence every bank's assets) are monotone in the set of banks
forced to pay in full.  A clearing where every still-undecided candidate
is forced solvent therefore gives optimistic assets for the whole branch,
and a clearing where only the committed banks are forced gives pessimistic
assets; both directions yield safe bounds on cost and objective.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .netmodel import (
    ZERO,
    CapacityError,
    FinancialNetwork,
    InvalidNetworkError,
    _clear_raw,
    _engine,
    validate,
)
from .objectives import (
    BailoutPlan,
    ObjectiveSpec,
    _evaluate_subset,
    _insolvent_indices,
    _objective_of,
    evaluate,
)

DEFAULT_MAX_INSOLVENT = 20


@dataclass(frozen=True)
class SolveReport:
    best: BailoutPlan
    explored: int
    method: str
    ties_broken: int
    optimal: bool
    elapsed_seconds: float


def _plan_key(net: FinancialNetwork, subset: frozenset[int]) -> tuple:
    """Tie-break among equal objective values: smaller total spend, then
    fewer banks, then lexicographically smallest id set."""
    eng = _engine(net)
    ev = _evaluate_subset(net, subset)
    ids = tuple(sorted(eng.ids[u] for u in subset))
    return (ev.total, len(subset), ids)


class _Incumbent:
    def __init__(self, net: FinancialNetwork, spec: ObjectiveSpec, base):
        self.net = net
        self.spec = spec
        self.base = base
        self.subset: Optional[frozenset[int]] = None
        self.value: Optional[Fraction] = None
        self.key: Optional[tuple] = None
        self.ties_broken = 0

    def offer(self, subset: frozenset[int]) -> None:
        ev = _evaluate_subset(self.net, subset)
        if self.spec.budget is not None and ev.total > self.spec.budget:
            return
        value = _objective_of(self.net, self.spec, ev, self.base)
        key = _plan_key(self.net, subset)
        if self.value is None or value > self.value:
            self.subset, self.value, self.key = subset, value, key
        elif value == self.value and key < self.key:
            self.subset, self.value, self.key = subset, value, key
            self.ties_broken += 1


def optimize_exact(
    net: FinancialNetwork,
    spec: ObjectiveSpec,
    *,
    max_insolvent: int = DEFAULT_MAX_INSOLVENT,
    deadline_seconds: Optional[float] = None,
) -> SolveReport:
    """Provably optimal bailout set under ``spec``.

    Raises CapacityError when more than ``max_insolvent`` banks are
    insolvent.  With a deadline, returns the best plan found so far and
    marks the report non-optimal if the search was cut short.
    """
    start = time.monotonic()
    violations = validate(net)
    if violations:
        raise InvalidNetworkError(violations)
    eng = _engine(net)
    base = _insolvent_indices(net)
    if len(base) > max_insolvent:
        raise CapacityError(
            f"{len(base)} insolvent banks exceeds the exact-search cap of "
            f"{max_insolvent}; raise max_insolvent or use the greedy method"
        )

    static_need = {u: max(eng.l_tot[u] - eng.full_assets[u], ZERO) for u in base}
    # Cheap banks first: good plans (many cheap rescues) appear early, so
    # bounds start cutting expensive branches almost immediately.
    candidates = sorted(base, key=lambda u: (static_need[u], eng.ids[u]))

    inc = _Incumbent(net, spec, base)
    inc.offer(frozenset())
    # Seed with the greedy plan: a near-optimal incumbent makes the bounds
    # bite from the root.
    greedy_set = _greedy_subset(net, spec, base)
    inc.offer(greedy_set)
    explored = 2 if greedy_set else 1
    timed_out = False

    lam = spec.lam if spec.lam is not None else ZERO

    def bound_prunes(included: frozenset[int], pos: int) -> bool:
        allowed = frozenset(candidates[pos:]) | included
        gen = _evaluate_subset(net, allowed)
        need_gen = {
            u: max(eng.l_tot[u] - gen.raw_assets[u], ZERO) for u in included
        }
        cost_lb = sum(need_gen.values(), ZERO)
        if spec.budget is not None and cost_lb > spec.budget:
            return True
        if spec.kind == "total":
            value_ub = (
                sum(
                    (max(a - eng.l_tot[u], ZERO) for u, a in enumerate(gen.assets)),
                    ZERO,
                )
                - cost_lb
            )
        elif spec.kind == "own":
            b = eng.index[spec.bank]  # type: ignore[index]
            value_ub = max(gen.assets[b] - eng.l_tot[b] - cost_lb, ZERO)
        elif spec.kind == "saved":
            value_ub = Fraction(len(base) - len(gen.defaults_after))
        else:
            # Welfare loss decomposes bank by bank.  A committed bank costs
            # at least its shortfall at the optimistic clearing.  An
            # undecided insolvent bank either gets bailed out (>= its
            # optimistic shortfall) or stays in default (>= its pessimistic
            # default loss plus optimistic senior loss).  A bank no
            # completion can save always pays the default side.
            pess = _evaluate_subset(net, included)
            wl_lb = lam * cost_lb
            one_minus_beta = 1 - eng.beta
            for u in base:
                if u in included:
                    continue
                a_gen = gen.raw_assets[u]
                if a_gen >= eng.l_tot[u]:
                    continue  # may become solvent for free
                a_pess = pess.raw_assets[u]
                delta_gen = (
                    max(eng.sen_out[u] - eng.beta * a_gen, ZERO)
                    if eng.sen_out[u] > 0
                    else ZERO
                )
                default_side = one_minus_beta * a_pess + lam * delta_gen
                if u in allowed:
                    bail_side = lam * max(eng.l_tot[u] - a_gen, ZERO)
                    wl_lb += min(bail_side, default_side)
                else:
                    wl_lb += default_side
            value_ub = -wl_lb
        return value_ub < inc.value

    def dfs(pos: int, included: frozenset[int]) -> None:
        nonlocal explored, timed_out
        if timed_out:
            return
        if deadline_seconds is not None and time.monotonic() - start > deadline_seconds:
            timed_out = True
            return
        if bound_prunes(included, pos):
            return
        if pos == len(candidates):
            explored += 1
            inc.offer(included)
            return
        u = candidates[pos]
        dfs(pos + 1, included | {u})
        dfs(pos + 1, included)

    dfs(0, frozenset())

    plan = evaluate(net, spec, {eng.ids[u] for u in inc.subset})
    return SolveReport(
        plan,
        explored,
        "exact",
        inc.ties_broken,
        not timed_out,
        time.monotonic() - start,
    )


def _greedy_subset(
    net: FinancialNetwork, spec: ObjectiveSpec, base: frozenset[int]
) -> frozenset[int]:
    """Greedy core: add the bank with the best marginal objective gain per
    unit of marginal bailout cost until nothing improves."""
    eng = _engine(net)
    current: frozenset[int] = frozenset()
    cur_ev = _evaluate_subset(net, current)
    cur_value = _objective_of(net, spec, cur_ev, base)
    while True:
        best_u = None
        best_rank: Optional[tuple] = None
        for u in sorted(base - current, key=lambda u: eng.ids[u]):
            cand = current | {u}
            ev = _evaluate_subset(net, cand)
            if spec.budget is not None and ev.total > spec.budget:
                continue
            value = _objective_of(net, spec, ev, base)
            gain = value - cur_value
            if gain <= 0:
                continue
            marginal = ev.total - cur_ev.total
            # rank: free improvements first, then best gain per unit cost
            if marginal <= 0:
                rank = (0, -gain)
            else:
                rank = (1, -(gain / marginal))
            if best_rank is None or rank < best_rank:
                best_u, best_rank = u, rank
        if best_u is None:
            return current
        current = current | {best_u}
        cur_ev = _evaluate_subset(net, current)
        cur_value = _objective_of(net, spec, cur_ev, base)


def optimize_greedy(net: FinancialNetwork, spec: ObjectiveSpec) -> SolveReport:
    """Greedy baseline: valid but possibly suboptimal plan."""
    start = time.monotonic()
    violations = validate(net)
    if violations:
        raise InvalidNetworkError(violations)
    eng = _engine(net)
    base = _insolvent_indices(net)
    subset = _greedy_subset(net, spec, base)
    plan = evaluate(net, spec, {eng.ids[u] for u in subset})
    return SolveReport(
        plan, len(base) + 1, "greedy", 0, False, time.monotonic() - start
    )


def analytic_unlimited_total_value(net: FinancialNetwork) -> SolveReport:
    """Closed form for unlimited-budget total value.  For beta < 1, bail
    out exactly the banks that still fall short when everyone pays in
    full; the cleared system is then default-free, the objective equals
    total cash, and the spend is the minimal one.  For beta = 1 bailouts
    cannot create value, so the plan is empty."""
    start = time.monotonic()
    violations = validate(net)
    if violations:
        raise InvalidNetworkError(violations)
    eng = _engine(net)
    spec = ObjectiveSpec("total")
    if eng.beta == 1:
        chosen: set[str] = set()
    else:
        chosen = {
            eng.ids[u]
            for u in range(eng.n)
            if eng.full_assets[u] < eng.l_tot[u]
        }
    plan = evaluate(net, spec, chosen)
    return SolveReport(plan, 1, "analytic", 0, True, time.monotonic() - start)


def objective_on_injection(
    net: FinancialNetwork,
    spec: ObjectiveSpec,
    additions: dict[str, Fraction],
) -> Fraction:
    """Objective value of an arbitrary (not necessarily exact) injection,
    computed directly on the augmented network.  Independent oracle for
    the binary-reduction optimality claim."""
    eng = _engine(net)
    base = _insolvent_indices(net)
    spend = sum(additions.values(), ZERO)
    aug = net.with_cash_added(additions)
    raw = _clear_raw(aug)
    aug_eng = _engine(aug)
    if spec.kind == "total":
        total_v = sum(
            (max(a - aug_eng.l_tot[u], ZERO) for u, a in enumerate(raw.assets)), ZERO
        )
        return total_v - spend
    if spec.kind == "own":
        b = aug_eng.index[spec.bank]  # type: ignore[index]
        return max(raw.assets[b] - aug_eng.l_tot[b] - spend, ZERO)
    if spec.kind == "saved":
        still = sum(1 for u in raw.defaults if u in base)
        return Fraction(len(base) - still)
    term1 = (1 - eng.beta) * sum((raw.assets[u] for u in raw.defaults), ZERO)
    delta = sum(
        (
            aug_eng.sen_out[u] - min(eng.beta * raw.assets[u], aug_eng.sen_out[u])
            for u in raw.defaults
            if aug_eng.sen_out[u] > 0
        ),
        ZERO,
    )
    return -(term1 + spec.lam * (delta + spend))


def oracle_grid_search(
    net: FinancialNetwork,
    spec: ObjectiveSpec,
    resolution: Fraction,
    *,
    max_banks: int = 6,
) -> tuple[Fraction, dict[str, Fraction]]:
    """Brute force over continuous allocations sampled on a grid.

    Each insolvent bank may receive any multiple of ``resolution`` between
    zero and its initial shortfall (inclusive).  Returns the best
    (objective value, injection map).  Slow by design; only a test oracle
    for the claim that exact binary bailouts dominate partial and padded
    injections.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    eng = _engine(net)
    if eng.n > max_banks:
        raise CapacityError(f"grid oracle limited to {max_banks} banks")
    baseline = _clear_raw(net)
    base = sorted(baseline.defaults)
    per_bank_levels: list[list[Fraction]] = []
    ids = [eng.ids[u] for u in base]
    for u in base:
        short = eng.l_tot[u] - baseline.assets[u]
        levels = []
        step = ZERO
        while step < short:
            levels.append(step)
            step += resolution
        levels.append(short)
        per_bank_levels.append(levels)
    best_value: Optional[Fraction] = None
    best_map: dict[str, Fraction] = {}
    for combo in itertools.product(*per_bank_levels) if base else [()]:
        if spec.budget is not None and sum(combo, ZERO) > spec.budget:
            continue
        additions = {b: x for b, x in zip(ids, combo) if x > 0}
        value = objective_on_injection(net, spec, additions)
        if best_value is None or value > best_value:
            best_value, best_map = value, additions
    if best_value is None:
        best_value = objective_on_injection(net, spec, {})
        best_map = {}
    return best_value, best_map
