"""Bailout evaluation: exact bailout amounts and the four objectives.

A candidate bailout is a set of insolvent banks.  Each member is bailed out
exactly: it receives the minimum injection that leaves its market value at
exactly zero after all bailouts clear jointly.  This binary reduction is
lossless for every objective considered (only insolvent banks ever receive
money, exactly or not at all), which is what makes subset search complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .netmodel import (
    ZERO,
    BailnetError,
    ClearingResult,
    FinancialNetwork,
    InvalidNetworkError,
    _clear_raw,
    _engine,
    _result_from_raw,
    validate,
)

Money = Fraction


class InfeasiblePlanError(BailnetError):
    """Budget exceeded or a set member was not insolvent."""


@dataclass(frozen=True)
class ObjectiveSpec:
    """One of the four central-bank objectives.

    kind: "total" (total market value minus spend; unlimited unless a
    budget is given), "own" (a single bank's value with spend deducted),
    "saved" (number of insolvent banks made solvent, fixed budget), or
    "welfare" (negated welfare loss, maximized).
    """

    kind: str
    bank: Optional[str] = None
    budget: Optional[Money] = None
    lam: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("total", "own", "saved", "welfare"):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.kind == "own" and self.bank is None:
            raise ValueError("own-value objective needs a bank id")
        if self.kind == "saved" and self.budget is None:
            raise ValueError("saved objective needs a budget")
        if self.kind == "welfare":
            if self.lam is None or self.lam < 0:
                raise ValueError("welfare objective needs lambda >= 0")
        if self.budget is not None and self.budget < 0:
            raise ValueError("budget must be >= 0")


@dataclass(frozen=True)
class BailoutPlan:
    set: frozenset[str]
    amounts: dict[str, Money]
    total: Money
    objective_value: Fraction
    clearing_after: ClearingResult
    feasible: bool = True


# ---------------------------------------------------------------------------
# Fast path: per-subset summary, cached on the network.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _SubsetEval:
    """Everything the optimizer needs about one bailout set."""

    total: Fraction
    assets: tuple[Fraction, ...]  # post-bailout (members topped up)
    raw_assets: tuple[Fraction, ...]  # at the forced clearing, before top-up
    defaults_after: frozenset[int]  # banks still insolvent (indices)


def _evaluate_subset(net: FinancialNetwork, subset: frozenset[int]) -> _SubsetEval:
    cache: dict = getattr(net, "_eval_cache")
    hit = cache.get(subset)
    if hit is not None:
        return hit
    eng = _engine(net)
    raw = _clear_raw(net, forced=subset)
    total = ZERO
    assets = list(raw.assets)
    for u in subset:
        need = eng.l_tot[u] - raw.assets[u]
        if need > 0:
            total += need
            assets[u] = eng.l_tot[u]
    ev = _SubsetEval(
        total,
        tuple(assets),
        tuple(raw.assets),
        frozenset(u for u in raw.defaults if u not in subset),
    )
    cache[subset] = ev
    return ev


def _objective_of(
    net: FinancialNetwork,
    spec: ObjectiveSpec,
    ev: _SubsetEval,
    baseline_insolvent: frozenset[int],
) -> Fraction:
    eng = _engine(net)
    if spec.kind == "total":
        sum_v = sum(
            (max(a - eng.l_tot[u], ZERO) for u, a in enumerate(ev.assets)), ZERO
        )
        return sum_v - ev.total
    if spec.kind == "own":
        b = eng.index[spec.bank]  # type: ignore[index]
        return max(ev.assets[b] - eng.l_tot[b] - ev.total, ZERO)
    if spec.kind == "saved":
        return Fraction(len(baseline_insolvent) - len(ev.defaults_after))
    # welfare: negated so every objective maximizes
    term1 = (1 - eng.beta) * sum((ev.assets[u] for u in ev.defaults_after), ZERO)
    delta = sum(
        (
            eng.sen_out[u] - min(eng.beta * ev.assets[u], eng.sen_out[u])
            for u in ev.defaults_after
            if eng.sen_out[u] > 0
        ),
        ZERO,
    )
    return -(term1 + spec.lam * (delta + ev.total))


def _insolvent_indices(net: FinancialNetwork) -> frozenset[int]:
    return frozenset(_clear_raw(net).defaults)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def apply_exact_bailouts(
    net: FinancialNetwork, bailout_set: set[str] | frozenset[str]
) -> tuple[FinancialNetwork, dict[str, Money]]:
    """Exact bailout amounts for a set, evaluated at the joint clearing.

    Members are forced solvent simultaneously (they may feed each other);
    each amount is the member's shortfall at that joint clearing.  Returns
    the augmented network (amounts added to cash) and the amount map.
    """
    violations = validate(net)
    if violations:
        raise InvalidNetworkError(violations)
    eng = _engine(net)
    base = _insolvent_indices(net)
    idx = set()
    for bank_id in bailout_set:
        if bank_id not in eng.index:
            raise InfeasiblePlanError(f"unknown bank {bank_id!r}")
        u = eng.index[bank_id]
        if u not in base:
            raise InfeasiblePlanError(
                f"bank {bank_id!r} is solvent before bailouts; bailing it out never helps"
            )
        idx.add(u)
    raw = _clear_raw(net, forced=frozenset(idx))
    amounts = {
        eng.ids[u]: max(eng.l_tot[u] - raw.assets[u], ZERO) for u in sorted(idx)
    }
    return net.with_cash_added(amounts), amounts


def welfare_loss(
    net: FinancialNetwork, lam: Fraction, spend: Money = ZERO
) -> Money:
    """Welfare loss of a network as it stands, given lambda and a spend B.

    All terms come from the network's own clearing, so call this on the
    post-bailout (augmented) network with the total bailout spend.
    """
    if net.central_bank is None:
        raise BailnetError("welfare loss needs a designated central bank")
    if lam < 0:
        raise BailnetError("lambda must be >= 0")
    eng = _engine(net)
    raw = _clear_raw(net)
    term1 = (1 - eng.beta) * sum((raw.assets[u] for u in raw.defaults), ZERO)
    delta = sum(
        (
            eng.sen_out[u] - min(eng.beta * raw.assets[u], eng.sen_out[u])
            for u in raw.defaults
            if eng.sen_out[u] > 0
        ),
        ZERO,
    )
    return term1 + lam * (delta + spend)


def evaluate(
    net: FinancialNetwork, spec: ObjectiveSpec, bailout_set: set[str] | frozenset[str]
) -> BailoutPlan:
    """Evaluate one candidate bailout set under an objective."""
    if spec.kind == "welfare" and net.central_bank is None:
        raise BailnetError("welfare objective needs a designated central bank")
    if spec.kind == "own":
        eng = _engine(net)
        if spec.bank not in eng.index:
            raise InfeasiblePlanError(f"unknown bank {spec.bank!r}")
    augmented, amounts = apply_exact_bailouts(net, bailout_set)
    eng = _engine(net)
    subset = frozenset(eng.index[b] for b in bailout_set)
    ev = _evaluate_subset(net, subset)
    feasible = spec.budget is None or ev.total <= spec.budget
    value = _objective_of(net, spec, ev, _insolvent_indices(net))
    clearing_after = _result_from_raw(augmented, _clear_raw(augmented))
    return BailoutPlan(
        frozenset(bailout_set), amounts, ev.total, value, clearing_after, feasible
    )
