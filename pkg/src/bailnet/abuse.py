"""Search for debt contracts that exploit a fixed bailout policy.

Given a deterministic central-bank objective, two banks may agree on a new
loan (cash now against a larger junior claim later) that changes which
banks the policy bails out, leaving both parties strictly better off at
the central bank's expense.  ``find_exploits`` enumerates bilateral
contracts on a grid and reports every strict mutual improvement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .netmodel import (
    ZERO,
    BailnetError,
    Bank,
    FinancialNetwork,
    Liability,
)
from .objectives import ObjectiveSpec
from .optimizer import DEFAULT_MAX_INSOLVENT, SolveReport, optimize_exact


class ContractError(BailnetError):
    pass


@dataclass(frozen=True)
class ContractProposal:
    lender: str
    borrower: str
    principal: Fraction  # cash moved lender -> borrower now
    face: Fraction  # new junior liability borrower -> lender


@dataclass(frozen=True)
class ExploitReport:
    proposal: ContractProposal
    values_before: dict[str, Fraction]  # lender, borrower, central
    values_after: dict[str, Fraction]
    policy_before: frozenset[str]
    policy_after: frozenset[str]
    spend_before: Fraction
    spend_after: Fraction
    benign: bool  # True when the central bank is not strictly worse off


def _check_proposal(net: FinancialNetwork, p: ContractProposal) -> None:
    ids = set(net.bank_ids())
    for party in (p.lender, p.borrower):
        if party not in ids:
            raise ContractError(f"unknown bank {party!r}")
        if party == net.central_bank:
            raise ContractError("the central bank cannot be a contract party")
    if p.lender == p.borrower:
        raise ContractError("lender and borrower must differ")
    if p.principal <= 0:
        raise ContractError("principal must be positive")
    if p.face < p.principal:
        raise ContractError("face value must be at least the principal")
    if net.bank(p.lender).cash < p.principal:
        raise ContractError(
            f"lender {p.lender!r} holds less cash than the principal"
        )


def apply_contract(net: FinancialNetwork, p: ContractProposal) -> FinancialNetwork:
    """New network after the loan: principal moves lender -> borrower in
    cash; a junior claim borrower -> lender of the face value is added
    (merged into an existing junior claim if one exists)."""
    _check_proposal(net, p)
    banks = []
    for b in net.banks:
        if b.id == p.lender:
            banks.append(Bank(b.id, b.cash - p.principal))
        elif b.id == p.borrower:
            banks.append(Bank(b.id, b.cash + p.principal))
        else:
            banks.append(b)
    liabs = list(net.liabilities)
    for i, l in enumerate(liabs):
        if l.debtor == p.borrower and l.creditor == p.lender and not l.senior:
            liabs[i] = Liability(l.debtor, l.creditor, l.amount + p.face)
            break
    else:
        liabs.append(Liability(p.borrower, p.lender, p.face))
    return FinancialNetwork(tuple(banks), tuple(liabs), net.beta, net.central_bank)


def _policy_values(
    net: FinancialNetwork,
    spec: ObjectiveSpec,
    report: SolveReport,
    parties: tuple[str, ...],
) -> dict[str, Fraction]:
    """Market values the parties end up with once the policy's bailouts
    clear.  The central bank's value nets off its bailout spend."""
    clearing = report.best.clearing_after
    values = {b: clearing.market_value[b] for b in parties}
    if net.central_bank is not None:
        values[net.central_bank] = (
            clearing.market_value[net.central_bank] - report.best.total
        )
    return values


def find_exploits(
    net: FinancialNetwork,
    spec: ObjectiveSpec,
    *,
    principal_step: Fraction,
    max_face: Fraction,
    face_step: Optional[Fraction] = None,
    max_insolvent: int = DEFAULT_MAX_INSOLVENT,
) -> list[ExploitReport]:
    """Enumerate bilateral contracts on a grid against a fixed policy.

    For each ordered (lender, borrower) pair and each grid point, the
    exact optimizer is run before and after the contract; a report is
    emitted iff both parties strictly gain.  Reports where the central
    bank is not strictly worse off (neither lower value nor higher spend)
    are flagged benign.  Sorted by combined gain, descending, then by
    (lender, borrower, principal, face) for determinism.
    """
    principal_step = Fraction(principal_step)
    max_face = Fraction(max_face)
    face_step = Fraction(face_step) if face_step is not None else principal_step
    if principal_step <= 0 or face_step <= 0:
        raise ContractError("grid steps must be positive")

    before = optimize_exact(net, spec, max_insolvent=max_insolvent)
    ids = sorted(b for b in net.bank_ids() if b != net.central_bank)
    reports: list[ExploitReport] = []
    for lender in ids:
        lender_cash = net.bank(lender).cash
        for borrower in ids:
            if borrower == lender:
                continue
            principal = principal_step
            while principal <= lender_cash:
                face = principal
                while face <= max_face:
                    proposal = ContractProposal(lender, borrower, principal, face)
                    after_net = apply_contract(net, proposal)
                    after = optimize_exact(
                        after_net, spec, max_insolvent=max_insolvent
                    )
                    vb = _policy_values(net, spec, before, (lender, borrower))
                    va = _policy_values(after_net, spec, after, (lender, borrower))
                    if va[lender] > vb[lender] and va[borrower] > vb[borrower]:
                        cb = net.central_bank
                        benign = True
                        if cb is not None:
                            benign = not (
                                va[cb] < vb[cb] or after.best.total > before.best.total
                            )
                        reports.append(
                            ExploitReport(
                                proposal,
                                vb,
                                va,
                                frozenset(before.best.set),
                                frozenset(after.best.set),
                                before.best.total,
                                after.best.total,
                                benign,
                            )
                        )
                    face += face_step
                principal += principal_step
    def gain(r: ExploitReport) -> Fraction:
        return (
            r.values_after[r.proposal.lender]
            - r.values_before[r.proposal.lender]
            + r.values_after[r.proposal.borrower]
            - r.values_before[r.proposal.borrower]
        )

    reports.sort(
        key=lambda r: (
            -gain(r),
            r.proposal.lender,
            r.proposal.borrower,
            r.proposal.principal,
            r.proposal.face,
        )
    )
    return reports
