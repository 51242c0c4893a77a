"""Canonical JSON document format for networks, plans and reports.

One versioned format shared by the files on disk, the CLI and the HTTP
service.  Monetary amounts are decimal strings parsed exactly; results
carry both the exact rational string and a 12-significant-digit decimal
approximation, clearly labelled.  Serialization is deterministic (sorted
keys, fixed indentation) so the CLI and the HTTP service produce
byte-identical documents for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .money import format_approx, format_exact, parse_rational
from .netmodel import (
    Bank,
    BailnetError,
    ClearingResult,
    FinancialNetwork,
    Liability,
    validate,
)

SCHEMA_VERSION = 1
ENGINE_VERSION = "bailnet-0.1.0"
TIE_BREAK_POLICY = "max-objective,min-spend,min-cardinality,lex-ids"


class ParseError(BailnetError):
    """Malformed document; ``errors`` lists (field path, message) pairs."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in errors))


@dataclass(frozen=True)
class ParsedNetwork:
    network: FinancialNetwork
    metadata: dict[str, Any]


def to_text(document: dict) -> str:
    """The one serializer: every network, plan and report document in the
    system goes through this so output bytes are reproducible."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def money_view(value: Fraction) -> dict[str, str]:
    return {"exact": format_exact(value), "approx": format_approx(value)}


# ---------------------------------------------------------------------------
# Network documents
# ---------------------------------------------------------------------------


def _req(obj: dict, field: str, errors: list, path: str):
    if field not in obj:
        errors.append((f"{path}.{field}", "missing required field"))
        return None
    return obj[field]


def parse_network(text: str | dict) -> ParsedNetwork:
    """Parse and validate a network document.

    Accepts the document text or an already-decoded object.  Collects all
    field errors before raising, so callers see every problem at once.
    """
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError([(f"line {exc.lineno}", exc.msg)]) from exc
    else:
        doc = text
    errors: list[tuple[str, str]] = []
    if not isinstance(doc, dict):
        raise ParseError([("$", "document must be an object")])
    schema = doc.get("schema")
    if schema != SCHEMA_VERSION:
        errors.append(("schema", f"expected schema {SCHEMA_VERSION}, got {schema!r}"))

    def rational(raw, path) -> Fraction:
        try:
            return parse_rational(raw)
        except (ValueError, TypeError) as exc:
            errors.append((path, str(exc)))
            return Fraction(0)

    beta_raw = _req(doc, "beta", errors, "$")
    beta = rational(beta_raw, "beta") if beta_raw is not None else Fraction(1)
    central = doc.get("central_bank")
    if central is not None and not isinstance(central, str):
        errors.append(("central_bank", "must be a bank id string or null"))
        central = None

    banks: list[Bank] = []
    raw_banks = _req(doc, "banks", errors, "$")
    if isinstance(raw_banks, list):
        for i, rb in enumerate(raw_banks):
            path = f"banks[{i}]"
            if not isinstance(rb, dict):
                errors.append((path, "must be an object"))
                continue
            bank_id = _req(rb, "id", errors, path)
            cash_raw = _req(rb, "cash", errors, path)
            if bank_id is None or cash_raw is None:
                continue
            if not isinstance(bank_id, str):
                errors.append((f"{path}.id", "must be a string"))
                continue
            banks.append(Bank(bank_id, rational(cash_raw, f"{path}.cash")))
    elif raw_banks is not None:
        errors.append(("banks", "must be a list"))

    liabilities: list[Liability] = []
    raw_liab = doc.get("liabilities", [])
    if isinstance(raw_liab, list):
        for i, rl in enumerate(raw_liab):
            path = f"liabilities[{i}]"
            if not isinstance(rl, dict):
                errors.append((path, "must be an object"))
                continue
            debtor = _req(rl, "from", errors, path)
            creditor = _req(rl, "to", errors, path)
            amount_raw = _req(rl, "amount", errors, path)
            seniority = rl.get("seniority", "junior")
            if seniority not in ("junior", "senior"):
                errors.append(
                    (f"{path}.seniority", f"unknown seniority token {seniority!r}")
                )
                continue
            if debtor is None or creditor is None or amount_raw is None:
                continue
            liabilities.append(
                Liability(
                    debtor,
                    creditor,
                    rational(amount_raw, f"{path}.amount"),
                    senior=(seniority == "senior"),
                )
            )
    else:
        errors.append(("liabilities", "must be a list"))

    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        errors.append(("metadata", "must be an object"))
        metadata = {}

    if errors:
        raise ParseError(errors)

    net = FinancialNetwork(tuple(banks), tuple(liabilities), beta, central)
    violations = validate(net)
    if violations:
        raise ParseError([(v.subject, f"{v.rule}: {v.detail}") for v in violations])
    return ParsedNetwork(net, metadata)


def serialize_network(
    net: FinancialNetwork, metadata: Optional[dict[str, Any]] = None
) -> dict:
    doc: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "beta": format_exact(net.beta),
        "central_bank": net.central_bank,
        "banks": [
            {"id": b.id, "cash": format_exact(b.cash)} for b in net.banks
        ],
        "liabilities": [
            {
                "from": l.debtor,
                "to": l.creditor,
                "amount": format_exact(l.amount),
                "seniority": "senior" if l.senior else "junior",
            }
            for l in net.liabilities
        ],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


# ---------------------------------------------------------------------------
# Result documents
# ---------------------------------------------------------------------------


def _stamp(doc: dict, kind: str) -> dict:
    doc["schema"] = SCHEMA_VERSION
    doc["kind"] = kind
    doc["engine_version"] = ENGINE_VERSION
    doc["tie_break"] = TIE_BREAK_POLICY
    return doc


def clearing_body(net: FinancialNetwork, result: ClearingResult) -> dict:
    banks = {}
    for b in net.banks:
        uid = b.id
        banks[uid] = {
            "recovery": money_view(result.recovery[uid]),
            "assets": money_view(result.assets[uid]),
            "post_default_assets": money_view(result.post_default_assets[uid]),
            "market_value": money_view(result.market_value[uid]),
            "shortfall": money_view(result.shortfall[uid]),
            "senior_loss": money_view(result.senior_loss[uid]),
            "in_default": uid in result.defaults,
        }
    payments = [
        {"from": u, "to": v, "amount": money_view(amt)}
        for (u, v), amt in sorted(result.payments.items())
    ]
    return {
        "banks": banks,
        "payments": payments,
        "defaults": sorted(result.defaults),
    }


def clearing_document(net: FinancialNetwork, result: ClearingResult) -> dict:
    doc = clearing_body(net, result)
    doc["beta"] = format_exact(net.beta)
    doc["central_bank"] = net.central_bank
    return _stamp(doc, "clearing")


def objective_view(spec) -> dict:
    out: dict[str, Any] = {"kind": spec.kind}
    if spec.bank is not None:
        out["bank"] = spec.bank
    if spec.budget is not None:
        out["budget"] = format_exact(spec.budget)
    if spec.lam is not None:
        out["lambda"] = format_exact(spec.lam)
    return out


def plan_document(net: FinancialNetwork, spec, report, *, kind: str = "plan") -> dict:
    plan = report.best
    doc = {
        "objective": objective_view(spec),
        "set": sorted(plan.set),
        "amounts": {b: money_view(a) for b, a in plan.amounts.items()},
        "total_spend": money_view(plan.total),
        "objective_value": money_view(plan.objective_value),
        "feasible": plan.feasible,
        "method": report.method,
        "explored": report.explored,
        "ties_broken": report.ties_broken,
        "optimal": report.optimal,
        "clearing_after": clearing_body(net, plan.clearing_after),
    }
    if spec.kind == "welfare":
        # the objective is the negated welfare loss; surface the loss itself
        doc["welfare_loss"] = money_view(-plan.objective_value)
    if spec.kind == "saved":
        doc["saved"] = int(plan.objective_value)
    return _stamp(doc, kind)


def abuse_document(reports: list) -> dict:
    items = []
    for r in reports:
        items.append(
            {
                "lender": r.proposal.lender,
                "borrower": r.proposal.borrower,
                "principal": money_view(r.proposal.principal),
                "face": money_view(r.proposal.face),
                "benign": r.benign,
                "values_before": {k: money_view(v) for k, v in r.values_before.items()},
                "values_after": {k: money_view(v) for k, v in r.values_after.items()},
                "policy_before": sorted(r.policy_before),
                "policy_after": sorted(r.policy_after),
                "spend_before": money_view(r.spend_before),
                "spend_after": money_view(r.spend_after),
            }
        )
    return _stamp({"exploits": items}, "abuse_report")


def error_document(code: str, message: str, fields: Optional[list] = None) -> dict:
    doc: dict[str, Any] = {"error": code, "message": message}
    if fields:
        doc["fields"] = [{"field": f, "message": m} for f, m in fields]
    return _stamp(doc, "error")
