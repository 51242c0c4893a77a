"""Pydantic request envelopes for the HTTP API.

Network payloads stay as raw dicts and go through the canonical document
parser, so the HTTP and CLI paths share one exact-rational parse."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class ObjectiveModel(BaseModel):
    kind: str
    bank: Optional[str] = None
    budget: Optional[str] = None
    lam: Optional[str] = Field(default=None, alias="lambda")

    model_config = {"populate_by_name": True}

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.bank is not None:
            out["bank"] = self.bank
        if self.budget is not None:
            out["budget"] = self.budget
        if self.lam is not None:
            out["lambda"] = self.lam
        return out


class OptimizeRequest(BaseModel):
    network: dict[str, Any]
    objective: ObjectiveModel
    method: str = "exact"
    max_insolvent: int = 20


class WhatIfRequest(BaseModel):
    network: dict[str, Any]
    bailout: list[str]
    objective: Optional[ObjectiveModel] = None


class GenerateRequest(BaseModel):
    family: str
    graph: dict[str, Any]
    k: Optional[int] = None
    beta: Optional[str] = None


class AbuseRequest(BaseModel):
    network: dict[str, Any]
    objective: ObjectiveModel
    principal_step: str = "1"
    max_face: str = "4"
    face_step: Optional[str] = None
    max_insolvent: int = 20
