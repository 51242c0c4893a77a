"""FastAPI application exposing the engine.

Stateless: every request carries its own network document.  Responses are
rendered through the canonical serializer so they are byte-identical to
the CLI output for the same operation.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError

from .. import documents
from ..documents import ParseError
from ..money import parse_rational
from ..netmodel import BailnetError, CapacityError, InvalidNetworkError
from ..objectives import InfeasiblePlanError
from . import ops
from .models import AbuseRequest, GenerateRequest, OptimizeRequest, WhatIfRequest


def _doc_response(doc: dict, status_code: int = 200) -> Response:
    return Response(
        content=documents.to_text(doc),
        media_type="application/json",
        status_code=status_code,
    )


def create_app(static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="bailnet", version=documents.ENGINE_VERSION)

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, exc: ParseError):
        return _doc_response(
            documents.error_document("input", str(exc), exc.errors), 400
        )

    @app.exception_handler(InvalidNetworkError)
    async def _invalid(request: Request, exc: InvalidNetworkError):
        fields = [(v.subject, f"{v.rule}: {v.detail}") for v in exc.violations]
        return _doc_response(documents.error_document("input", str(exc), fields), 400)

    @app.exception_handler(InfeasiblePlanError)
    async def _infeasible(request: Request, exc: InfeasiblePlanError):
        return _doc_response(documents.error_document("input", str(exc)), 400)

    @app.exception_handler(CapacityError)
    async def _capacity(request: Request, exc: CapacityError):
        return _doc_response(documents.error_document("capacity", str(exc)), 413)

    @app.exception_handler(BailnetError)
    async def _engine_error(request: Request, exc: BailnetError):
        return _doc_response(documents.error_document("internal", str(exc)), 500)

    @app.exception_handler(RequestValidationError)
    async def _validation(request: Request, exc: RequestValidationError):
        fields = [
            (".".join(str(p) for p in err["loc"]), err["msg"]) for err in exc.errors()
        ]
        return _doc_response(
            documents.error_document("input", "malformed request", fields), 400
        )

    @app.get("/api/health")
    async def health():
        return _doc_response(documents._stamp({"status": "ok"}, "health"))

    @app.get("/api/examples")
    async def examples():
        return _doc_response(ops.op_examples())

    @app.get("/api/examples/{name}")
    async def example(name: str):
        return _doc_response(ops.op_example(name))

    @app.post("/api/clear")
    async def clear_endpoint(network: dict):
        parsed = documents.parse_network(network)
        return _doc_response(ops.op_clear(parsed))

    @app.post("/api/optimize")
    async def optimize_endpoint(req: OptimizeRequest):
        parsed = documents.parse_network(req.network)
        spec = ops.parse_objective(req.objective.as_dict())
        return _doc_response(
            ops.op_optimize(
                parsed, spec, req.method, max_insolvent=req.max_insolvent
            )
        )

    @app.post("/api/whatif")
    async def whatif_endpoint(req: WhatIfRequest):
        parsed = documents.parse_network(req.network)
        spec = (
            ops.parse_objective(req.objective.as_dict())
            if req.objective is not None
            else None
        )
        return _doc_response(ops.op_whatif(parsed, req.bailout, spec))

    @app.post("/api/generate")
    async def generate_endpoint(req: GenerateRequest):
        return _doc_response(ops.op_generate(req.family, req.graph, req.k, req.beta))

    @app.post("/api/abuse")
    async def abuse_endpoint(req: AbuseRequest):
        parsed = documents.parse_network(req.network)
        spec = ops.parse_objective(req.objective.as_dict())
        return _doc_response(
            ops.op_abuse(
                parsed,
                spec,
                parse_rational(req.principal_step),
                parse_rational(req.max_face),
                parse_rational(req.face_step) if req.face_step else None,
                max_insolvent=req.max_insolvent,
            )
        )

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/", StaticFiles(directory=Path(static_dir), html=True), name="static"
        )

    return app
