"""FastAPI service wrapping the sign-calculus engine.

Run with:  uvicorn wdsign.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..documents import SUPPORTED_QUERIES, parse_document
from ..errors import DocumentError, EngineError, IncompleteTableError
from .runner import EXIT_INCOMPLETE, EXIT_OK, EXIT_VALIDATION, render_text, run_query
from .schemas import HealthResponse, QueryListResponse, RunRequest, RunResponse


def create_app() -> FastAPI:
    app = FastAPI(
        title="wdsign",
        version=__version__,
        description=(
            "Sign calculus for selfdual and conjugate-dual Weil-Deligne "
            "parameters: classification, component groups, distinguished "
            "characters, consistency checks and global multiplicities."
        ),
    )

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/v1/queries", response_model=QueryListResponse)
    def queries() -> QueryListResponse:
        return QueryListResponse(queries=list(SUPPORTED_QUERIES))

    @app.post("/v1/run", response_model=RunResponse)
    def run(request: RunRequest) -> RunResponse:
        try:
            doc = parse_document(request.document)
            report = run_query(doc, request.query, request.mode)
        except IncompleteTableError as exc:
            raise HTTPException(
                status_code=422,
                detail={"error": str(exc), "exit_code": EXIT_INCOMPLETE},
            ) from None
        except (DocumentError, EngineError) as exc:
            raise HTTPException(
                status_code=400,
                detail={"error": str(exc), "exit_code": EXIT_VALIDATION},
            ) from None
        return RunResponse(
            query=request.query,
            mode=request.mode,
            exit_code=EXIT_OK,
            report=report,
            text=render_text(report),
        )

    return app


app = create_app()
