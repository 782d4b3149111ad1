"""HTTP service exposing the pipeline commands.

One POST endpoint per command under /v1, all sharing the RunRequest and
RunResponse shapes. Domain errors map onto status codes the same way
the CLI maps them onto exit codes: usage problems 400, data problems
422, remote-budget and other remote failures 502.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from agestack import __version__
from agestack.errors import AgeStackError, DataError, RemoteError
from agestack.pipeline import RUNNERS
from agestack.service.schemas import ErrorBody, HealthResponse, RunRequest, RunResponse


def status_for(exc: AgeStackError) -> int:
    if isinstance(exc, RemoteError):
        return 502
    if isinstance(exc, DataError):
        return 422
    return 400


def create_app() -> FastAPI:
    app = FastAPI(title="agestack", version=__version__)

    @app.exception_handler(AgeStackError)
    async def domain_error(request: Request, exc: AgeStackError) -> JSONResponse:
        body = ErrorBody(error=type(exc).__name__, detail=str(exc))
        return JSONResponse(status_code=status_for(exc), content=body.model_dump())

    @app.get("/v1/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    def register(command: str) -> None:
        runner = RUNNERS[command]

        @app.post(f"/v1/{command}", response_model=RunResponse, name=command)
        async def run(request: RunRequest) -> RunResponse:
            result = runner(request.config, request.seed, request.inputs)
            return RunResponse(files=result.files, meta=result.meta)

    for command in RUNNERS:
        register(command)
    return app
