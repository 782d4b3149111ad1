"""Request and response bodies for the pipeline service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    """One pipeline command invocation.

    ``config`` is the full key-value config document; the endpoint picks
    its own section. ``inputs`` maps logical input names (for example
    "manifest", "predictions:0") to file contents.
    """

    config: str
    seed: int = Field(default=0, ge=0, lt=2**64)
    inputs: dict[str, str] = Field(default_factory=dict)


class RunResponse(BaseModel):
    """Output file contents keyed by file name, plus the run meta block."""

    files: dict[str, str]
    meta: dict


class ErrorBody(BaseModel):
    """Uniform error payload: exception class name plus its message."""

    error: str
    detail: str


class HealthResponse(BaseModel):
    status: str
    version: str
