"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    document: Dict[str, Any] = Field(description="A version-1 wdsign document")
    query: str = Field(description="One of the supported query names")
    mode: Optional[str] = Field(
        default=None, description="linear or metaplectic, where applicable"
    )


class RunResponse(BaseModel):
    query: str
    mode: Optional[str] = None
    exit_code: int
    report: Dict[str, Any]
    text: str


class HealthResponse(BaseModel):
    status: str
    version: str


class QueryListResponse(BaseModel):
    queries: List[str]
