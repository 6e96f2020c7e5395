"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class LoadTableRequest(BaseModel):
    path: str
    language: str
    expected_dim: int | None = None


class TableInfo(BaseModel):
    language: str
    dim: int
    words: int


class SimilarityRequest(BaseModel):
    language: str
    word_a: str
    word_b: str


class SimilarityResponse(BaseModel):
    word_a: str
    word_b: str
    similarity: float


class BiasQueryRequest(BaseModel):
    language: str
    word: str
    female_anchor: str
    male_anchor: str


class BiasRecordResponse(BaseModel):
    word: str
    sim_x: float
    sim_y: float
    intensity: float
    direction: float


class NetworkRequest(BaseModel):
    language: str
    words: list[str] = Field(min_length=2)
    threshold: float = 0.3
    format: Literal["edge-csv", "dot"] = "edge-csv"


class AuditRequest(BaseModel):
    src_vec: str
    dst_vec: str
    lexicon: str
    cache: str | None = None
    targets: list[str] = Field(default=["she", "he", "lei", "lui"], min_length=4, max_length=4)
    src_lang: str = "en"
    dst_lang: str = "it"
    bin_width: float = 0.1
    threshold: float = 0.3
    sig_threshold: float = 0.1
    multi_token: Literal["reject", "head", "mean"] = "reject"
    max_internal: float = 0.9
