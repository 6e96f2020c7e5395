"""FastAPI service wrapping the audit package.

Vector tables load once into a per-app registry and serve any number of
similarity and bias queries; the audit endpoint mirrors the CLI and returns
the same deterministic JSON document it writes to disk.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Response

from .. import __version__
from ..config import RunConfig
from ..embeddings import EmbeddingTable
from ..errors import AuditToolError
from ..lexicon import MultiTokenPolicy
from ..metrics import BiasRecord, validate_target_pair
from ..pipeline import load_table, run_audit
from ..report import render_json
from ..simnet import build_similarity_network, cosine, export_network
from .schemas import (
    AuditRequest,
    BiasQueryRequest,
    BiasRecordResponse,
    HealthResponse,
    LoadTableRequest,
    NetworkRequest,
    SimilarityRequest,
    SimilarityResponse,
    TableInfo,
)


def create_app() -> FastAPI:
    app = FastAPI(title="simbias", version=__version__)
    tables: dict[str, EmbeddingTable] = {}
    app.state.tables = tables

    def get_table(language: str) -> EmbeddingTable:
        table = tables.get(language)
        if table is None:
            raise HTTPException(
                status_code=404, detail=f"no table loaded for language {language!r}"
            )
        return table

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/tables", response_model=list[TableInfo])
    def list_tables() -> list[TableInfo]:
        return [
            TableInfo(language=lang, dim=table.dim, words=len(table))
            for lang, table in sorted(tables.items())
        ]

    @app.post("/tables", response_model=TableInfo)
    def load(request: LoadTableRequest) -> TableInfo:
        try:
            table = load_table(request.path, request.language, request.expected_dim)
        except AuditToolError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        tables[request.language] = table
        return TableInfo(language=request.language, dim=table.dim, words=len(table))

    @app.post("/similarity", response_model=SimilarityResponse)
    def similarity(request: SimilarityRequest) -> SimilarityResponse:
        table = get_table(request.language)
        try:
            value = cosine(table.vector(request.word_a), table.vector(request.word_b))
        except AuditToolError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return SimilarityResponse(
            word_a=request.word_a, word_b=request.word_b, similarity=value
        )

    @app.post("/bias", response_model=BiasRecordResponse)
    def bias(request: BiasQueryRequest) -> BiasRecordResponse:
        table = get_table(request.language)
        try:
            pair = validate_target_pair(table, request.female_anchor, request.male_anchor)
            vec = table.vector(request.word)
            record = BiasRecord.from_similarities(
                request.word,
                cosine(vec, table.vector(pair.x)),
                cosine(vec, table.vector(pair.y)),
            )
        except AuditToolError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return BiasRecordResponse(**record.to_dict())

    @app.post("/network")
    def network(request: NetworkRequest) -> Response:
        table = get_table(request.language)
        try:
            net = build_similarity_network(table, request.words, request.threshold)
            payload = export_network(net, request.format)
        except AuditToolError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return Response(content=payload, media_type="text/plain; charset=utf-8")

    @app.post("/audit")
    def run(request: AuditRequest) -> Response:
        config = RunConfig(
            src_vec=request.src_vec,
            dst_vec=request.dst_vec,
            lexicon=request.lexicon,
            cache=request.cache,
            targets=tuple(request.targets),
            src_lang=request.src_lang,
            dst_lang=request.dst_lang,
            bin_width=request.bin_width,
            threshold=request.threshold,
            sig_threshold=request.sig_threshold,
            multi_token=MultiTokenPolicy(request.multi_token),
            max_internal=request.max_internal,
            formats=("json",),
        )
        try:
            config.validate_common()
            audit_run = run_audit(config)
        except AuditToolError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return Response(
            content=render_json(audit_run.result), media_type="application/json"
        )

    return app


app = create_app()
