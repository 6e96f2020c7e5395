"""Orchestration shared by the CLI and the service: files in, artifacts out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .config import RunConfig
from .embeddings import EmbeddingTable, parse_embedding_file
from .errors import ConfigError
from .lexicon import (
    BilingualLexicon,
    CacheTranslationProvider,
    CompositeTranslationProvider,
    HttpProviderConfig,
    HttpTranslationProvider,
    TranslationFillResult,
    load_translation_cache,
    parse_lexicon,
    serialize_lexicon,
    write_translation_cache,
)
from .metrics import AuditResult, audit, validate_target_pair
from .report import render
from .simnet import SimilarityNetwork, build_similarity_network, export_network


def _read_file(path: str, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {what} file {path}: {exc}") from exc


def load_table(path: str, language: str, expected_dim: int | None = None) -> EmbeddingTable:
    return parse_embedding_file(_read_file(path, "vector"), language, expected_dim)


def load_lexicon_file(config: RunConfig) -> tuple[BilingualLexicon, int]:
    parsed = parse_lexicon(
        _read_file(config.lexicon, "lexicon"), config.src_lang, config.dst_lang
    )
    return parsed.lexicon, parsed.duplicates_removed


@dataclass(frozen=True)
class AuditRun:
    result: AuditResult
    artifacts: Mapping[str, bytes]
    summary: tuple[str, ...]


def run_audit(config: RunConfig) -> AuditRun:
    config.require("src_vec", "dst_vec", "lexicon")
    src_table = load_table(config.src_vec, config.src_lang)
    dst_table = load_table(config.dst_vec, config.dst_lang)
    lexicon, duplicates = load_lexicon_file(config)

    if config.cache:
        provider = CacheTranslationProvider.from_file(config.cache)
        fill = _fill(lexicon, provider, config)
        lexicon = fill.lexicon

    x_src, y_src, x_dst, y_dst = config.targets
    src_pair = validate_target_pair(src_table, x_src, y_src, config.max_internal)
    dst_pair = validate_target_pair(dst_table, x_dst, y_dst, config.max_internal)

    result = audit(src_table, dst_table, lexicon, src_pair, dst_pair, config.settings())

    artifacts: dict[str, bytes] = {}
    for fmt in config.formats or ("json", "csv-bundle"):
        if fmt not in ("json", "csv-bundle", "markdown"):
            raise ConfigError(f"format {fmt!r} does not apply to the audit command")
        artifacts.update(render(result, fmt))

    summary = (
        f"entries: {len(lexicon)} (duplicates removed at parse: {duplicates})",
        f"records: src {len(result.src.records)}, dst {len(result.dst.records)}",
        f"out of vocabulary: src {len(result.skipped.src_oov)}, "
        f"dst {len(result.skipped.dst_oov)}",
        f"untranslated: {len(result.skipped.untranslated)}",
        f"warnings: {len(result.warnings)}",
    )
    return AuditRun(result, artifacts, summary)


@dataclass(frozen=True)
class NetworkRun:
    network: SimilarityNetwork
    artifacts: Mapping[str, bytes]
    summary: tuple[str, ...]


NETWORK_FILENAMES = {"edge-csv": "edges.csv", "dot": "network.dot"}


def run_network(config: RunConfig) -> NetworkRun:
    config.require("src_vec")
    if not config.words and not config.lexicon:
        raise ConfigError("network needs a word list: pass --words or --lexicon")
    table = load_table(config.src_vec, config.src_lang)
    if config.words:
        text = _read_file(config.words, "word list").decode("utf-8")
        words = [line.strip() for line in text.splitlines() if line.strip()]
    else:
        lexicon, _ = load_lexicon_file(config)
        if config.side == "src":
            words = [entry.source.surface for entry in lexicon.entries]
        else:
            words = [
                entry.target.surface for entry in lexicon.entries if entry.target is not None
            ]
    network = build_similarity_network(table, words, config.threshold)

    formats = []
    for fmt in config.formats or ("edge-csv", "dot"):
        fmt = "edge-csv" if fmt == "csv-bundle" else fmt
        if fmt not in NETWORK_FILENAMES:
            raise ConfigError(f"format {fmt!r} does not apply to the network command")
        formats.append(fmt)
    artifacts = {NETWORK_FILENAMES[fmt]: export_network(network, fmt) for fmt in formats}
    summary = (
        f"nodes: {len(network.nodes)}, edges: {len(network.edges)}",
        f"threshold: {network.threshold}",
    )
    return NetworkRun(network, artifacts, summary)


@dataclass(frozen=True)
class TranslateRun:
    fill: TranslationFillResult
    artifacts: Mapping[str, bytes]
    summary: tuple[str, ...]


def _fill(lexicon, provider, config: RunConfig) -> TranslationFillResult:
    from .lexicon import fill_translations

    return fill_translations(lexicon, provider, config.multi_token)


def _http_provider(config: RunConfig) -> HttpTranslationProvider:
    from .config import parse_config_file

    values = parse_config_file(config.provider_config)
    if "base_url" not in values:
        raise ConfigError(f"provider config {config.provider_config} lacks base_url")
    provider_config = HttpProviderConfig(
        base_url=values["base_url"],
        auth_header_name=values.get("auth_header_name"),
        auth_header_value=values.get("auth_header_value"),
        text_field=values.get("text_field", "text"),
        source_lang_field=values.get("source_lang_field", "source"),
        target_lang_field=values.get("target_lang_field", "target"),
        response_path=values.get("response_path", "translation"),
    )
    return HttpTranslationProvider(provider_config)


def run_translate(config: RunConfig) -> TranslateRun:
    config.require("lexicon")
    if not config.cache and not config.provider_config:
        raise ConfigError("translate needs --cache and/or a configured provider")
    lexicon, _ = load_lexicon_file(config)

    providers = []
    if config.cache:
        providers.append(CacheTranslationProvider.from_file(config.cache))
    live = None
    if config.provider_config:
        live = _http_provider(config)
        providers.append(live)
    fill = _fill(lexicon, CompositeTranslationProvider(providers), config)

    # A live provider extends the cache so later runs stay offline.
    if live is not None and config.cache and fill.filled:
        cache = load_translation_cache(config.cache)
        for entry in fill.lexicon.entries:
            if entry.source.surface in fill.filled and entry.target is not None:
                cache.setdefault(entry.source.surface, entry.target.surface)
        write_translation_cache(config.cache, cache)

    artifacts = {"lexicon.tsv": serialize_lexicon(fill.lexicon)}
    summary = (
        f"filled: {len(fill.filled)}",
        f"unavailable: {len(fill.unavailable)}",
        f"multi-token rejected: {len(fill.policy_violations)}",
    )
    return TranslateRun(fill, artifacts, summary)


def write_artifacts(out_dir: str | Path, artifacts: Mapping[str, bytes]) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in sorted(artifacts.items()):
        path = out / name
        path.write_bytes(content)
        written.append(path)
    return written
