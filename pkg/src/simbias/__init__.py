"""simbias: similarity-based gender bias auditing for bilingual embeddings."""

__version__ = "0.1.0"

from .embeddings import (
    EmbeddingTable,
    canonicalize,
    normalize,
    parse_embedding_file,
    serialize_embedding_table,
)
from .errors import AuditToolError, HighInternalSimilarityWarning
from .lexicon import (
    BilingualLexicon,
    CacheTranslationProvider,
    GenderTag,
    LexiconEntry,
    MultiTokenPolicy,
    WordEntry,
    dedupe_and_canonicalize,
    fill_translations,
    parse_lexicon,
    serialize_lexicon,
)
from .metrics import (
    AuditResult,
    AuditSettings,
    BiasRecord,
    TargetPair,
    audit,
    bias_direction,
    bias_intensity,
    bin_records,
    change_sign_summary,
    gender_shift_matrix,
    partition_direction,
    post_translation_change,
    validate_target_pair,
)
from .report import parse_audit_json, render, render_json, scatter_data
from .simnet import SimilarityNetwork, build_similarity_network, cosine, export_network

__all__ = [
    "__version__",
    "AuditResult",
    "AuditSettings",
    "AuditToolError",
    "BiasRecord",
    "BilingualLexicon",
    "CacheTranslationProvider",
    "EmbeddingTable",
    "GenderTag",
    "HighInternalSimilarityWarning",
    "LexiconEntry",
    "MultiTokenPolicy",
    "SimilarityNetwork",
    "TargetPair",
    "WordEntry",
    "audit",
    "bias_direction",
    "bias_intensity",
    "bin_records",
    "build_similarity_network",
    "canonicalize",
    "change_sign_summary",
    "cosine",
    "dedupe_and_canonicalize",
    "export_network",
    "fill_translations",
    "gender_shift_matrix",
    "normalize",
    "parse_audit_json",
    "parse_embedding_file",
    "parse_lexicon",
    "partition_direction",
    "post_translation_change",
    "render",
    "render_json",
    "scatter_data",
    "serialize_embedding_table",
    "serialize_lexicon",
    "validate_target_pair",
]
