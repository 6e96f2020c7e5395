"""Exception and warning types shared across the package.

Everything raised on bad user input derives from :class:`AuditToolError`,
which the CLI maps to exit code 1. Anything else escaping to the CLI is an
internal error (exit code 2).
"""

from __future__ import annotations


class AuditToolError(Exception):
    """Base class for all input and validation failures."""


class EmbeddingFormatError(AuditToolError):
    """A vector file violates the plain-text format contract."""


class VectorError(AuditToolError):
    """Invalid vector operand (zero vector, dimension mismatch, missing word)."""


class LexiconFormatError(AuditToolError):
    """A lexicon TSV file violates the format contract."""


class TranslationProviderError(AuditToolError):
    """Transport-level provider failure, distinct from a word being unavailable."""


class NetworkError(AuditToolError):
    """Similarity-network construction or export failure."""


class AuditDataError(AuditToolError):
    """Audit inputs are structurally valid but not analyzable as requested."""


class ConfigError(AuditToolError):
    """Invalid or incomplete run configuration."""


class HighInternalSimilarityWarning(UserWarning):
    """The two anchor words are so similar they weakly separate the genders."""
