"""Plain-text word vector tables: parsing, validation, serialization, lookup.

The on-disk format is line-oriented UTF-8: a header line ``<count> <dim>``
followed by one ``<word> <v1> ... <vD>`` record per line, fields separated by
exactly one ASCII space, LF line endings (a trailing CR is tolerated and
stripped).
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass
from typing import IO, Iterator, Mapping, Union

import numpy as np

from .errors import EmbeddingFormatError, VectorError

# A vector is a read-only 1-D float64 array, validated when its table is built.
Vector = np.ndarray

TextSource = Union[bytes, str, IO[bytes], IO[str]]


def canonicalize(word: str) -> str:
    """Canonical word form used at load time and for every lookup: NFC, then lowercase."""
    return unicodedata.normalize("NFC", word).lower()


def as_vector(values) -> Vector:
    """Coerce to a validated read-only float64 vector."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise VectorError("a vector must be a non-empty 1-D sequence of numbers")
    if not np.all(np.isfinite(arr)):
        raise VectorError("vector contains a non-finite component")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _dot_wide(x: Vector, y: Vector) -> np.longdouble:
    # Accumulate in the widest float numpy offers so 300-dim sums are
    # reproducible across platforms; callers round to float64 at the end.
    return np.dot(x.astype(np.longdouble), y.astype(np.longdouble))


def _norm_wide(x: Vector) -> np.longdouble:
    return np.sqrt(_dot_wide(x, x))


def normalize(v: Vector) -> Vector:
    """Scale ``v`` to unit Euclidean norm.

    Raises :class:`VectorError` for the zero vector.
    """
    arr = as_vector(v)
    norm = _norm_wide(arr)
    if norm == 0:
        raise VectorError("cannot normalize a zero vector")
    out = np.asarray(arr / np.float64(norm), dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    """Immutable word -> vector map for one language.

    Words are stored under their canonical form; every vector has length
    ``dim``, is finite, and is not all-zero. Instances are safe to share
    across concurrent readers.
    """

    language: str
    dim: int
    entries: Mapping[str, Vector]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise EmbeddingFormatError("dimension must be a positive integer")
        validated: dict[str, Vector] = {}
        for word, vec in self.entries.items():
            canonical = canonicalize(word)
            if canonical != word:
                raise EmbeddingFormatError(
                    f"word {word!r} is not in canonical form (expected {canonical!r})"
                )
            arr = as_vector(vec)
            if arr.shape[0] != self.dim:
                raise EmbeddingFormatError(
                    f"vector for {word!r} has length {arr.shape[0]}, expected {self.dim}"
                )
            if not arr.any():
                raise EmbeddingFormatError(f"word {word!r} maps to the all-zero vector")
            validated[word] = arr
        object.__setattr__(self, "entries", validated)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return canonicalize(word) in self.entries

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        return (
            self.language == other.language
            and self.dim == other.dim
            and list(self.entries) == list(other.entries)
            and all(np.array_equal(v, other.entries[w]) for w, v in self.entries.items())
        )

    def words(self) -> tuple[str, ...]:
        return tuple(self.entries)

    def lookup(self, word: str) -> Vector | None:
        """Vector stored under the canonical form of ``word``; None when absent."""
        return self.entries.get(canonicalize(word))

    def vector(self, word: str) -> Vector:
        """Like :meth:`lookup` but absence is an error naming the word."""
        vec = self.lookup(word)
        if vec is None:
            raise VectorError(f"word not in table: {canonicalize(word)!r}")
        return vec


def _read_text(data: TextSource) -> str:
    if hasattr(data, "read"):
        data = data.read()  # type: ignore[union-attr]
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EmbeddingFormatError(f"input is not valid UTF-8: {exc}") from exc
    return str(data)


def parse_embedding_file(
    data: TextSource, language: str, expected_dim: int | None = None
) -> EmbeddingTable:
    """Parse a plain-text vector file into an :class:`EmbeddingTable`.

    Duplicate words (after canonicalization) are a hard error rather than a
    silent overwrite, so results never depend on file line order. Every error
    names the offending line number.
    """
    text = _read_text(data)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmbeddingFormatError("empty file: missing header line")

    header = lines[0].rstrip("\r").split(" ")
    if len(header) != 2 or not all(tok.isascii() and tok.isdigit() for tok in header):
        raise EmbeddingFormatError(
            f"malformed header at line 1: expected '<count> <dim>', got {lines[0]!r}"
        )
    declared_count, dim = int(header[0]), int(header[1])
    if dim < 1:
        raise EmbeddingFormatError("malformed header at line 1: dimension must be positive")
    if expected_dim is not None and dim != expected_dim:
        raise EmbeddingFormatError(
            f"dimension mismatch at line 1: header declares {dim}, expected {expected_dim}"
        )

    entries: dict[str, np.ndarray] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        tokens = raw.rstrip("\r").split(" ")
        if len(tokens) != dim + 1:
            raise EmbeddingFormatError(
                f"wrong component count at line {lineno}: expected {dim}, got {len(tokens) - 1}"
            )
        word = canonicalize(tokens[0])
        if not word:
            raise EmbeddingFormatError(f"empty word at line {lineno}")
        if word in entries:
            raise EmbeddingFormatError(f"duplicate word {word!r} at line {lineno}")
        components = np.empty(dim, dtype=np.float64)
        for i, tok in enumerate(tokens[1:]):
            try:
                value = float(tok)
            except ValueError as exc:
                raise EmbeddingFormatError(
                    f"invalid component {tok!r} at line {lineno}"
                ) from exc
            if not math.isfinite(value):
                raise EmbeddingFormatError(f"non-finite component at line {lineno}")
            components[i] = value
        if not components.any():
            raise EmbeddingFormatError(f"zero vector at line {lineno}")
        entries[word] = components

    if len(entries) != declared_count:
        raise EmbeddingFormatError(
            f"header declares {declared_count} words but file contains {len(entries)}"
        )
    return EmbeddingTable(language=language, dim=dim, entries=entries)


def serialize_embedding_table(table: EmbeddingTable) -> bytes:
    """Inverse of :func:`parse_embedding_file`; byte-deterministic.

    Components print via ``repr`` so parsing reproduces every float exactly.
    """
    lines = [f"{len(table)} {table.dim}"]
    for word, vec in table.entries.items():
        lines.append(word + " " + " ".join(repr(float(v)) for v in vec))
    return ("\n".join(lines) + "\n").encode("utf-8")
