"""Cosine similarity and the thresholded similarity network over a word set."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingTable, Vector, _dot_wide, as_vector, canonicalize
from .errors import NetworkError, VectorError

# Floating error this far past |1| is forgiven and clamped; anything larger
# indicates a real bug and raises.
COSINE_CLAMP = 1e-9

EXPORT_FORMATS = ("edge-csv", "dot")


def cosine(x: Vector, y: Vector) -> float:
    """Cosine of the angle between two vectors, in [-1, 1].

    Computed on the raw vectors with wide-precision accumulation; no
    pre-normalized copies, so there is one canonical code path.
    """
    a = as_vector(x)
    b = as_vector(y)
    if a.shape[0] != b.shape[0]:
        raise VectorError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    norm_a = np.sqrt(_dot_wide(a, a))
    norm_b = np.sqrt(_dot_wide(b, b))
    if norm_a == 0 or norm_b == 0:
        raise VectorError("cosine is undefined for a zero vector")
    value = float(_dot_wide(a, b) / (norm_a * norm_b))
    if value > 1.0:
        if value > 1.0 + COSINE_CLAMP:
            raise VectorError(f"cosine out of range: {value!r}")
        return 1.0
    if value < -1.0:
        if value < -1.0 - COSINE_CLAMP:
            raise VectorError(f"cosine out of range: {value!r}")
        return -1.0
    return value


@dataclass(frozen=True)
class SimilarityNetwork:
    """Weighted undirected graph: nodes are words, edges are cosines >= threshold.

    Edges are (i, j, weight) index triples with i < j into ``nodes``.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    threshold: float


def build_similarity_network(
    table: EmbeddingTable, words: list[str] | tuple[str, ...], threshold: float
) -> SimilarityNetwork:
    """Pairwise similarity network over ``words``, keeping edges >= ``threshold``.

    All words must resolve in ``table``; out-of-vocabulary words are the
    caller's job to filter, and the error names the first offender.
    """
    if not -1.0 <= threshold <= 1.0:
        raise NetworkError(f"threshold out of range [-1, 1]: {threshold}")
    nodes = tuple(sorted({canonicalize(w) for w in words}))
    if len(nodes) < 2:
        raise NetworkError(f"need at least 2 distinct words, got {len(nodes)}")
    vectors = []
    for word in nodes:
        vec = table.lookup(word)
        if vec is None:
            raise NetworkError(f"word not in table: {word!r}")
        vectors.append(vec)
    edges = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            weight = cosine(vectors[i], vectors[j])
            if weight >= threshold:
                edges.append((i, j, weight))
    return SimilarityNetwork(nodes=nodes, edges=tuple(edges), threshold=threshold)


def _dot_quote(word: str) -> str:
    return '"' + word.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_network(net: SimilarityNetwork, format: str) -> bytes:
    """Serialize the network; byte-deterministic for a given network.

    ``edge-csv`` is ``source,target,weight`` rows with 6-decimal weights,
    ordered lexicographically by (source, target); ``dot`` is an undirected
    graph carrying the threshold as a graph attribute.
    """
    if format == "edge-csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["source", "target", "weight"])
        for i, j, weight in net.edges:
            writer.writerow([net.nodes[i], net.nodes[j], f"{weight:.6f}"])
        return buffer.getvalue().encode("utf-8")
    if format == "dot":
        lines = ["graph similarity {", f"  graph [threshold={net.threshold:.6f}];"]
        for word in net.nodes:
            lines.append(f"  {_dot_quote(word)};")
        for i, j, weight in net.edges:
            lines.append(
                f"  {_dot_quote(net.nodes[i])} -- {_dot_quote(net.nodes[j])} [weight={weight:.6f}];"
            )
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise NetworkError(f"unknown export format: {format!r}")


def parse_edge_csv(data: bytes | str) -> tuple[tuple[str, str, float], ...]:
    """Read an edge-csv export back into (source, target, weight) triples."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or rows[0] != ["source", "target", "weight"]:
        raise NetworkError("malformed edge-csv: missing 'source,target,weight' header")
    edges = []
    for row in rows[1:]:
        if len(row) != 3:
            raise NetworkError(f"malformed edge-csv row: {row!r}")
        try:
            weight = float(row[2])
        except ValueError:
            raise NetworkError(f"malformed edge weight: {row[2]!r}") from None
        edges.append((row[0], row[1], weight))
    return tuple(edges)
