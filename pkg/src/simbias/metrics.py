"""Gender bias features over anchor-word similarities, and the full audit.

Every feature reduces to the gap between a word's similarity to the female
anchor X and to the male anchor Y. The sign convention is fixed across the
codebase: direction > 0 means the word leans toward X (female).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, localcontext
from typing import Iterable, Sequence

import numpy as np

from .embeddings import EmbeddingTable, Vector, canonicalize
from .errors import AuditDataError, HighInternalSimilarityWarning
from .lexicon import BilingualLexicon, GenderTag, MultiTokenPolicy
from .simnet import cosine

GENDER_AXES = (GenderTag.NEUTRAL, GenderTag.MASCULINE, GenderTag.FEMININE)

# Upper bound on histogram bins, guarding against absurd bin widths.
MAX_BINS = 1_000_000

# Values this close (relative to bin width) to a bin boundary count as being
# on it and go to the upper bin, keeping decimal boundaries reproducible
# under float noise.
_BOUNDARY_SNAP = 1e-9


def round_percent(count: int, total: int) -> float:
    """Percentage of ``total``, rounded half-up to 2 decimals."""
    if total == 0:
        return 0.0
    with localcontext() as ctx:
        ctx.prec = 50
        value = Decimal(count * 100) / Decimal(total)
        return float(value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def bias_intensity(sim_x: float, sim_y: float) -> float:
    """Unsigned magnitude of the gender association gap: |sim_x - sim_y|."""
    return abs(sim_x - sim_y)


def bias_direction(sim_x: float, sim_y: float) -> float:
    """Signed gap sim_x - sim_y; positive is female-directed."""
    return sim_x - sim_y


def post_translation_change(sim_dest: float, sim_src: float) -> float:
    """How an anchor similarity moved across translation: sim_dest - sim_src."""
    return sim_dest - sim_src


@dataclass(frozen=True)
class TargetPair:
    """The two gender anchor words for one language, e.g. (she, he)."""

    x: str
    y: str
    language: str
    internal_similarity: float

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "language": self.language,
            "internal_similarity": self.internal_similarity,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TargetPair":
        return cls(data["x"], data["y"], data["language"], data["internal_similarity"])


def validate_target_pair(
    table: EmbeddingTable, x: str, y: str, max_internal: float = 0.9
) -> TargetPair:
    """Resolve the anchor words and measure their internal similarity.

    Anchors that are too similar separate the genders poorly; that is a
    warning, not an error, since the pair may still be usable.
    """
    x_canon = canonicalize(x)
    y_canon = canonicalize(y)
    if x_canon == y_canon:
        raise AuditDataError(f"target pair words must differ, got {x_canon!r} twice")
    internal = cosine(table.vector(x_canon), table.vector(y_canon))
    if internal > max_internal:
        warnings.warn(
            f"internal similarity of ({x_canon}, {y_canon}) is {internal:.4f}, "
            f"above {max_internal}; the anchors may not separate the genders well",
            HighInternalSimilarityWarning,
            stacklevel=2,
        )
    return TargetPair(x_canon, y_canon, table.language, internal)


@dataclass(frozen=True)
class BiasRecord:
    """Per-word anchor similarities plus the derived intensity and direction."""

    word: str
    sim_x: float
    sim_y: float
    intensity: float
    direction: float

    @classmethod
    def from_similarities(cls, word: str, sim_x: float, sim_y: float) -> "BiasRecord":
        direction = bias_direction(sim_x, sim_y)
        return cls(word, sim_x, sim_y, abs(direction), direction)

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "sim_x": self.sim_x,
            "sim_y": self.sim_y,
            "intensity": self.intensity,
            "direction": self.direction,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BiasRecord":
        return cls(
            data["word"], data["sim_x"], data["sim_y"], data["intensity"], data["direction"]
        )


def _bin_count(max_value: float, width: float) -> int:
    # floor+1 rather than ceil: a maximum sitting exactly on a boundary goes
    # to the upper bin, so the span must extend to include that bin.
    count = int(math.floor(max_value / width + _BOUNDARY_SNAP)) + 1
    if count > MAX_BINS:
        raise AuditDataError(
            f"bin width {width} yields {count} bins for maximum value {max_value}"
        )
    return count


def _bin_index(value: float, width: float, n_bins: int) -> int:
    # Values exactly on an interior boundary go to the upper bin; the top
    # bin is closed at its upper bound.
    idx = int(math.floor(value / width + _BOUNDARY_SNAP))
    return min(max(idx, 0), n_bins - 1)


@dataclass(frozen=True)
class HistogramBin:
    lower: float
    upper: float
    count: int

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "count": self.count}

    @classmethod
    def from_dict(cls, data: dict) -> "HistogramBin":
        return cls(data["lower"], data["upper"], data["count"])


@dataclass(frozen=True)
class Histogram:
    """Intensity counts over contiguous half-open bins [a, a+w), top bin closed."""

    bin_width: float
    bins: tuple[HistogramBin, ...]
    total: int

    def counts(self) -> tuple[int, ...]:
        return tuple(b.count for b in self.bins)

    def to_dict(self) -> dict:
        return {
            "bin_width": self.bin_width,
            "total": self.total,
            "bins": [b.to_dict() for b in self.bins],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Histogram":
        return cls(
            data["bin_width"],
            tuple(HistogramBin.from_dict(b) for b in data["bins"]),
            data["total"],
        )


def bin_records(records: Sequence[BiasRecord], bin_width: float = 0.1) -> Histogram:
    """Histogram of bias intensities; every record lands in exactly one bin."""
    if bin_width <= 0:
        raise AuditDataError(f"bin width must be positive, got {bin_width}")
    if not records:
        return Histogram(bin_width, (), 0)
    n_bins = _bin_count(max(r.intensity for r in records), bin_width)
    counts = [0] * n_bins
    for record in records:
        counts[_bin_index(record.intensity, bin_width, n_bins)] += 1
    bins = tuple(
        HistogramBin(i * bin_width, (i + 1) * bin_width, counts[i]) for i in range(n_bins)
    )
    return Histogram(bin_width, bins, len(records))


@dataclass(frozen=True)
class DirectionBin:
    lower: float
    upper: float
    female: int
    male: int

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "female": self.female,
            "male": self.male,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DirectionBin":
        return cls(data["lower"], data["upper"], data["female"], data["male"])


@dataclass(frozen=True)
class DirectionTable:
    """Per-bin female/male counts by |direction|, with the exactly-zero records
    kept in a separate balanced bucket rather than assigned a side."""

    bin_width: float
    bins: tuple[DirectionBin, ...]
    balanced: int
    total: int

    @property
    def female_total(self) -> int:
        return sum(b.female for b in self.bins)

    @property
    def male_total(self) -> int:
        return sum(b.male for b in self.bins)

    def bin_totals(self) -> tuple[int, ...]:
        # Balanced records have intensity exactly 0, so they belong to the
        # first bin's range; including them here keeps per-bin totals equal
        # to the intensity histogram.
        totals = [b.female + b.male for b in self.bins]
        if totals:
            totals[0] += self.balanced
        return tuple(totals)

    def to_dict(self) -> dict:
        return {
            "bin_width": self.bin_width,
            "total": self.total,
            "balanced": self.balanced,
            "female_total": self.female_total,
            "male_total": self.male_total,
            "bins": [b.to_dict() for b in self.bins],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DirectionTable":
        return cls(
            data["bin_width"],
            tuple(DirectionBin.from_dict(b) for b in data["bins"]),
            data["balanced"],
            data["total"],
        )


def partition_direction(
    records: Sequence[BiasRecord], bin_width: float = 0.1
) -> DirectionTable:
    """Split each intensity bin into female- and male-directed counts."""
    if bin_width <= 0:
        raise AuditDataError(f"bin width must be positive, got {bin_width}")
    if not records:
        return DirectionTable(bin_width, (), 0, 0)
    n_bins = _bin_count(max(r.intensity for r in records), bin_width)
    female = [0] * n_bins
    male = [0] * n_bins
    balanced = 0
    for record in records:
        if record.direction == 0:
            balanced += 1
            continue
        idx = _bin_index(record.intensity, bin_width, n_bins)
        if record.direction > 0:
            female[idx] += 1
        else:
            male[idx] += 1
    bins = tuple(
        DirectionBin(i * bin_width, (i + 1) * bin_width, female[i], male[i])
        for i in range(n_bins)
    )
    return DirectionTable(bin_width, bins, balanced, len(records))


@dataclass(frozen=True)
class ShiftCell:
    pre: GenderTag
    post: GenderTag
    count: int
    percent: float
    example: str | None

    def to_dict(self) -> dict:
        return {
            "pre": self.pre.value,
            "post": self.post.value,
            "count": self.count,
            "percent": self.percent,
            "example": self.example,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ShiftCell":
        return cls(
            GenderTag(data["pre"]),
            GenderTag(data["post"]),
            data["count"],
            data["percent"],
            data["example"],
        )


@dataclass(frozen=True)
class ShiftMatrix:
    """3x3 pre/post-translation gender cross-tab with grand-total percentages."""

    cells: tuple[ShiftCell, ...]
    grand_total: int

    def count(self, pre: GenderTag, post: GenderTag) -> int:
        for cell in self.cells:
            if cell.pre is pre and cell.post is post:
                return cell.count
        return 0

    def percent(self, pre: GenderTag, post: GenderTag) -> float:
        for cell in self.cells:
            if cell.pre is pre and cell.post is post:
                return cell.percent
        return 0.0

    def row_totals(self) -> dict[GenderTag, int]:
        return {
            pre: sum(c.count for c in self.cells if c.pre is pre) for pre in GENDER_AXES
        }

    def col_totals(self) -> dict[GenderTag, int]:
        return {
            post: sum(c.count for c in self.cells if c.post is post)
            for post in GENDER_AXES
        }

    def to_dict(self) -> dict:
        return {
            "grand_total": self.grand_total,
            "cells": [c.to_dict() for c in self.cells],
            "row_totals": {g.value: n for g, n in self.row_totals().items()},
            "col_totals": {g.value: n for g, n in self.col_totals().items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ShiftMatrix":
        # row/col totals are derived; recomputed rather than trusted
        return cls(
            tuple(ShiftCell.from_dict(c) for c in data["cells"]), data["grand_total"]
        )


def gender_shift_matrix(lexicon: BilingualLexicon) -> ShiftMatrix:
    """Cross-tab of pre- vs post-translation gender over the whole lexicon.

    Refuses lexicons containing unannotated entries: guessing a gender would
    fabricate data, so ``unknown`` or missing translations are errors naming
    the word.
    """
    counts: dict[tuple[GenderTag, GenderTag], int] = {
        (pre, post): 0 for pre in GENDER_AXES for post in GENDER_AXES
    }
    examples: dict[tuple[GenderTag, GenderTag], str] = {}
    for entry in lexicon.entries:
        word = entry.source.surface
        if entry.target is None:
            raise AuditDataError(f"entry {word!r} has no translation")
        if entry.source.gender is GenderTag.UNKNOWN or entry.target.gender is GenderTag.UNKNOWN:
            raise AuditDataError(f"entry {word!r} has unknown gender")
        key = (entry.source.gender, entry.target.gender)
        counts[key] += 1
        # Entries arrive sorted, so the first hit is the lexicographic example.
        examples.setdefault(key, f"{word} → {entry.target.surface}")
    grand_total = len(lexicon.entries)
    cells = tuple(
        ShiftCell(
            pre,
            post,
            counts[(pre, post)],
            round_percent(counts[(pre, post)], grand_total),
            examples.get((pre, post)),
        )
        for pre in GENDER_AXES
        for post in GENDER_AXES
    )
    return ShiftMatrix(cells, grand_total)


@dataclass(frozen=True)
class ChangeRecord:
    """Post-translation similarity changes for one lexicon entry."""

    source: str
    target: str
    x_change: float
    y_change: float

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "x_change": self.x_change,
            "y_change": self.y_change,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChangeRecord":
        return cls(data["source"], data["target"], data["x_change"], data["y_change"])


@dataclass(frozen=True)
class SignChannel:
    positive: int
    negative: int
    zero: int
    positive_pct: float
    negative_pct: float
    zero_pct: float

    @property
    def total(self) -> int:
        return self.positive + self.negative + self.zero

    def to_dict(self) -> dict:
        return {
            "positive": self.positive,
            "negative": self.negative,
            "zero": self.zero,
            "positive_pct": self.positive_pct,
            "negative_pct": self.negative_pct,
            "zero_pct": self.zero_pct,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SignChannel":
        return cls(
            data["positive"],
            data["negative"],
            data["zero"],
            data["positive_pct"],
            data["negative_pct"],
            data["zero_pct"],
        )


@dataclass(frozen=True)
class SignSummary:
    """Counts of strictly positive / strictly negative / exactly-zero changes
    per comparison channel (x: female anchors, y: male anchors)."""

    x: SignChannel
    y: SignChannel
    total: int

    def to_dict(self) -> dict:
        return {"total": self.total, "x": self.x.to_dict(), "y": self.y.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "SignSummary":
        return cls(
            SignChannel.from_dict(data["x"]), SignChannel.from_dict(data["y"]), data["total"]
        )


def _channel_signs(values: Iterable[float]) -> SignChannel:
    positive = negative = zero = 0
    for value in values:
        if value > 0:
            positive += 1
        elif value < 0:
            negative += 1
        else:
            zero += 1
    total = positive + negative + zero
    return SignChannel(
        positive,
        negative,
        zero,
        round_percent(positive, total),
        round_percent(negative, total),
        round_percent(zero, total),
    )


def change_sign_summary(
    changes: Sequence[ChangeRecord] | Sequence[tuple[float, float]],
) -> SignSummary:
    """Tally the signs of per-word (x_change, y_change) pairs."""
    pairs = [
        (c.x_change, c.y_change) if isinstance(c, ChangeRecord) else (c[0], c[1])
        for c in changes
    ]
    return SignSummary(
        _channel_signs(x for x, _ in pairs),
        _channel_signs(y for _, y in pairs),
        len(pairs),
    )


@dataclass(frozen=True)
class AuditSettings:
    """Configuration knobs echoed into every audit result."""

    bin_width: float = 0.1
    network_threshold: float = 0.3
    significance_threshold: float = 0.1
    multi_token_policy: MultiTokenPolicy = MultiTokenPolicy.REJECT
    max_internal_similarity: float = 0.9

    def to_dict(self) -> dict:
        return {
            "bin_width": self.bin_width,
            "network_threshold": self.network_threshold,
            "significance_threshold": self.significance_threshold,
            "multi_token_policy": self.multi_token_policy.value,
            "max_internal_similarity": self.max_internal_similarity,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuditSettings":
        return cls(
            data["bin_width"],
            data["network_threshold"],
            data["significance_threshold"],
            MultiTokenPolicy(data["multi_token_policy"]),
            data["max_internal_similarity"],
        )


@dataclass(frozen=True)
class LanguageAudit:
    language: str
    pair: TargetPair
    records: tuple[BiasRecord, ...]
    histogram: Histogram
    direction: DirectionTable

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "pair": self.pair.to_dict(),
            "records": [r.to_dict() for r in self.records],
            "histogram": self.histogram.to_dict(),
            "direction": self.direction.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LanguageAudit":
        return cls(
            data["language"],
            TargetPair.from_dict(data["pair"]),
            tuple(BiasRecord.from_dict(r) for r in data["records"]),
            Histogram.from_dict(data["histogram"]),
            DirectionTable.from_dict(data["direction"]),
        )


@dataclass(frozen=True)
class SkippedWords:
    """Words excluded from some or all features, retained for auditability."""

    src_oov: tuple[str, ...] = ()
    dst_oov: tuple[str, ...] = ()
    untranslated: tuple[str, ...] = ()
    multi_token: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "src_oov": list(self.src_oov),
            "dst_oov": list(self.dst_oov),
            "untranslated": list(self.untranslated),
            "multi_token": list(self.multi_token),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SkippedWords":
        return cls(
            tuple(data["src_oov"]),
            tuple(data["dst_oov"]),
            tuple(data["untranslated"]),
            tuple(data["multi_token"]),
        )


@dataclass(frozen=True)
class AuditResult:
    """Everything one audit run produced, ready for deterministic rendering."""

    settings: AuditSettings
    src: LanguageAudit
    dst: LanguageAudit
    shift_matrix: ShiftMatrix | None
    shift_matrix_skipped: str | None
    sign_summary: SignSummary
    changes: tuple[ChangeRecord, ...]
    skipped: SkippedWords
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "settings": self.settings.to_dict(),
            "src": self.src.to_dict(),
            "dst": self.dst.to_dict(),
            "shift_matrix": self.shift_matrix.to_dict() if self.shift_matrix else None,
            "shift_matrix_skipped": self.shift_matrix_skipped,
            "sign_summary": self.sign_summary.to_dict(),
            "changes": [c.to_dict() for c in self.changes],
            "skipped": self.skipped.to_dict(),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuditResult":
        return cls(
            AuditSettings.from_dict(data["settings"]),
            LanguageAudit.from_dict(data["src"]),
            LanguageAudit.from_dict(data["dst"]),
            ShiftMatrix.from_dict(data["shift_matrix"]) if data["shift_matrix"] else None,
            data["shift_matrix_skipped"],
            SignSummary.from_dict(data["sign_summary"]),
            tuple(ChangeRecord.from_dict(c) for c in data["changes"]),
            SkippedWords.from_dict(data["skipped"]),
            tuple(data["warnings"]),
        )


def _resolve_vector(
    table: EmbeddingTable, surface: str, policy: MultiTokenPolicy
) -> tuple[Vector | None, str | None]:
    """Vector for a surface form, honoring the multi-token policy.

    Returns (vector, skip_reason); exactly one is None.
    """
    tokens = surface.split(" ")
    if len(tokens) == 1:
        vec = table.lookup(surface)
        return (vec, None) if vec is not None else (None, "oov")
    if policy is MultiTokenPolicy.REJECT:
        return None, "multi_token"
    if policy is MultiTokenPolicy.HEAD:
        vec = table.lookup(tokens[0])
        return (vec, None) if vec is not None else (None, "oov")
    parts = [table.lookup(tok) for tok in tokens]
    if any(p is None for p in parts):
        return None, "oov"
    mean = np.mean(np.stack(parts), axis=0)
    if not mean.any():
        return None, "oov"
    mean.setflags(write=False)
    return mean, None


def audit(
    src_table: EmbeddingTable,
    dst_table: EmbeddingTable,
    lexicon: BilingualLexicon,
    src_pair: TargetPair,
    dst_pair: TargetPair,
    settings: AuditSettings | None = None,
) -> AuditResult:
    """Run the full bilingual bias audit and collect every derived table.

    Words out of vocabulary in either table are excluded from cross-language
    features but keep their per-language records where possible, and are
    listed in the result. Output is a pure function of the inputs; records
    are ordered lexicographically by word.
    """
    settings = settings or AuditSettings()
    src_x = src_table.vector(src_pair.x)
    src_y = src_table.vector(src_pair.y)
    dst_x = dst_table.vector(dst_pair.x)
    dst_y = dst_table.vector(dst_pair.y)

    src_records: list[BiasRecord] = []
    dst_records: list[BiasRecord] = []
    changes: list[ChangeRecord] = []
    src_oov: list[str] = []
    dst_oov: list[str] = []
    untranslated: list[str] = []
    multi_token: list[str] = []

    for entry in lexicon.entries:
        word = entry.source.surface
        src_vec = src_table.lookup(word)
        src_record = None
        if src_vec is None:
            src_oov.append(word)
        else:
            src_record = BiasRecord.from_similarities(
                word, cosine(src_vec, src_x), cosine(src_vec, src_y)
            )
            src_records.append(src_record)

        if entry.target is None:
            untranslated.append(word)
            continue
        target_surface = entry.target.surface
        dst_vec, skip = _resolve_vector(dst_table, target_surface, settings.multi_token_policy)
        if dst_vec is None:
            if skip == "multi_token":
                multi_token.append(target_surface)
            else:
                dst_oov.append(target_surface)
            continue
        dst_record = BiasRecord.from_similarities(
            target_surface, cosine(dst_vec, dst_x), cosine(dst_vec, dst_y)
        )
        dst_records.append(dst_record)
        if src_record is not None:
            changes.append(
                ChangeRecord(
                    word,
                    target_surface,
                    post_translation_change(dst_record.sim_x, src_record.sim_x),
                    post_translation_change(dst_record.sim_y, src_record.sim_y),
                )
            )

    if not src_records or not dst_records:
        raise AuditDataError("empty post-filter word set")

    src_records.sort(key=lambda r: r.word)
    dst_records.sort(key=lambda r: r.word)

    shift_matrix: ShiftMatrix | None
    shift_skipped: str | None
    try:
        shift_matrix = gender_shift_matrix(lexicon)
        shift_skipped = None
    except AuditDataError as exc:
        shift_matrix = None
        shift_skipped = str(exc)

    audit_warnings: list[str] = []
    for pair in (src_pair, dst_pair):
        if pair.internal_similarity > settings.max_internal_similarity:
            audit_warnings.append(
                f"internal similarity of ({pair.x}, {pair.y}) is "
                f"{pair.internal_similarity:.4f}, above {settings.max_internal_similarity}"
            )
    if src_oov:
        audit_warnings.append(f"{len(src_oov)} source word(s) out of vocabulary")
    if dst_oov:
        audit_warnings.append(f"{len(dst_oov)} target word(s) out of vocabulary")
    if untranslated:
        audit_warnings.append(f"{len(untranslated)} entr(ies) without translation")
    if multi_token:
        audit_warnings.append(
            f"{len(multi_token)} multi-token translation(s) rejected by policy"
        )
    if shift_skipped:
        audit_warnings.append(f"gender shift matrix skipped: {shift_skipped}")

    return AuditResult(
        settings=settings,
        src=LanguageAudit(
            src_pair.language,
            src_pair,
            tuple(src_records),
            bin_records(src_records, settings.bin_width),
            partition_direction(src_records, settings.bin_width),
        ),
        dst=LanguageAudit(
            dst_pair.language,
            dst_pair,
            tuple(dst_records),
            bin_records(dst_records, settings.bin_width),
            partition_direction(dst_records, settings.bin_width),
        ),
        shift_matrix=shift_matrix,
        shift_matrix_skipped=shift_skipped,
        sign_summary=change_sign_summary(changes),
        changes=tuple(changes),
        skipped=SkippedWords(
            tuple(sorted(set(src_oov))),
            tuple(sorted(set(dst_oov))),
            tuple(sorted(set(untranslated))),
            tuple(sorted(set(multi_token))),
        ),
        warnings=tuple(audit_warnings),
    )
