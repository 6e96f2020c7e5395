"""Deterministic rendering of audit results: json, csv bundle, markdown.

Numbers print with fixed 6-decimal notation in csv and markdown for readable
tables; json keeps full float precision and round-trips losslessly under a
versioned schema.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import AuditDataError
from .metrics import (
    GENDER_AXES,
    AuditResult,
    BiasRecord,
    DirectionTable,
    Histogram,
    LanguageAudit,
    ShiftMatrix,
    SignSummary,
)

SCHEMA_VERSION = 1

RENDER_FORMATS = ("json", "csv-bundle", "markdown")


@dataclass(frozen=True)
class ScatterRow:
    """One scatter-plot point: x is the male-anchor similarity, y the female."""

    word: str
    sim_y: float
    sim_x: float
    deviation: float

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "sim_y": self.sim_y,
            "sim_x": self.sim_x,
            "deviation": self.deviation,
        }


def scatter_data(records: Sequence[BiasRecord]) -> list[ScatterRow]:
    """Project records onto scatter-plot axes; deviation from the diagonal is
    exactly the signed direction."""
    return [
        ScatterRow(r.word, r.sim_y, r.sim_x, r.direction)
        for r in sorted(records, key=lambda r: r.word)
    ]


def _fmt(value: float) -> str:
    if value == 0:
        value = 0.0  # avoid the '-0.000000' artifact
    return f"{value:.6f}"


def _fmt_pct(value: float) -> str:
    return f"{value:.2f}"


def render_json(result: AuditResult) -> bytes:
    payload = {"schema_version": SCHEMA_VERSION, "audit": result.to_dict()}
    return (json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n").encode(
        "utf-8"
    )


def parse_audit_json(data: bytes | str) -> AuditResult:
    """Inverse of :func:`render_json`."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    payload = json.loads(text)
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise AuditDataError(f"unsupported schema_version: {version!r}")
    return AuditResult.from_dict(payload["audit"])


def _csv_bytes(header: Sequence[str], rows: Sequence[Sequence[object]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


def _records_csv(records: Sequence[BiasRecord], significance: float) -> bytes:
    rows = [
        [
            r.word,
            _fmt(r.sim_x),
            _fmt(r.sim_y),
            _fmt(r.intensity),
            _fmt(r.direction),
            "yes" if r.intensity > significance else "no",
        ]
        for r in records
    ]
    return _csv_bytes(
        ["word", "sim_x", "sim_y", "intensity", "direction", "significant"], rows
    )


def _histogram_csv(histogram: Histogram) -> bytes:
    rows = [
        [i + 1, _fmt(b.lower), _fmt(b.upper), b.count]
        for i, b in enumerate(histogram.bins)
    ]
    return _csv_bytes(["bin", "lower", "upper", "count"], rows)


def _direction_csv(direction: DirectionTable) -> bytes:
    totals = direction.bin_totals()
    rows = []
    for i, b in enumerate(direction.bins):
        rows.append(
            [
                i + 1,
                _fmt(b.lower),
                _fmt(b.upper),
                b.female,
                b.male,
                direction.balanced if i == 0 else 0,
                totals[i],
            ]
        )
    return _csv_bytes(
        ["bin", "lower", "upper", "female", "male", "balanced", "total"], rows
    )


def _shift_csv(matrix: ShiftMatrix) -> bytes:
    rows = [
        [c.pre.value, c.post.value, c.count, _fmt_pct(c.percent), c.example or ""]
        for c in matrix.cells
    ]
    return _csv_bytes(["pre_gender", "post_gender", "count", "percent", "example"], rows)


def _signs_csv(summary: SignSummary) -> bytes:
    rows = [
        [
            name,
            channel.positive,
            channel.negative,
            channel.zero,
            _fmt_pct(channel.positive_pct),
            _fmt_pct(channel.negative_pct),
            _fmt_pct(channel.zero_pct),
        ]
        for name, channel in (("x", summary.x), ("y", summary.y))
    ]
    return _csv_bytes(
        ["channel", "positive", "negative", "zero", "positive_pct", "negative_pct", "zero_pct"],
        rows,
    )


def _scatter_csv(records: Sequence[BiasRecord]) -> bytes:
    rows = [
        [row.word, _fmt(row.sim_y), _fmt(row.sim_x), _fmt(row.deviation)]
        for row in scatter_data(records)
    ]
    return _csv_bytes(["word", "sim_male", "sim_female", "deviation"], rows)


def _changes_csv(result: AuditResult) -> bytes:
    rows = [
        [c.source, c.target, _fmt(c.x_change), _fmt(c.y_change)] for c in result.changes
    ]
    return _csv_bytes(["source", "target", "x_change", "y_change"], rows)


def _skipped_csv(result: AuditResult) -> bytes:
    rows = []
    for category, words in (
        ("src_oov", result.skipped.src_oov),
        ("dst_oov", result.skipped.dst_oov),
        ("untranslated", result.skipped.untranslated),
        ("multi_token", result.skipped.multi_token),
    ):
        rows.extend([category, word] for word in words)
    return _csv_bytes(["category", "word"], rows)


def render_csv_bundle(result: AuditResult) -> dict[str, bytes]:
    significance = result.settings.significance_threshold
    return {
        "records_src.csv": _records_csv(result.src.records, significance),
        "records_dst.csv": _records_csv(result.dst.records, significance),
        "histogram_src.csv": _histogram_csv(result.src.histogram),
        "histogram_dst.csv": _histogram_csv(result.dst.histogram),
        "direction_src.csv": _direction_csv(result.src.direction),
        "direction_dst.csv": _direction_csv(result.dst.direction),
        "shift_matrix.csv": _shift_csv(result.shift_matrix)
        if result.shift_matrix
        else _csv_bytes(["pre_gender", "post_gender", "count", "percent", "example"], []),
        "sign_summary.csv": _signs_csv(result.sign_summary),
        "scatter_src.csv": _scatter_csv(result.src.records),
        "scatter_dst.csv": _scatter_csv(result.dst.records),
        "changes.csv": _changes_csv(result),
        "skipped.csv": _skipped_csv(result),
    }


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def _md_language_section(side: LanguageAudit, significance: float) -> list[str]:
    lines = [f"## {side.language}: similarity to ({side.pair.x}, {side.pair.y})", ""]
    lines.append(
        f"Internal similarity of the target pair: {_fmt(side.pair.internal_similarity)}."
    )
    lines.append("")
    record_rows = []
    for r in side.records:
        word = f"**{r.word}**" if r.intensity > significance else r.word
        record_rows.append([word, _fmt(r.sim_x), _fmt(r.sim_y), _fmt(r.direction)])
    lines.extend(
        _md_table(
            ["word", f"sim({side.pair.x})", f"sim({side.pair.y})", "direction"], record_rows
        )
    )
    lines.append("")
    lines.append(f"### {side.language}: intensity bins")
    lines.append("")
    hist_rows = [
        [str(i + 1), f"{_fmt(b.lower)} - {_fmt(b.upper)}", str(b.count)]
        for i, b in enumerate(side.histogram.bins)
    ]
    lines.extend(_md_table(["bin", "range", "count"], hist_rows))
    lines.append("")
    lines.append(f"### {side.language}: direction partition")
    lines.append("")
    totals = side.direction.bin_totals()
    dir_rows = [
        [
            str(i + 1),
            f"{_fmt(b.lower)} - {_fmt(b.upper)}",
            str(b.female),
            str(b.male),
            str(totals[i]),
        ]
        for i, b in enumerate(side.direction.bins)
    ]
    dir_rows.append(
        [
            "total",
            "",
            str(side.direction.female_total),
            str(side.direction.male_total),
            str(side.direction.total),
        ]
    )
    lines.extend(_md_table(["bin", "range", "female", "male", "total"], dir_rows))
    if side.direction.balanced:
        lines.append("")
        lines.append(
            f"Balanced words (direction exactly 0), counted toward neither gender: "
            f"{side.direction.balanced}."
        )
    lines.append("")
    return lines


def render_markdown(result: AuditResult) -> bytes:
    lines: list[str] = ["# Gender bias audit", ""]

    lines.append("## Configuration")
    lines.append("")
    settings = result.settings
    lines.extend(
        _md_table(
            ["setting", "value"],
            [
                ["bin_width", repr(settings.bin_width)],
                ["network_threshold", repr(settings.network_threshold)],
                ["significance_threshold", repr(settings.significance_threshold)],
                ["multi_token_policy", settings.multi_token_policy.value],
                ["max_internal_similarity", repr(settings.max_internal_similarity)],
            ],
        )
    )
    lines.append("")
    lines.append(
        "Sign convention: direction = sim(female anchor) - sim(male anchor); "
        "positive values are female-directed. Words whose gap exceeds the "
        "significance threshold are shown in bold."
    )
    lines.append("")

    lines.extend(_md_language_section(result.src, settings.significance_threshold))
    lines.extend(_md_language_section(result.dst, settings.significance_threshold))

    lines.append("## Post-translation gender shifts")
    lines.append("")
    if result.shift_matrix:
        matrix = result.shift_matrix
        shift_rows = [
            [
                c.pre.value,
                c.post.value,
                str(c.count),
                _fmt_pct(c.percent),
                c.example or "",
            ]
            for c in matrix.cells
        ]
        row_totals = matrix.row_totals()
        shift_rows.append(["total", "", str(matrix.grand_total), "", ""])
        lines.extend(
            _md_table(["pre-gender", "post-gender", "count", "%", "example"], shift_rows)
        )
        lines.append("")
        lines.extend(
            _md_table(
                ["pre-gender", "total"],
                [[pre.value, str(row_totals[pre])] for pre in GENDER_AXES],
            )
        )
    else:
        lines.append(f"Skipped: {result.shift_matrix_skipped}")
    lines.append("")

    lines.append("## Post-translation similarity changes")
    lines.append("")
    summary = result.sign_summary
    lines.extend(
        _md_table(
            ["channel", "positive", "negative", "zero", "+%", "-%"],
            [
                [
                    f"{result.dst.pair.x} - {result.src.pair.x}",
                    str(summary.x.positive),
                    str(summary.x.negative),
                    str(summary.x.zero),
                    _fmt_pct(summary.x.positive_pct),
                    _fmt_pct(summary.x.negative_pct),
                ],
                [
                    f"{result.dst.pair.y} - {result.src.pair.y}",
                    str(summary.y.positive),
                    str(summary.y.negative),
                    str(summary.y.zero),
                    _fmt_pct(summary.y.positive_pct),
                    _fmt_pct(summary.y.negative_pct),
                ],
            ],
        )
    )
    lines.append("")

    skipped = result.skipped
    if any((skipped.src_oov, skipped.dst_oov, skipped.untranslated, skipped.multi_token)):
        lines.append("## Skipped words")
        lines.append("")
        for label, words in (
            ("Source out-of-vocabulary", skipped.src_oov),
            ("Target out-of-vocabulary", skipped.dst_oov),
            ("Untranslated", skipped.untranslated),
            ("Multi-token (rejected by policy)", skipped.multi_token),
        ):
            if words:
                lines.append(f"- {label}: {', '.join(words)}")
        lines.append("")

    if result.warnings:
        lines.append("## Warnings")
        lines.append("")
        lines.extend(f"- {w}" for w in result.warnings)
        lines.append("")

    lines.append(
        "Note: percentages are computed by half-up rounding to 2 decimals; "
        "they may differ by up to 0.01 from figures produced by truncation."
    )
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def render(result: AuditResult, format: str) -> Mapping[str, bytes]:
    """Render to named byte streams; identical results give identical bytes."""
    if format == "json":
        return {"audit.json": render_json(result)}
    if format == "csv-bundle":
        return render_csv_bundle(result)
    if format == "markdown":
        return {"audit.md": render_markdown(result)}
    raise AuditDataError(f"unknown render format: {format!r}")
