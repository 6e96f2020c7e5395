#!/usr/bin/env python3
"""Deterministic generator for the bundled audit fixtures.

Builds two small vector tables (en/it) and a gender-annotated lexicon whose
derived audit statistics land exactly on the calibration counts below:
intensity histograms, direction partitions, the gender-shift cross-tab, and
the post-translation sign tallies. Each word vector is a linear combination
of the two anchor vectors plus an orthogonal residual, which pins its
cosine to either anchor to the designed value.

Run from the repository root:

    python3 scripts/gen_fixtures.py

Output is written to fixtures/ and is byte-stable across runs. The script
verifies every calibration target with independent plain-Python arithmetic
before writing anything.
"""

from __future__ import annotations

import math
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# Anchor words and their designed internal similarity per language.
EN_ANCHORS = ("she", "he", 0.61)
IT_ANCHORS = ("lei", "lui", 0.85)

BIN_WIDTH = 0.1
BASE_LEVEL = 0.32  # mean anchor similarity every source word is centred on
SIGN_MARGIN = 0.04  # distance from zero designed into every similarity change
DIM = 5  # 2 anchor dims + 3 rotating residual dims

# (female-directed, male-directed) counts per intensity bin, per language.
EN_BIN_QUOTAS = {1: (67, 56), 2: (57, 38), 3: (71, 7), 4: (30, 0), 5: (6, 1)}
IT_BIN_QUOTAS = {1: (76, 123), 2: (52, 55), 3: (23, 4)}

# Gender-shift cells: (pre, post) -> (count, x_pos, x_neg, y_pos, y_neg)
# where x/y are the signs of the female/male anchor similarity changes.
CELLS = {
    ("neutral", "neutral"): (34, 30, 4, 34, 0),
    ("neutral", "masculine"): (91, 78, 13, 90, 1),
    ("neutral", "feminine"): (32, 28, 4, 32, 0),
    ("masculine", "neutral"): (6, 5, 1, 5, 1),
    ("masculine", "masculine"): (74, 66, 8, 68, 6),
    ("masculine", "feminine"): (7, 6, 1, 6, 1),
    ("feminine", "neutral"): (7, 4, 3, 7, 0),
    ("feminine", "masculine"): (13, 11, 2, 12, 1),
    ("feminine", "feminine"): (69, 57, 12, 67, 2),
}
CELL_ORDER = list(CELLS)

# One realistic word pair per cell; everything else is synthetic and
# z-prefixed so the realistic pair sorts first within its cell.
EXAMPLE_PAIRS = {
    ("neutral", "neutral"): ("adorable", "adorabile"),
    ("neutral", "masculine"): ("architect", "architetto"),
    ("neutral", "feminine"): ("homemaker", "casalinga"),
    ("masculine", "neutral"): ("grandson", "nipote"),
    ("masculine", "masculine"): ("actor", "attore"),
    ("masculine", "feminine"): ("beard", "barba"),
    ("feminine", "neutral"): ("spokeswoman", "portavoce"),
    ("feminine", "masculine"): ("maternal", "materno"),
    ("feminine", "feminine"): ("aunt", "zia"),
}

DUPLICATE_ROWS = 27  # extra pre-dedup rows appended to the lexicon file


def bin_mid(bin_no: int) -> float:
    return (bin_no - 0.5) * BIN_WIDTH


def expand_quotas(quotas: dict[int, tuple[int, int]]) -> list[tuple[int, str]]:
    """Flatten {bin: (female, male)} into an ordered multiset of attributes."""
    pool = []
    for bin_no in sorted(quotas):
        female, male = quotas[bin_no]
        pool.extend([(bin_no, "+")] * female)
        pool.extend([(bin_no, "-")] * male)
    return pool


def joint_sign_counts(count: int, x_pos: int, x_neg: int, y_pos: int, y_neg: int):
    """Split a cell's marginal sign counts into joint (x_sign, y_sign) counts."""
    assert x_pos + x_neg == count and y_pos + y_neg == count
    both_neg = min(x_neg, y_neg)
    xn_yp = x_neg - both_neg
    xp_yn = y_neg - both_neg
    both_pos = count - both_neg - xn_yp - xp_yn
    assert min(both_pos, both_neg, xn_yp, xp_yn) >= 0
    return both_pos, xp_yn, xn_yp, both_neg


def take(pool: list[tuple[int, str]], wanted: tuple[int, str]) -> tuple[int, str]:
    pool.remove(wanted)
    return wanted


def build_slots() -> list[dict]:
    """Assign every word its cell, sign combo, and per-language bin/direction."""
    en_pool = expand_quotas(EN_BIN_QUOTAS)
    it_pool = expand_quotas(IT_BIN_QUOTAS)
    slots = []
    for cell in CELL_ORDER:
        count, x_pos, x_neg, y_pos, y_neg = CELLS[cell]
        both_pos, xp_yn, xn_yp, both_neg = joint_sign_counts(
            count, x_pos, x_neg, y_pos, y_neg
        )
        combos = (
            [("+", "+")] * both_pos
            + [("+", "-")] * xp_yn
            + [("-", "+")] * xn_yp
            + [("-", "-")] * both_neg
        )
        for combo in combos:
            slots.append({"cell": cell, "combo": combo})

    # Mixed-sign combos constrain the two bias directions relative to each
    # other; satisfy them from the first bin of each language, where both
    # directions have quota to spare.
    for slot in slots:
        if slot["combo"] == ("-", "+"):  # needs d_it < d_en
            slot["en"] = take(en_pool, (1, "+"))
            slot["it"] = take(it_pool, (1, "-"))
        elif slot["combo"] == ("+", "-"):  # needs d_it > d_en
            slot["en"] = take(en_pool, (1, "-"))
            slot["it"] = take(it_pool, (1, "+"))
    for slot in slots:
        if "en" not in slot:
            slot["en"] = en_pool.pop(0)
            slot["it"] = it_pool.pop(0)
    assert not en_pool and not it_pool

    counters: dict[tuple[str, str], int] = {}
    for index, slot in enumerate(slots):
        cell = slot["cell"]
        rank = counters.get(cell, 0)
        counters[cell] = rank + 1
        if rank == 0:
            slot["source"], slot["target"] = EXAMPLE_PAIRS[cell]
        else:
            slot["source"] = f"zen{index:04d}"
            slot["target"] = f"zit{index:04d}"

        en_bin, en_sign = slot["en"]
        it_bin, it_sign = slot["it"]
        d_en = bin_mid(en_bin) * (1 if en_sign == "+" else -1)
        d_it = bin_mid(it_bin) * (1 if it_sign == "+" else -1)
        half_gap = (d_it - d_en) / 2.0
        x_sign, y_sign = slot["combo"]
        if (x_sign, y_sign) == ("+", "+"):
            delta = abs(half_gap) + SIGN_MARGIN
        elif (x_sign, y_sign) == ("-", "-"):
            delta = -abs(half_gap) - SIGN_MARGIN
        else:
            delta = 0.0  # x change = half_gap, y change = -half_gap
        u_en = BASE_LEVEL
        u_it = BASE_LEVEL + delta
        slot["sims_en"] = (u_en + d_en / 2.0, u_en - d_en / 2.0)
        slot["sims_it"] = (u_it + d_it / 2.0, u_it - d_it / 2.0)
    return slots


def word_vector(sim_x: float, sim_y: float, c: float, residual_dim: int) -> list[float]:
    """Unit vector with prescribed cosines to anchors X=e0 and Y=c*e0+s*e1."""
    denom = 1.0 - c * c
    alpha = (sim_x - sim_y * c) / denom
    beta = (sim_y - sim_x * c) / denom
    parallel_sq = alpha * alpha + beta * beta + 2.0 * alpha * beta * c
    assert parallel_sq < 0.999, (sim_x, sim_y, parallel_sq)
    gamma = math.sqrt(1.0 - parallel_sq)
    s = math.sqrt(denom)
    vec = [alpha + beta * c, beta * s, 0.0, 0.0, 0.0]
    vec[residual_dim] = gamma
    return vec


def vec_lines(anchor_pair: tuple[str, str, float], words: list[tuple[str, float, float]]):
    x_word, y_word, c = anchor_pair
    s = math.sqrt(1.0 - c * c)
    rows = [
        (x_word, [1.0, 0.0, 0.0, 0.0, 0.0]),
        (y_word, [c, s, 0.0, 0.0, 0.0]),
    ]
    for index, (word, sim_x, sim_y) in enumerate(words):
        rows.append((word, word_vector(sim_x, sim_y, c, 2 + index % 3)))
    lines = [f"{len(rows)} {DIM}"]
    lines.extend(word + " " + " ".join(repr(v) for v in vec) for word, vec in rows)
    return "\n".join(lines) + "\n", dict(rows)


# --- independent verification, deliberately plain arithmetic ---------------


def check_cosine(x: list[float], y: list[float]) -> float:
    dot = math.fsum(a * b for a, b in zip(x, y))
    nx = math.sqrt(math.fsum(a * a for a in x))
    ny = math.sqrt(math.fsum(b * b for b in y))
    return dot / (nx * ny)


def check_bin(value: float) -> int:
    return int(math.floor(value / BIN_WIDTH + 1e-9)) + 1


def verify(slots, en_vectors, it_vectors) -> None:
    she, he, c_en = EN_ANCHORS
    lei, lui, c_it = IT_ANCHORS
    assert abs(check_cosine(en_vectors[she], en_vectors[he]) - c_en) < 1e-12
    assert abs(check_cosine(it_vectors[lei], it_vectors[lui]) - c_it) < 1e-12

    en_hist: dict[int, int] = {}
    it_hist: dict[int, int] = {}
    en_dirs: dict[tuple[int, str], int] = {}
    it_dirs: dict[tuple[int, str], int] = {}
    cell_counts: dict[tuple[str, str], int] = {}
    cell_signs: dict[tuple[str, str], list[int]] = {}
    for slot in slots:
        a_en = check_cosine(en_vectors[slot["source"]], en_vectors[she])
        b_en = check_cosine(en_vectors[slot["source"]], en_vectors[he])
        a_it = check_cosine(it_vectors[slot["target"]], it_vectors[lei])
        b_it = check_cosine(it_vectors[slot["target"]], it_vectors[lui])
        d_en = a_en - b_en
        d_it = a_it - b_it
        en_bin = check_bin(abs(d_en))
        it_bin = check_bin(abs(d_it))
        en_hist[en_bin] = en_hist.get(en_bin, 0) + 1
        it_hist[it_bin] = it_hist.get(it_bin, 0) + 1
        en_dirs[(en_bin, "+" if d_en > 0 else "-")] = (
            en_dirs.get((en_bin, "+" if d_en > 0 else "-"), 0) + 1
        )
        it_dirs[(it_bin, "+" if d_it > 0 else "-")] = (
            it_dirs.get((it_bin, "+" if d_it > 0 else "-"), 0) + 1
        )
        cell = slot["cell"]
        cell_counts[cell] = cell_counts.get(cell, 0) + 1
        signs = cell_signs.setdefault(cell, [0, 0, 0, 0])
        x_change = a_it - a_en
        y_change = b_it - b_en
        assert x_change != 0 and y_change != 0
        signs[0 if x_change > 0 else 1] += 1
        signs[2 if y_change > 0 else 3] += 1

    for bin_no, (female, male) in EN_BIN_QUOTAS.items():
        assert en_hist[bin_no] == female + male, (bin_no, en_hist)
        assert en_dirs.get((bin_no, "+"), 0) == female
        assert en_dirs.get((bin_no, "-"), 0) == male
    for bin_no, (female, male) in IT_BIN_QUOTAS.items():
        assert it_hist[bin_no] == female + male, (bin_no, it_hist)
        assert it_dirs.get((bin_no, "+"), 0) == female
        assert it_dirs.get((bin_no, "-"), 0) == male
    for cell, (count, x_pos, x_neg, y_pos, y_neg) in CELLS.items():
        assert cell_counts[cell] == count, cell
        assert cell_signs[cell] == [x_pos, x_neg, y_pos, y_neg], cell


def main() -> None:
    slots = build_slots()
    assert len(slots) == 333

    en_text, en_vectors = vec_lines(
        EN_ANCHORS, [(s["source"], *s["sims_en"]) for s in slots]
    )
    it_text, it_vectors = vec_lines(
        IT_ANCHORS, [(s["target"], *s["sims_it"]) for s in slots]
    )
    verify(slots, en_vectors, it_vectors)

    rows = [
        "\t".join((s["source"], s["target"], s["cell"][0], s["cell"][1])) for s in slots
    ]
    rows.extend(rows[:DUPLICATE_ROWS])
    lexicon_text = "source\ttarget\tsource_gender\ttarget_gender\n" + "\n".join(rows) + "\n"

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "en.vec").write_text(en_text, encoding="utf-8", newline="")
    (OUT_DIR / "it.vec").write_text(it_text, encoding="utf-8", newline="")
    (OUT_DIR / "lexicon.tsv").write_text(lexicon_text, encoding="utf-8", newline="")
    print(f"wrote {OUT_DIR / 'en.vec'} ({len(en_vectors)} words)")
    print(f"wrote {OUT_DIR / 'it.vec'} ({len(it_vectors)} words)")
    print(f"wrote {OUT_DIR / 'lexicon.tsv'} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
