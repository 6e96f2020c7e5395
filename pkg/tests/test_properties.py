from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simbias import (
    BiasRecord,
    BilingualLexicon,
    EmbeddingTable,
    GenderTag,
    LexiconEntry,
    WordEntry,
    bias_direction,
    bias_intensity,
    bin_records,
    cosine,
    dedupe_and_canonicalize,
    gender_shift_matrix,
    normalize,
    parse_embedding_file,
    parse_lexicon,
    partition_direction,
    serialize_embedding_table,
    serialize_lexicon,
)

finite_sims = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)

vector_dims = st.integers(min_value=2, max_value=20)


@st.composite
def nonzero_vector_pairs(draw):
    dim = draw(vector_dims)
    elements = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False)
    make = st.lists(elements, min_size=dim, max_size=dim).filter(
        lambda v: any(abs(c) > 1e-6 for c in v)
    )
    return np.array(draw(make)), np.array(draw(make))


@st.composite
def record_lists(draw):
    sims = draw(st.lists(st.tuples(finite_sims, finite_sims), min_size=0, max_size=60))
    return [
        BiasRecord.from_similarities(f"w{i:03d}", x, y) for i, (x, y) in enumerate(sims)
    ]


class TestFeatureProperties:
    @given(finite_sims, finite_sims)
    def test_intensity_is_absolute_direction(self, sim_x, sim_y):
        assert bias_intensity(sim_x, sim_y) == abs(bias_direction(sim_x, sim_y))

    @given(finite_sims, finite_sims)
    def test_swap_antisymmetry(self, sim_x, sim_y):
        assert bias_direction(sim_y, sim_x) == -bias_direction(sim_x, sim_y)
        assert bias_intensity(sim_y, sim_x) == bias_intensity(sim_x, sim_y)

    @given(record_lists())
    def test_record_invariants(self, records):
        for record in records:
            assert record.intensity == abs(record.direction)
            assert record.direction == record.sim_x - record.sim_y


class TestCosineProperties:
    @given(nonzero_vector_pairs())
    @settings(max_examples=150)
    def test_symmetry_and_bound(self, pair):
        x, y = pair
        value = cosine(x, y)
        assert value == cosine(y, x)
        assert abs(value) <= 1.0 + 1e-9

    @given(nonzero_vector_pairs(), st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=150)
    def test_positive_scale_invariance(self, pair, scale):
        x, y = pair
        assert cosine(scale * x, y) == pytest.approx(cosine(x, y), abs=1e-12)

    @given(nonzero_vector_pairs())
    @settings(max_examples=100)
    def test_normalized_vector_has_unit_norm(self, pair):
        x, _ = pair
        assert np.linalg.norm(normalize(x)) == pytest.approx(1.0, abs=1e-6)


class TestBinningProperties:
    @given(record_lists(), st.sampled_from([0.05, 0.1, 0.13, 0.2, 0.25, 0.5, 1.0]))
    def test_histogram_conservation(self, records, width):
        hist = bin_records(records, width)
        assert sum(hist.counts()) == hist.total == len(records)

    @given(record_lists(), st.sampled_from([0.05, 0.1, 0.25, 0.5]))
    def test_partition_conservation_and_agreement(self, records, width):
        table = partition_direction(records, width)
        assert table.female_total + table.male_total + table.balanced == len(records)
        hist = bin_records(records, width)
        assert table.bin_totals() == hist.counts()

    @given(record_lists())
    def test_bins_are_contiguous(self, records):
        hist = bin_records(records, 0.1)
        for previous, current in zip(hist.bins, hist.bins[1:]):
            assert current.lower == previous.upper


class TestScaleInvariance:
    @given(st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=40)
    def test_scaling_a_table_leaves_records_unchanged(self, scale):
        rng = np.random.default_rng(5)
        words = {f"w{i}": rng.normal(size=8) for i in range(10)}
        words["she"] = rng.normal(size=8)
        words["he"] = rng.normal(size=8)
        table = EmbeddingTable("en", 8, words)
        scaled = EmbeddingTable("en", 8, {w: scale * v for w, v in words.items()})
        for word in words:
            base = BiasRecord.from_similarities(
                word,
                cosine(table.vector(word), table.vector("she")),
                cosine(table.vector(word), table.vector("he")),
            )
            moved = BiasRecord.from_similarities(
                word,
                cosine(scaled.vector(word), scaled.vector("she")),
                cosine(scaled.vector(word), scaled.vector("he")),
            )
            assert moved.sim_x == pytest.approx(base.sim_x, abs=1e-12)
            assert moved.sim_y == pytest.approx(base.sim_y, abs=1e-12)
            assert moved.direction == pytest.approx(base.direction, abs=1e-12)


genders = st.sampled_from([GenderTag.NEUTRAL, GenderTag.MASCULINE, GenderTag.FEMININE])


@st.composite
def annotated_lexicons(draw):
    n = draw(st.integers(min_value=1, max_value=40))
    entries = []
    for i in range(n):
        pre = draw(genders)
        post = draw(genders)
        entries.append(
            LexiconEntry(
                WordEntry(f"src{i:03d}", "en", pre),
                WordEntry(f"dst{i:03d}", "it", post),
            )
        )
    return BilingualLexicon("en", "it", tuple(entries))


class TestShiftMatrixProperties:
    @given(annotated_lexicons())
    def test_row_sums_equal_pre_gender_counts(self, lexicon):
        matrix = gender_shift_matrix(lexicon)
        pre_counts = {g: 0 for g in (GenderTag.NEUTRAL, GenderTag.MASCULINE, GenderTag.FEMININE)}
        for entry in lexicon.entries:
            pre_counts[entry.source.gender] += 1
        assert matrix.row_totals() == pre_counts
        assert matrix.grand_total == len(lexicon)

    @given(annotated_lexicons())
    def test_permutation_invariance(self, lexicon):
        reversed_lexicon = BilingualLexicon("en", "it", lexicon.entries[::-1])
        assert gender_shift_matrix(reversed_lexicon) == gender_shift_matrix(lexicon)


words_strategy = st.lists(
    st.text(
        alphabet=st.characters(whitelist_categories=["Ll", "Lu"], max_codepoint=0x2FF),
        min_size=1,
        max_size=8,
    ),
    max_size=40,
)


class TestDedupeProperties:
    @given(words_strategy)
    def test_idempotence(self, words):
        once, _ = dedupe_and_canonicalize(words)
        twice, removed = dedupe_and_canonicalize(once)
        assert twice == once
        assert removed == 0

    @given(words_strategy)
    def test_matches_set_oracle(self, words):
        from .oracles import set_dedupe

        assert dedupe_and_canonicalize(words) == set_dedupe(words)


class TestRoundTripProperties:
    @given(
        st.integers(min_value=1, max_value=25),
        st.integers(min_value=1, max_value=12),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=40)
    def test_embedding_table_round_trip(self, n_words, dim, rng):
        entries = {}
        for i in range(n_words):
            vec = [rng.uniform(-5, 5) for _ in range(dim)]
            if not any(vec):
                vec[0] = 1.0
            entries[f"w{i:02d}"] = np.array(vec)
        table = EmbeddingTable("en", dim, entries)
        assert parse_embedding_file(serialize_embedding_table(table), "en") == table

    @given(annotated_lexicons())
    @settings(max_examples=40)
    def test_lexicon_parse_serialize_stability(self, lexicon):
        parsed = parse_lexicon(serialize_lexicon(lexicon)).lexicon
        assert parsed == lexicon
        assert serialize_lexicon(parsed) == serialize_lexicon(lexicon)
