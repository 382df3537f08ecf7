import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexnav.textkit import (
    EMPTY_VECTOR,
    INFINITE,
    Lexicon,
    TermVector,
    Weighting,
    cosine_similarity,
    distance_from_similarity,
    lexical_distance,
    load_stopwords,
    term_vector,
    tokenize,
)

weights = st.dictionaries(
    st.integers(0, 30),
    st.floats(0.0, 1e3, allow_nan=False, allow_infinity=False),
    max_size=12,
)
vectors = weights.map(TermVector.from_weights)
nonzero_vectors = vectors.filter(lambda v: v.norm > 0)


def _dense_cosine(a: TermVector, b: TermVector) -> float:
    # independent oracle: dense arrays, plain loops
    size = 1 + max([*a.entries, *b.entries, 0])
    x = [a.entries.get(i, 0.0) for i in range(size)]
    y = [b.entries.get(i, 0.0) for i in range(size)]
    nx = math.sqrt(sum(v * v for v in x))
    ny = math.sqrt(sum(v * v for v in y))
    if nx == 0 or ny == 0:
        return 0.0
    return sum(p * q for p, q in zip(x, y)) / (nx * ny)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_and_case(self):
        assert tokenize("Web crawler, Web!") == ["web", "crawler", "web"]

    def test_digits_stay_in_tokens(self):
        assert tokenize("a1-b2") == ["a1", "b2"]

    def test_underscore_separates(self):
        assert tokenize("foo_bar") == ["foo", "bar"]

    def test_stopwords(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("the\nand\n\n", encoding="utf-8")
        stop = load_stopwords(path)
        assert stop == frozenset({"the", "and"})
        assert tokenize("The cat and the hat", stop) == ["cat", "hat"]


class TestTermVector:
    def test_empty_tokens(self):
        lex = Lexicon.build([["a"]])
        for scheme in Weighting:
            v = term_vector([], lex, scheme)
            assert v.entries == {} and v.norm == 0

    def test_raw_counts(self):
        lex = Lexicon.build([["a", "b"]])
        v = term_vector(["a", "a", "b"], lex, Weighting.RAW_TF)
        assert dict(v.entries) == {lex.term_ids["a"]: 2.0, lex.term_ids["b"]: 1.0}
        assert v.norm == pytest.approx(math.sqrt(5), rel=1e-12)

    def test_tfidf_zero_weight_elided(self):
        lex = Lexicon({"a": 0}, [10], 10)
        assert term_vector(["a"], lex, Weighting.TFIDF).entries == {}

    def test_tfidf_weight(self):
        lex = Lexicon({"a": 0, "b": 1}, [1, 4], 8)
        v = term_vector(["a", "b", "b"], lex, Weighting.TFIDF)
        assert v.entries[0] == pytest.approx(math.log(8))
        assert v.entries[1] == pytest.approx(2 * math.log(2))

    def test_unknown_terms_dropped(self):
        lex = Lexicon.build([["a"]])
        assert term_vector(["zzz"], lex, Weighting.RAW_TF).entries == {}

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            TermVector.from_weights({0: -1.0})

    def test_lexicon_invariants(self):
        lex = Lexicon.build([["x", "y"], ["y"], []])
        assert sorted(lex.term_ids.values()) == [0, 1]
        assert lex.doc_freq[lex.term_ids["y"]] == 2
        assert lex.total_docs == 3
        with pytest.raises(ValueError):
            Lexicon({"a": 0}, [3], 2)
        with pytest.raises(ValueError):
            Lexicon({"a": 1}, [1], 2)

    @given(weights)
    def test_norm_matches_weights(self, w):
        v = TermVector.from_weights(w)
        assert all(x > 0 for x in v.entries.values())
        expected = math.sqrt(sum(x * x for x in w.values()))
        assert v.norm == pytest.approx(expected, rel=1e-12, abs=0)


class TestCosineAndDistance:
    def test_self_similarity(self):
        v = TermVector.from_weights({1: 2.0, 5: 0.5})
        assert cosine_similarity(v, v) == 1.0
        assert lexical_distance(v, v) == 0.0

    def test_disjoint(self):
        a = TermVector.from_weights({0: 1.0})
        b = TermVector.from_weights({1: 1.0})
        assert cosine_similarity(a, b) == 0.0
        assert lexical_distance(a, b) == INFINITE

    def test_half_overlap(self):
        a = TermVector.from_weights({0: 1.0, 1: 1.0})
        b = TermVector.from_weights({1: 1.0, 2: 1.0})
        assert cosine_similarity(a, b) == pytest.approx(0.5)
        assert lexical_distance(a, b) == pytest.approx(1.0)

    def test_empty_vector_is_orthogonal(self):
        v = TermVector.from_weights({0: 1.0})
        assert cosine_similarity(EMPTY_VECTOR, v) == 0.0
        assert lexical_distance(EMPTY_VECTOR, EMPTY_VECTOR) == INFINITE

    def test_distance_from_similarity(self):
        assert distance_from_similarity(1.0) == 0.0
        assert distance_from_similarity(0.5) == 1.0
        assert distance_from_similarity(0.0) == INFINITE

    @given(vectors, vectors)
    def test_matches_dense_oracle(self, a, b):
        assert cosine_similarity(a, b) == pytest.approx(min(1.0, _dense_cosine(a, b)), abs=1e-12)

    @given(vectors, vectors)
    def test_symmetry_is_exact(self, a, b):
        assert cosine_similarity(a, b) == cosine_similarity(b, a)
        assert lexical_distance(a, b) == lexical_distance(b, a)

    @given(vectors, vectors)
    def test_range(self, a, b):
        s = cosine_similarity(a, b)
        r = lexical_distance(a, b)
        assert 0.0 <= s <= 1.0
        assert r >= 0
        assert (r == INFINITE) == (s == 0)

    @given(nonzero_vectors)
    def test_identity(self, v):
        assert lexical_distance(v, v) == 0.0

    @given(nonzero_vectors, nonzero_vectors, st.floats(1e-3, 1e3))
    def test_scale_invariance(self, a, b, c):
        assert cosine_similarity(a.scaled(c), b) == pytest.approx(cosine_similarity(a, b), abs=1e-9)

    @settings(max_examples=200)
    @given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
    def test_distance_strictly_decreasing_in_similarity(self, s1, s2):
        if s1 < s2:
            assert distance_from_similarity(s1) > distance_from_similarity(s2)
