import itertools

import numpy as np
import pytest

from grasspack.errors import InvalidM, InvalidRange, ShapeMismatch, SizeLimit, ZeroColumn
from grasspack.grassmann import validate_stiefel
from grasspack.schubert import (
    PairPattern,
    SparsityPattern,
    count_patterns,
    enumerate_patterns,
    matching_patterns,
    pair_codeword,
    pattern_to_codeword,
)


def brute_force_patterns(t, m, s):
    """Independent oracle: enumerate support families as frozensets."""
    found = set()
    for rows in itertools.combinations(range(1, t + 1), s):
        for labels in itertools.product(range(m), repeat=s):
            if len(set(labels)) != m:
                continue
            blocks = [frozenset(r for r, l in zip(rows, labels) if l == b) for b in range(m)]
            found.add(frozenset(blocks))
    return found


class TestCountPatterns:
    @pytest.mark.parametrize("dims,expected", [((4, 2, 2), 6), ((4, 2, 4), 7), ((5, 3, 3), 10)])
    def test_known_values(self, dims, expected):
        assert count_patterns(*dims) == expected
        assert len(brute_force_patterns(*dims)) == expected

    def test_matches_brute_force_small(self):
        for t in range(2, 6):
            for m in range(1, t):
                for s in range(m, t + 1):
                    assert count_patterns(t, m, s) == len(brute_force_patterns(t, m, s))

    def test_s_equals_m_reduces_to_binomial(self):
        import math

        assert count_patterns(5, 3, 3) == math.comb(5, 3)

    def test_invalid_range(self):
        with pytest.raises(InvalidRange):
            count_patterns(4, 4, 4)
        with pytest.raises(InvalidRange):
            count_patterns(4, 2, 1)
        with pytest.raises(InvalidRange):
            count_patterns(4, 2, 5)


class TestEnumeratePatterns:
    def test_three_singleton_patterns(self):
        pats = enumerate_patterns(3, 2, 2)
        assert [p.supports for p in pats] == [((1,), (2,)), ((1,), (3,)), ((2,), (3,))]

    def test_lexicographic_head(self):
        pats = enumerate_patterns(4, 2, 4)
        assert len(pats) == 7
        assert pats[0].supports == ((1,), (2, 3, 4))

    def test_lengths_match_counts(self):
        for t in range(2, 7):
            for m in range(1, t):
                for s in range(m, t + 1):
                    assert len(enumerate_patterns(t, m, s)) == count_patterns(t, m, s)

    def test_matches_brute_force_sets(self):
        pats = enumerate_patterns(5, 2, 4)
        got = {frozenset(frozenset(sup) for sup in p.supports) for p in pats}
        assert got == brute_force_patterns(5, 2, 4)

    def test_size_limit(self):
        with pytest.raises(SizeLimit):
            enumerate_patterns(6, 3, 6, cap=10)


class TestMatchingPatterns:
    def test_m2_all_three(self):
        got = {p.pairs for p in matching_patterns(2)}
        assert got == {((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))}

    def test_m3_covers_k6_once(self):
        pats = matching_patterns(3)
        assert len(pats) == 5
        all_pairs = [pair for p in pats for pair in p.pairs]
        assert len(all_pairs) == len(set(all_pairs)) == 15

    def test_m4_perfect_matchings(self):
        for p in matching_patterns(4):
            seen = sorted(r for pair in p.pairs for r in pair)
            assert seen == list(range(1, 9))

    def test_one_factorization_up_to_8(self):
        for m in range(2, 9):
            pats = matching_patterns(m)
            assert len(pats) == 2 * m - 1
            all_pairs = [pair for p in pats for pair in p.pairs]
            assert len(set(all_pairs)) == len(all_pairs) == m * (2 * m - 1)

    def test_invalid_m(self):
        with pytest.raises(InvalidM):
            matching_patterns(1)


class TestPatternTypes:
    def test_echelon_normalization(self):
        p = SparsityPattern(T=4, M=2, supports=((2, 4), (1, 3)))
        assert p.supports == ((1, 3), (2, 4))

    def test_overlapping_supports_rejected(self):
        with pytest.raises(ShapeMismatch):
            SparsityPattern(T=4, M=2, supports=((1, 2), (2, 3)))

    def test_pair_pattern_must_cover(self):
        with pytest.raises(ShapeMismatch):
            PairPattern(M=2, pairs=((1, 2), (3, 3)))


class TestPatternToCodeword:
    def test_reproduces_reference_entry(self):
        # equal-amplitude pattern {(1,3),(2,4)} with second-entry phases (-pi/2, 0)
        w = pair_codeword(PairPattern(2, ((1, 3), (2, 4))), [-np.pi / 2, 0.0])
        expected = np.array(
            [[1, 0], [0, 1], [-1j, 0], [0, 1]], dtype=complex
        ) / np.sqrt(2)
        np.testing.assert_allclose(w.matrix, expected, atol=1e-15)

    def test_singleton_columns_pin_phase(self):
        p = SparsityPattern(T=4, M=2, supports=((1,), (2,)))
        w = pattern_to_codeword(p, phases=[2.3, -1.1])
        np.testing.assert_array_equal(w.matrix, np.eye(4, dtype=complex)[:, :2])

    def test_structural_orthogonality(self):
        rng = np.random.default_rng(11)
        for pat in enumerate_patterns(6, 3, 5):
            phases = rng.uniform(-np.pi, np.pi, pat.size)
            w = pattern_to_codeword(pat, phases)
            gram = w.matrix.conj().T @ w.matrix
            assert np.all(gram[~np.eye(3, dtype=bool)] == 0)  # exact zeros off-diagonal
            assert validate_stiefel(w, tol=1e-12)

    def test_custom_amplitudes(self):
        p = SparsityPattern(T=3, M=2, supports=((1, 2), (3,)))
        w = pattern_to_codeword(p, phases=[0, np.pi / 2, 0], amplitudes=[[3, 4], [2]])
        np.testing.assert_allclose(np.abs(w.matrix[:, 0]), [0.6, 0.8, 0.0], atol=1e-15)

    def test_phase_count_checked(self):
        p = SparsityPattern(T=4, M=2, supports=((1, 2), (3, 4)))
        with pytest.raises(ShapeMismatch):
            pattern_to_codeword(p, phases=[0.0, 1.0, 2.0])

    def test_zero_column_rejected(self):
        p = SparsityPattern(T=4, M=2, supports=((1, 2), (3, 4)))
        with pytest.raises(ZeroColumn):
            pattern_to_codeword(p, phases=[0, 0, 0, 0], amplitudes=[[0, 0], [1, 1]])
