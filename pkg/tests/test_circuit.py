from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pvsynth.circuit import (
    GENERATORS,
    PHASE_DICTIONARY,
    R_MATRICES,
    TAILS,
    ExactUnitary,
    IntegrityError,
    Letter,
    VWord,
    all_words_upto,
    brute_four_square_count,
    count_normal_forms,
    decompose,
    denominator_sweep,
    distinct_matrix_count,
    enumerate_normal_forms,
    evaluate,
    four_square_count,
    freeness_sweep,
    is_zero_matrix,
    max_denominator,
    modfive_rank,
    normalize,
    parse_word,
    reduced_words,
    rotation_of,
    word_to_modfive,
    word_to_rotation,
)
from pvsynth.exact import GaussianInt as G

V1, V1i, V2, V2i, V3, V3i = GENERATORS
F = Fraction

letters = st.sampled_from(GENERATORS)
tails = st.sampled_from(sorted(TAILS))
tokens = st.lists(st.one_of(letters.map(str), tails), max_size=12)


@st.composite
def vwords(draw, max_len=6):
    n = draw(st.integers(0, max_len))
    seq: list[Letter] = []
    for _ in range(n):
        choices = [g for g in GENERATORS if not seq or g != seq[-1].inverse()]
        seq.append(draw(st.sampled_from(choices)))
    return VWord(tuple(seq), draw(tails))


def direct_product(seq) -> ExactUnitary:
    m = TAILS["I"]
    for tok in seq:
        m = m @ (TAILS[tok] if tok in TAILS else parse_word(tok).letters[0].unitary())
    return m.minimal()


class TestEvaluate:
    def test_empty(self):
        assert evaluate(VWord()) == ExactUnitary(G(1), G(0), 0)

    def test_v3(self):
        assert evaluate(VWord((V3,))) == ExactUnitary(G(1, 2), G(0), 1)

    def test_v1_v2_against_hand_product(self):
        # (I + 2iX)(I + 2iY) = [[1-4i, 2+2i], [-2+2i, 1+4i]]
        m = evaluate(VWord((V1, V2)))
        assert m.matrix() == ((G(1, -4), G(2, 2)), (G(-2, 2), G(1, 4)))
        assert m.t == 2

    def test_unreduced_rejected(self):
        with pytest.raises(ValueError):
            VWord((V1, V1i))

    def test_json_round_trip(self):
        m = evaluate(VWord((V1, V3i, V2), "-Y"))
        assert ExactUnitary.from_json(m.to_json()) == m

    def test_norm_equation_enforced(self):
        with pytest.raises(ValueError):
            ExactUnitary(G(1, 2), G(0), 2)


class TestNormalize:
    def test_pauli_commutes_with_own_axis(self):
        assert normalize(["X", "V1"]) == VWord((V1,), "X")

    def test_pauli_flips_other_axis(self):
        assert normalize(["X", "V2"]) == VWord((V2i,), "X")

    def test_cancellation(self):
        assert normalize(["V1", "V1^-1"]) == VWord()

    def test_text_forms(self):
        assert parse_word("V1 V2' V3^+1 -Z") == VWord((V1, V2i, V3), "-Z")
        assert parse_word("") == VWord()
        with pytest.raises(ValueError):
            parse_word("V4")

    @given(tokens)
    def test_preserves_matrix(self, seq):
        assert evaluate(normalize(seq)) == direct_product(seq)

    @given(tokens)
    def test_idempotent_and_never_longer(self, seq):
        w = normalize(seq)
        assert normalize(str(w)) == w
        assert w.v_count <= sum(1 for s in seq if s not in TAILS)

    def test_phase_dictionary_covers_tails(self):
        assert set(PHASE_DICTIONARY) == set(TAILS)


class TestDecompose:
    def test_examples(self):
        assert decompose(ExactUnitary(G(1), G(0), 0)) == VWord()
        assert decompose(ExactUnitary(G(1, 2), G(0), 1)) == VWord((V3,))

    def test_non_minimal_rejected(self):
        with pytest.raises(IntegrityError):
            decompose(ExactUnitary(G(5), G(0), 2))

    def test_round_trip_all_short_words(self):
        seen = 0
        for t in range(4):
            for w in enumerate_normal_forms(t) if t else (VWord((), x) for x in TAILS):
                assert decompose(evaluate(w)) == w
                seen += 1
        assert seen == 8 + 48 + 240 + 1200

    @given(vwords(max_len=25))
    def test_round_trip_long_words(self, w):
        m = evaluate(w)
        assert m.is_minimal() and m.t == w.v_count
        assert decompose(m) == w


class TestCounting:
    @pytest.mark.parametrize("t,n", [(1, 48), (2, 240), (3, 1200)])
    def test_normal_forms(self, t, n):
        assert count_normal_forms(t) == n == distinct_matrix_count(t)

    @pytest.mark.parametrize("t,n", [(0, 8), (1, 48), (2, 248), (3, 1248), (4, 6248)])
    def test_four_squares(self, t, n):
        assert four_square_count(t) == n == brute_four_square_count(5**t)

    def test_minimal_forms_at_two(self):
        assert four_square_count(2) - four_square_count(0) == count_normal_forms(2)

    def test_reduced_word_count(self):
        assert sum(1 for _ in reduced_words(4)) == 6 * 5**3
        assert sum(1 for _ in all_words_upto(3)) == 1 + 6 + 30 + 150  # includes the empty word


class TestRotations:
    def test_r1_as_printed(self):
        assert word_to_rotation([V1]) == ((1, 0, 0), (0, F(-3, 5), F(4, 5)), (0, F(-4, 5), F(-3, 5)))
        assert word_to_rotation([]) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_v1_v2_denominator(self):
        assert max_denominator(word_to_rotation([V1, V2])) == 25

    def test_t1_and_product(self):
        assert word_to_modfive([V1]) == ((0, 0, 0), (0, 2, 4), (0, 1, 2))
        assert word_to_modfive([V1, V2]) == ((0, 0, 0), (1, 0, 3), (3, 0, 4))

    @given(vwords(max_len=8))
    def test_conjugation_matches_rotation_product(self, w):
        # two routes to the SO(3) image: conjugating Paulis by the exact matrix vs multiplying R_i
        assert rotation_of(evaluate(VWord(w.letters))) == word_to_rotation(w.letters)

    @given(vwords(max_len=10).filter(lambda w: w.v_count > 0))
    def test_modfive_rank_one(self, w):
        m = word_to_modfive(w.letters)
        assert not is_zero_matrix(m)
        assert modfive_rank(m) == 1

    def test_rotation_table_is_orthogonal(self):
        for r in R_MATRICES.values():
            for i in range(3):
                for j in range(3):
                    dot = sum(r[i][k] * r[j][k] for k in range(3))
                    assert dot == (1 if i == j else 0)

    def test_sweeps_small(self):
        assert freeness_sweep(5).ok
        count, bad = denominator_sweep(4)
        assert bad is None and count == sum(6 * 5 ** (n - 1) for n in range(1, 5))

    def test_corrupted_table_detected(self):
        table = {1: ((0, 0, 0), (0, 0, 0), (0, 0, 1)), 2: word_to_modfive([V2]), 3: word_to_modfive([V3])}
        assert not freeness_sweep(3, table).ok
