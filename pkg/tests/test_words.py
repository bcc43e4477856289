import random

import pytest
from hypothesis import given, strategies as st

from xcomm.words import (
    AlphabetError,
    BoxForm,
    GenSym,
    Letter,
    RankMismatchError,
    Word,
    bar,
    box,
    box_set,
    boxinv,
    comm,
    conj,
    exponent_vector,
    free_reduce,
    gen,
    inv,
    inverse_class_rep,
    mul,
    parse_word,
    reduced_words,
    strip_bars,
    word_sort_key,
    word_to_str,
)
from conftest import random_reduced


def w(text, m=2):
    return parse_word(text, m)


class TestFreeReduce:
    def test_adjacent_inverse_pair(self):
        letters = [
            Letter(GenSym(1), 1),
            Letter(GenSym(1), -1),
            Letter(GenSym(2), 1),
        ]
        assert free_reduce(letters, 2) == w("b")

    def test_empty(self):
        assert free_reduce([], 2) == Word.empty(2)

    def test_nested_cancellation(self):
        # a b b^-1 a^-1 ~a -> ~a
        letters = [1, 3, -3, -1, 2]
        assert free_reduce(letters, 2) == w("~a")

    def test_index_out_of_range(self):
        with pytest.raises(AlphabetError):
            free_reduce([Letter(GenSym(3), 1)], 2)

    @given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3, 4, -4]), max_size=40))
    def test_idempotent_and_nonincreasing(self, codes):
        first = free_reduce(codes, 2)
        assert len(first) <= len(codes)
        assert free_reduce(first.codes, 2) == first


class TestGroupOps:
    def test_comm_self_trivial(self):
        assert comm(w("a"), w("a")).is_empty()

    def test_comm_definition(self):
        assert comm(w("a"), w("~a")) == w("a^-1 ~a^-1 a ~a")

    def test_conj_definition(self):
        assert conj(w("a"), w("b")) == w("b^-1 a b")

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatchError):
            mul(w("a", 2), w("a", 3))

    @given(st.lists(st.sampled_from([1, -1, 3, -3, 2, -2]), max_size=16))
    def test_mul_inverse_cancels(self, codes):
        u = free_reduce(codes, 2)
        assert mul(u, inv(u)).is_empty()
        assert mul(inv(u), u).is_empty()

    def test_mul_associative_sample(self):
        rng = random.Random(5)
        for _ in range(100):
            u = random_reduced(rng, rng.randint(0, 8), 2, barred=True)
            v = random_reduced(rng, rng.randint(0, 8), 2, barred=True)
            x = random_reduced(rng, rng.randint(0, 8), 2, barred=True)
            assert mul(mul(u, v), x) == mul(u, mul(v, x))


class TestBar:
    def test_bar_examples(self):
        assert bar(w("a b^-1")) == w("~a ~b^-1")
        assert bar(w("~a")) == w("a")
        assert bar(Word.empty(2)) == Word.empty(2)

    @given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3, 4, -4]), max_size=20))
    def test_involution_commutes(self, codes):
        u = free_reduce(codes, 2)
        assert bar(bar(u)) == u
        assert len(bar(u)) == len(u)
        v = free_reduce(codes[::-1], 2)
        assert bar(mul(u, v)) == mul(bar(u), bar(v))
        assert bar(inv(u)) == inv(bar(u))


class TestBox:
    def test_box_single(self):
        assert box(w("a")) == w("a^-1 ~a^-1 a ~a")

    def test_box_ab_expansion(self):
        # oracle: expand w^-1 bar(w)^-1 w bar(w) naively and reduce
        u = w("a b")
        naive = list(inv(u).codes) + list(inv(bar(u)).codes) + list(u.codes) + list(bar(u).codes)
        assert box(u) == free_reduce(naive, 2)
        assert box(u) == w("b^-1 a^-1 ~b^-1 ~a^-1 a b ~a ~b")

    def test_box_rejects_barred(self):
        with pytest.raises(ValueError):
            box(w("~a"))
        with pytest.raises(ValueError):
            box(Word.empty(2))

    def test_erase_bars_kills_box(self):
        rng = random.Random(11)
        for _ in range(50):
            u = random_reduced(rng, rng.randint(1, 8), 3)
            assert strip_bars(box(u)).is_empty()

    def test_box_boxinv_conjugacy(self):
        # [w, bar(w)] == ([w, bar(w)^-1]^bar(w))^-1 exactly
        rng = random.Random(13)
        for _ in range(100):
            u = random_reduced(rng, rng.randint(1, 8), 3)
            assert box(u) == inv(conj(boxinv(u), bar(u)))


class TestBoxSet:
    def test_rank2_length1(self):
        rels = box_set(1, 2)
        assert [word_to_str(r.base) for r in rels] == ["a", "b"]
        assert all(r.form is BoxForm.BOXINV for r in rels)

    def test_rank1(self):
        assert [word_to_str(r.base) for r in box_set(1, 1)] == ["a"]

    def test_rank2_length2_count_vs_enumeration(self):
        # oracle: enumerate reduced words of length <= 2 modulo inversion
        seen = set()
        for u in reduced_words(2, 2):
            key = min(word_sort_key(u), word_sort_key(inv(u)))
            seen.add(key)
        rels = box_set(2, 2)
        assert len(rels) == len(seen) == 8

    def test_no_inverse_pairs(self):
        rels = box_set(3, 2)
        bases = {r.base.codes for r in rels}
        for r in rels:
            assert inv(r.base).codes not in bases


class TestSyntax:
    @given(st.lists(st.sampled_from([1, -1, 2, -2, 5, -5, 6, -6]), max_size=16))
    def test_round_trip(self, codes):
        u = free_reduce(codes, 3)
        assert parse_word(word_to_str(u), 3) == u

    def test_high_rank_names(self):
        u = parse_word("x1 x4^-1 ~x2", 4)
        assert word_to_str(u) == "x1 x4^-1 ~x2"

    def test_powers_and_commutators(self):
        assert parse_word("a^3", 2) == free_reduce([1, 1, 1], 2)
        assert parse_word("[a b, ~a ~b]", 2) == box(w("a b"))
        assert parse_word("1", 2).is_empty()

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            parse_word("q", 2)


def test_exponent_vector():
    assert exponent_vector(w("a b^-1 a ~b")) == (2, -1, 0, 1)


def test_inverse_class_rep():
    assert inverse_class_rep(w("b^-1 a^-1")) == w("a b")
    assert inverse_class_rep(w("a b")) == w("a b")
