import random

import pytest

from xcomm.lomodule import (
    Monomial,
    RingElem,
    augmentation,
    elem_to_vector,
    h1_L_rank,
    matrix_rep,
    nu,
    oracle_consistent,
    reduce_word,
    rewrite_any_order,
    ring_add,
    ring_mul,
    word_matrix,
    wreath_inv,
    wreath_mul,
)
from xcomm.presentations import upsilon
from xcomm.words import Word, bar, box, inv, mul, parse_word, reduced_words
from conftest import random_reduced


def w(text, m=2):
    return parse_word(text, m)


def elem(d, m=2):
    return RingElem({frozenset(k): v for k, v in d.items()}, m)


class TestReduceWord:
    def test_square(self):
        assert reduce_word(w("a a")) == elem({(1,): 2, (): -1})

    def test_inverse(self):
        assert reduce_word(w("a^-1")) == elem({(): 2, (1,): -1})

    def test_swap(self):
        assert reduce_word(w("b a")) == elem({(1,): 2, (2,): 2, (1, 2): -1, (): -2})

    def test_rejects_barred(self):
        with pytest.raises(ValueError):
            reduce_word(w("~a"))

    def test_square_relation_on_random_words(self):
        rng = random.Random(31)
        one = RingElem.one(3)
        for _ in range(60):
            u = random_reduced(rng, rng.randint(0, 6), 3)
            uu = reduce_word(mul(u, u))
            assert uu == ring_add(reduce_word(u), reduce_word(u)) - one

    def test_confluence_random_orders(self):
        rng = random.Random(32)
        for _ in range(150):
            m = rng.randint(1, 4)
            u = random_reduced(rng, rng.randint(0, 8), m)
            assert rewrite_any_order(u, rng) == reduce_word(u)


class TestRingOps:
    def test_defining_relation(self):
        one = RingElem.one(2)
        a = RingElem.monomial({1}, 2)
        assert ring_mul(one - a, one - a).is_zero()

    def test_identity(self):
        x = reduce_word(w("b a b"))
        assert ring_mul(RingElem.one(2), x) == x
        assert ring_mul(x, RingElem.one(2)) == x

    def test_ascending_concatenation(self):
        a = RingElem.monomial({1}, 2)
        b = RingElem.monomial({2}, 2)
        assert ring_mul(a, b) == RingElem.monomial({1, 2}, 2)

    def test_mul_matches_word_concatenation(self):
        rng = random.Random(33)
        for _ in range(60):
            u = random_reduced(rng, rng.randint(0, 5), 3)
            x = random_reduced(rng, rng.randint(0, 5), 3)
            assert ring_mul(reduce_word(u), reduce_word(x)) == reduce_word(mul(u, x))


class TestAugmentation:
    def test_examples(self):
        one = RingElem.one(2)
        a = RingElem.monomial({1}, 2)
        assert augmentation(one - a) == 0
        assert augmentation(reduce_word(w("b a"))) == 1
        assert augmentation(RingElem.zero(2)) == 0

    def test_multiplicative(self):
        rng = random.Random(34)
        for _ in range(50):
            u = random_reduced(rng, rng.randint(0, 6), 3)
            assert augmentation(reduce_word(u)) == 1


class TestNu:
    def test_generator_images(self):
        e = nu(w("a"))
        assert e.v == RingElem.one(2) and e.g == w("a")
        e = nu(w("~a"))
        assert e.v == RingElem.monomial({1}, 2) and e.g == w("a")

    def test_L_generator_image(self):
        e = nu(w("a ~a^-1"))
        assert e.g.is_empty()
        assert e.v == RingElem.one(2) - RingElem.monomial({1}, 2)

    def test_L_images_random(self):
        rng = random.Random(35)
        one = RingElem.one(3)
        for _ in range(120):
            u = random_reduced(rng, rng.randint(1, 7), 3)
            e = nu(mul(u, inv(bar(u))))
            assert e.g.is_empty()
            assert e.v == one - reduce_word(u)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_kills_schedule_relators(self, m):
        for u in upsilon(m).words:
            assert nu(box(u)).is_identity()

    def test_kills_random_longer_boxes(self):
        rng = random.Random(36)
        for _ in range(40):
            u = random_reduced(rng, rng.randint(1, 8), 2)
            assert nu(box(u)).is_identity()

    def test_homomorphism(self):
        rng = random.Random(37)
        for _ in range(60):
            u = random_reduced(rng, rng.randint(0, 6), 2, barred=True)
            x = random_reduced(rng, rng.randint(0, 6), 2, barred=True)
            left = nu(mul(u, x))
            right = wreath_mul(nu(u), nu(x))
            assert left.v == right.v and left.g == right.g

    def test_inverse(self):
        rng = random.Random(38)
        for _ in range(40):
            u = random_reduced(rng, rng.randint(0, 6), 2, barred=True)
            e = wreath_mul(nu(u), wreath_inv(nu(u)))
            assert e.is_identity()


class TestOracle:
    def test_rank1_square_relation(self):
        (mat,) = matrix_rep(1)
        n = len(mat)
        sq = [[sum(mat[i][k] * mat[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        expect = [[2 * mat[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        assert sq == expect

    def test_rank2_unipotency_of_ba(self):
        mats = matrix_rep(2)
        g = word_matrix(w("b a"), mats)
        n = len(g)
        one_minus = [[(1 if i == j else 0) - g[i][j] for j in range(n)] for i in range(n)]
        sq = [
            [sum(one_minus[i][k] * one_minus[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        assert all(x == 0 for row in sq for x in row)

    def test_inverse_matrix_rule(self):
        mats = matrix_rep(2)
        ainv = word_matrix(w("a^-1"), mats)
        a = mats[0]
        n = len(a)
        assert ainv == [[(2 if i == j else 0) - a[i][j] for j in range(n)] for i in range(n)]

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_reduce_word_matches_matrices(self, m):
        rng = random.Random(40 + m)
        words = [random_reduced(rng, rng.randint(0, 8), m) for _ in range(60)]
        assert oracle_consistent(m, words)

    def test_unimodular_inverse(self):
        mats = matrix_rep(3)
        for a in mats:
            n = len(a)
            ainv = [[(2 if i == j else 0) - a[i][j] for j in range(n)] for i in range(n)]
            prod = [
                [sum(a[i][k] * ainv[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
            assert prod == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


class TestH1L:
    def test_paper_value_rank2(self):
        assert h1_L_rank(2) == 3

    def test_rank1(self):
        assert h1_L_rank(1) == 1

    def test_rank3(self):
        assert h1_L_rank(3) == 7

    def test_generator_images_span_rank3(self):
        from xcomm.abelian import lattice_rank

        gens = [w("a ~a^-1"), w("b ~b^-1"), w("a b ~b^-1 ~a^-1")]
        rows = []
        for g in gens:
            e = nu(g)
            assert e.g.is_empty()
            rows.append(elem_to_vector(e.v, 2))
        assert lattice_rank(rows, 4) == 3


def test_monomial_ordering_and_labels():
    ms = sorted([Monomial({2}), Monomial(()), Monomial({1, 2}), Monomial({1})])
    assert [m.label(("a", "b")) for m in ms] == ["", "a", "b", "ab"]
