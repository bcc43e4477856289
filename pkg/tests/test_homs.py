import random

import pytest

from xcomm.homs import Triple, check_relators_die, in_D, in_L, in_Q, in_W, rho
from xcomm.presentations import upsilon
from xcomm.words import Word, bar, box, comm, inv, mul, parse_word
from conftest import random_reduced


def w(text, m=2):
    return parse_word(text, m)


def test_rho_on_generators():
    t = rho(w("a"))
    assert (t.g1, t.g2, t.g3) == (w("a"), w("a"), Word.empty(2))
    t = rho(w("~a"))
    assert (t.g1, t.g2, t.g3) == (Word.empty(2), w("a"), w("a"))


def test_rho_mixed():
    t = rho(w("a ~a^-1"))
    assert (t.g1, t.g2, t.g3) == (w("a"), Word.empty(2), w("a^-1"))


def test_rho_is_homomorphism():
    rng = random.Random(21)
    for _ in range(200):
        u = random_reduced(rng, rng.randint(0, 9), 3, barred=True)
        x = random_reduced(rng, rng.randint(0, 9), 3, barred=True)
        tu, tx, tux = rho(u), rho(x), rho(mul(u, x))
        assert tux.g1 == mul(tu.g1, tx.g1)
        assert tux.g2 == mul(tu.g2, tx.g2)
        assert tux.g3 == mul(tu.g3, tx.g3)


def test_in_Q_examples():
    assert in_Q(Triple(w("a"), w("a"), Word.empty(2)))
    assert not in_Q(Triple(w("a"), Word.empty(2), Word.empty(2)))
    assert in_Q(Triple(w("a b"), w("b a"), Word.empty(2)))


def test_in_Q_on_images():
    rng = random.Random(22)
    for _ in range(300):
        u = random_reduced(rng, rng.randint(0, 10), 2, barred=True)
        assert in_Q(rho(u))


def test_in_L_examples():
    assert in_L(w("a^-1 ~a"))
    assert not in_L(w("a"))
    assert not in_L(w("[a, ~b]"))


def test_in_D_examples():
    assert in_D(w("[a, ~b]"))
    assert not in_D(w("a^-1 ~a"))
    assert in_D(box(w("a b")))


def test_in_W_examples():
    assert in_W(Word.empty(2))
    assert not in_W(w("a"))
    # an L-element commutes with a D-element under rho
    ell = w("a^-1 ~a")
    dee = comm(w("b"), w("~a"))
    assert in_W(comm(ell, dee))
    # rho does NOT kill general L-commutators (rho(L) is nonabelian):
    # the image of [a^-1 ~a, b^-1 ~b] is ([a^-1,b^-1], 1, [a,b]) != 1
    t = rho(comm(w("a^-1 ~a"), w("b^-1 ~b")))
    assert t.g1 == comm(w("a^-1"), w("b^-1"))
    assert t.g2.is_empty()
    assert t.g3 == comm(w("a"), w("b"))
    assert not in_W(comm(w("a^-1 ~a"), w("b^-1 ~b")))


def test_kernel_containments():
    rng = random.Random(23)
    for _ in range(300):
        u = random_reduced(rng, rng.randint(0, 10), 2, barred=True)
        if in_W(u):
            assert in_L(u) and in_D(u)


def test_L_image_middle_trivial():
    rng = random.Random(24)
    for _ in range(100):
        u = random_reduced(rng, rng.randint(1, 8), 3)
        elem = mul(u, inv(bar(u)))
        assert in_L(elem)
        assert rho(elem).g2.is_empty()


@pytest.mark.parametrize("m", [2, 3, 4])
def test_check_relators_die(m):
    assert check_relators_die(m)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_box_relators_in_D_and_L(m):
    for u in upsilon(m).words:
        r = box(u)
        assert in_D(r)
        assert in_L(r)
