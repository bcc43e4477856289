"""Structural homomorphisms of X(F_m) and the induced membership tests.

``rho`` folds a word over the doubled alphabet into the triple product
G x G x G via ``a_i -> (a_i, a_i, 1)`` and ``~a_i -> (1, a_i, a_i)``.
The kernels realized at word level:

* ``L``  -- kernel of the fold map sending both copies to ``a_i``,
* ``D``  -- kernel of the map to G x G separating the copies,
* ``W``  -- kernel of ``rho`` itself (= D meet L).

These predicates are exact for free G; for a general quotient they are
necessary conditions only.  Commutator-subgroup membership in a free
group is decided by vanishing exponent sums.
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentations import upsilon
from .words import Word, box, exponent_vector, inv, mul, strip_bars


@dataclass(frozen=True)
class Triple:
    """An element of G x G x G with freely reduced unbarred components."""

    g1: Word
    g2: Word
    g3: Word

    def __post_init__(self) -> None:
        for g in (self.g1, self.g2, self.g3):
            if not g.is_unbarred():
                raise ValueError("triple components must be unbarred")
        if not (self.g1.rank == self.g2.rank == self.g3.rank):
            raise ValueError("triple components must share a rank")

    def is_identity(self) -> bool:
        return self.g1.is_empty() and self.g2.is_empty() and self.g3.is_empty()


def rho(w: Word) -> Triple:
    """Componentwise image of ``w`` under a_i -> (a_i,a_i,1), ~a_i -> (1,a_i,a_i)."""
    m = w.rank
    c1: list[int] = []
    c2: list[int] = []
    c3: list[int] = []
    for code in w.codes:
        base = abs(code)
        sign = 1 if code > 0 else -1
        unbarred = base if base % 2 else base - 1
        if base % 2:  # a_i
            c1.append(sign * unbarred)
            c2.append(sign * unbarred)
        else:  # ~a_i
            c2.append(sign * unbarred)
            c3.append(sign * unbarred)
    return Triple(Word(c1, m), Word(c2, m), Word(c3, m))


def in_Q(t: Triple) -> bool:
    """Membership in im(rho): ``g1 g2^-1 g3`` lies in the commutator subgroup."""
    prod = mul(mul(t.g1, inv(t.g2)), t.g3)
    m = prod.rank
    return all(e == 0 for e in exponent_vector(prod)[:m])


def in_L(w: Word) -> bool:
    """Kernel of the fold map: erase bars, reduce, check trivial."""
    return strip_bars(w).is_empty()


def in_D(w: Word) -> bool:
    """Kernel of the map to G x G (separate the two copies)."""
    t = rho(w)
    return t.g1.is_empty() and t.g3.is_empty()


def in_W(w: Word) -> bool:
    """Kernel of rho, i.e. D meet L."""
    return rho(w).is_identity()


def check_relators_die(m: int) -> bool:
    """True iff rho kills every box relator of the rank-``m`` schedule."""
    return all(rho(box(u)).is_identity() for u in upsilon(m).words)
