"""Arithmetic in M = ZF_m / I_2(F_m) and the wreath representation nu.

``I_2`` is the ideal generated by all ``(1-g)^2``; consequences used as
rewrite rules on group words (p, s denote contexts, x < y positive
letters)::

    (INV)   p x^-1 s  ->  2 p s - p x s
    (SQ)    p x x s   ->  2 p x s - p s
    (SWAP)  p y x s   ->  2 p x s + 2 p y s - p (x y) s - 2 p s

Iterating these writes every group element on the basis of square-free
ascending monomials ``a_{i1} ... a_{is}`` (with 1 for the empty
monomial).  The normal forms are treated as a free Z-basis; this is
guarded by the left-multiplication matrix oracle, not assumed silently.

The wreath target is ``H = ZG x| G`` with multiplication
``(v1, g1)(v2, g2) = (v1 + g1 v2, g1 g2)``; under this convention
``nu(g) = (1, g)`` and ``nu(~g) = (g, g)``, so ``nu(u ~u^-1) = (1-u, 1)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .abelian import lattice_rank
from .words import Word, _code_barred, _code_index


@dataclass(frozen=True)
class Monomial:
    """A square-free ascending monomial, identified with its support set."""

    support: frozenset[int] = frozenset()

    def __init__(self, support: Iterable[int] = ()):  # allow any iterable
        object.__setattr__(self, "support", frozenset(support))

    def __lt__(self, other: Monomial) -> bool:  # by (size, sorted support)
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (len(self.support), tuple(sorted(self.support)))

    def label(self, names: tuple[str, ...]) -> str:
        return "".join(names[i - 1] for i in sorted(self.support))


class RingElem:
    """An integer combination of basis monomials of M = ZF_m / I_2(F_m)."""

    __slots__ = ("coeffs", "rank")

    def __init__(self, coeffs: Mapping[frozenset[int], int], rank: int):
        self.coeffs = {k: v for k, v in coeffs.items() if v}
        self.rank = rank

    @staticmethod
    def zero(rank: int) -> RingElem:
        return RingElem({}, rank)

    @staticmethod
    def one(rank: int) -> RingElem:
        return RingElem({frozenset(): 1}, rank)

    @staticmethod
    def monomial(support: Iterable[int], rank: int, coeff: int = 1) -> RingElem:
        return RingElem({frozenset(support): coeff}, rank)

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self) -> list[tuple[Monomial, int]]:
        return sorted(
            ((Monomial(k), v) for k, v in self.coeffs.items()),
            key=lambda kv: kv[0].sort_key(),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RingElem)
            and self.rank == other.rank
            and self.coeffs == other.coeffs
        )

    def __hash__(self):  # pragma: no cover - dict-backed, unhashable
        raise TypeError("RingElem is not hashable")

    def __add__(self, other: RingElem) -> RingElem:
        return ring_add(self, other)

    def __sub__(self, other: RingElem) -> RingElem:
        return ring_add(self, ring_scale(other, -1))

    def __mul__(self, other: RingElem) -> RingElem:
        return ring_mul(self, other)

    def __neg__(self) -> RingElem:
        return ring_scale(self, -1)

    def __repr__(self) -> str:
        from .words import default_names

        names = default_names(self.rank)
        if not self.coeffs:
            return "0"
        parts = []
        for mono, c in self.items():
            lab = mono.label(tuple(names)) or "1"
            parts.append(f"{c}*{lab}")
        return " + ".join(parts)


def _check_rank(x: RingElem, y: RingElem) -> None:
    if x.rank != y.rank:
        raise ValueError(f"rank mismatch: {x.rank} != {y.rank}")


def ring_add(x: RingElem, y: RingElem) -> RingElem:
    _check_rank(x, y)
    out = dict(x.coeffs)
    for k, v in y.coeffs.items():
        out[k] = out.get(k, 0) + v
    return RingElem(out, x.rank)


def ring_scale(x: RingElem, c: int) -> RingElem:
    return RingElem({k: c * v for k, v in x.coeffs.items()}, x.rank)


# -- monomial times letter, resolved to normal form --------------------------

_MONO_CACHE: dict[tuple[int, frozenset[int], int], dict[frozenset[int], int]] = {}


def _mono_times_letter(support: frozenset[int], i: int, rank: int) -> dict[frozenset[int], int]:
    """Normal form of (monomial) * a_i as a coefficient dict."""
    key = (rank, support, i)
    hit = _MONO_CACHE.get(key)
    if hit is not None:
        return hit
    if not support or max(support) < i:
        out = {support | {i}: 1}
    elif max(support) == i:
        # (P a_i) a_i = 2 P a_i - P
        out = {support: 2, support - {i}: -1}
    else:
        # SWAP against the largest letter j > i:  P j i = 2 P i + 2 P j - P i j - 2 P
        j = max(support)
        p = support - {j}
        out: dict[frozenset[int], int] = {}

        def acc(d: dict[frozenset[int], int], c: int) -> None:
            for k, v in d.items():
                out[k] = out.get(k, 0) + c * v

        pi = _mono_times_letter(p, i, rank)
        acc(pi, 2)
        out[support] = out.get(support, 0) + 2  # P j = support itself
        # P (i j): multiply P by a_i then by a_j (all supports stay below j)
        for k, v in pi.items():
            out[k | {j}] = out.get(k | {j}, 0) - v
        out[p] = out.get(p, 0) - 2
        out = {k: v for k, v in out.items() if v}
    _MONO_CACHE[key] = out
    return out


def _elem_times_letter(x: RingElem, i: int, sign: int) -> RingElem:
    out: dict[frozenset[int], int] = {}
    for support, c in x.coeffs.items():
        prod = _mono_times_letter(support, i, x.rank)
        if sign > 0:
            for k, v in prod.items():
                out[k] = out.get(k, 0) + c * v
        else:
            # a_i^-1 = 2 - a_i
            out[support] = out.get(support, 0) + 2 * c
            for k, v in prod.items():
                out[k] = out.get(k, 0) - c * v
    return RingElem(out, x.rank)


def reduce_word(w: Word) -> RingElem:
    """The image of an unbarred group word in M, on the monomial basis."""
    if not w.is_unbarred():
        raise ValueError("reduce_word expects an unbarred word")
    acc = RingElem.one(w.rank)
    for code in w.codes:
        acc = _elem_times_letter(acc, _code_index(code), 1 if code > 0 else -1)
    return acc


def ring_mul(x: RingElem, y: RingElem) -> RingElem:
    """Bilinear product; monomial products concatenate representative words."""
    _check_rank(x, y)
    out: dict[frozenset[int], int] = {}
    for sx, cx in x.coeffs.items():
        px = [2 * i - 1 for i in sorted(sx)]
        for sy, cy in y.coeffs.items():
            codes = px + [2 * j - 1 for j in sorted(sy)]
            prod = reduce_word(Word(codes, x.rank))
            c = cx * cy
            for k, v in prod.coeffs.items():
                out[k] = out.get(k, 0) + c * v
    return RingElem(out, x.rank)


def _left_letter_times(x: RingElem, i: int) -> RingElem:
    """a_i * x on the basis (concatenate-and-reduce per monomial)."""
    out: dict[frozenset[int], int] = {}
    for support, c in x.coeffs.items():
        key = frozenset({i}) | support
        if not support or i < min(support):
            out[key] = out.get(key, 0) + c
        else:
            word_codes = [2 * i - 1] + [2 * j - 1 for j in sorted(support)]
            prod = reduce_word(Word(word_codes, x.rank))
            for k, v in prod.coeffs.items():
                out[k] = out.get(k, 0) + c * v
    return RingElem(out, x.rank)


def augmentation(x: RingElem) -> int:
    """Coefficient sum; the ring homomorphism M -> Z."""
    return sum(x.coeffs.values())


# -- the slow, order-randomized rewriter (confluence testing) ---------------


def rewrite_any_order(w: Word, rng: random.Random) -> RingElem:
    """Reduce by applying INV/SQ/SWAP at randomly chosen positions.

    Exercises the local rules directly on formal Z-combinations of words;
    used to sample confluence against :func:`reduce_word`.
    """
    if not w.is_unbarred():
        raise ValueError("expects an unbarred word")
    m = w.rank
    terms: dict[tuple[int, ...], int] = {tuple(_code_index(c) * (1 if c > 0 else -1) for c in w.codes): 1}

    def violations(word: tuple[int, ...]) -> list[tuple[str, int]]:
        out = []
        for p, x in enumerate(word):
            if x < 0:
                out.append(("INV", p))
        for p in range(len(word) - 1):
            x, y = word[p], word[p + 1]
            if x > 0 and y > 0:
                if x == y:
                    out.append(("SQ", p))
                elif x > y:
                    out.append(("SWAP", p))
        return out

    guard = 0
    while True:
        guard += 1
        if guard > 100_000:
            raise RuntimeError("rewrite did not terminate")
        pending = [(t, viol) for t in list(terms) for viol in violations(t)]
        if not pending:
            break
        word, (kind, p) = pending[rng.randrange(len(pending))]
        c = terms.pop(word, 0)
        if c == 0:
            continue

        def add(t: tuple[int, ...], k: int) -> None:
            terms[t] = terms.get(t, 0) + k
            if terms[t] == 0:
                del terms[t]

        if kind == "INV":
            x = -word[p]
            add(word[:p] + word[p + 1:], 2 * c)
            add(word[:p] + (x,) + word[p + 1:], -c)
        elif kind == "SQ":
            add(word[:p] + word[p + 1:], 2 * c)
            add(word[:p] + word[p + 2:], -c)
        else:  # SWAP: p y x s -> 2 p x s + 2 p y s - p x y s - 2 p s
            y, x = word[p], word[p + 1]
            add(word[:p] + (x,) + word[p + 2:], 2 * c)
            add(word[:p] + (y,) + word[p + 2:], 2 * c)
            add(word[:p] + (x, y) + word[p + 2:], -c)
            add(word[:p] + word[p + 2:], -2 * c)

    out: dict[frozenset[int], int] = {}
    for word, c in terms.items():
        out[frozenset(word)] = out.get(frozenset(word), 0) + c
    return RingElem(out, m)


# -- wreath representation ---------------------------------------------------


@dataclass(frozen=True)
class WreathElem:
    """An element (v, g) of (ZF_m / I_2) x| F_m."""

    v: RingElem
    g: Word

    def __post_init__(self) -> None:
        if self.v.rank != self.g.rank:
            raise ValueError("rank mismatch between ring and group parts")
        if not self.g.is_unbarred():
            raise ValueError("group part must be unbarred")

    def is_identity(self) -> bool:
        return self.v.is_zero() and self.g.is_empty()


def wreath_mul(x: WreathElem, y: WreathElem) -> WreathElem:
    from .words import mul

    gy = _act(x.g, y.v)
    return WreathElem(ring_add(x.v, gy), mul(x.g, y.g))


def wreath_inv(x: WreathElem) -> WreathElem:
    from .words import inv

    gi = inv(x.g)
    return WreathElem(ring_scale(_act(gi, x.v), -1), gi)


def _act(g: Word, v: RingElem) -> RingElem:
    """Left multiplication of a ring element by the image of a group word."""
    acc = v
    for code in reversed(g.codes):
        i = _code_index(code)
        sign = 1 if code > 0 else -1
        if sign > 0:
            acc = _left_letter_times(acc, i)
        else:
            # a_i^-1 * x = 2x - a_i * x
            acc = ring_add(ring_scale(acc, 2), ring_scale(_left_letter_times(acc, i), -1))
    return acc


def nu(w: Word) -> WreathElem:
    """The representation with nu(a_i) = (1, a_i) and nu(~a_i) = (a_i, a_i)."""
    m = w.rank
    acc = WreathElem(RingElem.zero(m), Word.empty(m))
    for code in w.codes:
        i = _code_index(code)
        letter = Word((2 * i - 1,), m)
        if _code_barred(code):
            base = WreathElem(RingElem.monomial({i}, m), letter)
        else:
            base = WreathElem(RingElem.one(m), letter)
        if code < 0:
            base = wreath_inv(base)
        acc = wreath_mul(acc, base)
    return acc


# -- rank computations and the matrix oracle ---------------------------------


def _basis_monomials(m: int) -> list[frozenset[int]]:
    import itertools

    out = []
    for s in range(m + 1):
        for combo in itertools.combinations(range(1, m + 1), s):
            out.append(frozenset(combo))
    out.sort(key=lambda f: (len(f), tuple(sorted(f))))
    return out


def matrix_rep(m: int) -> list[list[list[int]]]:
    """Left-multiplication matrices of a_1..a_m on the monomial basis.

    Columns are indexed by the basis monomials in (size, support) order;
    entry [r][c] is the coefficient of basis monomial r in a_i * (basis c).
    Serves as an independent oracle for the rewriting system.
    """
    if m > 6:
        raise ValueError("matrix_rep supports m <= 6 (size 2^m)")
    basis = _basis_monomials(m)
    index = {b: k for k, b in enumerate(basis)}
    n = len(basis)
    mats = []
    for i in range(1, m + 1):
        mat = [[0] * n for _ in range(n)]
        for c, mono in enumerate(basis):
            prod = _left_letter_times(RingElem({mono: 1}, m), i)
            for k, v in prod.coeffs.items():
                mat[index[k]][c] = v
        mats.append(mat)
    return mats


def word_matrix(w: Word, mats: list[list[list[int]]]) -> list[list[int]]:
    """Matrix of an unbarred word, with inverses as 2I - A_i."""
    n = len(mats[0])
    acc = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def matmul(a, b):
        bt = list(zip(*b))
        return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]

    for code in w.codes:
        a = mats[_code_index(code) - 1]
        if code < 0:
            a = [[(2 if i == j else 0) - a[i][j] for j in range(n)] for i in range(n)]
        acc = matmul(acc, a)
    return acc


def elem_to_vector(x: RingElem, m: int) -> list[int]:
    basis = _basis_monomials(m)
    return [x.coeffs.get(b, 0) for b in basis]


def oracle_consistent(m: int, words: Iterable[Word]) -> bool:
    """Check reduce_word against the matrix oracle on the given words."""
    mats = matrix_rep(m)
    for w in words:
        col = [row[0] for row in word_matrix(w, mats)]  # image of basis vector 1
        if col != elem_to_vector(reduce_word(w), m):
            return False
    return True


def h1_L_rank(m: int, *, oracle_check: bool | None = None) -> int:
    """Rank of A(F_m)/I_2(F_m), the abelianization of L(F_m).

    Computed as the integer rank of the sublattice spanned by
    ``{1 - u : u a nonempty basis monomial}``; the monomial basis itself is
    validated against the matrix oracle at small ranks rather than assumed.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > 12:
        raise ValueError("h1_L_rank supports m <= 12")
    if oracle_check is None:
        oracle_check = m <= 4
    if oracle_check:
        from .words import reduced_words

        sample = list(reduced_words(min(3, m + 1), m))
        if not oracle_consistent(m, sample):
            raise AssertionError("normal forms disagree with the matrix oracle")
    basis = _basis_monomials(m)
    index = {b: k for k, b in enumerate(basis)}
    rows = []
    for mono in basis:
        if not mono:
            continue
        vec = [0] * len(basis)
        vec[index[frozenset()]] = 1
        vec[index[mono]] = -1
        rows.append(vec)
    return lattice_rank(rows, len(basis))
