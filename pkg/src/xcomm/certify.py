"""Machine-checkable derivations of box relators from the finite base set.

A certificate expresses a target word as a product of conjugated base
relators; verification is free reduction of that product and nothing
else.  Construction is compositional: partial certificates are
multiplied, inverted and conjugated as values, and every assembly step
eagerly checks the word-level identity it instantiates (a failed check
is an internal defect, never a recoverable condition).

The derivation engine reduces an arbitrary base word to schedule atoms
by epsilon-inversion moves: for a factorization ``w = b e a`` (all parts
nonempty) the two four-face identity templates convert between the
certificate of ``box(w)`` and the certificate of the bracket
``[[bar(a)^-1, b], e bar(e)^-1]``, and that bracket's epsilon leg can be
inverted at the cost of two short certificates.  Components are resolved
recursively on strictly shorter words, with memoization per rank.

Certificates can be large (growth is exponential in the base-word
length); the flat factor list is therefore materialized lazily and both
verification and serialization stream it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .presentations import upsilon
from .words import (
    Word,
    bar,
    box,
    boxinv,
    BoxForm,
    BoxRelator,
    comm,
    conj,
    inv,
    inverse_class_rep,
    mul,
    mul_all,
    parse_word,
    word_to_str,
    _code_index,
    _mul_codes,
)


class CertifyError(Exception):
    pass


class BasisError(CertifyError):
    """A factor's relator does not belong to the declared basis."""


class IdentityError(CertifyError):
    """An eagerly checked identity failed; indicates an internal defect."""


class LengthBudgetError(CertifyError):
    """star_certificate called with |u| + |v| exceeding the basis bound."""


# ---------------------------------------------------------------------------
# bases


@dataclass(frozen=True)
class Basis:
    """The declared relator family a certificate draws from.

    ``upsilon`` mode: the box relators ``[u, bar(u)]`` over the rank-m
    schedule.  ``boxn`` mode: the variant relators ``[u, bar(u)^-1]`` over
    all inverse-class representatives of length <= bound.
    """

    mode: str
    rank: int
    bound: int | None = None

    UPSILON = "upsilon"
    BOXN = "boxn"

    @staticmethod
    def upsilon_basis(m: int) -> Basis:
        return Basis(mode=Basis.UPSILON, rank=m)

    @staticmethod
    def boxn_basis(n: int, m: int) -> Basis:
        return Basis(mode=Basis.BOXN, rank=m, bound=n)

    def contains_relator(self, r: Word) -> bool:
        """Structural membership test (relators have length exactly 4|u|)."""
        n = len(r.codes)
        if n == 0 or n % 4 or r.rank != self.rank:
            return False
        ell = n // 4
        u = inv(Word(r.codes[:ell], self.rank, _reduce=False))
        if not u.is_unbarred():
            return False
        if self.mode == Basis.UPSILON:
            return u.codes in _upsilon_codes(self.rank) and box(u) == r
        if self.mode == Basis.BOXN:
            if self.bound is None or ell > self.bound:
                return False
            return inverse_class_rep(u) == u and boxinv(u) == r
        return False


_UPSILON_CODE_CACHE: dict[int, frozenset[tuple[int, ...]]] = {}


def _upsilon_codes(m: int) -> frozenset[tuple[int, ...]]:
    cached = _UPSILON_CODE_CACHE.get(m)
    if cached is None:
        cached = frozenset(w.codes for w in upsilon(m).words)
        _UPSILON_CODE_CACHE[m] = cached
    return cached


# ---------------------------------------------------------------------------
# certificate expressions (internal DAG)

_ATOM, _PROD, _INV, _CONJ = 0, 1, 2, 3


class _CE:
    """A certificate expression; ``target`` is its freely reduced value."""

    __slots__ = ("kind", "sub", "aux", "target", "nfactors")

    def __init__(self, kind: int, sub, aux, target: Word, nfactors: int):
        self.kind = kind
        self.sub = sub
        self.aux = aux
        self.target = target
        self.nfactors = nfactors


def _ce_atom(relator: Word, exponent: int) -> _CE:
    target = relator if exponent == 1 else inv(relator)
    return _CE(_ATOM, relator, exponent, target, 1)


def _ce_empty(rank: int) -> _CE:
    return _CE(_PROD, (), None, Word.empty(rank), 0)


def _ce_prod(*children: _CE) -> _CE:
    kids = tuple(c for c in children if c.nfactors)
    if not kids:
        return _ce_empty(children[0].target.rank if children else 1)
    if len(kids) == 1:
        return kids[0]
    target = mul_all(*(c.target for c in children))
    return _CE(_PROD, kids, None, target, sum(c.nfactors for c in kids))


def _ce_inv(child: _CE) -> _CE:
    if child.kind == _INV:
        return child.sub
    return _CE(_INV, child, None, inv(child.target), child.nfactors)


def _ce_conj(child: _CE, g: Word) -> _CE:
    if g.is_empty() or not child.nfactors:
        return child
    if child.kind == _CONJ:
        return _ce_conj(child.sub, mul(child.aux, g))
    return _CE(_CONJ, child, g, conj(child.target, g), child.nfactors)


def _iter_flat(expr: _CE) -> Iterator[tuple[Word, int, tuple[int, ...]]]:
    """Yield (relator, exponent, conjugator codes) in product order."""
    stack: list[tuple[_CE, bool, tuple[int, ...]]] = [(expr, False, ())]
    while stack:
        node, neg, cj = stack.pop()
        kind = node.kind
        if kind == _ATOM:
            yield (node.sub, -node.aux if neg else node.aux, cj)
        elif kind == _PROD:
            children = node.sub if neg else tuple(reversed(node.sub))
            for c in children:
                stack.append((c, neg, cj))
        elif kind == _INV:
            stack.append((node.sub, not neg, cj))
        else:  # _CONJ
            stack.append((node.sub, neg, _mul_codes(node.aux.codes, cj)))


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ConjugatedRelator:
    """One factor ``conjugator^-1 relator^exponent conjugator``."""

    relator: Word
    exponent: int
    conjugator: Word

    def value(self) -> Word:
        base = self.relator if self.exponent == 1 else inv(self.relator)
        return conj(base, self.conjugator)


class Certificate:
    """A target word plus a product of conjugated base relators equal to it.

    The factor list may be huge; :meth:`iter_factors` streams it and
    :attr:`factors` materializes (and caches) the tuple on first access.
    """

    __slots__ = ("target", "basis", "_expr", "_factors")

    def __init__(
        self,
        target: Word,
        basis: Basis,
        expr: _CE | None = None,
        factors: Sequence[ConjugatedRelator] | None = None,
    ):
        self.target = target
        self.basis = basis
        self._expr = expr
        self._factors = tuple(factors) if factors is not None else None
        if expr is None and self._factors is None:
            raise ValueError("certificate needs an expression or a factor list")

    @property
    def nfactors(self) -> int:
        if self._factors is not None:
            return len(self._factors)
        return self._expr.nfactors

    def iter_raw(self) -> Iterator[tuple[Word, int, tuple[int, ...]]]:
        if self._factors is not None:
            for f in self._factors:
                yield (f.relator, f.exponent, f.conjugator.codes)
        else:
            yield from _iter_flat(self._expr)

    def iter_factors(self) -> Iterator[ConjugatedRelator]:
        rank = self.target.rank
        for rel, exp, cj in self.iter_raw():
            yield ConjugatedRelator(rel, exp, Word(cj, rank, _reduce=False))

    @property
    def factors(self) -> tuple[ConjugatedRelator, ...]:
        if self._factors is None:
            self._factors = tuple(self.iter_factors())
        return self._factors

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Certificate)
            and self.target == other.target
            and self.basis == other.basis
            and self.factors == other.factors
        )

    def __repr__(self) -> str:
        return (
            f"Certificate(target={word_to_str(self.target)!r}, "
            f"basis={self.basis.mode}, nfactors={self.nfactors})"
        )


def _push_codes(stack: list[int], codes: Sequence[int]) -> None:
    i, n = 0, len(codes)
    while i < n and stack and stack[-1] == -codes[i]:
        stack.pop()
        i += 1
    if i:
        stack.extend(codes[i:])
    else:
        stack.extend(codes)


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    nfactors: int
    bad_basis_index: int | None = None
    residue_length: int | None = None


def verify_certificate(c: Certificate) -> bool:
    """Freely reduce the factor product and compare with the target.

    Raises :class:`BasisError` if some factor's relator is not in the
    declared basis; otherwise never raises.
    """
    report = _verify(c, stop_at_bad_basis=True)
    return report.ok


def verify_certificate_detailed(c: Certificate) -> VerifyReport:
    """Like :func:`verify_certificate` but reports instead of raising."""
    return _verify(c, stop_at_bad_basis=False)


def _verify(c: Certificate, stop_at_bad_basis: bool) -> VerifyReport:
    basis = c.basis
    seen_ok: set[tuple[int, ...]] = set()
    stack: list[int] = []
    count = 0
    bad_index: int | None = None
    for rel, exp, cj in c.iter_raw():
        if rel.codes not in seen_ok:
            if not basis.contains_relator(rel):
                if stop_at_bad_basis:
                    raise BasisError(
                        f"factor {count}: relator {word_to_str(rel)!r} not in basis"
                    )
                if bad_index is None:
                    bad_index = count
            else:
                seen_ok.add(rel.codes)
        inv_cj = tuple(-x for x in reversed(cj))
        _push_codes(stack, inv_cj)
        _push_codes(stack, rel.codes if exp == 1 else tuple(-x for x in reversed(rel.codes)))
        _push_codes(stack, cj)
        count += 1
    ok = bad_index is None and tuple(stack) == c.target.codes
    residue = None
    if tuple(stack) != c.target.codes:
        residue = len(stack)
    return VerifyReport(ok=ok, nfactors=count, bad_basis_index=bad_index, residue_length=residue)


# ---------------------------------------------------------------------------
# identity templates (the two diagram decompositions)


@dataclass(frozen=True)
class IdentityInstance:
    """An instantiated identity: lhs equals the product of rhs_factors."""

    lhs: Word
    rhs_factors: tuple[Word, ...]
    template: str
    parameters: tuple[Word, ...]


def _require_piece(w: Word, name: str) -> None:
    if w.is_empty():
        raise ValueError(f"{name} must be nonempty")
    if not w.is_unbarred():
        raise ValueError(f"{name} must be unbarred")


def eq1_instance(alpha: Word, eps: Word, beta: Word) -> IdentityInstance:
    """The four-factor decomposition of ``[b e a, bar(b e a)]``.

    Factors: ``[a,~a]``, ``([~a^-1,e][a^-1,~e]^-1)^(a ~a)``,
    ``([~a^-1,b]^(e ~e^-1) [~b,a^-1])^(a ~e ~a)`` and
    ``[(~b ~e)^-1, b e]^(a ~b ~e ~a)``.
    """
    for w, name in ((alpha, "alpha"), (eps, "eps"), (beta, "beta")):
        _require_piece(w, name)
    a, e, b = alpha, eps, beta
    ab, eb, bb = bar(a), bar(e), bar(b)
    f1 = comm(a, ab)
    f2 = conj(mul(comm(inv(ab), e), inv(comm(inv(a), eb))), mul(a, ab))
    f3 = conj(
        mul(conj(comm(inv(ab), b), mul(e, inv(eb))), comm(bb, inv(a))),
        mul_all(a, eb, ab),
    )
    f4 = conj(comm(inv(mul(bb, eb)), mul(b, e)), mul_all(a, bb, eb, ab))
    lhs = comm(mul_all(b, e, a), mul_all(bb, eb, ab))
    if mul_all(f1, f2, f3, f4) != lhs:
        raise IdentityError("four-face identity failed to reduce")
    return IdentityInstance(lhs, (f1, f2, f3, f4), "EQ1", (alpha, eps, beta))


def eq2_instance(alpha: Word, beta: Word) -> IdentityInstance:
    """The three-factor degeneration of :func:`eq1_instance` at empty eps."""
    for w, name in ((alpha, "alpha"), (beta, "beta")):
        _require_piece(w, name)
    a, b = alpha, beta
    ab, bb = bar(a), bar(b)
    f1 = comm(a, ab)
    f2 = conj(mul(comm(inv(ab), b), comm(bb, inv(a))), mul(a, ab))
    f3 = conj(comm(inv(bb), b), mul_all(a, bb, ab))
    lhs = comm(mul(b, a), mul(bb, ab))
    if mul_all(f1, f2, f3) != lhs:
        raise IdentityError("three-face identity failed to reduce")
    return IdentityInstance(lhs, (f1, f2, f3), "EQ2", (alpha, beta))


# ---------------------------------------------------------------------------
# shared certificate assembly steps

_Resolver = Callable[[Word], _CE]


def _star_word(u: Word, v: Word) -> Word:
    return mul(comm(inv(bar(u)), v), comm(bar(v), inv(u)))


def _star_expr(u: Word, v: Word, resolve: _Resolver) -> _CE:
    """Certificate for ``[bar(u)^-1, v] [bar(v), u^-1]``.

    Rearranges the three-face identity: the star factor equals
    ``(box(u)^-1 box(vu) (box(v)^-1)^(bar(v)^-1 u bar(v) bar(u)))^((u bar(u))^-1)``.
    """
    ub, vb = bar(u), bar(v)
    cu = resolve(u)
    cv = resolve(v)
    cvu = resolve(mul(v, u))
    inner = _ce_prod(
        _ce_inv(cu),
        cvu,
        _ce_inv(_ce_conj(cv, mul_all(inv(vb), u, vb, ub))),
    )
    s = _ce_conj(inner, mul(inv(ub), inv(u)))
    if s.target != _star_word(u, v):
        raise IdentityError("star assembly failed")
    return s


def _fwd_bracket(base: _CE, b: Word, e: Word, a: Word, sab: _CE, resolve: _Resolver) -> _CE:
    """From a certificate of box(b e a), extract ``[[bar(a)^-1, b], e bar(e)^-1]``."""
    ab, eb, bb = bar(a), bar(e), bar(b)
    x = comm(inv(ab), b)
    f1 = resolve(a)
    f2 = _ce_conj(_star_expr(a, e, resolve), mul(a, ab))
    v = mul(b, e)
    f4 = _ce_conj(resolve(v), mul_all(inv(bar(v)), a, bb, eb, ab))
    c3 = mul_all(a, eb, ab)
    inner3 = _ce_conj(
        _ce_prod(_ce_inv(f2), _ce_inv(f1), base, _ce_inv(f4)), inv(c3)
    )
    k = _ce_conj(_ce_prod(inner3, _ce_inv(sab)), x)
    if k.target != comm(x, mul(e, inv(eb))):
        raise IdentityError("bracket extraction failed")
    return k


def _flip_bracket(k1: _CE, x: Word, e: Word, resolve: _Resolver) -> _CE:
    """Invert the epsilon leg: from ``[X, e bar(e)^-1]`` to ``[X, e^-1 bar(e)]``.

    Uses the exact identity ``bar(e) e^-1 = e^-1 bar(e) [bar(e), e^-1]``
    with ``[bar(e), e^-1] = box(e)^(e^-1)``.
    """
    eb = bar(e)
    g1 = mul(e, inv(eb))
    cd = _ce_conj(resolve(e), inv(e))
    d = cd.target
    if d != comm(eb, inv(e)):
        raise IdentityError("epsilon-inversion auxiliary failed")
    x_dinv = _ce_prod(_ce_conj(cd, x), _ce_inv(cd))  # [X, d^-1] = d^X d^-1
    x_g1inv = _ce_inv(_ce_conj(k1, inv(g1)))  # [X, g1^-1]
    k = _ce_prod(x_dinv, _ce_conj(x_g1inv, inv(d)))
    if k.target != comm(x, mul(inv(e), eb)):
        raise IdentityError("epsilon inversion failed")
    return k


def _bwd_box(k: _CE, b: Word, e: Word, a: Word, sab: _CE, resolve: _Resolver) -> _CE:
    """Assemble box(b e a) from the bracket certificate ``[[bar(a)^-1,b], e bar(e)^-1]``."""
    ab, eb, bb = bar(a), bar(e), bar(b)
    x = comm(inv(ab), b)
    f1 = resolve(a)
    f2 = _ce_conj(_star_expr(a, e, resolve), mul(a, ab))
    f3 = _ce_conj(_ce_prod(_ce_conj(k, inv(x)), sab), mul_all(a, eb, ab))
    v = mul(b, e)
    f4 = _ce_conj(resolve(v), mul_all(inv(bar(v)), a, bb, eb, ab))
    ce = _ce_prod(f1, f2, f3, f4)
    w = mul_all(b, e, a)
    if w.is_empty() or ce.target != box(w):
        raise IdentityError("box assembly failed")
    return ce


def _global_inv_expr(w: Word, cert_inv: _CE) -> _CE:
    """box(w) from box(w^-1) via ``box(w) = box(w^-1)^(w bar(w))``."""
    ce = _ce_conj(cert_inv, mul(w, bar(w)))
    if ce.target != box(w):
        raise IdentityError("inversion conversion failed")
    return ce


# ---------------------------------------------------------------------------
# star certificates over the length-bounded variant basis


def _boxn_resolver(n: int, m: int) -> _Resolver:
    def resolve(u: Word) -> _CE:
        if u.is_empty():
            return _ce_empty(m)
        if len(u.codes) > n:
            raise LengthBudgetError(f"|{word_to_str(u)}| > {n}")
        ustar = inverse_class_rep(u)
        ce = _ce_inv(_ce_conj(_ce_atom(boxinv(ustar), 1), bar(ustar)))
        if ustar != u:
            ce = _global_inv_expr(u, ce)
        elif ce.target != box(u):
            raise IdentityError("variant-relator conversion failed")
        return ce

    return resolve


def star_certificate(u: Word, v: Word, n: int) -> Certificate:
    """A verified certificate for ``[bar(u)^-1, v][bar(v), u^-1]`` over boxn(n)."""
    _require_piece(u, "u")
    _require_piece(v, "v")
    if u.rank != v.rank:
        raise ValueError("rank mismatch")
    if len(u.codes) + len(v.codes) > n:
        raise LengthBudgetError(
            f"|u| + |v| = {len(u.codes) + len(v.codes)} exceeds the bound {n}"
        )
    expr = _star_expr(u, v, _boxn_resolver(n, u.rank))
    cert = Certificate(expr.target, Basis.boxn_basis(n, u.rank), expr=expr)
    if not verify_certificate(cert):
        raise IdentityError("star certificate failed verification")
    return cert


# ---------------------------------------------------------------------------
# monomialization (word-level moves with a replayable trace)


@dataclass(frozen=True)
class Move:
    kind: str  # SWAP | SIGN-FLIP | SQUARE-CANCEL | FREE-CANCEL
    pos: int
    before: Word
    after: Word
    note: str


@dataclass(frozen=True)
class MoveTrace:
    moves: tuple[Move, ...]


def _apply_move(w: Word, kind: str, pos: int) -> Word:
    codes = list(w.codes)
    if kind == "SIGN-FLIP":
        codes[pos] = -codes[pos]
    elif kind == "SWAP":
        codes[pos], codes[pos + 1] = codes[pos + 1], codes[pos]
    elif kind in ("SQUARE-CANCEL", "FREE-CANCEL"):
        del codes[pos : pos + 2]
    else:
        raise ValueError(f"unknown move {kind}")
    return Word(codes, w.rank)


def monomialize(w0: Word) -> tuple[Word, MoveTrace]:
    """Transform an unbarred word into an ascending positive square-free monomial.

    Moves, in priority order: cancel an adjacent inverse pair, collapse an
    adjacent equal pair, swap a descending adjacent pair, flip a negative
    letter.  Each record names the epsilon-inversion instance justifying it
    and the trace replays exactly.
    """
    if not w0.is_unbarred():
        raise ValueError("monomialize expects an unbarred word")
    moves: list[Move] = []
    w = w0
    while True:
        codes = w.codes
        move: tuple[str, int, str] | None = None
        for p in range(len(codes) - 1):
            if codes[p] == -codes[p + 1]:
                move = ("FREE-CANCEL", p, "free reduction of an inverse pair")
                break
        if move is None:
            for p in range(len(codes) - 1):
                if codes[p] == codes[p + 1]:
                    move = (
                        "SQUARE-CANCEL",
                        p,
                        f"eps-inversion with eps = position {p + 1} turns the square "
                        "into an inverse pair, which cancels",
                    )
                    break
        if move is None:
            for p in range(len(codes) - 1):
                if _code_index(codes[p]) > _code_index(codes[p + 1]):
                    move = (
                        "SWAP",
                        p,
                        f"eps-inversion with eps = positions {p}..{p + 1}, then "
                        "letterwise sign restoration",
                    )
                    break
        if move is None:
            for p, c in enumerate(codes):
                if c < 0:
                    move = ("SIGN-FLIP", p, f"eps-inversion with eps = position {p}")
                    break
        if move is None:
            break
        kind, pos, note = move
        nxt = _apply_move(w, kind, pos)
        moves.append(Move(kind, pos, w, nxt, note))
        w = nxt
    return w, MoveTrace(tuple(moves))


def replay_moves(w0: Word, trace: MoveTrace) -> Word:
    """Re-apply a move trace, checking each recorded step."""
    w = w0
    for mv in trace.moves:
        if mv.before != w:
            raise IdentityError(f"trace desynchronized at {mv}")
        w = _apply_move(w, mv.kind, mv.pos)
        if w != mv.after:
            raise IdentityError(f"move does not reproduce its record: {mv}")
    return w


# ---------------------------------------------------------------------------
# the derivation engine over the schedule basis

_COST_BASE = 2.6


class _Deriver:
    """Per-rank derivation state: schedule atoms plus memoized certificates."""

    def __init__(self, m: int):
        self.m = m
        self.memo: dict[tuple[int, ...], _CE] = {}
        self.star_memo: dict[tuple[tuple[int, ...], tuple[int, ...]], _CE] = {}

    # -- resolution --------------------------------------------------------

    def resolve(self, u: Word) -> _CE:
        if u.is_empty():
            return _ce_empty(self.m)
        return self.derive(u)

    def star(self, u: Word, v: Word) -> _CE:
        key = (u.codes, v.codes)
        hit = self.star_memo.get(key)
        if hit is None:
            hit = _star_expr(u, v, self.resolve)
            self.star_memo[key] = hit
        return hit

    def derive(self, w: Word) -> _CE:
        if not w.codes:
            return _ce_empty(self.m)
        ce = self.memo.get(w.codes)
        if ce is None:
            ce = self._derive(w)
            self.memo[w.codes] = ce
        return ce

    # -- the move chooser ---------------------------------------------------

    def _derive(self, w: Word) -> _CE:
        m = self.m
        ups = _upsilon_codes(m)
        if w.codes in ups:
            return _ce_atom(box(w), 1)
        wi = inv(w)
        if wi.codes in ups:
            return _global_inv_expr(w, _ce_atom(box(wi), 1))
        codes = w.codes
        L = len(codes)
        if L == 1:
            raise IdentityError("single generators must be schedule atoms")
        if L == 2 and _code_index(codes[0]) == _code_index(codes[1]):
            return self._square_expr(w)
        step = self._best_pair_move(w)
        if step is not None:
            return self._apply_pair_move(w, *step)
        # interior normalization: negatives, then inversions, then the
        # inverse-class conversion onto the schedule representative
        interior = range(1, L - 1)
        for p in interior:
            if codes[p] < 0:
                return self._pull(w, p, p + 1, self.derive(_flip_at(w, p, p + 1)))
        for p in interior:
            if p + 1 < L - 1 and _code_index(codes[p]) > _code_index(codes[p + 1]):
                return self._transpose(w, p)
        return _global_inv_expr(w, self.derive(wi))

    def _square_expr(self, w: Word) -> _CE:
        # w = x^{+-2}; box(x^2) = (box(x) box(x)^bar(x))^x (box(x) box(x)^bar(x))
        codes = w.codes
        if codes[0] < 0:
            return _global_inv_expr(w, self.derive(inv(w)))
        x = Word(codes[:1], self.m, _reduce=False)
        cx = self.resolve(x)
        half = _ce_prod(cx, _ce_conj(cx, bar(x)))
        ce = _ce_prod(_ce_conj(half, x), half)
        if ce.target != box(w):
            raise IdentityError("square expansion failed")
        return ce

    # -- pair-cancellation moves --------------------------------------------

    def _best_pair_move(self, w: Word) -> tuple[int, int, str] | None:
        codes = w.codes
        L = len(codes)
        idx = [_code_index(c) for c in codes]
        best: tuple | None = None
        for i in range(L):
            for j in range(i + 1, L):
                if idx[i] != idx[j]:
                    continue
                if i == 0 and j == L - 1:
                    continue  # endpoint pair: schedule shape, not a move
                for variant in ("A", "B"):
                    if variant == "A" and i < 1:
                        continue
                    if variant == "B" and j > L - 2:
                        continue
                    cost = self._move_cost(w, i, j, variant)
                    cand = (cost, j - i, i, variant, j)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            return None
        _, _, i, variant, j = best
        return (i, j, variant)

    @staticmethod
    def _split(w: Word, i: int, j: int, variant: str) -> tuple[Word, Word, Word]:
        codes = w.codes
        m = w.rank
        if variant == "A":
            b, e, a = codes[:i], codes[i:j], codes[j:]
        else:
            b, e, a = codes[: i + 1], codes[i + 1 : j + 1], codes[j + 1 :]
        return (
            Word(b, m, _reduce=False),
            Word(e, m, _reduce=False),
            Word(a, m, _reduce=False),
        )

    def _move_cost(self, w: Word, i: int, j: int, variant: str) -> float:
        b, e, a = self._split(w, i, j, variant)
        lengths = [len(mul(b, a).codes)] * 2
        lengths += [len(mul(b, e).codes), len(mul(b, inv(e)).codes)]
        lengths += [len(mul(e, a).codes), len(mul(inv(e), a).codes)]
        lengths += [len(a.codes)] * 6 + [len(b.codes)] * 2 + [len(e.codes)] * 4
        cost = sum(_COST_BASE ** min(x, 24) for x in lengths)
        w1 = mul_all(b, inv(e), a)
        if len(w1.codes) >= len(w.codes):
            # a second, cancelling move on the created pair will be needed
            cost += 2 * _COST_BASE ** min(len(w1.codes) - 1, 24) + cost * 0.5
        return cost

    def _apply_pair_move(self, w: Word, i: int, j: int, variant: str) -> _CE:
        b, e, a = self._split(w, i, j, variant)
        w1 = mul_all(b, inv(e), a)
        if len(w1.codes) < len(w.codes):
            base = self.derive(w1)
        else:
            base = self.memo.get(w1.codes)
            if base is None:
                p = _find_adjacent_pair(w1)
                if p is None:
                    raise IdentityError("expected a cancellable pair after the flip")
                base = self._cancel_at(w1, p)
                self.memo[w1.codes] = base
        return self._pull_with_split(w, b, e, a, base)

    def _cancel_at(self, w: Word, p: int) -> _CE:
        # w[p] == w[p+1]; flip one of them so the pair reduces away
        L = len(w.codes)
        if p + 2 <= L - 1:
            i, j = p, p + 2  # variant B on the second letter
            b, e, a = self._split(w, p, p + 1, "B")
        else:
            b, e, a = self._split(w, p, p + 1, "A")
        w2 = mul_all(b, inv(e), a)
        if len(w2.codes) >= len(w.codes):
            raise IdentityError("cancelling move failed to shorten")
        return self._pull_with_split(w, b, e, a, self.derive(w2))

    def _transpose(self, w: Word, p: int) -> _CE:
        # descending adjacent interior pair x y at (p, p+1):
        # chain w -> w1 (pair inverted) -> w2 -> w3 (transposed), pulled back
        w1 = _flip_at(w, p, p + 2)
        w2 = _flip_at(w1, p, p + 1)
        w3 = _flip_at(w2, p + 1, p + 2)
        ce3 = self.derive(w3)
        ce2 = self._pull(w2, p + 1, p + 2, ce3)
        self.memo.setdefault(w2.codes, ce2)
        ce1 = self._pull(w1, p, p + 1, ce2)
        self.memo.setdefault(w1.codes, ce1)
        return self._pull(w, p, p + 2, ce1)

    # -- the epsilon-inversion pull -----------------------------------------

    def _pull(self, w: Word, i: int, j: int, base: _CE) -> _CE:
        """Certificate of box(w) from the certificate of box(w[:i] w[i:j]^-1 w[j:])."""
        m = w.rank
        b = Word(w.codes[:i], m, _reduce=False)
        e = Word(w.codes[i:j], m, _reduce=False)
        a = Word(w.codes[j:], m, _reduce=False)
        return self._pull_with_split(w, b, e, a, base)

    def _pull_with_split(self, w: Word, b: Word, e: Word, a: Word, base: _CE) -> _CE:
        if b.is_empty() or e.is_empty() or a.is_empty():
            raise IdentityError("inversion move needs three nonempty pieces")
        ei = inv(e)
        x = comm(inv(bar(a)), b)
        sab = self.star(a, b)
        k1 = _fwd_bracket(base, b, ei, a, sab, self.resolve)
        k = _flip_bracket(k1, x, ei, self.resolve)
        ce = _bwd_box(k, b, e, a, sab, self.resolve)
        if ce.target != box(w):
            raise IdentityError("pull did not land on the requested box relator")
        return ce


def _flip_at(w: Word, i: int, j: int) -> Word:
    m = w.rank
    b = Word(w.codes[:i], m, _reduce=False)
    e = Word(w.codes[i:j], m, _reduce=False)
    a = Word(w.codes[j:], m, _reduce=False)
    return mul_all(b, inv(e), a)


def _find_adjacent_pair(w: Word) -> int | None:
    codes = w.codes
    for p in range(len(codes) - 1):
        if codes[p] == codes[p + 1]:
            return p
    return None


_DERIVERS: dict[int, _Deriver] = {}


def _deriver(m: int) -> _Deriver:
    d = _DERIVERS.get(m)
    if d is None:
        d = _DERIVERS.setdefault(m, _Deriver(m))
    return d


def derive_box(w: Word, m: int) -> Certificate:
    """A verified certificate for ``box(w)`` over the rank-``m`` schedule basis.

    Total for every nonempty unbarred reduced word; deterministic, with
    memoization shared per rank.
    """
    if w.rank != m:
        raise ValueError(f"word rank {w.rank} != m = {m}")
    _require_piece(w, "w")
    expr = _deriver(m).derive(w)
    return Certificate(target=box(w), basis=Basis.upsilon_basis(m), expr=expr)


# ---------------------------------------------------------------------------
# relator-form conversions


def canonicalize_box(r: BoxRelator) -> tuple[BoxRelator, ConjugatedRelator]:
    """Canonical variant representative plus the conjugation data realizing it.

    The canonical form is ``[u*, bar(u*)^-1]`` with ``u*`` the inverse-class
    representative of the base; the returned adjustment satisfies
    ``r.word() == adjustment.value()`` (checked by free reduction).
    """
    u = r.base
    ustar = inverse_class_rep(u)
    canonical = BoxRelator(ustar, BoxForm.BOXINV)
    if u == ustar:
        conj0 = Word.empty(u.rank)
    else:
        # [u, bar(u)^-1] = [u*, bar(u*)^-1] ^ (bar(u*) u*^-1)
        conj0 = mul(bar(ustar), inv(ustar))
    if r.form is BoxForm.BOXINV:
        adj = ConjugatedRelator(canonical.word(), 1, conj0)
    else:
        # box(u) = (boxinv(u)^bar(u))^-1
        adj = ConjugatedRelator(canonical.word(), -1, mul(conj0, bar(u)))
    if adj.value() != r.word():
        raise IdentityError("canonicalization conversion failed")
    return canonical, adj


# ---------------------------------------------------------------------------
# serialization


def certificate_to_json(c: Certificate) -> str:
    """Canonical JSON encoding (bit-exact round-trip with :func:`certificate_from_json`)."""
    basis: dict[str, object] = {"mode": c.basis.mode, "rank": c.basis.rank}
    if c.basis.bound is not None:
        basis["bound"] = c.basis.bound
    obj = {
        "target": word_to_str(c.target),
        "basis": basis,
        "factors": [
            {
                "relator": word_to_str(f.relator),
                "exp": f.exponent,
                "conj": word_to_str(f.conjugator),
            }
            for f in c.iter_factors()
        ],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def certificate_from_json(text: str) -> Certificate:
    obj = json.loads(text)
    b = obj["basis"]
    mode = b["mode"]
    rank = int(b["rank"])
    if mode == Basis.UPSILON:
        basis = Basis.upsilon_basis(rank)
    elif mode == Basis.BOXN:
        basis = Basis.boxn_basis(int(b["bound"]), rank)
    else:
        raise ValueError(f"unknown basis mode {mode!r}")
    factors = tuple(
        ConjugatedRelator(
            parse_word(f["relator"], rank),
            int(f["exp"]),
            parse_word(f["conj"], rank),
        )
        for f in obj["factors"]
    )
    for f in factors:
        if f.exponent not in (1, -1):
            raise ValueError("factor exponent must be +-1")
    return Certificate(
        target=parse_word(obj["target"], rank), basis=basis, factors=factors
    )
