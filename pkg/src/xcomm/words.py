"""Free-group word engine over the doubled alphabet.

The ambient alphabet of rank ``m`` has the generators ``a_1, ..., a_m``
together with their barred copies ``~a_1, ..., ~a_m`` and all formal
inverses.  Words are always kept freely reduced.

Conventions used throughout the package::

    [x, y] = x^-1 y^-1 x y          (commutator)
    x^y    = y^-1 x y               (conjugation)
    bar    : a_i <-> ~a_i           (involution, fixes signs)

Two relator shapes recur everywhere: ``box(w) = [w, bar(w)]`` and the
variant ``boxinv(w) = [w, bar(w)^-1]``.  They are conjugate up to
inversion: ``box(w) == inv(conj(boxinv(w), bar(w)))``.

Internally a letter is a nonzero int: generator ``a_i`` has the positive
code ``2*i - 1``, its barred copy ``~a_i`` the code ``2*i``, and a
negative code is the inverse letter.  Public accessors expose the
``GenSym``/``Letter`` view; hot paths stay on the int codes.

Canonical text syntax (round-trips through :func:`parse_word` and
:func:`word_to_str`): letters are space-separated tokens such as ``a``,
``b^-1``, ``~a``, ``~c^-1``; ranks above 3 use ``x1 .. xm``.  ``1``
denotes the empty word, and ``[u,v]`` is accepted as commutator sugar.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence


class AlphabetError(ValueError):
    """Letter index out of range for the declared rank."""


class RankMismatchError(ValueError):
    """Operands live over different ambient ranks."""


# ---------------------------------------------------------------------------
# letters


@dataclass(frozen=True)
class GenSym:
    """A generator symbol: ``a_index`` or its barred copy."""

    index: int
    barred: bool = False

    def __post_init__(self) -> None:
        if self.index < 1:
            raise AlphabetError(f"generator index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Letter:
    """A generator symbol with a sign, i.e. one of ``a_i^{+-1}, ~a_i^{+-1}``."""

    sym: GenSym
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> Letter:
        return Letter(self.sym, -self.sign)


def _letter_code(letter: Letter) -> int:
    base = 2 * letter.sym.index - (0 if letter.sym.barred else 1)
    return letter.sign * base


def _code_letter(code: int) -> Letter:
    base = abs(code)
    return Letter(GenSym((base + 1) // 2, base % 2 == 0), 1 if code > 0 else -1)


def _code_index(code: int) -> int:
    return (abs(code) + 1) // 2


def _code_barred(code: int) -> bool:
    return abs(code) % 2 == 0


def _bar_code(code: int) -> int:
    base = abs(code)
    base = base + 1 if base % 2 else base - 1
    return base if code > 0 else -base


def _reduce_codes(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    push = stack.append
    pop = stack.pop
    for c in codes:
        if stack and stack[-1] == -c:
            pop()
        else:
            push(c)
    return tuple(stack)


# ---------------------------------------------------------------------------
# words


class Word:
    """An immutable, freely reduced word over the doubled rank-``m`` alphabet."""

    __slots__ = ("codes", "rank")

    codes: tuple[int, ...]
    rank: int

    def __init__(self, codes: Iterable[int], rank: int, _reduce: bool = True):
        codes = tuple(codes)
        if rank < 1:
            raise AlphabetError(f"rank must be >= 1, got {rank}")
        for c in codes:
            if c == 0 or abs(c) > 2 * rank:
                raise AlphabetError(f"letter code {c} outside rank-{rank} alphabet")
        if _reduce:
            codes = _reduce_codes(codes)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Word is immutable")

    @staticmethod
    def empty(rank: int) -> Word:
        return Word((), rank, _reduce=False)

    @staticmethod
    def from_letters(letters: Sequence[Letter], rank: int) -> Word:
        return Word((_letter_code(l) for l in letters), rank)

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(_code_letter(c) for c in self.codes)

    def is_empty(self) -> bool:
        return not self.codes

    def is_unbarred(self) -> bool:
        return all(not _code_barred(c) for c in self.codes)

    def support(self) -> frozenset[int]:
        """Set of generator indices occurring in the word (bars ignored)."""
        return frozenset(_code_index(c) for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Word)
            and self.codes == other.codes
            and self.rank == other.rank
        )

    def __hash__(self) -> int:
        return hash((self.codes, self.rank))

    def __mul__(self, other: Word) -> Word:
        return mul(self, other)

    def __repr__(self) -> str:
        return f"Word({word_to_str(self)!r}, rank={self.rank})"


def _same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise RankMismatchError(f"rank mismatch: {u.rank} != {v.rank}")


def free_reduce(raw: Sequence[Letter] | Sequence[int] | Word, m: int) -> Word:
    """Freely reduce a raw letter sequence over the rank-``m`` alphabet.

    Idempotent and length-nonincreasing; raises :class:`AlphabetError` if a
    letter index exceeds ``m``.
    """
    if isinstance(raw, Word):
        if raw.rank != m:
            return Word(raw.codes, m)
        return raw
    codes = [c if isinstance(c, int) else _letter_code(c) for c in raw]
    return Word(codes, m)


def _mul_codes(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # both inputs reduced: only boundary cancellation can occur
    k = 0
    la, lb = len(a), len(b)
    kmax = la if la < lb else lb
    while k < kmax and a[la - 1 - k] == -b[k]:
        k += 1
    if k:
        return a[: la - k] + b[k:]
    return a + b


def _inv_codes(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(a))


def mul(u: Word, v: Word) -> Word:
    """Product ``uv``, freely reduced."""
    _same_rank(u, v)
    return Word(_mul_codes(u.codes, v.codes), u.rank, _reduce=False)


def mul_all(*words: Word) -> Word:
    if not words:
        raise ValueError("mul_all needs at least one word")
    acc = words[0].codes
    for w in words[1:]:
        _same_rank(words[0], w)
        acc = _mul_codes(acc, w.codes)
    return Word(acc, words[0].rank, _reduce=False)


def inv(u: Word) -> Word:
    """Inverse ``u^-1``."""
    return Word(_inv_codes(u.codes), u.rank, _reduce=False)


def conj(x: Word, y: Word) -> Word:
    """Conjugate ``x^y = y^-1 x y``."""
    _same_rank(x, y)
    return Word(
        _mul_codes(_mul_codes(_inv_codes(y.codes), x.codes), y.codes),
        x.rank,
        _reduce=False,
    )


def comm(x: Word, y: Word) -> Word:
    """Commutator ``[x, y] = x^-1 y^-1 x y``."""
    _same_rank(x, y)
    c = _mul_codes(_inv_codes(x.codes), _inv_codes(y.codes))
    c = _mul_codes(c, x.codes)
    c = _mul_codes(c, y.codes)
    return Word(c, x.rank, _reduce=False)


def bar(u: Word) -> Word:
    """The bar involution: swap each letter with its barred/unbarred twin."""
    return Word((_bar_code(c) for c in u.codes), u.rank, _reduce=False)


def strip_bars(u: Word) -> Word:
    """Erase bars (``~a_i -> a_i``) and freely reduce."""
    unbar = (
        c - 1 if c > 0 and c % 2 == 0 else c + 1 if c < 0 and c % 2 == 0 else c
        for c in u.codes
    )
    return Word(unbar, u.rank)


def _require_base(w: Word) -> None:
    if w.is_empty():
        raise ValueError("base word must be nonempty")
    if not w.is_unbarred():
        raise ValueError("base word must be unbarred")


def box(w: Word) -> Word:
    """``[w, bar(w)]`` for a nonempty unbarred word ``w``."""
    _require_base(w)
    return comm(w, bar(w))


def boxinv(w: Word) -> Word:
    """The variant relator ``[w, bar(w)^-1]``."""
    _require_base(w)
    return comm(w, inv(bar(w)))


# ---------------------------------------------------------------------------
# box relators and their enumeration


class BoxForm(Enum):
    BOX = "box"        # [w, bar(w)]
    BOXINV = "boxinv"  # [w, bar(w)^-1]


@dataclass(frozen=True)
class BoxRelator:
    base: Word
    form: BoxForm

    def __post_init__(self) -> None:
        _require_base(self.base)

    def word(self) -> Word:
        return box(self.base) if self.form is BoxForm.BOX else boxinv(self.base)


def letter_sort_key(code: int) -> tuple[int, int, int]:
    # positive before negative, unbarred before barred, by index
    return (_code_index(code), 1 if _code_barred(code) else 0, 0 if code > 0 else 1)


def word_sort_key(w: Word) -> tuple:
    """Deterministic ordering: by length, then letterwise (index, sign/bar)."""
    return (len(w.codes), tuple(letter_sort_key(c) for c in w.codes))


def inverse_class_rep(w: Word) -> Word:
    """The smaller of ``w`` and ``w^-1`` under :func:`word_sort_key`."""
    wi = inv(w)
    return w if word_sort_key(w) <= word_sort_key(wi) else wi


def reduced_words(max_len: int, m: int, *, barred: bool = False) -> Iterator[Word]:
    """All freely reduced words of length 1..``max_len``, shortest first."""
    if barred:
        bases = range(1, 2 * m + 1)
    else:
        bases = range(1, 2 * m, 2)
    alphabet = sorted((s * c for c in bases for s in (1, -1)), key=letter_sort_key)
    level: list[tuple[int, ...]] = [()]
    for _ in range(max_len):
        nxt: list[tuple[int, ...]] = []
        for codes in level:
            for c in alphabet:
                if codes and codes[-1] == -c:
                    continue
                nxt.append(codes + (c,))
        for codes in nxt:
            yield Word(codes, m, _reduce=False)
        level = nxt


def box_set(n: int, m: int) -> list[BoxRelator]:
    """The relator family ``[w, bar(w)^-1]`` over reduced unbarred ``w``, |w| <= n.

    One representative per pair ``{w, w^-1}`` (the lexicographically smaller
    base is kept), in deterministic order.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out: list[BoxRelator] = []
    for w in reduced_words(n, m):
        if word_sort_key(w) <= word_sort_key(inv(w)):
            out.append(BoxRelator(w, BoxForm.BOXINV))
    out.sort(key=lambda r: word_sort_key(r.base))
    return out


# ---------------------------------------------------------------------------
# exponent sums (abelianization of the ambient free group)


def exponent_vector(w: Word) -> tuple[int, ...]:
    """Exponent sums: entries ``1..m`` unbarred, ``m+1..2m`` barred."""
    m = w.rank
    vec = [0] * (2 * m)
    for c in w.codes:
        i = _code_index(c) - 1 + (m if _code_barred(c) else 0)
        vec[i] += 1 if c > 0 else -1
    return tuple(vec)


# ---------------------------------------------------------------------------
# text syntax


def default_names(m: int) -> tuple[str, ...]:
    if m <= 3:
        return ("a", "b", "c")[:m]
    return tuple(f"x{i}" for i in range(1, m + 1))


_TOKEN_RE = re.compile(r"~?[A-Za-z_][A-Za-z_0-9]*(?:\^-?\d+)?|\[|\]|,|1|\S")


def _letter_token(code: int, names: Sequence[str]) -> str:
    name = names[_code_index(code) - 1]
    tok = ("~" if _code_barred(code) else "") + name
    return tok + "^-1" if code < 0 else tok


def word_to_str(w: Word, names: Sequence[str] | None = None) -> str:
    """Canonical text form; ``1`` for the empty word."""
    if not w.codes:
        return "1"
    names = names if names is not None else default_names(w.rank)
    return " ".join(_letter_token(c, names) for c in w.codes)


class WordSyntaxError(ValueError):
    pass


def parse_word(text: str, rank: int, names: Sequence[str] | None = None) -> Word:
    """Parse the canonical word syntax (inverse of :func:`word_to_str`).

    Accepts letter powers (``a^3``) and commutator sugar ``[u,v]``.
    """
    names = list(names if names is not None else default_names(rank))
    if len(names) != rank:
        raise WordSyntaxError(f"expected {rank} generator names, got {len(names)}")
    index = {name: i + 1 for i, name in enumerate(names)}
    tokens = _TOKEN_RE.findall(text)

    def parse_seq(pos: int, closing: bool) -> tuple[Word, int]:
        acc = Word.empty(rank)
        while pos < len(tokens):
            tok = tokens[pos]
            if tok in (",", "]"):
                if not closing:
                    raise WordSyntaxError(f"unexpected {tok!r}")
                return acc, pos
            if tok == "[":
                u, pos = parse_seq(pos + 1, True)
                if pos >= len(tokens) or tokens[pos] != ",":
                    raise WordSyntaxError("expected ',' in commutator")
                v, pos = parse_seq(pos + 1, True)
                if pos >= len(tokens) or tokens[pos] != "]":
                    raise WordSyntaxError("expected ']' closing commutator")
                acc = mul(acc, comm(u, v))
                pos += 1
                continue
            if tok == "1":
                pos += 1
                continue
            barred = tok.startswith("~")
            body = tok[1:] if barred else tok
            name, _, exp_s = body.partition("^")
            if name not in index:
                raise WordSyntaxError(f"unknown generator {name!r}")
            exp = int(exp_s) if exp_s else 1
            if exp == 0:
                pos += 1
                continue
            i = index[name]
            code = (2 * i if barred else 2 * i - 1) * (1 if exp > 0 else -1)
            acc = mul(acc, Word((code,) * abs(exp), rank))
            pos += 1
        if closing:
            raise WordSyntaxError("unbalanced '['")
        return acc, pos

    word, _ = parse_seq(0, False)
    return word


# convenience used by tests and the CLI


def gen(i: int, m: int, *, barred: bool = False, sign: int = 1) -> Word:
    """The single-letter word ``a_i`` (or ``~a_i``) of rank ``m``."""
    code = (2 * i if barred else 2 * i - 1) * sign
    return Word((code,), m, _reduce=False)


def all_unbarred_letters(m: int) -> list[Word]:
    return [gen(i, m, sign=s) for i in range(1, m + 1) for s in (1, -1)]


def ascending_monomials(m: int, max_len: int | None = None) -> Iterator[Word]:
    """Nonempty ascending square-free monomials ``a_{i1} ... a_{is}``."""
    top = m if max_len is None else min(m, max_len)
    for s in range(1, top + 1):
        for combo in itertools.combinations(range(1, m + 1), s):
            yield Word(tuple(2 * i - 1 for i in combo), m, _reduce=False)
