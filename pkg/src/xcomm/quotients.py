"""Verification of presentations inside small permutation groups.

Permutations act on ``{1..n}`` (stored 0-based); products compose left to
right, so ``(p * q)(x) = q(p(x))``.  Subgroup orders come from a plain
BFS closure with an explicit element bound -- desk scale only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .presentations import Presentation
from .words import Word, _code_barred, _code_index, inv, mul, reduced_words


class ClosureOverflow(Exception):
    """BFS closure exceeded the element bound."""


OVERFLOW = "OVERFLOW"


@dataclass(frozen=True)
class Perm:
    """A bijection of {1..n}; ``images[i]`` is the 0-based image of point i."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a bijection of 0..{n - 1}: {self.images}")

    @staticmethod
    def identity(n: int) -> Perm:
        return Perm(tuple(range(n)))

    @staticmethod
    def from_one_line(images: Sequence[int]) -> Perm:
        """From a 1-based one-line image list."""
        return Perm(tuple(i - 1 for i in images))

    def one_line(self) -> list[int]:
        return [i + 1 for i in self.images]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: Perm) -> Perm:
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Perm(tuple(o[i] for i in self.images))

    def inverse(self) -> Perm:
        out = [0] * len(self.images)
        for i, j in enumerate(self.images):
            out[j] = i
        return Perm(tuple(out))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))


def direct_pair(p: Perm, q: Perm) -> Perm:
    """(p, q) acting on the disjoint union of two copies of the domain."""
    n = p.degree
    if q.degree != n:
        raise ValueError("degree mismatch")
    return Perm(p.images + tuple(i + n for i in q.images))


@dataclass(frozen=True)
class Assignment:
    """Generator name -> permutation, all of one degree."""

    mapping: Mapping[str, Perm]

    def __post_init__(self) -> None:
        degrees = {p.degree for p in self.mapping.values()}
        if len(degrees) > 1:
            raise ValueError(f"mixed degrees: {sorted(degrees)}")

    @property
    def degree(self) -> int:
        return next(iter(self.mapping.values())).degree

    @staticmethod
    def from_json(text: str) -> Assignment:
        obj = json.loads(text)
        return Assignment({k: Perm.from_one_line(v) for k, v in obj.items()})

    def to_json(self) -> str:
        return json.dumps(
            {k: p.one_line() for k, p in sorted(self.mapping.items())},
            sort_keys=True,
            separators=(",", ":"),
        )


class UnassignedGenerator(KeyError):
    pass


def eval_word_perm(w: Word, asg: Assignment, names: Sequence[str]) -> Perm:
    """Homomorphic evaluation of a word; ``names`` are the unbarred names."""
    acc = Perm.identity(asg.degree)
    for code in w.codes:
        name = ("~" if _code_barred(code) else "") + names[_code_index(code) - 1]
        if name not in asg.mapping:
            raise UnassignedGenerator(name)
        p = asg.mapping[name]
        acc = acc * (p if code > 0 else p.inverse())
    return acc


def verify_quotient(p: Presentation, asg: Assignment) -> bool:
    """True iff every relator evaluates to the identity permutation."""
    names = p.unbarred_names()
    return all(eval_word_perm(r, asg, names).is_identity() for r in p.relators)


def closure_order(gens: Iterable[Perm], bound: int = 10**6) -> int | str:
    """Exact order of the generated subgroup, or ``OVERFLOW`` beyond ``bound``."""
    try:
        return len(closure_elements(gens, bound))
    except ClosureOverflow:
        return OVERFLOW


def closure_elements(gens: Iterable[Perm], bound: int = 10**6) -> set[tuple[int, ...]]:
    gens = list(gens)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if not gens:
        return {()}
    n = gens[0].degree
    seen: set[tuple[int, ...]] = {tuple(range(n))}
    frontier = [tuple(range(n))]
    gen_images = [g.images for g in gens]
    while frontier:
        nxt = []
        for elem in frontier:
            for g in gen_images:
                prod = tuple(g[i] for i in elem)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
                    if len(seen) > bound:
                        raise ClosureOverflow(len(seen))
        frontier = nxt
    return seen


def check_fib_generators(asg_q: Assignment, bound: int = 10**6) -> bool:
    """Check the three-pair generating set of P = <(g, g^-1)> in Q x Q.

    ``asg_q`` assigns the two free generators ``a, b`` to permutations
    generating Q.  Compares the closure of
    ``{(a, a^-1), (b, b^-1), (ab, (ab)^-1)}`` with the closure of
    ``(w, w^-1)`` over a generating sweep of words of length up to
    ``2 log2 |Q| + 2``.
    """
    if not {"a", "b"} <= set(asg_q.mapping):
        raise ValueError("assignment must cover generators 'a' and 'b'")
    pa, pb = asg_q.mapping["a"], asg_q.mapping["b"]
    q_order = closure_order([pa, pb], bound)
    if q_order == OVERFLOW:
        raise ClosureOverflow("Q itself exceeds the bound")
    three = [pa, pb, pa * pb]
    pairs3 = [direct_pair(p, p.inverse()) for p in three]
    c1 = closure_order(pairs3, bound)

    sweep_len = 2 * max(1, math.ceil(math.log2(q_order))) + 2 if q_order > 1 else 2
    images: set[tuple[int, ...]] = set()
    sweep: list[Perm] = []
    asg2 = Assignment({"a": pa, "b": pb})
    for w in reduced_words(sweep_len, 2):
        p = eval_word_perm(w, asg2, ("a", "b"))
        if p.images not in images:
            images.add(p.images)
            sweep.append(p)
        if len(images) >= q_order:
            break
    pairs_all = [direct_pair(p, p.inverse()) for p in sweep]
    c2 = closure_order(pairs_all, bound)
    if OVERFLOW in (c1, c2):
        raise ClosureOverflow("pair subgroup exceeds the bound")
    return c1 == c2
