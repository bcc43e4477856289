"""Finite presentations of the weak-commutativity groups X(F_m) and X(G).

The relator schedule ``upsilon(m)`` is the canonical finite list of base
words whose box relators ``[w, bar(w)]`` present X(F_m); its size is the
closed-form count :func:`v`.  Doubling a finite presentation of G and
adjoining the schedule's box relators presents X(G).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .words import (
    Word,
    bar,
    box,
    default_names,
    exponent_vector,
    gen,
    inv,
    mul,
    mul_all,
    parse_word,
    word_sort_key,
    word_to_str,
)


def v(m: int) -> int:
    """Number of box relators in the canonical presentation of X(F_m).

    ``v(m) = m + 2m(m-1) + sum_{s=1}^{m-1} C(m,s) [3(m-s) + 4 C(m-s,2)]``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = m + 2 * m * (m - 1)
    for s in range(1, m):
        total += math.comb(m, s) * (3 * (m - s) + 4 * math.comb(m - s, 2))
    return total


def v_full(m: int) -> int:
    """Size of the literal (unreduced) schedule emitted by ``upsilon(m, full=True)``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = m + 2 * m * (m - 1)
    for s in range(1, m):
        total += math.comb(m, s) * (4 * (m - s) + 8 * math.comb(m - s, 2))
    return total


@dataclass(frozen=True)
class UpsilonSchedule:
    rank: int
    words: tuple[Word, ...]


def _schedule_words(m: int, full: bool) -> list[Word]:
    words: list[Word] = [gen(i, m) for i in range(1, m + 1)]
    for i, j in itertools.combinations(range(1, m + 1), 2):
        ai, aj = gen(i, m), gen(j, m)
        words += [mul(ai, aj), mul(ai, inv(aj)), mul(inv(ai), aj), mul(aj, ai)]
    for s in range(1, m):
        for combo in itertools.combinations(range(1, m + 1), s):
            w0 = Word(tuple(2 * i - 1 for i in combo), m)
            outside = [k for k in range(1, m + 1) if k not in combo]
            for k in outside:
                ak = gen(k, m)
                words += [
                    mul_all(ak, w0, ak),
                    mul_all(ak, w0, inv(ak)),
                    mul_all(inv(ak), w0, ak),
                ]
                if full:
                    words.append(mul_all(inv(ak), w0, inv(ak)))
            for k, j in itertools.combinations(outside, 2):
                ak, aj = gen(k, m), gen(j, m)
                words += [
                    mul_all(ak, w0, aj),
                    mul_all(ak, w0, inv(aj)),
                    mul_all(inv(ak), w0, aj),
                    mul_all(aj, w0, ak),
                ]
                if full:
                    words += [
                        mul_all(inv(ak), w0, inv(aj)),
                        mul_all(aj, w0, inv(ak)),
                        mul_all(inv(aj), w0, ak),
                        mul_all(inv(aj), w0, inv(ak)),
                    ]
    return words


def upsilon(m: int, *, full: bool = False) -> UpsilonSchedule:
    """The canonical relator schedule for X(F_m).

    Emits, in deterministic order (length, then letterwise by index/sign):
    the single generators, the four two-letter shapes per index pair, and
    for every ascending square-free monomial w0 the endpoint words
    ``b0 w0 a0`` with endpoints outside the support of w0.  One
    representative per inverse pair; total size ``v(m)``.  With
    ``full=True`` the literal endpoint-sign superset is emitted instead
    (size ``v_full(m)``).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    words = sorted(_schedule_words(m, full), key=word_sort_key)
    return UpsilonSchedule(rank=m, words=tuple(words))


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names plus relator words.

    Generators are identified positionally with the unbarred letters
    ``1..m``; a second block of names prefixed ``~`` (if present) is
    identified with the barred letters.  ``labels`` holds an optional
    display expression per relator (e.g. ``[a,~a]``); when present it must
    parse back to the relator word.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    labels: tuple[str | None, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("presentation needs at least one generator")
        if not self.labels:
            object.__setattr__(self, "labels", (None,) * len(self.relators))
        if len(self.labels) != len(self.relators):
            raise ValueError("labels and relators must align")
        m = self.rank
        doubled = self.is_doubled
        for r in self.relators:
            if r.rank != m:
                raise ValueError(f"relator rank {r.rank} != presentation rank {m}")
            if not doubled and not r.is_unbarred():
                raise ValueError("barred letter in a presentation without barred generators")

    @property
    def rank(self) -> int:
        n = len(self.generators)
        return n // 2 if self.is_doubled else n

    @property
    def is_doubled(self) -> bool:
        n = len(self.generators)
        if n % 2:
            return False
        half = n // 2
        return all(
            self.generators[half + i] == "~" + self.generators[i] for i in range(half)
        )

    def unbarred_names(self) -> tuple[str, ...]:
        return self.generators[: self.rank] if self.is_doubled else self.generators

    def relator_str(self, i: int) -> str:
        if self.labels[i] is not None:
            return self.labels[i]
        return word_to_str(self.relators[i], self.unbarred_names())


def free_presentation(m: int, names: Sequence[str] | None = None) -> Presentation:
    names = tuple(names if names is not None else default_names(m))
    return Presentation(generators=names, relators=())


def _box_label(u: Word, names: Sequence[str]) -> str:
    w = word_to_str(u, names)
    wb = word_to_str(bar(u), names)
    return f"[{w},{wb}]"


def x_presentation_free(m: int, *, full: bool = False) -> Presentation:
    """Presentation of X(F_m): doubled generators, box relators over the schedule."""
    return x_presentation_of(free_presentation(m), full=full)


def x_presentation_of(p: Presentation, *, full: bool = False) -> Presentation:
    """The doubled presentation of X(G) from a finite presentation of G.

    Generators are doubled; the relators are the originals, their barred
    copies, and the box relators ``[w, bar(w)]`` for ``w`` in the schedule.
    """
    if p.is_doubled:
        raise ValueError("input presentation is already doubled")
    m = p.rank
    names = p.unbarred_names()
    gens = names + tuple("~" + g for g in names)
    relators: list[Word] = list(p.relators)
    labels: list[str | None] = [p.relator_str(i) for i in range(len(p.relators))]
    for r in p.relators:
        relators.append(bar(r))
        labels.append(word_to_str(bar(r), names))
    for u in upsilon(m, full=full).words:
        relators.append(box(u))
        labels.append(_box_label(u, names))
    return Presentation(generators=gens, relators=tuple(relators), labels=tuple(labels))


# ---------------------------------------------------------------------------
# numeric bounds from the relator count


def h2_bound(d_h2_g: int, m: int) -> int:
    """Upper bound ``2 d(H_2(G)) + v(m)`` on d(H_2(X(G))) for m-generator G."""
    if d_h2_g < 0:
        raise ValueError("d_h2_g must be >= 0")
    return 2 * d_h2_g + v(m)


def w_nontrivial_criterion(d_h2_g: int, m: int) -> bool:
    """True iff ``d(H_2(G)) > v(m)``.

    For perfect m-generator G this forces W(G) to be non-trivial; the
    perfectness hypothesis is the caller's responsibility.
    """
    if d_h2_g < 0:
        raise ValueError("d_h2_g must be >= 0")
    return d_h2_g > v(m)


# ---------------------------------------------------------------------------
# export formats


class ExportFormat(Enum):
    PLAIN = "plain"
    GAP = "gap"
    MAGMA = "magma"
    JSON = "json"


def _cas_name(name: str) -> str:
    return name.replace("~", "") + "_bar" if name.startswith("~") else name


def _cas_relator(w: Word, sym: Sequence[str]) -> str:
    if w.is_empty():
        return "IDENTITY"
    parts = []
    for letter in w.codes:
        base = abs(letter)
        idx = (base + 1) // 2 - 1 + (w.rank if base % 2 == 0 else 0)
        parts.append(sym[idx] + ("^-1" if letter < 0 else ""))
    return "*".join(parts)


def export(p: Presentation, format: ExportFormat | str) -> str:
    """Render a presentation as deterministic, re-parseable text.

    GAP and MAGMA outputs are syntactically valid scripts declaring a free
    group and the relator list; JSON round-trips through
    :func:`parse_presentation_json`.
    """
    fmt = ExportFormat(format) if not isinstance(format, ExportFormat) else format
    n_rel = len(p.relators)
    if fmt is ExportFormat.PLAIN:
        lines = ["gens: " + ", ".join(p.generators), "rels:"]
        lines += [p.relator_str(i) for i in range(n_rel)]
        return "\n".join(lines) + "\n"
    if fmt is ExportFormat.JSON:
        return presentation_to_json(p)
    names = [_cas_name(g) for g in p.generators]
    if fmt is ExportFormat.GAP:
        sym = [f"F.{i + 1}" for i in range(len(names))]
        rels = [_cas_relator(w, sym).replace("IDENTITY", "One(F)") for w in p.relators]
        lines = [
            "F := FreeGroup(" + ", ".join(f'"{n}"' for n in names) + ");;",
            "rels := [",
        ]
        lines += [f"  {r}," for r in rels]
        lines += ["];;", "G := F / rels;;"]
        return "\n".join(lines) + "\n"
    if fmt is ExportFormat.MAGMA:
        sym = list(names)
        rels = [_cas_relator(w, sym).replace("IDENTITY", "Id(F)") for w in p.relators]
        lines = [
            f"F<{', '.join(names)}> := FreeGroup({len(names)});",
            "rels := [",
        ]
        lines += [f"  {r}," for r in rels]
        lines += ["];", "G := quo< F | rels >;"]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def presentation_to_json(p: Presentation) -> str:
    obj = {
        "generators": list(p.generators),
        "relators": [p.relator_str(i) for i in range(len(p.relators))],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def parse_presentation_json(text: str) -> Presentation:
    """Parse the JSON presentation schema ``{"generators": [...], "relators": [...]}``."""
    obj = json.loads(text)
    gens = tuple(str(g) for g in obj["generators"])
    half = len(gens) // 2
    doubled = (
        len(gens) % 2 == 0
        and half > 0
        and all(gens[half + i] == "~" + gens[i] for i in range(half))
    )
    rank = half if doubled else len(gens)
    names = gens[:rank] if doubled else gens
    relators = []
    labels = []
    for s in obj.get("relators", []):
        relators.append(parse_word(s, rank, names))
        labels.append(s)
    return Presentation(generators=gens, relators=tuple(relators), labels=tuple(labels))


def parse_plain(text: str) -> Presentation:
    """Parse the PLAIN export format back into a presentation."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("gens:"):
        raise ValueError("expected 'gens:' header")
    gens = tuple(g.strip() for g in lines[0][len("gens:"):].split(",") if g.strip())
    if len(lines) < 2 or lines[1] != "rels:":
        raise ValueError("expected 'rels:' header")
    half = len(gens) // 2
    doubled = (
        len(gens) % 2 == 0
        and half > 0
        and all(gens[half + i] == "~" + gens[i] for i in range(half))
    )
    rank = half if doubled else len(gens)
    names = gens[:rank] if doubled else gens
    relators = tuple(parse_word(s, rank, names) for s in lines[2:])
    return Presentation(generators=gens, relators=relators, labels=tuple(lines[2:]))
