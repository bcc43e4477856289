import itertools
import json
import math

import pytest

from xcomm.presentations import (
    ExportFormat,
    Presentation,
    export,
    free_presentation,
    h2_bound,
    parse_plain,
    parse_presentation_json,
    presentation_to_json,
    upsilon,
    v,
    v_full,
    w_nontrivial_criterion,
    x_presentation_free,
    x_presentation_of,
)
from xcomm.words import (
    Word,
    box,
    exponent_vector,
    inv,
    parse_word,
    word_sort_key,
    word_to_str,
)

PAPER_UPSILON_2 = {
    "a", "b",
    "a b", "a b^-1", "a^-1 b", "b a",
    "a b a", "a^-1 b a", "a b a^-1", "b a b", "b^-1 a b", "b a b^-1",
}

PAPER_W0_A_ROW = {
    "b a b", "b a b^-1", "b^-1 a b",
    "b a c", "b a c^-1", "b^-1 a c",
    "c a b", "c a c", "c a c^-1", "c^-1 a c",
}


def test_v_values():
    assert v(1) == 1
    assert v(2) == 12
    assert v(3) == 54


def test_v4_against_enumeration():
    # independent oracle: the schedule itself, counted
    assert v(4) == len(upsilon(4).words)


def test_v_closed_form_direct():
    # re-evaluate the sum with an independent implementation
    for m in range(1, 9):
        total = m + 2 * m * (m - 1)
        for s in range(1, m):
            total += math.comb(m, s) * (3 * (m - s) + 4 * math.comb(m - s, 2))
        assert v(m) == total


def test_upsilon2_is_papers_list():
    words = {word_to_str(u) for u in upsilon(2).words}
    assert words == PAPER_UPSILON_2


def test_upsilon1():
    assert [word_to_str(u) for u in upsilon(1).words] == ["a"]


def test_upsilon3_size_and_w0_a_row():
    sched = upsilon(3)
    assert len(sched.words) == 54
    words = {word_to_str(u) for u in sched.words}
    assert PAPER_W0_A_ROW <= words


@pytest.mark.parametrize("m", range(1, 7))
def test_upsilon_count_matches_closed_form(m):
    assert len(upsilon(m).words) == v(m)


@pytest.mark.parametrize("m", range(1, 6))
def test_upsilon_full_count(m):
    assert len(upsilon(m, full=True).words) == v_full(m)


@pytest.mark.parametrize("m", range(1, 7))
def test_upsilon_shapes(m):
    sched = upsilon(m)
    seen = set()
    for u in sched.words:
        assert 1 <= len(u) <= m + 1
        assert u.is_unbarred()
        assert u.codes not in seen
        seen.add(u.codes)
        assert inv(u).codes not in seen
        if len(u) >= 3:
            interior = Word(u.codes[1:-1], m)
            # ascending positive square-free interior
            idxs = [(c + 1) // 2 for c in interior.codes]
            assert all(c > 0 for c in interior.codes)
            assert idxs == sorted(idxs) and len(set(idxs)) == len(idxs)
            for endpoint in (u.codes[0], u.codes[-1]):
                assert (abs(endpoint) + 1) // 2 not in idxs
    # no inverse pair within the schedule
    assert all(inv(u).codes not in seen for u in sched.words)


def test_upsilon_deterministic_order():
    sched = upsilon(3)
    assert list(sched.words) == sorted(sched.words, key=word_sort_key)


def test_x_presentation_free_counts():
    p = x_presentation_free(2)
    assert p.generators == ("a", "b", "~a", "~b")
    assert len(p.relators) == 12
    p1 = x_presentation_free(1)
    assert p1.generators == ("a", "~a")
    assert [word_to_str(r) for r in p1.relators] == ["a^-1 ~a^-1 a ~a"]
    p3 = x_presentation_free(3)
    assert len(p3.generators) == 6
    assert len(p3.relators) == 54
    assert all(len(r) <= 4 * 4 for r in p3.relators)  # |w| <= 4, relators length 4|w|


def test_x_presentation_relators_are_commutators():
    for m in (1, 2, 3):
        for r in x_presentation_free(m).relators:
            assert all(e == 0 for e in exponent_vector(r))


def test_x_presentation_of_c2():
    p = parse_presentation_json('{"generators":["a"],"relators":["a a"]}')
    xp = x_presentation_of(p)
    assert xp.generators == ("a", "~a")
    assert [word_to_str(r) for r in xp.relators] == [
        "a a",
        "~a ~a",
        "a^-1 ~a^-1 a ~a",
    ]


def test_x_presentation_of_free_is_x_free():
    assert x_presentation_of(free_presentation(2)).relators == x_presentation_free(2).relators


def test_x_presentation_of_z2_commutator():
    p = parse_presentation_json('{"generators":["a","b"],"relators":["[a,b]"]}')
    xp = x_presentation_of(p)
    assert len(xp.generators) == 4
    assert len(xp.relators) == 2 + 12
    assert xp.relators[0] == parse_word("[a,b]", 2)
    assert xp.relators[1] == parse_word("[~a,~b]", 2)


def test_x_presentation_counts_general():
    p = parse_presentation_json(
        '{"generators":["a","b","c"],"relators":["a a","[b,c]"]}'
    )
    xp = x_presentation_of(p)
    assert len(xp.generators) == 6
    assert len(xp.relators) == 2 * 2 + v(3)


def test_h2_bound():
    assert h2_bound(0, 2) == 12
    assert h2_bound(1, 2) == 14
    assert h2_bound(5, 3) == 64


def test_w_nontrivial_criterion():
    assert w_nontrivial_criterion(13, 2) is True
    assert w_nontrivial_criterion(12, 2) is False
    assert w_nontrivial_criterion(55, 3) is True


class TestExport:
    def test_plain_round_trip(self):
        p = x_presentation_free(1)
        text = export(p, ExportFormat.PLAIN)
        assert text.splitlines()[0] == "gens: a, ~a"
        assert text.splitlines()[1] == "rels:"
        assert text.splitlines()[2] == "[a,~a]"
        back = parse_plain(text)
        assert back.relators == p.relators

    def test_plain_relator_line_count(self):
        text = export(x_presentation_free(2), "plain")
        assert len(text.strip().splitlines()) == 2 + 12

    def test_json_round_trip(self):
        p = x_presentation_free(2)
        blob = export(p, "json")
        back = parse_presentation_json(blob)
        assert back.generators == p.generators
        assert back.relators == p.relators
        assert presentation_to_json(back) == blob

    def test_gap_script_shape(self):
        text = export(x_presentation_free(2), "gap")
        assert text.startswith('F := FreeGroup("a", "b", "a_bar", "b_bar");;')
        assert text.count("F.") > 0
        assert sum(1 for line in text.splitlines() if line.startswith("  ")) == 12
        assert text.rstrip().endswith("G := F / rels;;")

    def test_magma_script_shape(self):
        text = export(x_presentation_free(1), "magma")
        assert "F<a, a_bar> := FreeGroup(2);" in text
        assert "quo< F | rels >" in text

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            export(x_presentation_free(1), "latex")

    def test_deterministic(self):
        a = export(x_presentation_free(3), "gap")
        b = export(x_presentation_free(3), "gap")
        assert a == b


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(generators=("a",), relators=(parse_word("~a", 1),))
    with pytest.raises(ValueError):
        Presentation(generators=("a",), relators=(parse_word("a", 2),))
