import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from sortedrange import (TextIndex, build_text_index, dont_care_match, non_overlapping_sequence,
                         ordered_occurrences, ordered_occurrences_rmq, pattern_range,
                         position_restricted, successive_list_index)
from sortedrange.text import (max_non_overlapping, naive_dont_care, naive_occurrences,
                              naive_suffix_array, parse_dontcare, suffix_array)

ABRA = b"abracadabra"


def test_suffix_array_examples():
    assert list(build_text_index(b"ab").sa) == [1, 2]
    assert list(build_text_index(b"aaa").sa) == [3, 2, 1]
    assert list(build_text_index(ABRA).sa) == naive_suffix_array(ABRA)


def test_empty_text_rejected():
    with pytest.raises(ValueError):
        build_text_index(b"")


@given(st.binary(min_size=1, max_size=200))
def test_suffix_array_property(text):
    assert [int(i) + 1 for i in suffix_array(text)] == naive_suffix_array(text)


def test_pattern_range_examples():
    ti = build_text_index(ABRA)
    assert pattern_range(ti, b"") == pattern_range(ti, b"") and len(pattern_range(ti, b"")) == 11
    assert pattern_range(ti, b"zz").empty
    pr = pattern_range(ti, b"abra")
    assert sorted(ti.sa[r - 1] for r in range(pr.left, pr.right + 1)) == [1, 8]


def test_position_set_bijection():
    ti = build_text_index(ABRA)
    for r in range(1, ti.n + 1):
        got = list(ti.index.iter_sorted(1, ti.n, r, r))
        assert len(got) == 1
        assert ABRA[got[0].x - 1:] == ti.suffix(r)


def test_successive_list_index_examples():
    ti = build_text_index(ABRA)
    assert successive_list_index(ti, b"abra", 2) == 8
    assert successive_list_index(ti, b"abra", 1) == 1
    assert successive_list_index(ti, b"abra", 9) is None


def test_non_overlapping_examples():
    assert non_overlapping_sequence(build_text_index(b"aaaa"), b"aa") == [1, 3]
    assert non_overlapping_sequence(build_text_index(ABRA), b"abra") == [1, 8]
    assert non_overlapping_sequence(build_text_index(ABRA), b"zz") == []


def test_dont_care_examples():
    ti = build_text_index(ABRA)
    assert dont_care_match(ti, [b"ab", b"cad"]) == [1, 5]
    assert dont_care_match(ti, [b"cad"]) == [5]
    assert dont_care_match(ti, [b"cad", b"cad"]) is None
    with pytest.raises(ValueError):
        dont_care_match(ti, [b"a", b""])


def test_ordered_occurrences_examples():
    ti = build_text_index(b"aaaa")
    assert ordered_occurrences(ti, b"aa").collect() == [1, 2, 3]
    assert ordered_occurrences(ti, b"b").collect() == []
    assert ordered_occurrences_rmq(build_text_index(b"aaa"), b"").collect() == [1, 2, 3]
    it = ordered_occurrences_rmq(build_text_index(ABRA), b"cad")
    assert list(it) == [5] and it.exhausted


def test_position_restricted_examples():
    ti = build_text_index(ABRA)
    assert position_restricted(ti, b"a", 1, 11).collect() == ordered_occurrences(ti, b"a").collect()
    assert position_restricted(ti, b"abra", 2, 7).collect() == []
    rng = random.Random(42)
    for _ in range(200):
        i, j = sorted((rng.randint(1, 11), rng.randint(1, 11)))
        pat = rng.choice([b"a", b"ab", b"bra", b"c", b"r"])
        want = [p for p in naive_occurrences(ABRA, pat) if i <= p <= j]
        assert position_restricted(ti, pat, i, j).collect() == want
    with pytest.raises(ValueError):
        position_restricted(ti, b"a", 5, 4)


def test_random_binary_2048():
    rng = random.Random(42)
    text = bytes(rng.choice(b"ab") for _ in range(2048))
    ti = TextIndex(text, stride=2)
    for m in range(1, 9):
        for _ in range(5):
            s = rng.randrange(2048 - m)
            pat = text[s:s + m]
            occ = naive_occurrences(text, pat)
            assert ordered_occurrences(ti, pat).collect() == occ
            assert ordered_occurrences(ti, pat, 3).collect(3) == occ[:3]


def test_rmq_and_position_set_agree_on_512():
    rng = random.Random(1)
    text = bytes(rng.choice(b"acgt") for _ in range(512))
    ti = TextIndex(text)
    for m in range(1, 4):
        for pat in itertools.product(b"acgt", repeat=m):
            pat = bytes(pat)
            a = ordered_occurrences(ti, pat).collect()
            assert a == ordered_occurrences_rmq(ti, pat).collect() == naive_occurrences(text, pat)


@settings(max_examples=80, deadline=None)
@given(st.binary(min_size=1, max_size=40).map(lambda b: bytes(c % 3 + 97 for c in b)),
       st.binary(min_size=1, max_size=4).map(lambda b: bytes(c % 3 + 97 for c in b)))
def test_greedy_chain_is_maximum(text, pat):
    ti = TextIndex(text)
    chain = ti.non_overlapping_sequence(pat)
    assert len(chain) == max_non_overlapping(text, pat)
    assert all(b - a >= len(pat) for a, b in zip(chain, chain[1:]))
    assert set(chain) <= set(naive_occurrences(text, pat))


@settings(max_examples=80, deadline=None)
@given(st.binary(min_size=1, max_size=40).map(lambda b: bytes(c % 2 + 97 for c in b)),
       st.lists(st.binary(min_size=1, max_size=3).map(lambda b: bytes(c % 2 + 97 for c in b)),
                min_size=1, max_size=3))
def test_dont_care_property(text, parts):
    assert TextIndex(text).dont_care_match(parts) == naive_dont_care(text, parts)


def test_parse_dontcare():
    assert parse_dontcare(b"ab*cad") == [b"ab", b"cad"]
    assert parse_dontcare(rb"a\*b*c") == [b"a*b", b"c"]
    assert parse_dontcare(rb"a\\*b") == [b"a\\", b"b"]
    assert parse_dontcare(b"abc") == [b"abc"]
