import bisect
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sortedrange import PredecessorSet, RangeMinMax, RankBitVector, pred_succ, rmq_build, rmq_query


def naive(values, i, j, mode):
    seg = values[i:j + 1]
    best = min(seg) if mode == "min" else max(seg)
    return i + seg.index(best)


def test_rmq_examples():
    assert rmq_query(rmq_build([3, 1, 2]), 0, 2, "min") == 1
    s = rmq_build([7])
    assert rmq_query(s, 0, 0, "min") == 0 and rmq_query(s, 0, 0, "max") == 0
    assert rmq_query(rmq_build([5, 5, 5]), 0, 2, "max") == 0
    assert rmq_query(rmq_build([1, 9, 2]), 1, 2, "max") == 1


def test_rmq_rejects_empty_and_bad_ranges():
    with pytest.raises(ValueError):
        rmq_build([])
    s = rmq_build([1, 2, 3])
    for i, j in [(-1, 1), (2, 1), (0, 3)]:
        with pytest.raises(IndexError):
            s.query(i, j)


@pytest.mark.parametrize("block", [1, 3, 8])
def test_rmq_exhaustive_512(block):
    rng = random.Random(block)
    vals = [rng.randint(0, 40) for _ in range(512)]
    s = RangeMinMax(vals, block=block)
    for i in range(0, 512, 7):
        for j in range(i, 512):
            assert s.query(i, j, "min") == naive(vals, i, j, "min")
            assert s.query(i, j, "max") == naive(vals, i, j, "max")


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=80), st.integers(1, 9), st.data())
def test_rmq_matches_scan(vals, block, data):
    s = RangeMinMax(vals, block=block)
    i = data.draw(st.integers(0, len(vals) - 1))
    j = data.draw(st.integers(i, len(vals) - 1))
    assert s.query(i, j, "min") == naive(vals, i, j, "min")
    assert s.query(i, j, "max") == naive(vals, i, j, "max")


@pytest.mark.parametrize("n,block", [(1, 1), (1000, 1), (1000, 8), (1024, 4)])
def test_rmq_table_size_formula(n, block):
    s = RangeMinMax(list(range(n)), block=block)
    nb = -(-n // block)
    expected = 2 * nb * (int(np.floor(np.log2(nb))) + 1)
    assert s.table_entries == expected
    assert sum(t.size for t in s._tables.values()) == expected


def test_pred_succ_examples():
    s = PredecessorSet([2, 5])
    assert pred_succ(s, 3, "succ") == 5
    assert pred_succ(s, 1, "pred") is None
    with pytest.raises(ValueError):
        pred_succ(s, 1, "sideways")


def test_pred_succ_random_4096():
    rng = random.Random(42)
    keys = sorted(rng.sample(range(1, 1 << 20), 4096))
    s = PredecessorSet(keys)
    for _ in range(10_000):
        q = rng.randint(-5, (1 << 20) + 5)
        i = bisect.bisect_left(keys, q)
        assert s.succ(q) == (keys[i] if i < len(keys) else None)
        i = bisect.bisect_right(keys, q)
        assert s.pred(q) == (keys[i - 1] if i else None)


@given(st.lists(st.integers(0, 300), max_size=60), st.integers(-10, 310))
def test_pred_succ_property(keys, q):
    s = PredecessorSet(keys)
    ks = sorted(set(keys))
    i = bisect.bisect_left(ks, q)
    assert s.succ_index(q) == i
    assert s.succ(q) == (ks[i] if i < len(ks) else None)
    j = bisect.bisect_right(ks, q)
    assert s.pred(q) == (ks[j - 1] if j else None)


@given(st.lists(st.booleans(), max_size=1500))
def test_rank_bitvector(bits):
    bv = RankBitVector(bits)
    total = 0
    for i in range(len(bits) + 1):
        assert bv.rank1(i) == total
        if i < len(bits):
            assert bv.get(i) == bits[i]
            total += bits[i]
