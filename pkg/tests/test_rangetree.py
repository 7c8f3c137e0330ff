import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_rank_points
from sortedrange import CompactRangeTree, ConfigError, NodeRef, Point, build_tree


def subtree_points(t, pts, v):
    span = 1 << (t.depth - v.level)
    lo, hi = v.offset * span + 1, (v.offset + 1) * span
    return sorted((p for p in pts if lo <= p.x <= hi), key=lambda p: p.y)


def test_two_points_root_sorted_by_y():
    t = build_tree([Point(1, 2, 0), Point(2, 1, 1)])
    assert t.materialize(t.root) == [Point(2, 1, 1), Point(1, 2, 0)]


def test_single_point_leaf_is_root():
    t = build_tree([Point(1, 1, 7)])
    assert t.depth == 0 and t.leaf(1) == t.root
    assert t.point(t.root, 0) == Point(1, 1, 7)


def test_stride_must_be_positive():
    with pytest.raises(ConfigError):
        build_tree([Point(1, 1, 0)], stride=0)


@pytest.mark.parametrize("stride", [1, 2, 3, 5])
def test_materialization_seed42_n256(stride):
    pts = random_rank_points(256, random.Random(42))
    t = build_tree(pts, stride)
    for v in t.nodes():
        assert t.materialize(v) == subtree_points(t, pts, v)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 70), st.integers(1, 4), st.randoms(use_true_random=False))
def test_materialization_property(n, stride, r):
    pts = random_rank_points(n, r)
    t = build_tree(pts, stride)
    for v in t.nodes():
        assert t.materialize(v) == subtree_points(t, pts, v)


def test_point_examples_and_bounds():
    pts = random_rank_points(50, random.Random(1))
    t = build_tree(pts, 2)
    assert t.point(t.root, 0).y == 1
    for p in pts:
        assert t.point(t.leaf(p.x), 0) == p
    with pytest.raises(IndexError):
        t.point(t.root, 50)


@pytest.mark.parametrize("stride", [1, 2, 4])
def test_decode_touches_at_most_stride_levels(stride):
    t = build_tree(random_rank_points(300, random.Random(5)), stride)
    for v in t.nodes():
        st_ = t.start(v.level, v.offset)
        for i in range(t.size(v.level, v.offset)):
            _, touched = t.decode_trace(v.level, v.offset, st_ + i)
            assert touched <= stride + 1


def test_noderange_examples():
    t = build_tree(random_rank_points(256, random.Random(42)))
    assert t.noderange(1, 256, t.root) == (0, 255)
    v = NodeRef(3, 5)
    lowest = t.point(v, 0).y
    c_v, d_v = t.noderange(1, lowest - 1, v)
    assert c_v > d_v


def test_noderange_random_against_materialized():
    rng = random.Random(42)
    t = build_tree(random_rank_points(256, rng), 3)
    nodes = list(t.nodes())
    for _ in range(2000):
        v = rng.choice(nodes)
        c, d = sorted((rng.randint(0, 257), rng.randint(0, 257)))
        ys = [p.y for p in t.materialize(v)]
        want = [i for i, y in enumerate(ys) if c <= y <= d]
        c_v, d_v = t.noderange(c, d, v)
        assert list(range(c_v, d_v + 1)) == want


def test_navigation():
    t = build_tree(random_rank_points(1024, random.Random(0)))
    assert t.navigate(t.root, "ancestor", 0) == t.root
    assert t.navigate(NodeRef(t.depth, 5), "parent") == NodeRef(t.depth - 1, 2)
    assert t.navigate(NodeRef(4, 6), "sibling") == NodeRef(4, 7)
    with pytest.raises(ValueError):
        t.navigate(t.root, "parent")
    with pytest.raises(ValueError):
        t.navigate(t.leaf(3), "left")
    with pytest.raises(ValueError):
        t.navigate(t.root, "teleport")
    rng = random.Random(1)
    for _ in range(1000):
        v = NodeRef(rng.randint(0, t.depth - 1), 0)
        v = NodeRef(v.level, rng.randrange(1 << v.level))
        for move in ("left", "right"):
            assert t.navigate(t.navigate(v, move), "parent") == v
        lv = rng.randint(0, v.level)
        assert t.navigate(v, "ancestor", lv) == NodeRef(lv, v.offset >> (v.level - lv))


def test_range_translate_examples():
    t = build_tree(random_rank_points(100, random.Random(2)))
    left, right = NodeRef(1, 0), NodeRef(1, 1)
    assert t.range_translate(t.root, "left", (0, 99)) == (0, t.size(1, 0) - 1)
    assert t.range_translate(t.root, "right", (0, 99)) == (0, t.size(1, 1) - 1)
    for child in ("left", "right"):
        c, d = t.range_translate(t.root, child, (0, -1))
        assert c > d


@pytest.mark.parametrize("stride", [1, 3])
def test_descent_consistency(stride):
    rng = random.Random(42)
    t = build_tree(random_rank_points(500, rng), stride)
    for _ in range(10_000 // 4):
        c, d = sorted((rng.randint(1, 500), rng.randint(1, 500)))
        v = t.root
        cd = t.noderange(c, d, v)
        for _ in range(rng.randint(1, t.depth)):
            move = rng.choice(("left", "right"))
            child = t.navigate(v, move)
            cd = t.range_translate(v, move, cd)
            v = child
            if t.size(v.level, v.offset) == 0:
                break
            direct = t.noderange(c, d, v)
            assert (cd[0] > cd[1] and direct[0] > direct[1]) or cd == direct


@pytest.mark.parametrize("n,stride", [(1, 1), (77, 2), (256, 3)])
def test_serialization_round_trip(n, stride):
    pts = random_rank_points(n, random.Random(n))
    t = build_tree(pts, stride)
    u = CompactRangeTree.from_bytes(t.to_bytes())
    assert (u.n, u.depth, u.stride) == (t.n, t.depth, t.stride)
    for v in t.nodes():
        assert u.materialize(v) == t.materialize(v)


def test_from_bytes_rejects_garbage():
    with pytest.raises(ValueError):
        CompactRangeTree.from_bytes(b"NOPE" + bytes(20))
