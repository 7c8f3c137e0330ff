import random

import pytest
from hypothesis import given, strategies as st

from sortedrange import (EmptyInputError, Point, PointFileError, QueryRect, make_points,
                         oracle_maximal, oracle_report_sorted, oracle_successor, oracle_visible,
                         parse_points, rank_space_reduce, reduce_query)

coords = st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=1, max_size=30)
bounds = st.one_of(st.none(), st.integers(-25, 25))


def test_singleton_reduces_to_one_one():
    pts, m = rank_space_reduce([Point(10, 10, 0)])
    assert pts == [Point(1, 1, 0)]
    assert m.invert(pts[0]) == Point(10, 10, 0)


def test_x_tie_broken_by_id():
    pts, _ = rank_space_reduce(make_points([(5, 9), (5, 3)]))
    assert [(p.x, p.y) for p in pts] == [(1, 2), (2, 1)]


def test_empty_input_rejected():
    with pytest.raises(EmptyInputError):
        rank_space_reduce([])


def test_seed42_reduction_is_permutation_pair():
    rng = random.Random(42)
    pts = make_points((rng.randint(-100, 100), rng.randint(-100, 100)) for _ in range(64))
    red, m = rank_space_reduce(pts)
    assert sorted(p.x for p in red) == list(range(1, 65))
    assert sorted(p.y for p in red) == list(range(1, 65))
    by_x = sorted(pts, key=lambda p: (p.x, p.id))
    assert [red[p.id].x for p in by_x] == list(range(1, 65))


def test_full_query_maps_to_full_grid():
    pts, m = rank_space_reduce(make_points([(3, 4), (8, -1), (0, 7)]))
    q = reduce_query(QueryRect(-100, 100, -100, 100), m)
    assert q.clamp(3) == (1, 3, 1, 3)


def test_query_in_gap_is_empty():
    _, m = rank_space_reduce(make_points([(1, 1), (5, 5)]))
    q = reduce_query(QueryRect(2, 4, None, None), m)
    assert q.is_empty()


@given(coords, bounds, bounds, bounds, bounds)
def test_membership_preserved(cs, x_lo, x_hi, y_lo, y_hi):
    pts = make_points(cs)
    red, m = rank_space_reduce(pts)
    q = QueryRect(x_lo, x_hi, y_lo, y_hi)
    rq = reduce_query(q, m)
    for p, r in zip(pts, red):
        assert q.contains(p) == rq.contains(r)


@given(coords)
def test_reduce_then_invert_round_trips(cs):
    pts = make_points(cs)
    red, m = rank_space_reduce(pts)
    assert [m.invert(r) for r in red] == pts


@given(coords)
def test_reduced_sorted_report_strictly_increasing(cs):
    red, _ = rank_space_reduce(make_points(cs))
    xs = [p.x for p in oracle_report_sorted(red, QueryRect())]
    assert all(a < b for a, b in zip(xs, xs[1:]))


def test_oracle_examples():
    diag = make_points([(1, 1), (2, 2), (3, 3)])
    assert oracle_report_sorted(diag, QueryRect(1, 3, 1, 3)) == diag
    assert oracle_report_sorted(diag, QueryRect(2, 3, 1, 1)) == []
    s = make_points([(1, 5), (4, 2)])
    assert oracle_successor(s, QueryRect(2, None, 1, 3)) == Point(4, 2, 1)
    assert oracle_successor(make_points([(1, 5)]), QueryRect(2, None, 1, 4)) is None
    anti = make_points([(1, 3), (2, 2), (3, 1)])
    assert oracle_maximal(anti, QueryRect()) == anti[::-1]
    assert oracle_maximal(make_points([(1, 1), (2, 2)]), QueryRect()) == [Point(2, 2, 1)]


def test_oracle_report_k_truncates():
    rng = random.Random(42)
    pts = make_points((rng.randint(0, 50), rng.randint(0, 50)) for _ in range(100))
    q = QueryRect(10, 40, 5, 45)
    full = sorted((p for p in pts if q.contains(p)), key=lambda p: (p.x, p.id))
    assert oracle_report_sorted(pts, q, 5) == full[:5]


def test_successor_oracle_rejects_bounded_right_side():
    with pytest.raises(ValueError):
        oracle_successor([], QueryRect(1, 2, None, None))


def test_visible_oracle_matches_maximal_on_distinct_points():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 12)
        ys = rng.sample(range(n), n)
        pts = [Point(i, ys[i], i) for i in range(n)]
        qx, qy = rng.randint(-1, n), rng.randint(-1, n)
        assert oracle_visible(pts, qx, qy) == oracle_maximal(pts, QueryRect(None, qx, None, qy))


def test_parse_points():
    pts = parse_points("1,2\n -3 , 4\n5,6\n")
    assert pts == [Point(1, 2, 0), Point(-3, 4, 1), Point(5, 6, 2)]


@pytest.mark.parametrize("text,line", [("", 0), ("1,2\nfoo\n", 2), ("1,2,3", 1),
                                       (f"{1 << 63},0", 1)])
def test_parse_points_errors_carry_line(text, line):
    with pytest.raises(PointFileError) as exc:
        parse_points(text)
    assert exc.value.lineno == line
