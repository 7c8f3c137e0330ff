"""One-sided and three-sided sorted reporting.

One-sided (``y <= c``, ascending x): a range tree on y whose nodes keep their
points sorted by x.  A prefix ``[1, c]`` of y decomposes into at most
``log n`` nodes whose lists are merged with a heap.  Short answers come
straight from ``V(p_c)``, the ``ceil(log n)`` smallest x among points no higher
than ``p_c`` (the highest point with ``y <= c``).  When few points lie below
``c``, ``p_c`` is found by scanning the ``ceil(log log n)`` lowest points.

Three-sided (``a <= x <= b``, ``y <= c``): a range tree on x with a one-sided
structure per node.  For each leaf the lowest points of the off-path siblings
(right siblings for the path to ``a``, left siblings for the path to ``b``) are
kept by level; walking them in level order visits the covering nodes in
x-order, and each visited node with a low enough point is drained through
its one-sided structure.

Many one-sided structures of equal capacity are stored together as a
:class:`OneSidedForest` so a whole tree level is a handful of flat arrays.
"""
from __future__ import annotations

import bisect
import heapq
import math
from itertools import islice
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .core import Point, QueryRect
from .stream import ProbeStats, SortedIterator

UPPER = "upper"  # query y <= c
LOWER = "lower"  # query y >= c

_SENTINEL = np.iinfo(np.int32).max


def log_n(n: int) -> int:
    return max(1, math.ceil(math.log2(max(2, n))))


def loglog_n(n: int) -> int:
    return max(1, math.ceil(math.log2(max(2.0, math.log2(max(2, n))))))


class OneSidedForest:
    """Independent one-sided structures over consecutive blocks of one array.

    ``ys`` is sorted ascending inside every block ``[starts[b], starts[b+1])``
    and ``xs`` holds the matching x-values.  Block capacity is ``2**height``;
    sub-block lists of every y-tree level are aligned to block starts.
    """

    def __init__(self, ys: np.ndarray, xs: np.ndarray, starts: np.ndarray, height: int,
                 vlen: int, small: int):
        self.height = height
        self.vlen = vlen
        self.small = small
        m = len(ys)
        starts = np.asarray(starts, dtype=np.int64)
        sizes = np.diff(starts)
        block = np.repeat(np.arange(len(sizes)), sizes)
        local = np.arange(m) - starts[block]
        self._ys = np.ascontiguousarray(ys, dtype=np.int32)
        self._xs = np.ascontiguousarray(xs, dtype=np.int32)
        self._starts = starts
        self._lists = []
        for j in range(height):
            order = np.lexsort((xs, local >> (height - j), block))
            self._lists.append(np.ascontiguousarray(xs[order], dtype=np.int32))
        self._lists.append(self._xs)
        self._V = self._build_v(sizes)
        self._bind()

    def _build_v(self, sizes: np.ndarray) -> np.ndarray:
        L = self.vlen
        m = len(self._xs)
        V = np.full((m, L), _SENTINEL, dtype=np.int32)
        if m == 0:
            return V.reshape(-1)
        starts = self._starts[:-1]
        cur = np.full((len(sizes), L), _SENTINEL, dtype=np.int32)
        work = np.empty((len(sizes), L + 1), dtype=np.int32)
        for t in range(int(sizes.max())):
            live = sizes > t
            pos = starts[live] + t
            work[:, :L] = cur
            work[:, L] = _SENTINEL
            work[live, L] = self._xs[pos]
            work.sort(axis=1)
            cur = work[:, :L].copy()
            V[pos] = cur[live]
        return V.reshape(-1)

    def _bind(self):
        self.ys = memoryview(self._ys)
        self.xs = memoryview(self._xs)
        self.starts = memoryview(self._starts)
        self.lists = [memoryview(a) for a in self._lists]
        self.V = memoryview(self._V)

    @property
    def nbytes(self) -> int:
        return (self._ys.nbytes + self._xs.nbytes + self._V.nbytes
                + sum(a.nbytes for a in self._lists[:-1]))

    def count_below(self, b: int, c: int, stats: Optional[ProbeStats] = None) -> int:
        """Number of points of block ``b`` with ``y <= c``."""
        ys = self.ys
        s, e = self.starts[b], self.starts[b + 1]
        lim = min(e, s + self.small)
        i = s
        # the few lowest points are scanned directly
        while i < lim and ys[i] <= c:
            i += 1
        if i < lim or i == e:
            return i - s
        if stats is not None:
            stats.pred += 1
        return bisect.bisect_right(ys, c, i, e) - s

    def stream(self, b: int, c: int, stats: Optional[ProbeStats] = None,
               count: Optional[int] = None, use_v: bool = True) -> Iterator[int]:
        """x-values of block ``b`` with ``y <= c`` in ascending order.

        ``count`` (points at or below ``c``, i.e. the hint ``p_c`` as a
        position) skips the search for ``p_c``.
        """
        cnt = self.count_below(b, c, stats) if count is None else count
        if cnt <= 0:
            return
        s = self.starts[b]
        skip = 0
        if use_v:
            L = self.vlen
            base = (s + cnt - 1) * L
            V = self.V
            take = min(L, cnt)
            for t in range(take):
                yield V[base + t]
            if cnt <= L:
                return
            skip = L
        # prefix [0, cnt) of the block as canonical y-tree nodes
        sources = []
        pos = 0
        h = self.height
        for j in range(h + 1):
            size = 1 << (h - j)
            if cnt & size:
                lst = self.lists[j]
                sources.append(iter(lst[s + pos:s + pos + size]))
                pos += size
        if stats is not None:
            stats.nodes += len(sources)
        merged = heapq.merge(*sources)
        if skip:
            merged = islice(merged, skip, None)
        yield from merged


class OneSidedIndex:
    """Standalone one-sided structure: points with ``y <= c`` by ascending x."""

    def __init__(self, points: Sequence[Point]):
        n = len(points)
        if n == 0:
            raise ValueError("cannot index zero points")
        self.n = n
        by_y = sorted(points, key=lambda p: p.y)
        self._pts = {p.x: p for p in points}
        self._y_rank = {p.y: i for i, p in enumerate(by_y)}
        height = (n - 1).bit_length()
        self.forest = OneSidedForest(
            np.array([p.y for p in by_y]), np.array([p.x for p in by_y]),
            np.array([0, n]), height, log_n(n), loglog_n(n))

    def iter(self, c: int, stats=None, use_v: bool = True) -> Iterator[Point]:
        pts = self._pts
        for x in self.forest.stream(0, c, stats, use_v=use_v):
            yield pts[x]

    def iter_hinted(self, p_c: Point, use_v: bool = True) -> Iterator[Point]:
        assert self._pts.get(p_c.x) == p_c, "hint is not a point of this index"
        cnt = self._y_rank[p_c.y] + 1
        pts = self._pts
        for x in self.forest.stream(0, p_c.y, None, count=cnt, use_v=use_v):
            yield pts[x]


def one_sided_iter(idx: OneSidedIndex, c: int, stats=None, use_v: bool = True) -> SortedIterator:
    return SortedIterator(idx.iter(c, stats, use_v), QueryRect(None, None, None, c))


def hinted_one_sided_iter(idx: OneSidedIndex, p_c: Point) -> SortedIterator:
    return SortedIterator(idx.iter_hinted(p_c), QueryRect(None, None, None, p_c.y))


class ThreeSidedIndex:
    """Sorted reporting for ``[a, b] x [1, c]`` (``side="upper"``) or
    ``[a, b] x [c, n]`` (``side="lower"``, answered on y-flipped points).

    ``sides`` selects which orientations are built.
    """

    def __init__(self, points: Sequence[Point], sides=(UPPER, LOWER)):
        n = len(points)
        if n == 0:
            raise ValueError("cannot index zero points")
        self.n = n
        y_of_x = np.zeros(n + 1, dtype=np.int64)
        id_of_x = np.zeros(n + 1, dtype=np.int64)
        for p in points:
            y_of_x[p.x] = p.y
            id_of_x[p.x] = p.id
        self._y_of_x = y_of_x
        self._id_of_x = id_of_x
        self.y_of_x = memoryview(y_of_x)
        self.id_of_x = memoryview(id_of_x)
        self.sides = {}
        for side in sides:
            ys = y_of_x[1:] if side == UPPER else n + 1 - y_of_x[1:]
            self.sides[side] = _ThreeSidedCore(ys)

    @property
    def nbytes(self) -> int:
        return sum(c.nbytes for c in self.sides.values())

    def iter_x(self, a: int, b: int, c: int, side: str = UPPER,
               stats: Optional[ProbeStats] = None) -> Iterator[int]:
        core = self.sides[side]
        if side == LOWER:
            c = self.n + 1 - c
        return core.query(a, b, c, stats)

    def iter(self, a: int, b: int, c: int, side: str = UPPER,
             stats: Optional[ProbeStats] = None) -> Iterator[Point]:
        y, ids = self.y_of_x, self.id_of_x
        for x in self.iter_x(a, b, c, side, stats):
            yield Point(x, y[x], ids[x])


class _ThreeSidedCore:
    """Upper-side structure over ``ys[x-1]`` (x and y permutations of 1..n)."""

    def __init__(self, ys: np.ndarray):
        n = len(ys)
        self.n = n
        self.depth = D = (n - 1).bit_length()
        self.vlen = log_n(n)
        self.small = loglog_n(n)
        xs = np.arange(1, n + 1, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        self._ys_by_x = ys
        self.forests: List[OneSidedForest] = []
        lowest_y = []  # per level: y of the lowest point of every node, _SENTINEL if empty
        lowest_x = []
        for level in range(D + 1):
            node = (xs - 1) >> (D - level)
            order = np.lexsort((ys, node))
            nnodes = 1 << level
            starts = np.minimum(n, np.arange(nnodes + 1, dtype=np.int64) << (D - level))
            f = OneSidedForest(ys[order], xs[order], starts, D - level, self.vlen, self.small)
            self.forests.append(f)
            nonempty = starts[:-1] < starts[1:]
            ly = np.full(nnodes, _SENTINEL, dtype=np.int64)
            lx = np.zeros(nnodes, dtype=np.int64)
            ly[nonempty] = ys[order][starts[:-1][nonempty]]
            lx[nonempty] = xs[order][starts[:-1][nonempty]]
            lowest_y.append(ly)
            lowest_x.append(lx)
        # R1 / R2 rows per leaf: column l (1..D) holds the lowest point of the
        # right (R1) / left (R2) sibling of the path node at level l when that
        # sibling is off the path on the relevant side; column D+1 is the leaf.
        cols = D + 2
        leaf = xs - 1
        r1 = np.full((n, cols), _SENTINEL, dtype=np.int64)
        r2 = np.full((n, cols), _SENTINEL, dtype=np.int64)
        r1x = np.zeros((n, cols), dtype=np.int64)
        for level in range(1, D + 1):
            off = leaf >> (D - level)
            sib = off ^ 1
            is_left = (off & 1) == 0
            r1[is_left, level] = lowest_y[level][sib[is_left]]
            r1x[is_left, level] = lowest_x[level][sib[is_left]]
            r2[~is_left, level] = lowest_y[level][sib[~is_left]]
        r1[:, D + 1] = ys
        r2[:, D + 1] = ys
        r1x[:, D + 1] = xs
        # R1 entries visited deeper-first must come in ascending x
        last = np.zeros(n, dtype=np.int64)
        for col in range(D + 1, 0, -1):
            ok = r1[:, col] != _SENTINEL
            assert np.all(r1x[ok, col] > last[ok]), "R1 x-coordinates must decrease with level"
            last[ok] = r1x[ok, col]
        self._r1 = r1.reshape(-1)
        self._r2 = r2.reshape(-1)
        self.r1 = memoryview(self._r1)
        self.r2 = memoryview(self._r2)
        self.cols = cols

    @property
    def nbytes(self) -> int:
        return sum(f.nbytes for f in self.forests) + self._r1.nbytes + self._r2.nbytes

    def query(self, a: int, b: int, c: int, stats: Optional[ProbeStats] = None) -> Iterator[int]:
        n, D = self.n, self.depth
        if a < 1:
            a = 1
        if b > n:
            b = n
        if a > b or c < 1:
            return
        if a == b:
            if self._ys_by_x[a - 1] <= c:
                if stats is not None:
                    stats.nodes += 1
                yield a
            return
        la, lb = a - 1, b - 1
        lca = D - (la ^ lb).bit_length()
        cols = self.cols
        leaf_forest = self.forests[D]
        # path to a: own leaf first, then right siblings bottom-up
        r1 = self.r1
        row = la * cols
        for col in range(D + 1, lca + 1, -1):
            if r1[row + col] > c:
                continue
            if col == D + 1:
                f, node = leaf_forest, la
            else:
                f, node = self.forests[col], (la >> (D - col)) ^ 1
            yield from self._drain(f, node, c, stats)
        # path to b: left siblings top-down, own leaf last
        r2 = self.r2
        row = lb * cols
        for col in range(lca + 2, D + 2):
            if r2[row + col] > c:
                continue
            if col == D + 1:
                f, node = leaf_forest, lb
            else:
                f, node = self.forests[col], (lb >> (D - col)) ^ 1
            yield from self._drain(f, node, c, stats)

    @staticmethod
    def _drain(f: OneSidedForest, node: int, c: int, stats: Optional[ProbeStats]) -> Iterator[int]:
        if stats is None:
            yield from f.stream(node, c)
            return
        stats.nodes += 1
        stats.streams_opened += 1
        yield from f.stream(node, c, stats)
        stats.streams_exhausted += 1


def build_three_sided(points: Sequence[Point], sides=(UPPER, LOWER)) -> ThreeSidedIndex:
    return ThreeSidedIndex(points, sides)


def three_sided_iter(idx: ThreeSidedIndex, a: int, b: int, c: int, side: str = UPPER,
                     stats: Optional[ProbeStats] = None) -> SortedIterator:
    q = QueryRect(a, b, None, c) if side == UPPER else QueryRect(a, b, c, None)
    return SortedIterator(idx.iter(a, b, c, side, stats), q)
