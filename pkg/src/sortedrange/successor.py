"""Range successor by binary search over the levels of a compact range tree.

For ``Q = [a, +inf) x [c, d]`` let ``pi`` be the root-to-leaf path to leaf
``a``.  The lowest node of ``pi`` whose set meets ``Q`` is found by binary
search on depth, testing a node with one range-maximum query over the
x-coordinates of its y-range.  That node's path child is always its left
child; the answer is the range minimum of its right child.  Sorted reporting
iterates the successor query.
"""
from __future__ import annotations

from typing import Iterator, Optional, Sequence

import numpy as np

from .core import Point, QueryRect, RankSpaceMap
from .primitives import MAX, MIN, RangeMinMax
from .rangetree import CompactRangeTree, NodeRef, build_tree
from .stream import ProbeStats, SortedIterator


def default_rmq_block(n: int) -> int:
    return 1 if n <= (1 << 13) else 8


class SuccessorIndex:
    """Compact range tree on x plus per-level arg-max/arg-min tables.

    The tables of one level are laid out like the level itself, so the
    structure ``M(v)`` of a node is the window of its layout range.
    ``mirror=True`` also builds the x-mirrored index used for range
    predecessor (maximum-x) queries.
    """

    def __init__(self, points: Sequence[Point], stride: int = 1, rmq_block: Optional[int] = None,
                 rank_map: Optional[RankSpaceMap] = None, mirror: bool = False):
        self.tree = tree = build_tree(points, stride)
        self.n = n = tree.n
        self.depth = tree.depth
        self.stride = stride
        self.rank_map = rank_map
        self.rmq_block = default_rmq_block(n) if rmq_block is None else rmq_block
        self.rmq = []
        for level in range(tree.depth + 1):
            xs = np.arange(1, n + 1, dtype=np.int64)[tree._level_order(level)]
            self.rmq.append(RangeMinMax(xs, block=self.rmq_block))
        self.mirror = None
        if mirror:
            flipped = [Point(n + 1 - p.x, p.y, p.id) for p in points]
            self.mirror = SuccessorIndex(flipped, stride, rmq_block)

    @classmethod
    def _from_parts(cls, tree: CompactRangeTree, rmq_block: int, mirror_tree=None, rank_map=None):
        idx = cls.__new__(cls)
        idx.tree = tree
        idx.n, idx.depth, idx.stride = tree.n, tree.depth, tree.stride
        idx.rank_map = rank_map
        idx.rmq_block = rmq_block
        idx.rmq = []
        xs_all = np.arange(1, tree.n + 1, dtype=np.int64)
        for level in range(tree.depth + 1):
            idx.rmq.append(RangeMinMax(xs_all[tree._level_order(level)], block=rmq_block))
        idx.mirror = None if mirror_tree is None else cls._from_parts(mirror_tree, rmq_block)
        return idx

    @property
    def nbytes(self) -> int:
        own = self.tree.nbytes + sum(r.nbytes + r.values().nbytes for r in self.rmq)
        return own + (self.mirror.nbytes if self.mirror else 0)

    def _point(self, x: int) -> Point:
        t = self.tree
        return Point(x, t.y_of_x[x - 1], t.id_of_x[x - 1])

    def range_successor(self, a: int, c: int, d: int, stats: Optional[ProbeStats] = None) -> Optional[Point]:
        n = self.n
        if a < 1:
            a = 1
        if c < 1:
            c = 1
        if d > n:
            d = n
        if a > n or c > d:
            return None
        x = self._successor_x(a, c, d, stats)
        return None if x is None else self._point(x)

    def _successor_x(self, a: int, c: int, d: int, stats: Optional[ProbeStats]) -> Optional[int]:
        tree = self.tree
        rmq = self.rmq
        x_of_y = tree.x_of_y
        D = self.depth
        leaf = a - 1

        def meets(level: int) -> bool:
            o = leaf >> (D - level)
            lo, hi = tree.range(level, o, c, d)
            if stats is not None:
                stats.nodes += 1
            if lo == hi:
                return False
            t = rmq[level]._query(lo, hi - 1, MAX)
            if stats is not None:
                stats.rmq += 1
                stats.decoded += 1
            return x_of_y[tree.decode(level, o, t)] >= a

        # Binary search for the deepest path node meeting Q; nodes above
        # ``upper`` meet Q once it is confirmed, nodes at ``lower`` or below
        # do not.  Both ends start unconfirmed.
        upper, lower = 0, D
        upper_ok = False
        while lower - upper > 1:
            mid = (upper + lower) >> 1
            if meets(mid):
                upper, upper_ok = mid, True
            else:
                lower = mid
        # final probes: the leaf end first, then the confirmed-or-root end
        if lower == D and meets(lower):
            found = lower
        elif upper_ok or (upper != lower and meets(upper)):
            found = upper
        else:
            return None
        if found == D:
            return a
        child_bit = (leaf >> (D - found - 1)) & 1
        assert child_bit == 0, "path child of the lowest meeting node must be a left child"
        if stats is not None:
            stats.left_child_checks += 1
            stats.nodes += 1
            stats.rmq += 1
            stats.decoded += 1
        sib = (leaf >> (D - found - 1)) | 1
        lo, hi = tree.range(found + 1, sib, c, d)
        t = rmq[found + 1]._query(lo, hi - 1, MIN)
        return x_of_y[tree.decode(found + 1, sib, t)]

    def range_predecessor(self, b: int, c: int, d: int, stats: Optional[ProbeStats] = None) -> Optional[Point]:
        """Maximum-x point with ``x <= b`` and ``c <= y <= d``."""
        if self.mirror is None:
            raise ValueError("index was built without mirror=True")
        p = self.mirror.range_successor(self.n + 1 - b, c, d, stats)
        return None if p is None else Point(self.n + 1 - p.x, p.y, p.id)

    def iter_sorted(self, a: int, b: int, c: int, d: int, stats: Optional[ProbeStats] = None) -> Iterator[Point]:
        n = self.n
        a, c, d = max(a, 1), max(c, 1), min(d, n)
        b = min(b, n)
        if c > d:
            return
        while a <= b:
            x = self._successor_x(a, c, d, stats)
            if x is None or x > b:
                return
            yield self._point(x)
            a = x + 1

    def node_extreme(self, v: NodeRef, i: int, j: int, mode: str) -> int:
        """Local index in ``S(v)[i..j]`` of the max-x (``"max"``) or min-x point."""
        st = self.tree.start(v.level, v.offset)
        return self.rmq[v.level].query(st + i, st + j, mode) - st


def build_successor_index(points: Sequence[Point], stride: int = 1, **kw) -> SuccessorIndex:
    return SuccessorIndex(points, stride, **kw)


def range_successor(idx: SuccessorIndex, a: int, c: int, d: int, stats: Optional[ProbeStats] = None) -> Optional[Point]:
    return idx.range_successor(a, c, d, stats)


def sorted_iter(idx: SuccessorIndex, q: QueryRect, stats: Optional[ProbeStats] = None) -> SortedIterator:
    a, b, c, d = q.clamp(idx.n)
    return SortedIterator(idx.iter_sorted(a, b, c, d, stats), q)
