"""Four-sided sorted reporting on a y-range tree with x-consecutive groups.

The query ``[a, b] x [c, d]`` splits at the y-LCA of ``c`` and ``d`` into a
``y >= c`` query on its left child and a ``y <= d`` query on its right child;
the two ascending-x streams are merged.

Every node's points (in x-order) are cut into groups of ``g`` consecutive
points.  Each group keeps its x-ranks sorted by y and a three-sided structure
over (x-rank, y-rank).  A node also samples, per group, the ``ceil(log log n)``
points nearest its open y-side and indexes the samples with one more
three-sided structure.  A query touching many groups reads the sample stream
and switches to a group's own structure only once that group has produced a
full set of samples, which is when the group may hold unsampled answers.
"""
from __future__ import annotations

import bisect
import heapq
import math
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .core import Point, QueryRect
from .primitives import PredecessorSet
from .rangetree import ConfigError, NodeRef, build_tree
from .stream import ProbeStats, SortedIterator
from .threesided import LOWER, UPPER, _ThreeSidedCore, loglog_n


def default_group_size(n: int) -> int:
    return min(math.ceil(math.log2(max(2, n)) ** 3), max(2, n))


class GroupedNode:
    """Group structures of one y-tree node (see module docstring)."""

    __slots__ = ("level", "offset", "start", "size", "side", "g", "group_h", "boundaries",
                 "by_y", "sample_core", "sample_x", "sample_y", "sample_group", "groups")

    def __init__(self, level, offset, start, xs, ys, g, side, samples_per_group):
        self.level, self.offset, self.start = level, offset, start
        self.size = m = len(xs)
        self.side = side
        self.g = g
        ngroups = -(-m // g)
        self.groups = ngroups
        self.group_h: List[_ThreeSidedCore] = []
        by_y = np.empty(m, dtype=np.int32)
        # group-local: x-rank is the position in x-order, y-rank the position in y-order
        for i in range(ngroups):
            gy = ys[i * g:(i + 1) * g]
            order = np.argsort(gy, kind="stable")
            by_y[i * g:i * g + len(gy)] = order
            yrank = np.empty(len(gy), dtype=np.int64)
            yrank[order] = np.arange(1, len(gy) + 1)
            if side == LOWER:
                yrank = len(gy) + 1 - yrank
            self.group_h.append(_ThreeSidedCore(yrank))
        self.by_y = memoryview(by_y)
        self.boundaries = None
        self.sample_core = None
        if ngroups > 1:
            self.boundaries = PredecessorSet(xs[np.minimum(m, np.arange(1, ngroups + 1) * g) - 1])
        if ngroups > 2:
            sx, sy, sg = [], [], []
            for i in range(ngroups):
                gx, gy = xs[i * g:(i + 1) * g], ys[i * g:(i + 1) * g]
                order = np.argsort(gy if side == UPPER else -gy, kind="stable")[:samples_per_group]
                sx.append(gx[order])
                sy.append(gy[order])
                sg.append(np.full(len(order), i))
            sx, sy, sg = np.concatenate(sx), np.concatenate(sy), np.concatenate(sg)
            by_x = np.argsort(sx, kind="stable")
            sx, sy, sg = sx[by_x], sy[by_x], sg[by_x]
            yr = np.empty(len(sy), dtype=np.int64)
            yr[np.argsort(sy, kind="stable")] = np.arange(1, len(sy) + 1)
            if side == LOWER:
                yr = len(sy) + 1 - yr
            self.sample_core = _ThreeSidedCore(yr)
            self.sample_x = sx.tolist()
            self.sample_y = sorted(sy.tolist())
            self.sample_group = sg.tolist()

    def group_span(self, i: int):
        lo = i * self.g
        return lo, min(self.size, lo + self.g)


class Optimal2DIndex:
    def __init__(self, points: Sequence[Point], group_size: Optional[int] = None, stride: int = 1):
        n = len(points)
        if n == 0:
            raise ValueError("cannot index zero points")
        if group_size is not None and group_size < 2:
            raise ConfigError("group size must be >= 2")
        self.n = n
        self.g = default_group_size(n) if group_size is None else group_size
        self.samples = loglog_n(n)
        # T_y: the compact tree over y; its "y" is the original x
        self.tree = t = build_tree([Point(p.y, p.x, p.id) for p in points], stride)
        self.depth = D = t.depth
        self.nodes = {}
        xs_by_y = np.asarray(t._y_of_x)  # original x of the point with y-rank i+1
        for level in range(1, D + 1):
            order = t._level_order(level)
            ys_lv = order + 1
            xs_lv = xs_by_y[order]
            for o in range(1 << level):
                s, e = t.start(level, o), t.start(level, o + 1)
                if s == e:
                    continue
                side = LOWER if o % 2 == 0 else UPPER
                self.nodes[(level, o)] = GroupedNode(level, o, s, xs_lv[s:e], ys_lv[s:e],
                                                     self.g, side, self.samples)

    # -- point access -----------------------------------------------------------

    def _x_at(self, node: GroupedNode, pos: int) -> int:
        """Original x of the point at local position ``pos`` of ``node``."""
        return self.tree.decode(node.level, node.offset, node.start + pos)

    def _point_of_x(self, x: int) -> Point:
        t = self.tree
        y = t.x_of_y[x]
        return Point(x, y, t.id_of_x[y - 1])

    def rank_to_point(self, v: NodeRef, group: int, xrank: int) -> Point:
        node = self.nodes.get((v.level, v.offset))
        if node is None or not 0 <= group < node.groups:
            raise IndexError(f"no group {group} at {v}")
        lo, hi = node.group_span(group)
        if not 0 <= xrank < hi - lo:
            raise IndexError(f"x-rank {xrank} outside group of size {hi - lo}")
        return self._point_of_x(self._x_at(node, lo + xrank))

    # -- queries ------------------------------------------------------------------

    def iter(self, a: int, b: int, c: int, d: int, stats: Optional[ProbeStats] = None) -> Iterator[Point]:
        n = self.n
        a, b, c, d = max(a, 1), min(b, n), max(c, 1), min(d, n)
        if a > b or c > d:
            return iter(())
        if c == d:
            x = self.tree.y_of_x[c - 1]
            return iter([self._point_of_x(x)] if a <= x <= b else [])
        D = self.depth
        lca = D - ((c - 1) ^ (d - 1)).bit_length()
        left = self.nodes[(lca + 1, (c - 1) >> (D - lca - 1))]
        right = self.nodes[(lca + 1, (d - 1) >> (D - lca - 1))]
        return heapq.merge(self.node_iter(left, a, b, c, stats),
                           self.node_iter(right, a, b, d, stats))

    def node_iter(self, node: GroupedNode, a: int, b: int, bound: int,
                  stats: Optional[ProbeStats] = None) -> Iterator[Point]:
        """Ascending-x points of ``node`` with x in ``[a, b]`` and y on the
        node's side of ``bound`` (``y <= bound`` for right children, ``y >= bound``
        for left children)."""
        if a > b:
            return
        if stats is not None:
            stats.nodes += 1
        m, g = node.size, node.g
        if node.boundaries is None:
            i = j = 0
        else:
            bnd = node.boundaries
            i = bnd.succ_index(a)
            j = bnd.succ_index(b)
            if stats is not None:
                stats.pred += 2
            if i == node.groups:
                return
            if j == node.groups:
                j -= 1
            elif self._x_at(node, j * g) > b:
                j -= 1
        if i > j:
            return
        lo_i, hi_i = node.group_span(i)
        a_r = self._lower_rank(node, lo_i, hi_i, a)
        lo_j, hi_j = node.group_span(j)
        b_r = self._lower_rank(node, lo_j, hi_j, b + 1) - 1
        if i == j:
            yield from self._group_iter(node, i, a_r, b_r, bound, stats)
            return
        yield from self._group_iter(node, i, a_r, hi_i - lo_i - 1, bound, stats)
        if j - i > 1:
            yield from self._middle_iter(node, i, j, bound, stats)
        yield from self._group_iter(node, j, 0, b_r, bound, stats)

    def _lower_rank(self, node: GroupedNode, lo: int, hi: int, x: int) -> int:
        """Number of points in positions ``[lo, hi)`` with x below ``x``."""
        left, right = lo, hi
        while left < right:
            mid = (left + right) >> 1
            if self._x_at(node, mid) < x:
                left = mid + 1
            else:
                right = mid
        return left - lo

    def _group_bound(self, node: GroupedNode, group: int, bound: int) -> int:
        """Group-local y-rank limit for ``bound``: the number of group points
        on the query side, by binary search over the group's y-order."""
        lo, hi = node.group_span(group)
        x_of_y = self.tree.x_of_y

        def y_at(r):
            return x_of_y[self._x_at(node, lo + r)]

        if node.side == UPPER:
            return bisect.bisect_right(node.by_y, bound, lo, hi, key=y_at) - lo
        return hi - bisect.bisect_left(node.by_y, bound, lo, hi, key=y_at)

    def _group_iter(self, node: GroupedNode, group: int, a_r: int, b_r: int, bound: int,
                    stats: Optional[ProbeStats]) -> Iterator[Point]:
        if a_r > b_r:
            return
        lim = self._group_bound(node, group, bound)
        if lim <= 0:
            return
        lo, _ = node.group_span(group)
        if stats is not None:
            stats.nodes += 1
        for r in node.group_h[group].query(a_r + 1, b_r + 1, lim, stats):
            yield self._point_of_x(self._x_at(node, lo + r - 1))

    def _middle_iter(self, node: GroupedNode, i: int, j: int, bound: int,
                     stats: Optional[ProbeStats]) -> Iterator[Point]:
        lo, _ = node.group_span(i + 1)
        _, hi = node.group_span(j - 1)
        a2, b2 = self._x_at(node, lo), self._x_at(node, hi - 1)
        sx = node.sample_x
        ra = bisect.bisect_left(sx, a2) + 1
        rb = bisect.bisect_right(sx, b2)
        sy = node.sample_y
        if node.side == UPPER:
            lim = bisect.bisect_right(sy, bound)
        else:
            lim = len(sy) - bisect.bisect_left(sy, bound)
        if ra > rb or lim <= 0:
            return
        samples = SortedIterator(node.sample_core.query(ra, rb, lim, stats))
        need = self.samples
        cur, buf, escalated = None, [], False
        for r in samples:
            grp = node.sample_group[r - 1]
            if grp != cur:
                for x in buf:
                    yield self._point_of_x(x)
                cur, buf, escalated = grp, [], False
            if escalated:
                continue
            buf.append(sx[r - 1])
            if len(buf) == need:
                # the group may hold unsampled answers: enumerate it in full
                if stats is not None:
                    stats.escalations.append((grp, len(buf)))
                glo, ghi = node.group_span(grp)
                yield from self._group_iter(node, grp, 0, ghi - glo - 1, bound, stats)
                buf, escalated = [], True
        for x in buf:
            yield self._point_of_x(x)


def build_optimal(points: Sequence[Point], group_size: Optional[int] = None, stride: int = 1) -> Optimal2DIndex:
    return Optimal2DIndex(points, group_size, stride)


def sorted_report_2d(idx: Optimal2DIndex, q: QueryRect, stats: Optional[ProbeStats] = None) -> SortedIterator:
    a, b, c, d = q.clamp(idx.n)
    return SortedIterator(idx.iter(a, b, c, d, stats), q)


def node_three_sided(idx: Optimal2DIndex, v: NodeRef, a: int, b: int, bound: int,
                     stats: Optional[ProbeStats] = None) -> SortedIterator:
    node = idx.nodes[(v.level, v.offset)]
    return SortedIterator(idx.node_iter(node, a, b, bound, stats))
