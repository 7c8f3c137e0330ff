"""Maximal points in a rectangle and rectangular visibility, by staircase walks.

Each step takes the maximum-x point of the current rectangle (a range
successor query on the x-mirrored index) and shrinks the rectangle to the
part strictly left of and strictly above it.
"""
from __future__ import annotations

from typing import Iterator, Optional

from .core import Point, QueryRect
from .stream import ProbeStats, SortedIterator
from .successor import SuccessorIndex


def iter_maximal(idx: SuccessorIndex, a: int, b: int, c: int, d: int,
                 stats: Optional[ProbeStats] = None) -> Iterator[Point]:
    n = idx.n
    a, b, c, d = max(a, 1), min(b, n), max(c, 1), min(d, n)
    while a <= b and c <= d:
        p = idx.range_predecessor(b, c, d, stats)
        if p is None or p.x < a:
            return
        yield p
        b, c = p.x - 1, p.y + 1


def maximal_points(idx: SuccessorIndex, q: QueryRect, stats: Optional[ProbeStats] = None) -> SortedIterator:
    """Maximal points of ``q`` in descending x (ascending y)."""
    a, b, c, d = q.clamp(idx.n)
    return SortedIterator(iter_maximal(idx, a, b, c, d, stats), q)


def rectangularly_visible(idx: SuccessorIndex, qx: int, qy: int,
                          stats: Optional[ProbeStats] = None) -> SortedIterator:
    """Points ``p <= (qx, qy)`` whose box to the query point holds no other point."""
    q = QueryRect(None, qx, None, qy)
    return maximal_points(idx, q, stats)
