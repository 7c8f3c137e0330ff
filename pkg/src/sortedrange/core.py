"""Point and rectangle types, rank-space reduction and brute-force oracles.

Every structure in the package works on points in *rank space*: ``n`` points
whose x-coordinates and y-coordinates are each a permutation of ``1..n``.
:func:`rank_space_reduce` maps arbitrary integer points there (ties broken by
insertion id) and :func:`reduce_query` maps query rectangles alongside.

The oracles here are deliberately naive.  They ship with the library so the
command line tool can verify answers on user data.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple


class EmptyInputError(ValueError):
    """Raised when a structure is asked to index zero points."""


class Point(NamedTuple):
    x: int
    y: int
    id: int


@dataclass(frozen=True)
class QueryRect:
    """Closed rectangle ``[x_lo, x_hi] x [y_lo, y_hi]``.

    ``None`` marks an unbounded side.  Inverted bounds are legal and denote an
    empty rectangle, which is what :func:`reduce_query` produces when a query
    falls strictly between two coordinates.
    """

    x_lo: Optional[int] = None
    x_hi: Optional[int] = None
    y_lo: Optional[int] = None
    y_hi: Optional[int] = None

    def contains(self, p) -> bool:
        return (
            (self.x_lo is None or p.x >= self.x_lo)
            and (self.x_hi is None or p.x <= self.x_hi)
            and (self.y_lo is None or p.y >= self.y_lo)
            and (self.y_hi is None or p.y <= self.y_hi)
        )

    def is_empty(self) -> bool:
        return (
            self.x_lo is not None and self.x_hi is not None and self.x_lo > self.x_hi
        ) or (
            self.y_lo is not None and self.y_hi is not None and self.y_lo > self.y_hi
        )

    def clamp(self, n: int) -> Tuple[int, int, int, int]:
        """Bounds as integers clipped to ``[1, n]`` (for rank-space queries)."""
        a = 1 if self.x_lo is None else max(1, self.x_lo)
        b = n if self.x_hi is None else min(n, self.x_hi)
        c = 1 if self.y_lo is None else max(1, self.y_lo)
        d = n if self.y_hi is None else min(n, self.y_hi)
        return a, b, c, d


@dataclass(frozen=True)
class RankSpaceMap:
    """Sorted original coordinates; position ``r - 1`` holds the value of rank ``r``."""

    x_sorted: Tuple[int, ...]
    y_sorted: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.x_sorted)

    def original_x(self, rank: int) -> int:
        return self.x_sorted[rank - 1]

    def original_y(self, rank: int) -> int:
        return self.y_sorted[rank - 1]

    def invert(self, p: Point) -> Point:
        return Point(self.x_sorted[p.x - 1], self.y_sorted[p.y - 1], p.id)


def _ranks(values: Sequence[int]) -> List[int]:
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    ranks = [0] * len(values)
    for r, i in enumerate(order, 1):
        ranks[i] = r
    return ranks


def rank_space_reduce(points: Sequence[Point]) -> Tuple[List[Point], RankSpaceMap]:
    """Replace coordinates by their ranks; equal coordinates are ordered by id."""
    if len(points) == 0:
        raise EmptyInputError("cannot reduce an empty point set")
    xr = _ranks([p.x for p in points])
    yr = _ranks([p.y for p in points])
    reduced = [Point(xr[i], yr[i], p.id) for i, p in enumerate(points)]
    m = RankSpaceMap(tuple(sorted(p.x for p in points)), tuple(sorted(p.y for p in points)))
    return reduced, m


def _rank_bounds(sorted_vals: Sequence[int], lo, hi) -> Tuple[Optional[int], Optional[int]]:
    rlo = None if lo is None else bisect.bisect_left(sorted_vals, lo) + 1
    rhi = None if hi is None else bisect.bisect_right(sorted_vals, hi)
    return rlo, rhi


def reduce_query(q: QueryRect, m: RankSpaceMap) -> QueryRect:
    """Map an original-coordinate rectangle to rank space, preserving membership."""
    x_lo, x_hi = _rank_bounds(m.x_sorted, q.x_lo, q.x_hi)
    y_lo, y_hi = _rank_bounds(m.y_sorted, q.y_lo, q.y_hi)
    return QueryRect(x_lo, x_hi, y_lo, y_hi)


def make_points(coords: Iterable[Tuple[int, int]]) -> List[Point]:
    """Attach insertion ids to ``(x, y)`` pairs."""
    return [Point(int(x), int(y), i) for i, (x, y) in enumerate(coords)]


# -- oracles -----------------------------------------------------------------


def oracle_report_sorted(points: Iterable[Point], q: QueryRect, k: Optional[int] = None) -> List[Point]:
    hits = sorted((p for p in points if q.contains(p)), key=lambda p: (p.x, p.id))
    return hits if k is None else hits[:k]


def oracle_successor(points: Iterable[Point], q: QueryRect) -> Optional[Point]:
    if q.x_hi is not None:
        raise ValueError("successor queries have an unbounded right side")
    best = None
    for p in points:
        if q.contains(p) and (best is None or (p.x, p.id) < (best.x, best.id)):
            best = p
    return best


def dominates(p, q) -> bool:
    return p.x >= q.x and p.y >= q.y


def oracle_maximal(points: Iterable[Point], q: QueryRect) -> List[Point]:
    """Maximal points of ``q`` in descending x, by quadratic dominance checks."""
    inside = [p for p in points if q.contains(p)]
    out = [
        p for p in inside
        if not any(o != p and dominates(o, p) for o in inside)
    ]
    return sorted(out, key=lambda p: (-p.x, p.y))


def oracle_visible(points: Iterable[Point], qx: int, qy: int) -> List[Point]:
    """Points ``p <= (qx, qy)`` whose closed box to the query holds no other point."""
    pts = list(points)
    out = []
    for p in pts:
        if p.x > qx or p.y > qy:
            continue
        box = QueryRect(p.x, qx, p.y, qy)
        if not any(o != p and box.contains(o) for o in pts):
            out.append(p)
    return sorted(out, key=lambda p: (-p.x, p.y))


# -- point files -------------------------------------------------------------


class PointFileError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


_I64 = (-(1 << 63), (1 << 63) - 1)


def parse_points(text: str) -> List[Point]:
    """Parse ``x,y`` lines; the 0-based line number becomes the point id."""
    pts = []
    for i, line in enumerate(text.splitlines()):
        parts = line.strip().split(",")
        if len(parts) != 2:
            raise PointFileError(i + 1, f"expected 'x,y', got {line!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise PointFileError(i + 1, f"non-integer coordinate in {line!r}") from None
        if not (_I64[0] <= x <= _I64[1] and _I64[0] <= y <= _I64[1]):
            raise PointFileError(i + 1, "coordinate outside the 64-bit range")
        pts.append(Point(x, y, i))
    if not pts:
        raise PointFileError(0, "no points in input")
    return pts


def read_points(path) -> List[Point]:
    with open(path, encoding="utf-8") as fh:
        return parse_points(fh.read())
