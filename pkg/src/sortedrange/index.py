"""Point index over original coordinates.

:class:`PointIndex` reduces its input to rank space once, builds the
structure selected by a :class:`RunConfig`, and maps query rectangles in and
result points back out.  A range successor index with its x-mirror is always
present: it answers successor, maximal-point and visibility queries, and it
answers sorted reporting unless a grouped or three-sided structure is built.

Points sharing a coordinate are ordered by id in rank space.  Dominance for
maximal points and visibility is decided there, so of two points with equal
x the one with the larger id counts as further right.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterator, List, Optional, Sequence

from .core import (Point, QueryRect, oracle_maximal, oracle_report_sorted, oracle_successor,
                   rank_space_reduce, reduce_query)
from .geometry import iter_maximal
from .optimal import Optimal2DIndex
from .rangetree import ConfigError
from .stream import ProbeStats, SortedIterator
from .successor import SuccessorIndex
from .threesided import LOWER, UPPER, ThreeSidedIndex

SUCCESSOR = "successor"
THREE_SIDED = "three-sided"
OPTIMAL_2D = "optimal-2d"
VARIANTS = (SUCCESSOR, THREE_SIDED, OPTIMAL_2D)
FORMATS = ("human", "json")


@dataclass
class RunConfig:
    variant: str = SUCCESSOR
    stride: int = 1
    group_size: Optional[int] = None
    seed: int = 42
    mem_budget: Optional[int] = None
    fmt: str = "human"

    def validate(self) -> "RunConfig":
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; choose from {', '.join(VARIANTS)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if self.stride < 1:
            raise ConfigError("stride must be positive")
        if self.group_size is not None and self.group_size < 2:
            raise ConfigError("group size must be >= 2")
        if self.mem_budget is not None and self.mem_budget <= 0:
            raise ConfigError("memory budget must be positive")
        return self

    def build_config(self) -> dict:
        """The fields that determine the built structure (stored in index files)."""
        return {"variant": self.variant, "stride": self.stride, "group_size": self.group_size}


def estimated_words(n: int, variant: str) -> int:
    """Rough machine-word count of a build, used for the memory-budget warning."""
    lg = max(1, math.ceil(math.log2(max(2, n))))
    if variant == SUCCESSOR:
        return 4 * n * lg
    return n * lg * lg


class PointIndex:
    def __init__(self, points: Sequence[Point], config: Optional[RunConfig] = None,
                 succ: Optional[SuccessorIndex] = None):
        self.config = cfg = (config or RunConfig()).validate()
        self.points = list(points)
        self.n = len(self.points)
        self.succ = self.three = self.opt = None
        if self.n == 0:
            self.rank_points, self.rank_map = [], None
            return
        self.rank_points, self.rank_map = rank_space_reduce(self.points)
        self.succ = succ if succ is not None else SuccessorIndex(
            self.rank_points, cfg.stride, rank_map=self.rank_map, mirror=True)
        if cfg.variant == THREE_SIDED:
            self.three = ThreeSidedIndex(self.rank_points)
        elif cfg.variant == OPTIMAL_2D:
            self.opt = Optimal2DIndex(self.rank_points, cfg.group_size, cfg.stride)

    @property
    def nbytes(self) -> dict:
        out = {}
        if self.succ is not None:
            out["successor"] = self.succ.nbytes
        if self.three is not None:
            out["three_sided"] = self.three.nbytes
        return out

    def _reduce(self, q: QueryRect):
        rq = reduce_query(q, self.rank_map)
        if rq.is_empty():
            return None
        a, b, c, d = rq.clamp(self.n)
        return None if a > b or c > d else (a, b, c, d)

    def _out(self, it: Iterator[Point]) -> Iterator[Point]:
        inv = self.rank_map.invert
        for p in it:
            yield inv(p)

    # -- queries --------------------------------------------------------------

    def successor(self, x_lo: Optional[int], y_lo: Optional[int], y_hi: Optional[int],
                  stats: Optional[ProbeStats] = None) -> Optional[Point]:
        if self.n == 0:
            return None
        r = self._reduce(QueryRect(x_lo, None, y_lo, y_hi))
        if r is None:
            return None
        p = self.succ.range_successor(r[0], r[2], r[3], stats)
        return None if p is None else self.rank_map.invert(p)

    def sorted(self, q: QueryRect, stats: Optional[ProbeStats] = None) -> SortedIterator:
        r = None if self.n == 0 else self._reduce(q)
        if r is None:
            return SortedIterator(iter(()), q)
        a, b, c, d = r
        if self.opt is not None:
            it = self.opt.iter(a, b, c, d, stats)
        elif self.three is not None and (c == 1 or d == self.n):
            it = self.three.iter(a, b, d, UPPER, stats) if c == 1 else self.three.iter(a, b, c, LOWER, stats)
        else:
            it = self.succ.iter_sorted(a, b, c, d, stats)
        return SortedIterator(self._out(it), q)

    def three_sided(self, x_lo: Optional[int], x_hi: Optional[int], bound: Optional[int],
                    side: str = UPPER, stats: Optional[ProbeStats] = None) -> SortedIterator:
        """``y <= bound`` for ``side="upper"``, ``y >= bound`` for ``side="lower"``."""
        if side not in (UPPER, LOWER):
            raise ValueError(f"side must be {UPPER!r} or {LOWER!r}")
        q = QueryRect(x_lo, x_hi, None, bound) if side == UPPER else QueryRect(x_lo, x_hi, bound, None)
        if self.three is None:
            return self.sorted(q, stats)
        r = None if self.n == 0 else self._reduce(q)
        if r is None:
            return SortedIterator(iter(()), q)
        a, b, c, d = r
        it = self.three.iter(a, b, d, UPPER, stats) if side == UPPER else self.three.iter(a, b, c, LOWER, stats)
        return SortedIterator(self._out(it), q)

    def maximal(self, q: QueryRect, stats: Optional[ProbeStats] = None) -> SortedIterator:
        r = None if self.n == 0 else self._reduce(q)
        if r is None:
            return SortedIterator(iter(()), q)
        return SortedIterator(self._out(iter_maximal(self.succ, *r, stats)), q)

    def visible(self, qx: int, qy: int, stats: Optional[ProbeStats] = None) -> SortedIterator:
        return self.maximal(QueryRect(None, qx, None, qy), stats)

    # -- oracles over the same rank-space view ----------------------------------

    def _oracle(self, q: QueryRect, fn) -> List[Point]:
        if self.n == 0:
            return []
        rq = reduce_query(q, self.rank_map)
        return [self.rank_map.invert(p) for p in fn(self.rank_points, rq)]

    def oracle_sorted(self, q: QueryRect) -> List[Point]:
        return self._oracle(q, oracle_report_sorted)

    def oracle_successor(self, x_lo, y_lo, y_hi) -> Optional[Point]:
        out = self._oracle(QueryRect(x_lo, None, y_lo, y_hi), lambda pts, rq: [
            p for p in [oracle_successor(pts, rq)] if p is not None])
        return out[0] if out else None

    def oracle_maximal(self, q: QueryRect) -> List[Point]:
        return self._oracle(q, oracle_maximal)

    def describe(self) -> dict:
        return {"kind": "points", "n": self.n, **self.config.build_config(), "bytes": self.nbytes}


def build_point_index(points: Sequence[Point], config: Optional[RunConfig] = None) -> PointIndex:
    return PointIndex(points, config)


def config_dict(cfg: RunConfig) -> dict:
    return asdict(cfg)
