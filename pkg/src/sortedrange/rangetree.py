"""Compact range tree over x-order with implicit per-node y-sorted sequences.

Leaves are the x-ranks ``1..n`` padded to ``N = 2**depth``; padding leaves hold
no points.  Level ``l`` is laid out as one array of length ``n``: the nodes of
the level appear left to right, each node's points sorted by y.  Because x is
dense, node ``(l, o)`` occupies positions ``[min(n, o*w), min(n, (o+1)*w))``
with ``w = 2**(depth - l)`` and no offsets need to be stored.

Every level below the leaves keeps a direction bitvector (bit set when the
point descends to the right child).  Only every ``stride``-th level (and the
leaf level) stores y-values explicitly.  ``point`` walks down to the next
stored level; ``noderange`` binary-searches at the closest stored ancestor
and walks the index range down with rank queries.
"""
from __future__ import annotations

import bisect
import io
import struct
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .core import Point
from .primitives import RankBitVector


class ConfigError(ValueError):
    """Invalid structure parameter (stride, group size, ...)."""


@dataclass(frozen=True)
class NodeRef:
    level: int
    offset: int


class CompactRangeTree:
    def __init__(self, y_of_x: Sequence[int], id_of_x: Sequence[int] | None = None, stride: int = 1):
        if stride < 1:
            raise ConfigError("stride must be >= 1")
        y_of_x = np.asarray(y_of_x, dtype=np.int64)
        n = len(y_of_x)
        if n == 0:
            raise ValueError("cannot build a tree over zero points")
        self.n = n
        self.stride = stride
        self.depth = D = (n - 1).bit_length()
        self._y_of_x = y_of_x
        x_of_y = np.empty(n + 1, dtype=np.int64)
        x_of_y[0] = 0
        x_of_y[y_of_x] = np.arange(1, n + 1)
        self._x_of_y = x_of_y
        self._id_of_x = (np.arange(n, dtype=np.int64) if id_of_x is None
                         else np.asarray(id_of_x, dtype=np.int64))
        self.stored_levels = sorted(set(range(0, D + 1, stride)) | {D})
        self._stored: Dict[int, np.ndarray] = {}
        self._bits: List[RankBitVector] = []
        xs = np.arange(1, n + 1, dtype=np.int64)
        for level in range(D + 1):
            order = self._level_order(level)
            if level in self.stored_levels:
                self._stored[level] = y_of_x[order].copy()
            if level < D:
                self._bits.append(RankBitVector(((xs[order] - 1) >> (D - level - 1)) & 1))
        self._bind()

    def _level_order(self, level: int) -> np.ndarray:
        """x-indices (0-based) of the points of ``level`` in layout order."""
        node = np.arange(self.n, dtype=np.int64) >> (self.depth - level)
        return np.lexsort((self._y_of_x, node))

    def _bind(self):
        self.x_of_y = memoryview(self._x_of_y)
        self.y_of_x = memoryview(self._y_of_x)
        self.id_of_x = memoryview(self._id_of_x)
        self.stored = {lv: memoryview(a) for lv, a in self._stored.items()}
        self.bits = self._bits
        # Closest stored level at or above each level.
        self.stored_above = [max(s for s in self.stored_levels if s <= lv) for lv in range(self.depth + 1)]

    # -- layout arithmetic ----------------------------------------------------

    def start(self, level: int, offset: int) -> int:
        return min(self.n, offset << (self.depth - level))

    def size(self, level: int, offset: int) -> int:
        w = self.depth - level
        return min(self.n, (offset + 1) << w) - min(self.n, offset << w)

    def _step(self, level: int, offset: int, p: int, right: int) -> Tuple[int, int]:
        """Move layout position ``p`` of node ``(level, offset)`` to the child."""
        w = self.depth - level - 1
        st = offset << (w + 1)
        ones = self.bits[level].rank1(p) - (offset << w)
        if right:
            c = 2 * offset + 1
            return c, min(self.n, c << w) + ones
        c = 2 * offset
        return c, (c << w) + (p - st - ones)

    def _translate(self, level: int, offset: int, lo: int, hi: int, right: int) -> Tuple[int, int, int]:
        """Half-open layout range of node ``(level, offset)`` mapped to a child."""
        w = self.depth - level - 1
        st = offset << (w + 1)
        rk = self.bits[level].rank1
        base_ones = offset << w
        o_lo = rk(lo) - base_ones
        o_hi = rk(hi) - base_ones if hi != lo else o_lo
        if right:
            c = 2 * offset + 1
            cs = min(self.n, c << w)
            return c, cs + o_lo, cs + o_hi
        c = 2 * offset
        cs = c << w
        return c, cs + (lo - st - o_lo), cs + (hi - st - o_hi)

    # -- the two node operations ---------------------------------------------

    def decode(self, level: int, offset: int, p: int) -> int:
        """y-value at layout position ``p`` of node ``(level, offset)``."""
        stored = self.stored
        while level not in stored:
            right = self.bits[level].get(p)
            offset, p = self._step(level, offset, p, right)
            level += 1
        return stored[level][p]

    def decode_trace(self, level: int, offset: int, p: int) -> Tuple[int, int]:
        """Like :meth:`decode` but also returns the number of levels touched."""
        touched = 1
        while level not in self.stored:
            offset, p = self._step(level, offset, p, self.bits[level].get(p))
            level += 1
            touched += 1
        return self.stored[level][p], touched

    def range(self, level: int, offset: int, c: int, d: int) -> Tuple[int, int]:
        """Half-open layout range of points in node ``(level, offset)`` with y in ``[c, d]``."""
        top = self.stored_above[level]
        o = offset >> (level - top)
        arr = self.stored[top]
        st, en = self.start(top, o), self.start(top, o + 1)
        lo = bisect.bisect_left(arr, c, st, en)
        hi = bisect.bisect_right(arr, d, lo, en)
        lv = top
        while lv < level:
            right = (offset >> (level - lv - 1)) & 1
            o, lo, hi = self._translate(lv, o, lo, hi, right)
            lv += 1
        return lo, hi

    def point(self, v: NodeRef, i: int) -> Point:
        size = self.size(v.level, v.offset)
        if not 0 <= i < size:
            raise IndexError(f"index {i} outside node of size {size}")
        y = self.decode(v.level, v.offset, self.start(v.level, v.offset) + i)
        x = self.x_of_y[y]
        return Point(x, y, self.id_of_x[x - 1])

    def noderange(self, c: int, d: int, v: NodeRef) -> Tuple[int, int]:
        """Inclusive local index range ``(c_v, d_v)``; empty when ``c_v > d_v``."""
        c, d = max(c, 1), min(d, self.n)
        st = self.start(v.level, v.offset)
        if c > d:
            return 0, -1
        lo, hi = self.range(v.level, v.offset, c, d)
        return lo - st, hi - st - 1

    def materialize(self, v: NodeRef) -> List[Point]:
        return [self.point(v, i) for i in range(self.size(v.level, v.offset))]

    # -- navigation -------------------------------------------------------------

    @property
    def root(self) -> NodeRef:
        return NodeRef(0, 0)

    def leaf(self, x: int) -> NodeRef:
        return NodeRef(self.depth, x - 1)

    def nodes(self):
        for level in range(self.depth + 1):
            for o in range(1 << level):
                if self.size(level, o):
                    yield NodeRef(level, o)

    def navigate(self, v: NodeRef, move: str, level: int | None = None) -> NodeRef:
        if move == "parent":
            if v.level == 0:
                raise ValueError("root has no parent")
            return NodeRef(v.level - 1, v.offset >> 1)
        if move in ("left", "right"):
            if v.level == self.depth:
                raise ValueError("leaf has no children")
            return NodeRef(v.level + 1, 2 * v.offset + (move == "right"))
        if move == "sibling":
            if v.level == 0:
                raise ValueError("root has no sibling")
            return NodeRef(v.level, v.offset ^ 1)
        if move == "ancestor":
            if level is None or not 0 <= level <= v.level:
                raise ValueError(f"no ancestor at level {level} for {v}")
            return NodeRef(level, v.offset >> (v.level - level))
        raise ValueError(f"unknown move {move!r}")

    def range_translate(self, v: NodeRef, child: str, cd: Tuple[int, int]) -> Tuple[int, int]:
        """Inclusive local range at ``v`` mapped to the inclusive range at a child."""
        if v.level == self.depth:
            raise ValueError("leaf has no children")
        c_v, d_v = cd
        st = self.start(v.level, v.offset)
        right = child == "right"
        if c_v > d_v:
            return 0, -1
        c, lo, hi = self._translate(v.level, v.offset, st + c_v, st + d_v + 1, right)
        cs = self.start(v.level + 1, c)
        return lo - cs, hi - cs - 1

    # -- sizes and persistence --------------------------------------------------

    @property
    def nbytes(self) -> int:
        return (sum(a.nbytes for a in self._stored.values())
                + sum(b.nbytes for b in self._bits)
                + self._x_of_y.nbytes + self._id_of_x.nbytes)

    MAGIC = b"SRCT"
    VERSION = 1

    def to_bytes(self) -> bytes:
        """Serialize as: header ``<4s H I I H>`` (magic, version, n, depth, stride),
        the id array, each bitvector's words for levels ``0..depth-1``, then each
        stored level's y-values; all integers little-endian 64-bit."""
        buf = io.BytesIO()
        buf.write(struct.pack("<4sHIIH", self.MAGIC, self.VERSION, self.n, self.depth, self.stride))
        buf.write(self._id_of_x.astype("<i8").tobytes())
        for bv in self._bits:
            buf.write(bv._words.astype("<u8").tobytes())
        for lv in self.stored_levels:
            buf.write(self._stored[lv].astype("<i8").tobytes())
        return buf.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompactRangeTree":
        magic, version, n, depth, stride = struct.unpack_from("<4sHIIH", data, 0)
        if magic != cls.MAGIC or version != cls.VERSION:
            raise ValueError("not a compact range tree or unsupported version")
        off = struct.calcsize("<4sHIIH")
        t = cls.__new__(cls)
        t.n, t.depth, t.stride = n, depth, stride
        t._id_of_x = np.frombuffer(data, "<i8", n, off).astype(np.int64)
        off += 8 * n
        nwords = max(1, -(-n // 64))
        t._bits = []
        for _ in range(depth):
            words = np.frombuffer(data, "<u8", nwords, off)
            off += 8 * nwords
            bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:n].astype(bool)
            t._bits.append(RankBitVector(bits))
        t.stored_levels = sorted(set(range(0, depth + 1, stride)) | {depth})
        t._stored = {}
        for lv in t.stored_levels:
            t._stored[lv] = np.frombuffer(data, "<i8", n, off).astype(np.int64)
            off += 8 * n
        t._y_of_x = t._stored[depth]
        x_of_y = np.zeros(n + 1, dtype=np.int64)
        x_of_y[t._y_of_x] = np.arange(1, n + 1)
        t._x_of_y = x_of_y
        t._bind()
        return t


def build_tree(points: Sequence[Point], stride: int = 1) -> CompactRangeTree:
    """Build over rank-space points (x and y permutations of ``1..n``)."""
    n = len(points)
    y_of_x = np.zeros(n, dtype=np.int64)
    id_of_x = np.zeros(n, dtype=np.int64)
    for p in points:
        y_of_x[p.x - 1] = p.y
        id_of_x[p.x - 1] = p.id
    return CompactRangeTree(y_of_x, id_of_x, stride)
