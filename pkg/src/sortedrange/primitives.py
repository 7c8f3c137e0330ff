"""Static range-min/max, predecessor search and rank-supporting bitvectors.

All three are immutable after construction.  Query paths index
``memoryview`` objects over numpy buffers, which hand back plain Python ints
and avoid numpy scalar overhead in the tight loops above them.
"""
from __future__ import annotations

import bisect
from typing import Optional, Sequence

import numpy as np

MIN = "min"
MAX = "max"


def _ilog2(v: int) -> int:
    return v.bit_length() - 1


class RangeMinMax:
    """Arg-min / arg-max over ``values[i..j]`` (inclusive), leftmost on ties.

    Layout: the array is cut into blocks of ``block`` entries.  A sparse table
    over the per-block extremes answers the fully covered blocks; the at most
    two partial blocks are scanned.  ``block=1`` is the plain sparse table
    with two lookups per query.

    Table size, per enabled mode, is ``nb * (floor(log2(nb)) + 1)`` entries
    with ``nb = ceil(n / block)``; see :attr:`table_entries`.
    """

    def __init__(self, values: Sequence[int], block: int = 1, modes=(MIN, MAX)):
        vals = np.asarray(values)
        if vals.ndim != 1 or len(vals) == 0:
            raise ValueError("RangeMinMax needs a nonempty 1-d array")
        if block < 1:
            raise ValueError("block must be >= 1")
        self.n = n = len(vals)
        small = int(vals.min()) >= -(1 << 31) and int(vals.max()) < (1 << 31)
        vals = np.ascontiguousarray(vals, dtype=np.int32 if small else np.int64)
        self._idx_dtype = np.int32 if n < (1 << 31) else np.int64
        self.block = block
        self.modes = tuple(modes)
        self._vals = vals
        self.v = memoryview(vals)
        nb = -(-n // block)
        self.nb = nb
        self.rows = _ilog2(nb) + 1
        self._tables = {}
        self._mv = {}
        for mode in self.modes:
            tab = self._build(vals, mode)
            self._tables[mode] = tab
            self._mv[mode] = memoryview(tab)

    def _build(self, vals: np.ndarray, mode: str) -> np.ndarray:
        n, b, nb = self.n, self.block, self.nb
        pad = nb * b - n
        info = np.iinfo(vals.dtype)
        fill = info.max if mode == MIN else info.min
        padded = np.concatenate([vals, np.full(pad, fill, dtype=vals.dtype)]).reshape(nb, b)
        # argmin/argmax return the first extreme, which gives leftmost ties.
        inblock = padded.argmin(axis=1) if mode == MIN else padded.argmax(axis=1)
        idx = (np.arange(nb) * b + inblock).astype(self._idx_dtype)
        tab = np.empty(self.rows * nb, dtype=self._idx_dtype)
        tab[:nb] = idx
        for k in range(1, self.rows):
            half = 1 << (k - 1)
            prev = tab[(k - 1) * nb:k * nb]
            cnt = nb - (1 << k) + 1
            left = prev[:cnt]
            right = prev[half:half + cnt]
            lv, rv = vals[left], vals[right]
            take_right = rv < lv if mode == MIN else rv > lv
            row = tab[k * nb:(k + 1) * nb]
            row[:cnt] = np.where(take_right, right, left)
            row[cnt:] = prev[cnt:]
        return tab

    @property
    def table_entries(self) -> int:
        return len(self.modes) * self.nb * self.rows

    @property
    def nbytes(self) -> int:
        return sum(t.nbytes for t in self._tables.values())

    def values(self) -> np.ndarray:
        return self._vals

    def query(self, i: int, j: int, mode: str = MIN) -> int:
        if not (0 <= i <= j < self.n):
            raise IndexError(f"bad range [{i}, {j}] for length {self.n}")
        return self._query(i, j, mode)

    def _query(self, i: int, j: int, mode: str) -> int:
        v = self.v
        tab = self._mv[mode]
        less = mode == MIN
        b = self.block
        if b == 1:
            k = _ilog2(j - i + 1)
            t1 = tab[k * self.nb + i]
            t2 = tab[k * self.nb + j - (1 << k) + 1]
            if less:
                return t2 if v[t2] < v[t1] else t1
            return t2 if v[t2] > v[t1] else t1
        bi, bj = i // b, j // b
        if bj - bi <= 1:
            return self._scan(i, j, less)
        # left partial, covered middle, right partial, compared left to right
        best = self._scan(i, bi * b + b - 1, less)
        lo, hi = bi + 1, bj - 1
        k = _ilog2(hi - lo + 1)
        for t in (tab[k * self.nb + lo], tab[k * self.nb + hi - (1 << k) + 1]):
            if (v[t] < v[best]) if less else (v[t] > v[best]):
                best = t
        t = self._scan(bj * b, j, less)
        if (v[t] < v[best]) if less else (v[t] > v[best]):
            best = t
        return best

    def _scan(self, i: int, j: int, less: bool) -> int:
        v = self.v
        best, bv = i, v[i]
        for t in range(i + 1, j + 1):
            x = v[t]
            if (x < bv) if less else (x > bv):
                best, bv = t, x
        return best


def rmq_build(values: Sequence[int], block: int = 1) -> RangeMinMax:
    return RangeMinMax(values, block=block)


def rmq_query(s: RangeMinMax, i: int, j: int, mode: str = MIN) -> int:
    return s.query(i, j, mode)


class PredecessorSet:
    """Static sorted key set with a bucket directory over the key universe.

    Keys are bucketed by their high bits so each bucket holds about one key
    on average; a lookup jumps to its bucket through the directory and
    finishes with a search confined to that bucket.
    """

    def __init__(self, keys: Sequence[int], universe: Optional[int] = None):
        arr = np.unique(np.asarray(keys, dtype=np.int64))
        self._keys = arr
        self.keys = memoryview(arr)
        self.m = m = len(arr)
        lo = int(arr[0]) if m else 0
        hi = int(arr[-1]) if m else 0
        if universe is not None:
            hi = max(hi, universe)
        self.lo = lo
        span = max(1, hi - lo + 1)
        self.shift = max(0, _ilog2(span) - _ilog2(max(1, m)))
        nbuckets = ((hi - lo) >> self.shift) + 2
        bucket_of = (arr - lo) >> self.shift
        # first[b] = index of the first key in bucket >= b
        first = np.searchsorted(bucket_of, np.arange(nbuckets), side="left")
        self._first = first.astype(np.int64)
        self.first = memoryview(self._first)
        self.nbuckets = nbuckets

    def __len__(self) -> int:
        return self.m

    def succ_index(self, q: int) -> int:
        """Index of the smallest key ``>= q`` (``m`` if none)."""
        if self.m == 0:
            return 0
        if q <= self.lo:
            return 0
        b = (q - self.lo) >> self.shift
        if b >= self.nbuckets - 1:
            return self.m
        return bisect.bisect_left(self.keys, q, self.first[b], self.first[b + 1])

    def succ(self, q: int) -> Optional[int]:
        i = self.succ_index(q)
        return self.keys[i] if i < self.m else None

    def pred(self, q: int) -> Optional[int]:
        i = self.succ_index(q + 1) - 1
        return self.keys[i] if i >= 0 else None


def pred_succ(s: PredecessorSet, q: int, direction: str) -> Optional[int]:
    if direction == "pred":
        return s.pred(q)
    if direction == "succ":
        return s.succ(q)
    raise ValueError(f"unknown direction {direction!r}")


class RankBitVector:
    """Bit array with constant-time ``rank1`` via superblock + block counts.

    Superblocks of 512 bits keep absolute counts; each 64-bit word keeps its
    count relative to its superblock.
    """

    SUPER = 8  # words per superblock

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=bool)
        self.n = n = len(bits)
        nwords = max(1, -(-n // 64))
        padded = np.zeros(nwords * 64, dtype=bool)
        padded[:n] = bits
        packed = np.packbits(padded.reshape(-1, 8), axis=1, bitorder="little").reshape(-1)
        words = packed.view("<u8").astype(np.uint64)
        self._words = words
        self.words = memoryview(words)
        pop = np.unpackbits(packed, bitorder="little").reshape(nwords, 64).sum(axis=1)
        cum = np.concatenate([[0], np.cumsum(pop)]).astype(np.int64)
        sup_idx = np.arange(0, nwords, self.SUPER)
        self._super = cum[sup_idx].copy()
        self._block = (cum[:nwords] - np.repeat(self._super, self.SUPER)[:nwords]).astype(np.uint16)
        self.superc = memoryview(self._super)
        self.blockc = memoryview(self._block)
        self.ones = int(cum[-1])

    def rank1(self, i: int) -> int:
        """Number of set bits in positions ``[0, i)``."""
        w = i >> 6
        if w >= len(self.words):
            return self.ones
        r = self.superc[w >> 3] + self.blockc[w]
        off = i & 63
        if off:
            r += (self.words[w] & ((1 << off) - 1)).bit_count()
        return r

    def get(self, i: int) -> int:
        return (self.words[i >> 6] >> (i & 63)) & 1

    @property
    def nbytes(self) -> int:
        return self._words.nbytes + self._super.nbytes + self._block.nbytes
