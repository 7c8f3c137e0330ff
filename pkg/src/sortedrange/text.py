"""Suffix-array text index and the pattern queries built on sorted reporting.

Positions and suffix ranks are 1-based.  The *position set* of a text holds
one point per suffix: x is its start position, y its lexicographic rank, so
occurrences of a pattern are exactly the points with y in the pattern's rank
interval.  Leftmost-occurrence questions become range successor queries over
that set, and occurrences in text order become sorted range reporting.
"""
from __future__ import annotations

import bisect
import heapq
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .core import Point
from .primitives import MIN, RangeMinMax
from .stream import ProbeStats, SortedIterator
from .successor import SuccessorIndex


def suffix_array(text: bytes) -> np.ndarray:
    """0-based start offsets of the suffixes in lexicographic order (prefix doubling)."""
    n = len(text)
    if n == 0:
        raise ValueError("empty text")
    rank = np.frombuffer(text, dtype=np.uint8).astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        # suffixes past the end sort before any character: rank -1
        second = np.full(n, -1, dtype=np.int64)
        second[:n - k] = rank[k:] if k < n else second[:0]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.concatenate([[0], np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]))])
        rank = new
        if rank.max() == n - 1:
            return sa
        k *= 2


@dataclass(frozen=True)
class PatternRange:
    left: int
    right: int

    @property
    def empty(self) -> bool:
        return self.left > self.right

    def __len__(self) -> int:
        return max(0, self.right - self.left + 1)


class TextIndex:
    def __init__(self, text: bytes, stride: int = 1, rmq_block: Optional[int] = None,
                 sa: Optional[np.ndarray] = None, index: Optional[SuccessorIndex] = None):
        if len(text) == 0:
            raise ValueError("cannot index an empty text")
        self.text = bytes(text)
        self.n = n = len(text)
        sa0 = suffix_array(self.text) if sa is None else np.asarray(sa, dtype=np.int64)
        self._sa = sa0 + 1  # A[r-1] = start position of the rank-r suffix
        self.sa = memoryview(self._sa)
        inv = np.empty(n + 1, dtype=np.int64)
        inv[0] = 0
        inv[self._sa] = np.arange(1, n + 1)
        self._rank = inv
        self.rank = memoryview(inv)
        self.rmq = RangeMinMax(self._sa, block=1 if n <= (1 << 13) else 8, modes=(MIN,))
        self.position_set = [Point(i, int(inv[i]), i - 1) for i in range(1, n + 1)]
        self.stride = stride
        self.index = SuccessorIndex(self.position_set, stride, rmq_block) if index is None else index

    def suffix(self, rank: int) -> bytes:
        return self.text[self.sa[rank - 1] - 1:]

    def pattern_range(self, pattern: bytes) -> PatternRange:
        if not pattern:
            return PatternRange(1, self.n)
        text, sa, m = self.text, self.sa, len(pattern)

        def head(r):
            s = sa[r] - 1
            return text[s:s + m]

        lo = bisect.bisect_left(range(self.n), pattern, key=head)
        hi = bisect.bisect_right(range(self.n), pattern, lo, key=head)
        return PatternRange(lo + 1, hi)

    def successive_list_index(self, pattern: bytes, j: int, stats: Optional[ProbeStats] = None) -> Optional[int]:
        """Leftmost occurrence of ``pattern`` at a position ``>= j``."""
        pr = self.pattern_range(pattern)
        if pr.empty:
            return None
        p = self.index.range_successor(j, pr.left, pr.right, stats)
        return None if p is None else p.x

    def non_overlapping_sequence(self, pattern: bytes) -> List[int]:
        if not pattern:
            raise ValueError("pattern must be nonempty")
        pr = self.pattern_range(pattern)
        out = []
        if pr.empty:
            return out
        j = 1
        while j <= self.n:
            p = self.index.range_successor(j, pr.left, pr.right)
            if p is None:
                break
            out.append(p.x)
            j = p.x + len(pattern)
        return out

    def dont_care_match(self, parts: Sequence[bytes]) -> Optional[List[int]]:
        """Leftmost embedding of ``parts[0] * parts[1] * ...`` (``*`` = any gap)."""
        if not parts or any(len(p) == 0 for p in parts):
            raise ValueError("need at least one part and no empty parts")
        out = []
        j = 1
        for part in parts:
            pos = self.successive_list_index(part, j)
            if pos is None:
                return None
            out.append(pos)
            j = pos + len(part)
        return out

    def iter_occurrences(self, pattern: bytes, i: int = 1, j: Optional[int] = None,
                         stats: Optional[ProbeStats] = None) -> Iterator[int]:
        pr = self.pattern_range(pattern)
        if pr.empty:
            return iter(())
        j = self.n if j is None else j
        return (p.x for p in self.index.iter_sorted(i, j, pr.left, pr.right, stats))

    def iter_occurrences_rmq(self, pattern: bytes) -> Iterator[int]:
        """Occurrences in text order from range minima over the suffix array.

        A heap holds, for each pending rank interval, the smallest position in
        it; popping the overall smallest splits its interval around it.
        """
        pr = self.pattern_range(pattern)
        if pr.empty:
            return
        sa, rmq = self.sa, self.rmq
        l, r = pr.left - 1, pr.right - 1
        t = rmq.query(l, r, MIN)
        heap = [(sa[t], t, l, r)]
        while heap:
            pos, t, l, r = heapq.heappop(heap)
            yield pos
            if l <= t - 1:
                u = rmq.query(l, t - 1, MIN)
                heapq.heappush(heap, (sa[u], u, l, t - 1))
            if t + 1 <= r:
                u = rmq.query(t + 1, r, MIN)
                heapq.heappush(heap, (sa[u], u, t + 1, r))


def build_text_index(text: bytes, stride: int = 1) -> TextIndex:
    return TextIndex(text, stride)


def pattern_range(ti: TextIndex, pattern: bytes) -> PatternRange:
    return ti.pattern_range(pattern)


def successive_list_index(ti: TextIndex, pattern: bytes, j: int) -> Optional[int]:
    return ti.successive_list_index(pattern, j)


def non_overlapping_sequence(ti: TextIndex, pattern: bytes) -> List[int]:
    return ti.non_overlapping_sequence(pattern)


def dont_care_match(ti: TextIndex, parts: Sequence[bytes]) -> Optional[List[int]]:
    return ti.dont_care_match(parts)


def ordered_occurrences(ti: TextIndex, pattern: bytes, k: Optional[int] = None) -> SortedIterator:
    it = SortedIterator(ti.iter_occurrences(pattern))
    if k is not None:
        it.collect(k)
    return it


def ordered_occurrences_rmq(ti: TextIndex, pattern: bytes) -> SortedIterator:
    return SortedIterator(ti.iter_occurrences_rmq(pattern))


def position_restricted(ti: TextIndex, pattern: bytes, i: int, j: int, k: Optional[int] = None) -> SortedIterator:
    if i > j:
        raise ValueError("position window must satisfy i <= j")
    it = SortedIterator(ti.iter_occurrences(pattern, i, j))
    if k is not None:
        it.collect(k)
    return it


def parse_dontcare(pattern: bytes) -> List[bytes]:
    """Split on ``*``; ``\\*`` is a literal star and ``\\\\`` a literal backslash."""
    parts, cur = [], bytearray()
    i = 0
    while i < len(pattern):
        ch = pattern[i:i + 1]
        if ch == b"\\" and i + 1 < len(pattern) and pattern[i + 1:i + 2] in (b"*", b"\\"):
            cur += pattern[i + 1:i + 2]
            i += 2
            continue
        if ch == b"*":
            parts.append(bytes(cur))
            cur = bytearray()
        else:
            cur += ch
        i += 1
    parts.append(bytes(cur))
    return parts


# -- naive oracles -----------------------------------------------------------


def naive_suffix_array(text: bytes) -> List[int]:
    return [i + 1 for i in sorted(range(len(text)), key=lambda i: text[i:])]


def naive_occurrences(text: bytes, pattern: bytes) -> List[int]:
    m = len(pattern)
    return [i + 1 for i in range(len(text) - m + 1) if text[i:i + m] == pattern]


def naive_dont_care(text: bytes, parts: Sequence[bytes]) -> Optional[List[int]]:
    out, j = [], 1
    for part in parts:
        occ = [p for p in naive_occurrences(text, part) if p >= j]
        if not occ:
            return None
        out.append(occ[0])
        j = occ[0] + len(part)
    return out


def max_non_overlapping(text: bytes, pattern: bytes) -> int:
    """Largest set of pairwise non-overlapping occurrences, by dynamic programming."""
    m = len(pattern)
    occ = set(naive_occurrences(text, pattern))
    n = len(text)
    best = [0] * (n + 2)
    for i in range(n, 0, -1):
        best[i] = best[i + 1]
        if i in occ:
            best[i] = max(best[i], 1 + best[min(n + 1, i + m)])
    return best[1]
