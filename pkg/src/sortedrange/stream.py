"""Online result streams and probe counters shared by all query structures."""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Callable, Iterable, Iterator, List, Optional

import numpy as np


@dataclass
class ProbeStats:
    """Exact per-query operation counters.

    ``nodes`` counts tree nodes examined, ``rmq`` range-extreme queries,
    ``pred`` predecessor searches and ``decoded`` point decodes.  The
    remaining fields record the events the structure-specific cost arguments
    are stated in terms of.
    """

    nodes: int = 0
    rmq: int = 0
    pred: int = 0
    decoded: int = 0
    # three-sided: one-sided streams opened / drained to the end
    streams_opened: int = 0
    streams_exhausted: int = 0
    # grouped 2-d structure: (group, samples seen) for each escalated group
    escalations: List[tuple] = field(default_factory=list)
    left_child_checks: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, [] if f.name == "escalations" else 0)

    def counters(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "escalations"}


class ProbeBatch:
    """Aggregates :class:`ProbeStats` snapshots over a batch of queries."""

    def __init__(self):
        self.rows: List[dict] = []

    def add(self, stats: ProbeStats) -> None:
        self.rows.append(stats.counters())

    def summary(self) -> dict:
        if not self.rows:
            return {}
        out = {"queries": len(self.rows)}
        for key in self.rows[0]:
            vals = np.array([r[key] for r in self.rows], dtype=float)
            out[f"{key}_mean"] = float(vals.mean())
            out[f"{key}_p99"] = float(np.percentile(vals, 99))
            out[f"{key}_max"] = float(vals.max())
        return out


class SortedIterator:
    """Prefix-stable stream of query results.

    Iterating yields each result once.  :meth:`collect` returns a prefix of
    the whole stream regardless of how much has been iterated; results are
    pulled from the source in doubling batches and remembered, so repeated
    calls with growing ``k`` agree on their common prefix.
    """

    def __init__(self, source: Iterable, query=None):
        self._src: Optional[Iterator] = iter(source)
        self.query = query
        self._seen: list = []
        self._cursor = 0
        self._batch = 1

    @property
    def exhausted(self) -> bool:
        return self._src is None and self._cursor >= len(self._seen)

    @property
    def last(self):
        return self._seen[self._cursor - 1] if self._cursor else None

    def _pull(self, want: int) -> None:
        src = self._src
        while src is not None and len(self._seen) < want:
            # fetch the next batch; its size doubles each round
            goal = max(want, len(self._seen) + self._batch)
            self._batch *= 2
            seen = self._seen
            for item in src:
                seen.append(item)
                if len(seen) >= goal:
                    break
            else:
                self._src = src = None

    def __iter__(self):
        return self

    def __next__(self):
        if self._cursor >= len(self._seen):
            if self._src is None:
                raise StopIteration
            try:
                self._seen.append(next(self._src))
            except StopIteration:
                self._src = None
                raise
        self._cursor += 1
        return self._seen[self._cursor - 1]

    def collect(self, k: Optional[int] = None) -> list:
        if k is None:
            self._pull(float("inf"))
            return list(self._seen)
        if k <= 0:
            return []
        self._pull(k)
        return self._seen[:k]


def online_collect(it: SortedIterator, k: Optional[int]) -> list:
    """First ``min(k, total)`` results of ``it``; prefix-consistent across calls."""
    return it.collect(k)


def take(it: Iterable, k: Optional[int]) -> list:
    if k is None:
        return list(it)
    out = []
    if k <= 0:
        return out
    for item in it:
        out.append(item)
        if len(out) >= k:
            break
    return out


def lazy(factory: Callable[[], Iterable]) -> Iterator:
    """Defer building a stream until its first item is requested."""
    yield from factory()
