"""Command line interface: build, query, bench and selftest.

Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 I/O or
input-format error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import shlex
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from .core import Point, PointFileError, QueryRect, make_points, read_points
from .index import FORMATS, VARIANTS, PointIndex, RunConfig, estimated_words
from .persist import IndexFormatError, index_kind, load, save
from .rangetree import ConfigError
from .stream import ProbeBatch, ProbeStats
from .text import (TextIndex, max_non_overlapping, naive_dont_care, naive_occurrences,
                   parse_dontcare)
from .threesided import LOWER, UPPER

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_IO = 0, 1, 2, 3
MEM_BUDGET_ENV = "SORTEDRANGE_MEM_BUDGET"

POINT_FAMILIES = ("succ", "sorted", "3sided", "maximal", "visible")
TEXT_FAMILIES = ("succ", "find", "dontcare", "nonoverlap", "posfind")
FAMILIES = tuple(dict.fromkeys(POINT_FAMILIES + TEXT_FAMILIES))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


# -- query parsing and evaluation ---------------------------------------------------


def _bound(tok: str) -> Optional[int]:
    if tok in ("*", "inf", "-inf"):
        return None
    try:
        return int(tok)
    except ValueError:
        raise UsageError(f"bad coordinate {tok!r} (integer or '*' for unbounded)") from None


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise UsageError(f"expected an integer, got {tok!r}") from None


def _arity(family: str, args: List[str], counts) -> None:
    if len(args) not in counts:
        want = " or ".join(str(c) for c in counts)
        raise UsageError(f"{family} takes {want} arguments, got {len(args)}")


def _enc(s: str) -> bytes:
    return s.encode("utf-8", "surrogateescape")


@dataclass
class Answer:
    seq: int
    family: str
    args: List[str]
    results: list = field(default_factory=list)
    absent: bool = False
    stats: Optional[dict] = None
    mismatch: Optional[str] = None


def _points_query(idx: PointIndex, family: str, args: List[str], k, stats, verify):
    """Return ``(results, absent, expected)``; ``expected`` is ``None`` unless verifying."""
    if family == "succ":
        _arity(family, args, (3,))
        a, c, d = map(_bound, args)
        p = idx.successor(a, c, d, stats)
        exp = [idx.oracle_successor(a, c, d)] if verify else None
        return [p], p is None, exp
    if family in ("sorted", "maximal"):
        _arity(family, args, (4,))
        q = QueryRect(*map(_bound, args))
        it = idx.sorted(q, stats) if family == "sorted" else idx.maximal(q, stats)
        exp = None
        if verify:
            full = idx.oracle_sorted(q) if family == "sorted" else idx.oracle_maximal(q)
            exp = full if k is None else full[:k]
        return it.collect(k), False, exp
    if family == "3sided":
        _arity(family, args, (3, 4))
        side = args[3] if len(args) == 4 else UPPER
        if side not in (UPPER, LOWER):
            raise UsageError(f"side must be {UPPER} or {LOWER}")
        a, b, c = map(_bound, args[:3])
        it = idx.three_sided(a, b, c, side, stats)
        exp = None
        if verify:
            q = QueryRect(a, b, None, c) if side == UPPER else QueryRect(a, b, c, None)
            full = idx.oracle_sorted(q)
            exp = full if k is None else full[:k]
        return it.collect(k), False, exp
    if family == "visible":
        _arity(family, args, (2,))
        qx, qy = _int(args[0]), _int(args[1])
        it = idx.visible(qx, qy, stats)
        exp = None
        if verify:
            full = idx.oracle_maximal(QueryRect(None, qx, None, qy))
            exp = full if k is None else full[:k]
        return it.collect(k), False, exp
    raise UsageError(f"query family {family!r} needs a text index")


def _text_query(ti: TextIndex, family: str, args: List[str], k, stats, verify, use_rmq):
    text = ti.text
    if family == "succ":
        _arity(family, args, (2,))
        pat, j = _enc(args[0]), _int(args[1])
        pos = ti.successive_list_index(pat, j, stats)
        exp = None
        if verify:
            occ = [p for p in (naive_occurrences(text, pat) if pat else range(1, ti.n + 1)) if p >= j]
            exp = [occ[0] if occ else None]
        return [pos], pos is None, exp
    if family in ("find", "posfind"):
        if family == "find":
            _arity(family, args, (1,))
            i, j = 1, ti.n
        else:
            _arity(family, args, (3,))
            i, j = _int(args[1]), _int(args[2])
            if i > j:
                raise UsageError("posfind needs i <= j")
        pat = _enc(args[0])
        if use_rmq and family == "find":
            it = ti.iter_occurrences_rmq(pat)
        else:
            it = ti.iter_occurrences(pat, i, j, stats)
        res = []
        for pos in it:
            if k is not None and len(res) >= k:
                break
            res.append(pos)
        exp = None
        if verify:
            occ = naive_occurrences(text, pat) if pat else list(range(1, ti.n + 1))
            occ = [p for p in occ if i <= p <= j]
            exp = occ if k is None else occ[:k]
        return res, False, exp
    if family == "nonoverlap":
        _arity(family, args, (1,))
        pat = _enc(args[0])
        if not pat:
            raise UsageError("nonoverlap needs a nonempty pattern")
        res = ti.non_overlapping_sequence(pat)
        exp = None
        if verify:
            ok = len(res) == max_non_overlapping(text, pat)
            occ = set(naive_occurrences(text, pat))
            ok = ok and all(p in occ for p in res)
            ok = ok and all(b - a >= len(pat) for a, b in zip(res, res[1:]))
            exp = res if ok else ["<not a maximum non-overlapping chain>"]
        return res, False, exp
    if family == "dontcare":
        _arity(family, args, (1,))
        parts = parse_dontcare(_enc(args[0]))
        if any(not p for p in parts):
            raise UsageError("don't-care pattern has an empty part")
        res = ti.dont_care_match(parts)
        exp = None
        if verify:
            exp = naive_dont_care(text, parts) or []
        return res or [], res is None, exp
    raise UsageError(f"query family {family!r} needs a point index")


def _fmt_result(r):
    if isinstance(r, Point):
        return [r.x, r.y, r.id]
    return r


def run_query(index, seq: int, family: str, args: List[str], k=None, verify=False,
              want_stats=False, use_rmq=False) -> Answer:
    stats = ProbeStats() if want_stats else None
    if isinstance(index, PointIndex):
        res, absent, exp = _points_query(index, family, args, k, stats, verify)
    else:
        res, absent, exp = _text_query(index, family, args, k, stats, verify, use_rmq)
    if k is not None and family == "succ":
        res = res[:k]
    ans = Answer(seq, family, list(args), [] if absent else res, absent)
    if stats is not None:
        ans.stats = stats.counters()
        ans.stats["escalations"] = len(stats.escalations)
    if verify and exp is not None:
        if family == "succ":
            exp = [] if exp[0] is None else exp
            if k is not None:
                exp = exp[:k]
        if exp != ans.results:
            ans.mismatch = f"expected {[_fmt_result(e) for e in exp]}"
    return ans


def render(ans: Answer, fmt: str) -> str:
    if fmt == "json":
        rec = {"seq": ans.seq, "family": ans.family, "args": ans.args,
               "results": [_fmt_result(r) for r in ans.results], "absent": ans.absent}
        if ans.stats is not None:
            rec["stats"] = ans.stats
        if ans.mismatch is not None:
            rec["mismatch"] = ans.mismatch
        return json.dumps(rec)
    head = " ".join([ans.family] + [shlex.quote(a) for a in ans.args])
    if ans.absent:
        body = "absent"
    elif not ans.results:
        body = "(none)"
    else:
        body = " ".join(f"({r.x},{r.y})#{r.id}" if isinstance(r, Point) else str(r) for r in ans.results)
    line = f"{head}: {body}"
    if ans.stats is not None:
        line += "  [" + " ".join(f"{key}={v}" for key, v in ans.stats.items()) + "]"
    if ans.mismatch is not None:
        line += f"  MISMATCH {ans.mismatch}"
    return line


# -- commands ---------------------------------------------------------------------


def _mem_budget() -> Optional[int]:
    raw = os.environ.get(MEM_BUDGET_ENV)
    if not raw:
        return None
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{MEM_BUDGET_ENV} must be an integer byte count") from None
    if v <= 0:
        raise UsageError(f"{MEM_BUDGET_ENV} must be positive")
    return v


def _warn_budget(n: int, variant: str, budget: Optional[int]) -> None:
    if budget is None:
        return
    est = 8 * estimated_words(n, variant)
    if est > budget:
        print(f"warning: estimated {est} bytes for n={n} ({variant}) exceeds "
              f"{MEM_BUDGET_ENV}={budget}", file=sys.stderr)


def cmd_build(ns) -> int:
    cfg = RunConfig(variant=ns.variant, stride=ns.stride, group_size=ns.group_size,
                    mem_budget=_mem_budget(), fmt=ns.format).validate()
    t0 = time.perf_counter()
    if ns.kind == "points":
        pts = read_points(ns.input)
        _warn_budget(len(pts), cfg.variant, cfg.mem_budget)
        index = PointIndex(pts, cfg)
        summary = index.describe()
    else:
        with open(ns.input, "rb") as fh:
            text = fh.read()
        if not text:
            raise PointFileError(0, "empty text file")
        _warn_budget(len(text), "successor", cfg.mem_budget)
        index = TextIndex(text, cfg.stride)
        summary = {"kind": "text", "n": index.n, "stride": cfg.stride,
                   "bytes": {"position_set": index.index.nbytes, "suffix_array": index._sa.nbytes}}
    summary["build_seconds"] = round(time.perf_counter() - t0, 4)
    summary["file_bytes"] = save(index, ns.output)
    summary["output"] = ns.output
    if ns.format == "json":
        print(json.dumps(summary))
    else:
        print(" ".join(f"{key}={v}" for key, v in summary.items()))
    return EXIT_OK


def _read_queries(ns) -> List[List[str]]:
    if ns.queries:
        with open(ns.queries, encoding="utf-8", errors="surrogateescape") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.startswith("#")]
        return [shlex.split(ln) for ln in lines]
    return [ns.args]


def _check_family(index, family: str) -> None:
    allowed = POINT_FAMILIES if isinstance(index, PointIndex) else TEXT_FAMILIES
    if family not in allowed:
        raise UsageError(f"{family!r} does not apply to a {index_kind(index)} index "
                         f"(use one of {', '.join(allowed)})")


def cmd_query(ns) -> int:
    index = load(ns.index)
    _check_family(index, ns.family)
    queries = _read_queries(ns)

    def one(item):
        seq, args = item
        return run_query(index, seq, ns.family, args, ns.k, ns.verify, ns.stats, ns.rmq)

    items = list(enumerate(queries))
    if ns.threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=ns.threads) as pool:
            answers = list(pool.map(one, items))  # map keeps submission order
    else:
        answers = [one(it) for it in items]
    bad = 0
    for ans in answers:
        print(render(ans, ns.format))
        if ans.mismatch is not None:
            bad += 1
    if bad:
        print(f"{bad} of {len(answers)} queries mismatched the oracle", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def random_points(n: int, rng: random.Random) -> List[Point]:
    xs = rng.sample(range(1, n + 1), n)
    return [Point(i + 1, xs[i], i) for i in range(n)]


def random_query(index, family: str, rng: random.Random) -> List[str]:
    if isinstance(index, TextIndex):
        t = index.text
        m = rng.randint(1, min(4, index.n))
        s = rng.randint(0, index.n - m)
        pat = t[s:s + m].decode("latin-1")
        if family == "succ":
            return [pat, str(rng.randint(1, index.n))]
        if family == "posfind":
            i, j = sorted(rng.randint(1, index.n) for _ in range(2))
            return [pat, str(i), str(j)]
        if family == "dontcare":
            m2 = rng.randint(1, min(3, index.n))
            s2 = rng.randint(0, index.n - m2)
            other = t[s2:s2 + m2].decode("latin-1")
            return [(pat + "*" + other).replace("\\", "\\\\")]
        return [pat]
    xs = index.rank_map.x_sorted
    ys = index.rank_map.y_sorted

    def two(vals):
        a, b = sorted((rng.choice(vals), rng.choice(vals)))
        return str(a), str(b)

    if family == "succ":
        c, d = two(ys)
        return [str(rng.choice(xs)), c, d]
    if family in ("sorted", "maximal"):
        return [*two(xs), *two(ys)]
    if family == "3sided":
        return [*two(xs), str(rng.choice(ys)), rng.choice((UPPER, LOWER))]
    return [str(rng.choice(xs)), str(rng.choice(ys))]


def bench_records(index, family: str, count: int, seed: int, k, repeat: int, per_query: bool = False):
    """Yield json-ready dicts: optional per-query counters, then one summary per repetition."""
    for rep in range(repeat):
        rng = random.Random(seed)
        batch = ProbeBatch()
        t0 = time.perf_counter()
        for seq in range(count):
            args = random_query(index, family, rng)
            ans = run_query(index, seq, family, args, k, want_stats=True)
            st = ProbeStats(**{key: v for key, v in ans.stats.items() if key != "escalations"})
            batch.add(st)
            if per_query:
                yield {"record": "query", "rep": rep, "seq": seq, "args": args,
                       "reported": len(ans.results), **ans.stats}
        wall = time.perf_counter() - t0
        n = index.n
        yield {"record": "summary", "family": family, "n": n, "rep": rep, "count": count,
               "k": k, "seed": seed, "seconds": round(wall, 4),
               "us_per_query": round(1e6 * wall / max(1, count), 2), **batch.summary()}


def cmd_bench(ns) -> int:
    if ns.index is None and not ns.sizes:
        raise UsageError("bench needs an index file or --sizes")
    targets = []
    if ns.index is not None:
        targets.append(load(ns.index))
    for n in ns.sizes or []:
        cfg = RunConfig(variant=ns.variant, stride=ns.stride, group_size=ns.group_size).validate()
        rng = random.Random(ns.seed)
        if ns.text:
            targets.append(TextIndex(bytes(rng.choice(b"acgt") for _ in range(n)), cfg.stride))
        else:
            targets.append(PointIndex(random_points(n, rng), cfg))
    for index in targets:
        _check_family(index, ns.family)
        for rec in bench_records(index, ns.family, ns.count, ns.seed, ns.k, ns.repeat, ns.per_query):
            print(json.dumps(rec))
    return EXIT_OK


def selftest(seed: int = 42, count: int = 200, out=sys.stdout) -> int:
    """Random differential run of every structure and query family against the oracles."""
    rng = random.Random(seed)
    bad = 0
    for variant in VARIANTS:
        for n in (1, 7, 64, 300):
            pts = make_points((rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(n))
            idx = PointIndex(pts, RunConfig(variant=variant))
            for family in POINT_FAMILIES:
                fails = 0
                for seq in range(count):
                    k = rng.choice((None, 0, 1, 5))
                    ans = run_query(idx, seq, family, random_query(idx, family, rng), k, verify=True)
                    fails += ans.mismatch is not None
                bad += fails
                print(f"{'PASS' if not fails else 'FAIL'} points variant={variant} n={n} "
                      f"family={family} queries={count} mismatches={fails}", file=out)
    for n in (1, 13, 200):
        text = bytes(rng.choice(b"ab") for _ in range(n))
        ti = TextIndex(text)
        for family in TEXT_FAMILIES:
            fails = 0
            for seq in range(count):
                ans = run_query(ti, seq, family, random_query(ti, family, rng), verify=True)
                fails += ans.mismatch is not None
            bad += fails
            print(f"{'PASS' if not fails else 'FAIL'} text n={n} family={family} "
                  f"queries={count} mismatches={fails}", file=out)
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_selftest(ns) -> int:
    return selftest(ns.seed, ns.count)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sortedrange", description="Sorted orthogonal range reporting indexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def structure_opts(sp):
        sp.add_argument("--variant", choices=VARIANTS, default="successor")
        sp.add_argument("--stride", type=_positive, default=1,
                        help="store every STRIDE-th tree level (space/time trade-off)")
        sp.add_argument("--group-size", type=_positive, default=None,
                        help="group size of the optimal-2d structure (>= 2)")

    b = sub.add_parser("build", help="build an index file from points or text")
    b.add_argument("input")
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--kind", choices=("points", "text"), default="points")
    structure_opts(b)
    b.add_argument("--format", choices=FORMATS, default="human")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer queries against an index file")
    q.add_argument("index")
    q.add_argument("family", choices=FAMILIES)
    q.add_argument("args", nargs="*", help="query arguments; '*' is an unbounded side")
    q.add_argument("-k", type=_nonneg, default=None, help="report at most K results")
    q.add_argument("--queries", help="file with one query (arguments only) per line")
    q.add_argument("--verify", action="store_true", help="check every answer against the oracle")
    q.add_argument("--stats", action="store_true", help="include probe counters")
    q.add_argument("--rmq", action="store_true", help="find: enumerate with the suffix-array RMQ method")
    q.add_argument("--threads", type=_positive, default=1)
    q.add_argument("--format", choices=FORMATS, default="human")
    q.set_defaults(func=cmd_query)

    be = sub.add_parser("bench", help="probe-count and timing report as json-lines")
    be.add_argument("index", nargs="?")
    be.add_argument("--family", choices=FAMILIES, default="succ")
    be.add_argument("--sizes", type=lambda s: [_positive(v) for v in s.split(",")],
                    help="comma-separated synthetic sizes to build and measure")
    be.add_argument("--text", action="store_true", help="synthetic sizes build text indexes")
    structure_opts(be)
    be.add_argument("--count", type=_positive, default=1000)
    be.add_argument("--seed", type=int, default=42)
    be.add_argument("-k", type=_nonneg, default=None)
    be.add_argument("--repeat", type=_positive, default=1)
    be.add_argument("--per-query", action="store_true")
    be.set_defaults(func=cmd_bench)

    st = sub.add_parser("selftest", help="differential test against the oracles")
    st.add_argument("--seed", type=int, default=42)
    st.add_argument("--count", type=_positive, default=200)
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (UsageError, ConfigError) as exc:
        print(f"sortedrange: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, PointFileError, IndexFormatError) as exc:
        print(f"sortedrange: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
