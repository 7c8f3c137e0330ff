"""Versioned index files.

Layout: ``b"SRIX"``, a little-endian ``uint16`` format version and a
``uint32`` header length, then a JSON header and the raw sections it lists.
The header records the index kind, the build configuration and, for each
section, its name and byte length.

Point indexes store the original points plus the serialized compact range
trees of the successor index and its mirror; a three-sided or grouped
structure is rebuilt from the points on load.  Text indexes store the text,
its suffix array and the position-set tree.
"""
from __future__ import annotations

import json
import struct
from typing import Dict, Tuple, Union

import numpy as np

from .core import Point
from .index import PointIndex, RunConfig
from .rangetree import CompactRangeTree
from .successor import SuccessorIndex, default_rmq_block
from .text import TextIndex

MAGIC = b"SRIX"
FORMAT_VERSION = 1
_PREFIX = "<4sHI"


class IndexFormatError(ValueError):
    """The file is not an index file or was written by an incompatible version."""


def _pack(kind: str, config: dict, meta: dict, sections: Dict[str, bytes]) -> bytes:
    header = {"kind": kind, "config": config, **meta,
              "sections": [[name, len(data)] for name, data in sections.items()]}
    hb = json.dumps(header, sort_keys=True).encode()
    return struct.pack(_PREFIX, MAGIC, FORMAT_VERSION, len(hb)) + hb + b"".join(sections.values())


def _unpack(data: bytes) -> Tuple[dict, Dict[str, bytes]]:
    size = struct.calcsize(_PREFIX)
    if len(data) < size:
        raise IndexFormatError("file too short to be an index")
    magic, version, hlen = struct.unpack_from(_PREFIX, data, 0)
    if magic != MAGIC:
        raise IndexFormatError("not a sortedrange index file")
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"index format version {version}, this build reads {FORMAT_VERSION}")
    try:
        header = json.loads(data[size:size + hlen])
    except ValueError as exc:
        raise IndexFormatError(f"corrupt index header: {exc}") from None
    off = size + hlen
    sections = {}
    for name, length in header["sections"]:
        sections[name] = data[off:off + length]
        off += length
    if off != len(data):
        raise IndexFormatError("index file length does not match its header")
    return header, sections


def _i64(values) -> bytes:
    return np.asarray(values, dtype="<i8").tobytes()


def dumps(index: Union[PointIndex, TextIndex]) -> bytes:
    if isinstance(index, PointIndex):
        pts = index.points
        sections = {
            "x": _i64([p.x for p in pts]),
            "y": _i64([p.y for p in pts]),
            "id": _i64([p.id for p in pts]),
        }
        if index.succ is not None:
            sections["tree"] = index.succ.tree.to_bytes()
            sections["mirror"] = index.succ.mirror.tree.to_bytes()
        return _pack("points", index.config.build_config(), {"n": index.n}, sections)
    if isinstance(index, TextIndex):
        sections = {
            "text": index.text,
            "sa": _i64(np.asarray(index._sa) - 1),
            "tree": index.index.tree.to_bytes(),
        }
        return _pack("text", {"stride": index.stride}, {"n": index.n}, sections)
    raise TypeError(f"cannot serialize {type(index).__name__}")


def loads(data: bytes) -> Union[PointIndex, TextIndex]:
    header, sec = _unpack(data)
    kind, cfg = header["kind"], header["config"]
    if kind == "points":
        xs, ys, ids = (np.frombuffer(sec[k], "<i8").tolist() for k in ("x", "y", "id"))
        points = [Point(x, y, i) for x, y, i in zip(xs, ys, ids)]
        config = RunConfig(variant=cfg["variant"], stride=cfg["stride"], group_size=cfg["group_size"])
        succ = None
        if points:
            tree = CompactRangeTree.from_bytes(sec["tree"])
            mirror = CompactRangeTree.from_bytes(sec["mirror"])
            succ = SuccessorIndex._from_parts(tree, default_rmq_block(tree.n), mirror)
        index = PointIndex(points, config, succ=succ)
        if succ is not None:
            succ.rank_map = index.rank_map
        return index
    if kind == "text":
        tree = CompactRangeTree.from_bytes(sec["tree"])
        succ = SuccessorIndex._from_parts(tree, default_rmq_block(tree.n))
        sa = np.frombuffer(sec["sa"], "<i8").astype(np.int64)
        return TextIndex(sec["text"], cfg["stride"], sa=sa, index=succ)
    raise IndexFormatError(f"unknown index kind {kind!r}")


def save(index, path) -> int:
    data = dumps(index)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path):
    with open(path, "rb") as fh:
        return loads(fh.read())


def index_kind(index) -> str:
    return "points" if isinstance(index, PointIndex) else "text"
