"""Instance file formats: edge-list text, requirement files, binary cache.

Edge list: one edge per line, two nonnegative integer ids separated by
whitespace; lines starting with '#' or '%' are comments; blank lines are
ignored. Requirement file: one "external_id threshold" line per vertex.

Binary cache layout (all little-endian u32 unless noted):
    magic "TSSB" | version | n | m | degree[n] | neighbors[2m] | r[n]?
The trailing requirement block is optional. External ids are not stored;
instances loaded from cache report vertices by their dense labels.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .graph import Graph, RawEdgeList

MAGIC = b"TSSB"
FORMAT_VERSION = 1


class EdgeListParseError(ValueError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class BinaryFormatError(ValueError):
    """Corrupt or unsupported binary instance file."""


def parse_edge_list(lines: Iterable[str]) -> RawEdgeList:
    """Parse edge records verbatim (duplicates and loops preserved).

    Mentioned vertex ids are remapped to a dense 0..n-1 labeling; the
    original ids are retained in the result's ``external_ids``.
    """
    records: list[tuple[int, int]] = []
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#") or text.startswith("%"):
            continue
        parts = text.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_no, f"expected 2 fields, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(line_no, f"non-integer vertex id in {text!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(line_no, "vertex ids must be nonnegative")
        records.append((u, v))

    edges = np.asarray(records, dtype=np.int64).reshape(-1, 2)
    external_ids, dense = np.unique(edges, return_inverse=True)
    return RawEdgeList(dense.reshape(edges.shape), external_ids)


def read_edge_list(path) -> RawEdgeList:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh)


def write_edge_list(path, g: Graph) -> None:
    """Write every undirected edge once, using external ids."""
    pairs = g.edge_pairs()
    ext = g.external_ids
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in pairs:
            fh.write(f"{ext[u]} {ext[v]}\n")


def read_requirement_file(path, g: Graph) -> np.ndarray:
    """Read per-vertex thresholds keyed by external id.

    Every vertex of the graph must be covered exactly once; unknown ids and
    duplicates are errors. Returned values are *raw* (zeros allowed) and
    indexed by internal vertex id; validate/normalize downstream.
    """
    values = np.full(g.n, -1, dtype=np.int64)
    ext = g.external_ids  # ascending; see graph construction
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#") or text.startswith("%"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: line {line_no}: expected 'external_id threshold'")
            try:
                ext_id, threshold = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}: line {line_no}: non-integer field") from None
            pos = int(np.searchsorted(ext, ext_id))
            if pos >= len(ext) or ext[pos] != ext_id:
                raise ValueError(f"{path}: line {line_no}: unknown vertex id {ext_id}")
            if values[pos] != -1:
                raise ValueError(f"{path}: line {line_no}: duplicate entry for vertex {ext_id}")
            if threshold < 0:
                raise ValueError(f"{path}: line {line_no}: negative threshold")
            values[pos] = threshold
    missing = np.flatnonzero(values == -1)
    if len(missing):
        raise ValueError(f"{path}: no threshold for vertex with external id "
                         f"{int(ext[missing[0]])} (and {len(missing) - 1} more)")
    return values


def write_requirement_file(path, g: Graph, values) -> None:
    values = np.asarray(values)
    with open(path, "w", encoding="utf-8") as fh:
        for v in range(g.n):
            fh.write(f"{g.external_ids[v]} {int(values[v])}\n")


def write_binary_instance(path, g: Graph, values=None) -> None:
    """Serialize a processed instance (and optionally its thresholds)."""
    parts = [
        MAGIC,
        np.asarray([FORMAT_VERSION, g.n, g.m], dtype="<u4").tobytes(),
        g.degrees.astype("<u4").tobytes(),
        g.indices.astype("<u4").tobytes(),
    ]
    if values is not None:
        values = np.asarray(values)
        if len(values) != g.n:
            raise ValueError("requirement vector length mismatch")
        parts.append(values.astype("<u4").tobytes())
    Path(path).write_bytes(b"".join(parts))


def read_binary_instance(path) -> tuple[Graph, np.ndarray | None]:
    """Load a cached instance; returns (graph, thresholds or None)."""
    blob = Path(path).read_bytes()
    if blob[:4] != MAGIC:
        raise BinaryFormatError(f"{path}: bad magic bytes")
    header = np.frombuffer(blob, dtype="<u4", count=3, offset=4)
    version, n, m = (int(x) for x in header)
    if version != FORMAT_VERSION:
        raise BinaryFormatError(f"{path}: unsupported format version {version}")
    offset = 4 + 12
    need = n + 2 * m
    body = np.frombuffer(blob, dtype="<u4", offset=offset)
    if len(body) not in (need, need + n):
        raise BinaryFormatError(f"{path}: truncated or oversized payload")
    degrees = body[:n].astype(np.int32)
    if int(degrees.sum()) != 2 * m:
        raise BinaryFormatError(f"{path}: degree sum does not match edge count")
    indices = body[n:need].astype(np.int32)
    if m and (indices.min() < 0 or indices.max() >= n):
        raise BinaryFormatError(f"{path}: neighbor id out of range")
    indptr = np.zeros(n + 1, dtype=np.int32)
    np.cumsum(degrees, out=indptr[1:])
    for v in range(n):
        row = indices[indptr[v]:indptr[v + 1]]
        if len(row) > 1 and np.any(np.diff(row) <= 0):
            raise BinaryFormatError(f"{path}: neighbor list of vertex {v} not strictly sorted")
    g = Graph(n, m, indptr, indices, degrees, np.arange(n, dtype=np.int64))
    values = body[need:].astype(np.int64) if len(body) == need + n else None
    return g, values


def is_binary_instance(path) -> bool:
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == MAGIC
    except OSError:
        return False
