"""Attributed-graph data model and text-file loaders.

File formats
------------
Edge list: one undirected edge per line as two whitespace-separated node
ids; ``#`` starts a comment line. The optional directive ``#nodes N`` pins
the node count so that graphs with trailing isolated nodes survive a
save/load round trip; without it, n = 1 + max node id.

Attributes: a header line ``#dense m`` or ``#sparse m`` declares the
attribute count, then one node per line. Dense lines hold ``node_id``
followed by m values; sparse lines hold ``node_id idx:value ...``.
Nodes absent from the file get the all-zero vector.
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, ParseError

logger = logging.getLogger(__name__)

_NODES_DIRECTIVE = re.compile(r"#\s*nodes\s+(\d+)\s*$")
_ATTR_HEADER = re.compile(r"#\s*(dense|sparse)\s+(\d+)\s*$")


@dataclass(frozen=True)
class AttributedGraph:
    """Undirected graph with optional per-node attribute vectors.

    Nodes are dense 0-based indices. The adjacency is kept in CSR form
    (``indptr``/``indices``, neighbor lists sorted ascending) for O(degree)
    iteration, plus a set of canonical ``(min, max)`` pairs for O(1)
    membership tests. Instances are immutable after construction; all
    arrays should be treated as read-only.
    """

    n: int
    edges: np.ndarray  # (m, 2) int64, i < j, lexicographically sorted
    indptr: np.ndarray
    indices: np.ndarray
    attributes: np.ndarray  # (n, attr_dim) float64; attr_dim == 0 when absent
    edge_set: frozenset = field(repr=False)

    @classmethod
    def build(cls, n: int, edges, attributes: np.ndarray | None = None) -> "AttributedGraph":
        """Construct from an edge collection, collapsing duplicates and self-loops."""
        if n < 0:
            raise ValueError("node count must be non-negative")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        arr = arr[arr[:, 0] != arr[:, 1]]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        canon = np.unique(np.column_stack([lo, hi]), axis=0) if arr.size else arr.reshape(0, 2)

        src = np.concatenate([canon[:, 0], canon[:, 1]])
        dst = np.concatenate([canon[:, 1], canon[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        if attributes is None:
            attributes = np.zeros((n, 0))
        attributes = np.asarray(attributes, dtype=np.float64)
        if attributes.shape[0] != n:
            raise ValueError("attribute matrix must have one row per node")

        return cls(
            n=n,
            edges=canon,
            indptr=indptr,
            indices=dst,
            attributes=attributes,
            edge_set=frozenset(map(tuple, canon.tolist())),
        )

    @property
    def m_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def attr_dim(self) -> int:
        return int(self.attributes.shape[1])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of ``v`` (deterministic iteration order)."""
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range for graph with {self.n} nodes")
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range for graph with {self.n} nodes")
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_set

    def adjacency_matrix(self) -> sp.csr_matrix:
        """Binary adjacency as a scipy CSR matrix (float64)."""
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def with_attributes(self, attributes: np.ndarray) -> "AttributedGraph":
        attributes = np.asarray(attributes, dtype=np.float64)
        if attributes.shape[0] != self.n:
            raise ValueError("attribute matrix must have one row per node")
        return replace(self, attributes=attributes)


def _parse_node_id(token: str, indexing: str, path, lineno: int) -> int:
    try:
        raw = int(token)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: invalid node id {token!r}") from None
    if indexing == "one":
        raw -= 1
    if raw < 0:
        raise ParseError(f"{path}:{lineno}: node id {token!r} out of range for {indexing}-based indexing")
    return raw


def _check_indexing(indexing: str) -> str:
    key = indexing.removesuffix("-based") if isinstance(indexing, str) else indexing
    if key not in ("zero", "one"):
        raise ConfigError(f"indexing must be 'zero' or 'one', got {indexing!r}")
    return key


def load_edge_list(path, indexing: str = "zero") -> AttributedGraph:
    """Load an undirected graph from an edge-list text file.

    Duplicate edges collapse to one; self-loops are dropped (logged with a
    count). Node ids are normalized to 0-based indices; with gaps in the id
    range the skipped ids become isolated nodes.
    """
    indexing = _check_indexing(indexing)
    edges = []
    max_id = -1
    declared_n = 0
    self_loops = 0
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _NODES_DIRECTIVE.match(line)
                if m:
                    declared_n = max(declared_n, int(m.group(1)))
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(f"{path}:{lineno}: expected two node ids, got {line!r}")
            u = _parse_node_id(tokens[0], indexing, path, lineno)
            v = _parse_node_id(tokens[1], indexing, path, lineno)
            max_id = max(max_id, u, v)
            if u == v:
                self_loops += 1
                continue
            edges.append((u, v))
    if self_loops:
        logger.warning("%s: dropped %d self-loop(s)", path, self_loops)
    n = max(declared_n, max_id + 1)
    return AttributedGraph.build(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def save_edge_list(graph: AttributedGraph, path) -> None:
    """Write the edge list with a ``#nodes`` directive for exact round trips."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"#nodes {graph.n}\n")
        for u, v in graph.edges.tolist():
            handle.write(f"{u} {v}\n")


def load_attributes(path, graph: AttributedGraph, indexing: str = "zero") -> AttributedGraph:
    """Load per-node attribute vectors; returns a new graph with them attached.

    The ``indexing`` convention applies to node ids and, for sparse lines,
    to the coordinate indices as well. Negative values are accepted but
    logged, since downstream similarity treats them as zero affinity.
    """
    indexing = _check_indexing(indexing)
    attr_dim = None
    fmt = None
    values: np.ndarray | None = None
    seen: set[int] = set()
    duplicates = 0
    negatives = 0
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _ATTR_HEADER.match(line)
                if m and fmt is None:
                    fmt = m.group(1)
                    attr_dim = int(m.group(2))
                    values = np.zeros((graph.n, attr_dim))
                continue
            if fmt is None or values is None:
                raise ParseError(f"{path}:{lineno}: data before '#dense m' / '#sparse m' header")
            tokens = line.split()
            node = _parse_node_id(tokens[0], indexing, path, lineno)
            if node >= graph.n:
                raise ParseError(f"{path}:{lineno}: node id {tokens[0]} >= node count {graph.n}")
            if node in seen:
                duplicates += 1
            seen.add(node)
            if fmt == "dense":
                if len(tokens) - 1 != attr_dim:
                    raise ParseError(
                        f"{path}:{lineno}: expected {attr_dim} values, got {len(tokens) - 1}"
                    )
                try:
                    row = np.array([float(t) for t in tokens[1:]])
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: invalid attribute value") from None
                values[node] = row
                negatives += int(np.sum(row < 0))
            else:
                row = np.zeros(attr_dim)
                for tok in tokens[1:]:
                    idx_str, _, val_str = tok.partition(":")
                    if not val_str:
                        raise ParseError(f"{path}:{lineno}: expected 'index:value', got {tok!r}")
                    try:
                        idx = int(idx_str)
                        val = float(val_str)
                    except ValueError:
                        raise ParseError(f"{path}:{lineno}: invalid sparse entry {tok!r}") from None
                    if indexing == "one":
                        idx -= 1
                    if not 0 <= idx < attr_dim:
                        raise ParseError(
                            f"{path}:{lineno}: attribute index {idx_str} out of range for {attr_dim} attributes"
                        )
                    row[idx] = val
                    negatives += int(val < 0)
                values[node] = row
    if fmt is None or values is None:
        raise ParseError(f"{path}: missing '#dense m' / '#sparse m' header")
    if duplicates:
        logger.warning("%s: %d duplicate node line(s), later lines win", path, duplicates)
    if negatives:
        logger.warning(
            "%s: %d negative attribute value(s); similarity clamps negative affinity to 0",
            path, negatives,
        )
    return graph.with_attributes(values)


def save_attributes(graph: AttributedGraph, path) -> None:
    """Write attributes in the dense text format, one line per node."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"#dense {graph.attr_dim}\n")
        for node in range(graph.n):
            row = " ".join(format(v, ".17g") for v in graph.attributes[node])
            handle.write(f"{node} {row}\n" if graph.attr_dim else f"{node}\n")


def write_id_map(path, n: int, indexing: str = "zero") -> None:
    """Emit the original-id -> dense-index map as a CSV sidecar."""
    indexing = _check_indexing(indexing)
    offset = 1 if indexing == "one" else 0
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["original_id", "dense_index"])
        for dense in range(n):
            writer.writerow([dense + offset, dense])
