"""Finite simple graphs, distance partitions, and certified distance-regularity.

The central object is :class:`DRGraph`: a graph together with its full
distance matrix, the exhaustively verified intersection-number tensor
p^h_{ij}, and the derived :class:`IntersectionArray`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .errors import (
    DiameterTooSmall,
    GraphFormatError,
    NotConnected,
    NotDistanceRegular,
    TooLarge,
    ValencyTooSmall,
)

DEFAULT_MAX_VERTICES = 20_000


@dataclass
class Graph:
    """Undirected simple graph on vertices 0..n-1, stored as CSR adjacency."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    name: str | None = None

    @classmethod
    def from_edges(cls, n: int, edges, name: str | None = None) -> "Graph":
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)
        if not seen:
            raise GraphFormatError("graph has no edges")
        us = np.array([e[0] for e in seen], dtype=np.int32)
        vs = np.array([e[1] for e in seen], dtype=np.int32)
        data = np.ones(2 * len(seen), dtype=np.int8)
        mat = sp.csr_matrix(
            (data, (np.concatenate([us, vs]), np.concatenate([vs, us]))), shape=(n, n)
        )
        mat.sum_duplicates()
        mat.sort_indices()
        return cls(n=n, indptr=mat.indptr.astype(np.int64),
                   indices=mat.indices.astype(np.int32), name=name)

    @property
    def edge_count(self) -> int:
        return int(self.indptr[-1]) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self):
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, int(v))

    def adjacency_csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (np.ones(len(self.indices), dtype=np.float64), self.indices, self.indptr),
            shape=(self.n, self.n),
        )


@dataclass(frozen=True)
class IntersectionArray:
    """Sequences c_1..c_D, a_0..a_D, b_0..b_{D-1} plus derived shell sizes."""

    D: int
    c: tuple
    a: tuple
    b: tuple

    @property
    def k(self) -> int:
        return self.b[0]

    @property
    def k_i(self) -> tuple:
        # exact integer product formula k_i = b_0..b_{i-1} / c_1..c_i
        ks = [1]
        num, den = 1, 1
        for i in range(1, self.D + 1):
            num *= self.b[i - 1]
            den *= self.c[i - 1]
            ks.append(num // den)
        return tuple(ks)

    @property
    def n(self) -> int:
        return sum(self.k_i)

    def c_full(self) -> tuple:
        """c_0..c_D with the convention c_0 = 0."""
        return (0,) + self.c

    def b_full(self) -> tuple:
        """b_0..b_D with the convention b_D = 0."""
        return self.b + (0,)

    def validate(self) -> None:
        D, c, a, b = self.D, self.c, self.a, self.b
        if len(c) != D or len(a) != D + 1 or len(b) != D:
            raise ValueError("length mismatch in intersection array")
        if c[0] != 1 or a[0] != 0:
            raise ValueError("c_1 must be 1 and a_0 must be 0")
        k = b[0]
        cf, bf = self.c_full(), self.b_full()
        for i in range(D + 1):
            if cf[i] + a[i] + bf[i] != k:
                raise ValueError(f"c_i + a_i + b_i != k at i={i}")
        for i in range(2, D + 1):
            if c[i - 1] < c[i - 2]:
                raise ValueError("c_i must be non-decreasing")
        for i in range(1, D):
            if b[i] > b[i - 1]:
                raise ValueError("b_i must be non-increasing")
        for i in range(D):
            if bf[i] < cf[D - i]:
                raise ValueError("b_i >= c_{D-i} violated")

    def as_dict(self) -> dict:
        return {"D": self.D, "c": list(self.c), "a": list(self.a), "b": list(self.b),
                "k_i": list(self.k_i), "n": self.n}


def intersection_array_from_p(p: np.ndarray, D: int) -> IntersectionArray:
    c = tuple(int(p[i, 1, i - 1]) for i in range(1, D + 1))
    a = tuple(int(p[i, 1, i]) for i in range(D + 1))
    b = tuple(int(p[i, 1, i + 1]) for i in range(D))
    return IntersectionArray(D=D, c=c, a=a, b=b)


@dataclass
class DRGraph:
    """A graph with certified distance-regularity.

    Holds the materialized distance matrix, the full p^h_{ij} tensor and the
    intersection array.  All fields are immutable after construction.
    """

    graph: Graph
    diameter: int
    dist: np.ndarray
    p: np.ndarray
    intersection: IntersectionArray
    _shell_stats: dict | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def shell_stats(self) -> dict:
        """Cached per-pair neighbor-shell statistics (see kernels)."""
        if self._shell_stats is None:
            g = self.graph
            self._shell_stats = _kernels.shell_stats(
                g.n, g.indptr, g.indices, self.dist, self.diameter
            )
        return self._shell_stats


def build_drgraph(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> DRGraph:
    """Verify distance-regularity exhaustively and assemble a DRGraph.

    Raises NotConnected / DiameterTooSmall / ValencyTooSmall /
    NotDistanceRegular (with a witness) as applicable.
    """
    if g.n > max_vertices:
        raise TooLarge(f"{g.n} vertices exceeds cap {max_vertices}")
    dist = _kernels.bfs_all(g.n, g.indptr, g.indices)
    if (dist < 0).any():
        raise NotConnected("graph is not connected")
    D = int(dist.max())
    if D < 3:
        raise DiameterTooSmall(f"diameter {D} < 3")
    degs = np.diff(g.indptr)
    if degs.min() != degs.max():
        # not even regular; exhibit the mismatch via the p-tensor check anyway
        x = int(np.argmin(degs))
        y = int(np.argmax(degs))
        raise NotDistanceRegular((0, 1, 1, x, x, int(degs[x]), y, y, int(degs[y])))
    k = int(degs[0])
    if k < 3:
        raise ValencyTooSmall(f"valency {k} < 3")
    p, witness = _kernels.p_tensor(dist, D)
    if witness is not None:
        raise NotDistanceRegular(tuple(witness))
    ia = intersection_array_from_p(p, D)
    ia.validate()
    if ia.n != g.n:
        raise NotDistanceRegular((0, 0, 0, 0, 0, ia.n, 0, 0, g.n))
    return DRGraph(graph=g, diameter=D, dist=dist, p=p, intersection=ia)


def distance_partition(dr: DRGraph, x: int) -> list:
    """[G_0(x), .., G_D(x)] as sorted integer lists."""
    if not (0 <= x < dr.n):
        raise IndexError(f"vertex {x} out of range")
    row = dr.dist[x]
    return [sorted(np.flatnonzero(row == i).tolist()) for i in range(dr.diameter + 1)]


def check_antipodal_2cover(dr: DRGraph) -> bool:
    """k_D = 1; when true also asserts b_i = c_{D-i} for all i."""
    ks = dr.intersection.k_i
    if ks[-1] != 1:
        return False
    cf, bf = dr.intersection.c_full(), dr.intersection.b_full()
    D = dr.diameter
    for i in range(D + 1):
        assert bf[i] == cf[D - i], f"antipodal 2-cover but b_{i} != c_{D - i}"
    return True


# ---------------------------------------------------------------------------
# graph JSON format: {"name": str, "n": int, "edges": [[u, v], ...]}, u < v

def graph_to_json(g: Graph) -> dict:
    return {"name": g.name or "", "n": g.n, "edges": [[u, v] for u, v in g.edges()]}


def graph_from_json(obj: dict) -> Graph:
    try:
        n = int(obj["n"])
        edges = obj["edges"]
        name = obj.get("name") or None
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"malformed graph object: {exc}")
    if n <= 0:
        raise GraphFormatError("n must be positive")
    pairs = []
    for e in edges:
        if len(e) != 2:
            raise GraphFormatError(f"edge {e} is not a pair")
        u, v = int(e[0]), int(e[1])
        if u >= v:
            raise GraphFormatError(f"edge [{u},{v}] not listed with u < v")
        pairs.append((u, v))
    if len(set(pairs)) != len(pairs):
        raise GraphFormatError("duplicate edges")
    return Graph.from_edges(n, pairs, name=name)


def save_graph(g: Graph, path: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(graph_to_json(g), fh)
        fh.write("\n")
    os.replace(tmp, path)


def load_graph(path: str) -> Graph:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}")
    return graph_from_json(obj)
