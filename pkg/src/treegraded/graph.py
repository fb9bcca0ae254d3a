"""Graph metric primitives: distances, canonical geodesics, balls, scale components.

Graphs are finite, connected, undirected, with unit-length edges, so every
distance is an exact integer. Scale-r chains come in two flavors captured by
ChainPredicate: strict chains step d < r, weak chains step d <= r. All
distances are measured in the ambient graph even when an operation is
restricted to a vertex subset.

All-pairs distances are cached lazily (scipy's C BFS for graphs up to
_DENSE_CAP vertices, per-source python BFS above that); everything downstream
is a lookup into those rows.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _sparse_components
from scipy.sparse.csgraph import shortest_path as _sparse_shortest_path

# all-pairs matrix kept for graphs up to the standard corpus cap (5,000
# vertices, ~100MB int32); larger graphs fall back to cached per-source BFS
_DENSE_CAP = 5200


class GraphError(ValueError):
    """Malformed graph or invalid vertex id."""


@dataclass(frozen=True)
class ChainPredicate:
    """Step rule for scale-r chains.

    mode "strict": consecutive points at distance < r (the measurement default);
    mode "weak": consecutive points at distance <= r.
    """

    mode: str
    r: int

    def __post_init__(self):
        if self.mode not in ("strict", "weak"):
            raise ValueError(f"unknown chain mode {self.mode!r}")
        if self.r < 1:
            raise ValueError("scale r must be a positive integer")

    @property
    def max_step(self) -> int:
        return self.r - 1 if self.mode == "strict" else self.r

    def step_ok(self, d: int) -> bool:
        return d <= self.max_step


def strict_chain(r: int) -> ChainPredicate:
    return ChainPredicate("strict", r)


def weak_chain(r: int) -> ChainPredicate:
    return ChainPredicate("weak", r)


@dataclass(frozen=True)
class Path:
    """Vertex sequence with consecutive vertices adjacent; length = edge count."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path has at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def subpath(self, i: int, j: int) -> "Path":
        """Closed subpath from index i to index j inclusive, 0 <= i <= j."""
        if not (0 <= i <= j < len(self.vertices)):
            raise IndexError(f"bad subpath [{i}, {j}] of {len(self.vertices)} vertices")
        return Path(self.vertices[i : j + 1])

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, i: int) -> int:
        return self.vertices[i]


def normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable connected unit-edge graph with cached metric queries."""

    __slots__ = ("vertex_count", "edges", "adj", "_matrix", "_rows")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        if vertex_count < 1:
            raise GraphError("graph needs at least one vertex")
        norm: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop edge at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            norm.add(normalize_edge(u, v))
        self.vertex_count = vertex_count
        self.edges = frozenset(norm)
        adj: list[list[int]] = [[] for _ in range(vertex_count)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self._matrix: np.ndarray | None = None
        self._rows: dict[int, np.ndarray] = {}
        self._check_connected()

    def _check_connected(self):
        seen = self._bfs_row(0)
        missing = np.nonzero(seen < 0)[0]
        if missing.size:
            raise GraphError(f"graph is disconnected (vertex {int(missing[0])} unreachable from 0)")

    def _bfs_row(self, src: int) -> np.ndarray:
        dist = np.full(self.vertex_count, -1, dtype=np.int32)
        dist[src] = 0
        queue = deque([src])
        adj = self.adj
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = du
                    queue.append(w)
        return dist

    def _ensure_matrix(self) -> np.ndarray:
        if self._matrix is None:
            n = self.vertex_count
            if self.edges:
                us, vs = zip(*self.edges)
                row = np.fromiter(us + vs, dtype=np.int32)
                col = np.fromiter(vs + us, dtype=np.int32)
                data = np.ones(len(row), dtype=np.int8)
                sp = csr_matrix((data, (row, col)), shape=(n, n))
            else:
                sp = csr_matrix((n, n), dtype=np.int8)
            dist = _sparse_shortest_path(sp, method="D", unweighted=True, directed=False)
            self._matrix = dist.astype(np.int32)
        return self._matrix

    def dist_row(self, u: int) -> np.ndarray:
        """Distances from u to every vertex, as an int32 array."""
        self.check_vertex(u)
        if self.vertex_count <= _DENSE_CAP:
            return self._ensure_matrix()[u]
        row = self._rows.get(u)
        if row is None:
            row = self._bfs_row(u)
            self._rows[u] = row
        return row

    def check_vertex(self, v: int):
        if not (0 <= v < self.vertex_count):
            raise GraphError(f"unknown vertex id {v}")

    def shortest_dist(self, u: int, v: int) -> int:
        self.check_vertex(v)
        return int(self.dist_row(u)[v])

    def canonical_geodesic(self, u: int, v: int) -> Path:
        """Deterministic shortest path: walking back from v, always step to the
        smallest-id neighbor one unit closer to u (BFS smallest-parent rule)."""
        self.check_vertex(v)
        row = self.dist_row(u)
        verts = [v]
        cur = v
        while cur != u:
            target = row[cur] - 1
            cur = min(w for w in self.adj[cur] if row[w] == target)
            verts.append(cur)
        verts.reverse()
        return Path(tuple(verts))

    def canonical_parents(self, root: int) -> np.ndarray:
        """Parent array of the canonical geodesic tree rooted at root.

        parents[root] = -1; for every other v, parents[v] is the smallest-id
        neighbor one unit closer to root, so following parents reproduces
        canonical_geodesic(root, v) for every v at once.
        """
        row = self.dist_row(root)
        parents = np.full(self.vertex_count, -1, dtype=np.int64)
        for v in range(self.vertex_count):
            if v == root:
                continue
            target = row[v] - 1
            parents[v] = min(w for w in self.adj[v] if row[w] == target)
        return parents

    def ball(self, center: int, radius: int) -> frozenset[int]:
        """Closed ball: all v with d(center, v) <= radius."""
        if radius < 0:
            raise GraphError("radius must be non-negative")
        row = self.dist_row(center)
        return frozenset(int(v) for v in np.nonzero(row <= radius)[0])

    def is_path(self, path: Path) -> bool:
        return all(
            normalize_edge(a, b) in self.edges
            for a, b in zip(path.vertices, path.vertices[1:])
        )

    def set_diameter(self, subset: Iterable[int]) -> int:
        return self.diameter_witness(subset)[0]

    def diameter_witness(self, subset: Iterable[int]) -> tuple[int, tuple[int, int]]:
        """Max pairwise ambient distance plus the first achieving pair."""
        idx = sorted(set(subset))
        if not idx:
            raise GraphError("diameter of an empty subset")
        for v in idx:
            self.check_vertex(v)
        arr = np.asarray(idx, dtype=np.int64)
        sub = np.stack([self.dist_row(int(v)) for v in arr])[:, arr]
        flat = int(np.argmax(sub))
        i, j = divmod(flat, len(arr))
        return int(sub[i, j]), (int(arr[i]), int(arr[j]))

    def scale_components(self, subset: Iterable[int], pred: ChainPredicate) -> list[frozenset[int]]:
        """Partition of subset into maximal scale-r connected components under pred.

        Distances are ambient; parts come back sorted by their smallest vertex.
        """
        idx = sorted(set(subset))
        for v in idx:
            self.check_vertex(v)
        if not idx:
            return []
        if len(idx) == 1:
            return [frozenset(idx)]
        arr = np.asarray(idx, dtype=np.int64)
        sub = np.stack([self.dist_row(int(v)) for v in arr])[:, arr]
        reach = csr_matrix(sub <= pred.max_step)
        _, labels = _sparse_components(reach, directed=False)
        groups: dict[int, list[int]] = {}
        for local, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(idx[local])
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def diameter(self) -> int:
        return self.set_diameter(range(self.vertex_count))
