"""Piece decompositions of graphs and the tree-graded axioms.

A Space is a connected graph plus a list of pieces (vertex sets, each owning
the edges between its vertices) and a base vertex. The validator certifies the
five axiom families:

  CONNECTED_PIECE  every piece induces a connected subgraph with >= 1 edge
  EDGE_COVER       every edge lies in some piece; no piece contains another
  T1               two pieces share at most one vertex
  TREE             the piece / cut-vertex incidence structure is a tree
  CONVEX           piece-internal distances equal ambient distances

A space passing all five is tree-graded: the TREE axiom forces every simple
loop into a single piece, and T1 makes cut vertices the only piece overlaps.
Projections onto a piece are answered from the gluing tree in O(tree depth);
the brute-force nearest-vertex computation lives in oracles.py as a test-side
check, not here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, GraphError, normalize_edge


class InvalidSpaceError(ValueError):
    """Operation that requires a valid tree-graded space got an invalid one."""


@dataclass(frozen=True)
class Violation:
    axiom: str  # EDGE_COVER | T1 | TREE | CONVEX | CONNECTED_PIECE
    witness: dict

    def describe(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.axiom}: {parts}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class PieceTree:
    """Bipartite gluing tree: piece nodes and cut-vertex nodes.

    Parent pointers are rooted at the piece containing the basepoint (smallest
    piece id when the basepoint is itself a cut vertex). Piece depths are even,
    cut depths odd.
    """

    root_piece: int
    piece_parent: dict[int, int | None]  # piece id -> parent cut vertex
    cut_parent: dict[int, int]  # cut vertex -> parent piece id
    piece_depth: dict[int, int]
    cut_depth: dict[int, int]

    @property
    def node_count(self) -> int:
        return len(self.piece_parent) + len(self.cut_parent)

    @property
    def edge_count(self) -> int:
        # every non-root piece hangs off one cut; every cut hangs off one piece
        return sum(1 for c in self.piece_parent.values() if c is not None) + len(self.cut_parent)


class Space:
    """Graph + piece decomposition + basepoint. Immutable once validated."""

    def __init__(self, graph: Graph, pieces: Sequence[Iterable[int]], basepoint: int):
        graph.check_vertex(basepoint)
        self.graph = graph
        self.pieces: tuple[frozenset[int], ...] = tuple(frozenset(p) for p in pieces)
        self.basepoint = basepoint
        for pid, piece in enumerate(self.pieces):
            for v in piece:
                graph.check_vertex(v)
            if not piece:
                raise GraphError(f"piece {pid} is empty")
        self._pieces_of_vertex: tuple[tuple[int, ...], ...] | None = None
        self._piece_of_edge: dict[tuple[int, int], int] | None = None
        self._piece_adj: dict[int, dict[int, tuple[int, ...]]] = {}
        self._piece_rows: dict[tuple[int, int], dict[int, int]] = {}
        self._report: ValidationReport | None = None
        self._tree: PieceTree | None = None
        self._basepoints: dict[int, int] | None = None

    # -- derived incidence data -------------------------------------------------

    @property
    def pieces_of_vertex(self) -> tuple[tuple[int, ...], ...]:
        if self._pieces_of_vertex is None:
            incid: list[list[int]] = [[] for _ in range(self.graph.vertex_count)]
            for pid, piece in enumerate(self.pieces):
                for v in piece:
                    incid[v].append(pid)
            self._pieces_of_vertex = tuple(tuple(x) for x in incid)
        return self._pieces_of_vertex

    @property
    def cut_vertices(self) -> frozenset[int]:
        return frozenset(
            v for v, pids in enumerate(self.pieces_of_vertex) if len(pids) >= 2
        )

    @property
    def piece_of_edge(self) -> dict[tuple[int, int], int]:
        """Owning piece of every edge (smallest piece id containing both ends)."""
        if self._piece_of_edge is None:
            owner: dict[tuple[int, int], int] = {}
            incid = self.pieces_of_vertex
            for u, v in self.graph.edges:
                pids = [p for p in incid[u] if v in self.pieces[p]]
                if pids:
                    owner[(u, v)] = min(pids)
            self._piece_of_edge = owner
        return self._piece_of_edge

    def edge_piece(self, u: int, v: int) -> int:
        e = normalize_edge(u, v)
        try:
            return self.piece_of_edge[e]
        except KeyError:
            raise InvalidSpaceError(f"edge {e} belongs to no piece") from None

    # -- piece-internal metric --------------------------------------------------

    def piece_adjacency(self, pid: int) -> dict[int, tuple[int, ...]]:
        adj = self._piece_adj.get(pid)
        if adj is None:
            piece = self.pieces[pid]
            local: dict[int, list[int]] = {v: [] for v in piece}
            for v in piece:
                for w in self.graph.adj[v]:
                    if w in piece:
                        local[v].append(w)
            adj = {v: tuple(sorted(ws)) for v, ws in local.items()}
            self._piece_adj[pid] = adj
        return adj

    def piece_dist_from(self, pid: int, src: int) -> dict[int, int]:
        """BFS distances inside the induced subgraph of one piece."""
        key = (pid, src)
        row = self._piece_rows.get(key)
        if row is None:
            adj = self.piece_adjacency(pid)
            if src not in adj:
                raise GraphError(f"vertex {src} not in piece {pid}")
            row = {src: 0}
            queue = deque([src])
            while queue:
                u = queue.popleft()
                du = row[u] + 1
                for w in adj[u]:
                    if w not in row:
                        row[w] = du
                        queue.append(w)
            self._piece_rows[key] = row
        return row

    # -- validation ---------------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._report is not None:
            return self._report
        violations: list[Violation] = []
        violations += self._check_connected_pieces()
        violations += self._check_edge_cover()
        violations += self._check_t1()
        violations += self._check_tree()
        violations += self._check_convex()
        self._report = ValidationReport(tuple(violations))
        return self._report

    def _check_connected_pieces(self) -> list[Violation]:
        out = []
        for pid, piece in enumerate(self.pieces):
            if len(piece) < 2:
                out.append(
                    Violation("CONNECTED_PIECE", {"piece": pid, "reason": "no edge", "vertices": sorted(piece)})
                )
                continue
            row = self.piece_dist_from(pid, min(piece))
            missing = sorted(piece - row.keys())
            if missing:
                out.append(
                    Violation(
                        "CONNECTED_PIECE",
                        {"piece": pid, "reason": "disconnected", "unreached": missing[:4]},
                    )
                )
        return out

    def _check_edge_cover(self) -> list[Violation]:
        out = []
        incid = self.pieces_of_vertex
        for v in range(self.graph.vertex_count):
            if not incid[v]:
                out.append(Violation("EDGE_COVER", {"vertex": v, "reason": "vertex in no piece"}))
        for u, v in sorted(self.graph.edges):
            if not any(v in self.pieces[p] for p in incid[u]):
                out.append(Violation("EDGE_COVER", {"edge": (u, v), "reason": "uncovered"}))
        for p in range(len(self.pieces)):
            for q in range(len(self.pieces)):
                if p != q and self.pieces[p] < self.pieces[q]:
                    out.append(
                        Violation("EDGE_COVER", {"reason": "piece contained in piece", "inner": p, "outer": q})
                    )
        return out

    def _check_t1(self) -> list[Violation]:
        shared: dict[tuple[int, int], list[int]] = {}
        for v, pids in enumerate(self.pieces_of_vertex):
            for i in range(len(pids)):
                for j in range(i + 1, len(pids)):
                    shared.setdefault((pids[i], pids[j]), []).append(v)
        return [
            Violation("T1", {"pieces": pair, "shared_vertices": verts[:2]})
            for pair, verts in sorted(shared.items())
            if len(verts) >= 2
        ]

    def _check_tree(self) -> list[Violation]:
        k = len(self.pieces)
        if k == 0:
            return []  # nothing to glue; coverage violations speak for themselves
        cuts = sorted(self.cut_vertices)
        nodes = k + len(cuts)
        edge_count = sum(len(self.pieces_of_vertex[c]) for c in cuts)
        # BFS over the bipartite incidence structure from piece 0
        seen_p = {0} if k else set()
        seen_c: set[int] = set()
        queue: deque[tuple[str, int]] = deque([("P", 0)]) if k else deque()
        while queue:
            kind, x = queue.popleft()
            if kind == "P":
                for v in self.pieces[x]:
                    if len(self.pieces_of_vertex[v]) >= 2 and v not in seen_c:
                        seen_c.add(v)
                        queue.append(("C", v))
            else:
                for p in self.pieces_of_vertex[x]:
                    if p not in seen_p:
                        seen_p.add(p)
                        queue.append(("P", p))
        out = []
        if len(seen_p) != k:
            out.append(
                Violation("TREE", {"reason": "piece structure disconnected", "unreached_piece": min(set(range(k)) - seen_p)})
            )
        elif edge_count != nodes - 1:
            out.append(
                Violation(
                    "TREE",
                    {"reason": "cycle among pieces", "incidences": edge_count, "nodes": nodes},
                )
            )
        return out

    def _check_convex(self) -> list[Violation]:
        out = []
        for pid, piece in enumerate(self.pieces):
            for src in sorted(piece):
                internal = self.piece_dist_from(pid, src)
                ambient = self.graph.dist_row(src)
                for v in sorted(piece):
                    d_in = internal.get(v)
                    if d_in is not None and d_in != int(ambient[v]):
                        out.append(
                            Violation(
                                "CONVEX",
                                {"piece": pid, "pair": (src, v), "internal": d_in, "ambient": int(ambient[v])},
                            )
                        )
                        break
                else:
                    continue
                break
        return out

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise InvalidSpaceError(
                "space violates tree-graded axioms: "
                + "; ".join(v.describe() for v in report.violations[:3])
            )

    # -- gluing tree and projections ---------------------------------------------

    def gluing_tree(self) -> PieceTree:
        if self._tree is None:
            self.require_valid()
            root = min(self.pieces_of_vertex[self.basepoint])
            piece_parent: dict[int, int | None] = {root: None}
            cut_parent: dict[int, int] = {}
            piece_depth = {root: 0}
            cut_depth: dict[int, int] = {}
            queue = deque([root])
            while queue:
                pid = queue.popleft()
                for v in sorted(self.pieces[pid]):
                    if len(self.pieces_of_vertex[v]) < 2 or v in cut_parent:
                        continue
                    if piece_parent.get(pid) == v:
                        continue  # the cut we came through
                    cut_parent[v] = pid
                    cut_depth[v] = piece_depth[pid] + 1
                    for q in self.pieces_of_vertex[v]:
                        if q not in piece_parent:
                            piece_parent[q] = v
                            piece_depth[q] = cut_depth[v] + 1
                            queue.append(q)
            self._tree = PieceTree(root, piece_parent, cut_parent, piece_depth, cut_depth)
        return self._tree

    def project(self, pid: int, x: int) -> int:
        """Nearest vertex of piece pid to x (the projection onto the piece).

        Answered from the gluing tree: it is the cut vertex through which the
        subtree holding x attaches to the piece.
        """
        self.graph.check_vertex(x)
        if not (0 <= pid < len(self.pieces)):
            raise GraphError(f"unknown piece id {pid}")
        if x in self.pieces[pid]:
            return x
        tree = self.gluing_tree()
        cur = min(self.pieces_of_vertex[x])
        d_target = tree.piece_depth[pid]
        last_cut: int | None = None
        while cur != pid and tree.piece_depth[cur] > d_target:
            last_cut = tree.piece_parent[cur]
            assert last_cut is not None
            cur = tree.cut_parent[last_cut]
        if cur == pid:
            assert last_cut is not None
            return last_cut
        parent = tree.piece_parent[pid]
        assert parent is not None
        return parent

    def basepoints(self) -> dict[int, int]:
        """Per-piece base vertex: the projection of the space basepoint."""
        if self._basepoints is None:
            self._basepoints = {
                pid: self.project(pid, self.basepoint) for pid in range(len(self.pieces))
            }
        return self._basepoints


def validate(space: Space) -> ValidationReport:
    return space.validate()


def gluing_tree(space: Space) -> PieceTree:
    return space.gluing_tree()


def project(space: Space, pid: int, x: int) -> int:
    return space.project(pid, x)


def assign_basepoints(space: Space) -> dict[int, int]:
    return space.basepoints()
