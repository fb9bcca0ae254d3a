"""Tree-graded validation, gluing trees, and projections."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from treegraded.graph import Graph
from treegraded.oracles import brute_nearest_set, brute_project, find_crossing_cycle
from treegraded.space import InvalidSpaceError, Space

from conftest import (
    chain_of_three_paths,
    edge_piece_path,
    path_graph,
    pieces_in_a_cycle,
    single_piece_path,
    small_spaces,
    tripod_space,
    tripod_tip,
    two_triangles_sharing_edge,
)


class TestValidate:
    def test_single_piece_ok(self):
        assert single_piece_path(6).validate().ok

    def test_two_triangles_violate_t1(self):
        report = two_triangles_sharing_edge().validate()
        assert not report.ok
        t1 = [v for v in report.violations if v.axiom == "T1"]
        assert t1 and t1[0].witness["pieces"] == (0, 1)
        assert sorted(t1[0].witness["shared_vertices"]) == [1, 2]

    def test_pieces_in_a_cycle_violate_tree(self):
        space = pieces_in_a_cycle()
        report = space.validate()
        assert [v.axiom for v in report.violations] == ["TREE"]
        # oracle: some simple cycle crosses pieces
        cycle = find_crossing_cycle(space)
        assert cycle is not None
        pieces_met = {space.edge_piece(a, b) for a, b in zip(cycle, cycle[1:] + [cycle[0]])}
        assert len(pieces_met) > 1

    def test_valid_space_has_no_crossing_cycle(self):
        space = Space(Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)]), [{0, 1, 2}, {2, 3}], 0)
        assert space.validate().ok
        assert find_crossing_cycle(space) is None

    def test_uncovered_edge(self):
        space = Space(path_graph(3), [{0, 1}], 0)
        axioms = {v.axiom for v in space.validate().violations}
        assert "EDGE_COVER" in axioms

    def test_contained_piece(self):
        space = Space(path_graph(4), [{0, 1, 2, 3}, {1, 2}], 0)
        reasons = [
            v for v in space.validate().violations
            if v.axiom == "EDGE_COVER" and v.witness.get("reason") == "piece contained in piece"
        ]
        assert reasons and reasons[0].witness["inner"] == 1

    def test_one_point_piece_rejected(self):
        space = Space(path_graph(3), [{0, 1}, {1, 2}, {2}], 0)
        axioms = [v.axiom for v in space.validate().violations]
        assert "CONNECTED_PIECE" in axioms

    def test_disconnected_piece(self):
        space = Space(path_graph(5), [{0, 1, 3, 4}, {1, 2, 3}], 0)
        axioms = {v.axiom for v in space.validate().violations}
        assert "CONNECTED_PIECE" in axioms

    def test_non_convex_piece(self):
        # square with a chord path outside the piece: piece {0,2} misses edges
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        space = Space(g, [{0, 1, 2}, {2, 3}, {0, 3}], 0)
        report = space.validate()
        assert not report.ok
        assert any(v.axiom in ("CONVEX", "TREE") for v in report.violations)

    @settings(max_examples=40, deadline=None)
    @given(small_spaces())
    def test_generated_spaces_valid(self, space: Space):
        assert space.validate().ok


class TestGluingTree:
    def test_single_piece(self):
        tree = single_piece_path(4).gluing_tree()
        assert tree.node_count == 1 and tree.edge_count == 0
        assert tree.root_piece == 0

    def test_tripod_star(self):
        tree = tripod_space(arm=2).gluing_tree()
        assert tree.node_count == 4  # 3 pieces + 1 cut vertex
        assert tree.edge_count == 3
        assert set(tree.cut_parent) == {0}

    def test_invalid_space_raises(self):
        with pytest.raises(InvalidSpaceError):
            two_triangles_sharing_edge().gluing_tree()

    @settings(max_examples=40, deadline=None)
    @given(small_spaces())
    def test_tree_identity(self, space: Space):
        tree = space.gluing_tree()
        assert tree.edge_count == tree.node_count - 1


class TestProject:
    def test_inside_piece_identity(self):
        space = chain_of_three_paths()
        for v in (2, 3, 4):
            assert space.project(1, v) == v

    def test_tripod_projects_through_center(self):
        arm = 3
        space = tripod_space(arm=arm, basepoint=tripod_tip(arm, 0))
        tip_b = tripod_tip(arm, 1)
        assert space.project(0, tip_b) == 0  # piece 0 = arm A, center vertex is 0
        assert space.project(2, tip_b) == 0

    def test_chain_far_piece(self):
        space = chain_of_three_paths()
        assert space.project(0, 6) == 2
        assert brute_project(space, 0, 6) == 2

    @settings(max_examples=30, deadline=None)
    @given(small_spaces())
    def test_matches_brute_force_everywhere(self, space: Space):
        for pid in range(len(space.pieces)):
            for x in range(space.graph.vertex_count):
                assert space.project(pid, x) == brute_project(space, pid, x)

    @settings(max_examples=30, deadline=None)
    @given(small_spaces())
    def test_unique_nearest_vertex(self, space: Space):
        for pid in range(len(space.pieces)):
            for x in range(space.graph.vertex_count):
                assert len(brute_nearest_set(space.graph, space.pieces[pid], x)) == 1


class TestBasepoints:
    def test_root_piece_keeps_basepoint(self):
        space = single_piece_path(5, basepoint=3)
        assert space.basepoints()[0] == 3

    def test_tripod_from_tip(self):
        arm = 3
        space = tripod_space(arm=arm, basepoint=tripod_tip(arm, 0))
        bps = space.basepoints()
        assert bps[0] == tripod_tip(arm, 0)
        assert bps[1] == 0 and bps[2] == 0

    @settings(max_examples=30, deadline=None)
    @given(small_spaces())
    def test_equals_brute_nearest(self, space: Space):
        for pid, bp in space.basepoints().items():
            assert bp == brute_project(space, pid, space.basepoint)


class TestEveryGeodesicPassesProjection:
    @settings(max_examples=25, deadline=None)
    @given(small_spaces(max_budget=3))
    def test_all_geodesics_into_piece_contain_projection(self, space: Space):
        from treegraded.oracles import enumerate_geodesics

        g = space.graph
        if g.vertex_count > 40:
            return
        for pid, piece in enumerate(space.pieces):
            for x in range(0, g.vertex_count, 3):
                proj = space.project(pid, x)
                for target in sorted(piece)[:3]:
                    for path in enumerate_geodesics(g, x, target):
                        assert proj in path.vertices


class TestGeodesicConvexity:
    def test_edge_piece_chain(self):
        space = chain_of_three_paths()
        for pid, piece in enumerate(space.pieces):
            for u in piece:
                for v in piece:
                    path = space.graph.canonical_geodesic(u, v)
                    assert set(path.vertices) <= piece

    @settings(max_examples=30, deadline=None)
    @given(small_spaces(max_budget=5))
    def test_canonical_geodesics_stay_in_pieces(self, space: Space):
        for pid, piece in enumerate(space.pieces):
            members = sorted(piece)
            for u in members[:6]:
                for v in members[-6:]:
                    path = space.graph.canonical_geodesic(u, v)
                    assert set(path.vertices) <= piece


class TestDegenerateSpaces:
    def test_uncovered_vertex_is_invalid(self):
        from treegraded.graph import Graph

        space = Space(Graph(1, []), [], 0)
        axioms = [v.axiom for v in space.validate().violations]
        assert axioms == ["EDGE_COVER"]
