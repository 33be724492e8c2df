"""
Unit tests for agent network topologies.

Tests Moore neighborhoods, graph adjacency and topology file parsing.
"""

import pytest

from network.topology import (
    GraphTopology,
    GridTopology,
    InvalidNodeError,
    TopologyError,
    TopologyParseError,
    graph_neighbors,
    load_topology,
    moore_neighbors,
)


class TestGridTopology:
    """Test suite for the Moore grid."""

    def test_node_count_and_ids(self, small_grid):
        assert small_grid.node_count == 20
        assert small_grid.node_id(2, 3) == 13
        assert small_grid.coords(13) == (2, 3)

    def test_corner_has_three_neighbors(self, small_grid):
        assert small_grid.neighbors(0) == [1, 5, 6]

    def test_edge_cell_has_five_neighbors(self, small_grid):
        assert small_grid.neighbors(2) == [1, 3, 6, 7, 8]

    def test_interior_cell_has_eight_neighbors(self, small_grid):
        assert small_grid.neighbors(6) == [0, 1, 2, 5, 7, 10, 11, 12]

    def test_neighborhood_is_symmetric(self, small_grid):
        for n in range(small_grid.node_count):
            for m in small_grid.neighbors(n):
                assert n in small_grid.neighbors(m)

    def test_single_cell_grid_has_no_neighbors(self):
        assert GridTopology(1, 1).neighbors(0) == []

    @pytest.mark.parametrize("node", [-1, 20, 2.0, True])
    def test_invalid_node_rejected(self, small_grid, node):
        with pytest.raises(InvalidNodeError):
            small_grid.neighbors(node)

    def test_non_positive_dimensions_rejected(self):
        with pytest.raises(TopologyError):
            GridTopology(0, 3)

    def test_padded_neighbors(self, small_grid):
        matrix, degree = small_grid.padded_neighbors
        assert matrix.shape == (20, 8)
        assert list(degree[:3]) == [3, 5, 5]
        assert list(matrix[0]) == [1, 5, 6, -1, -1, -1, -1, -1]

    def test_moore_neighbors_on_5x5(self):
        grid = GridTopology(5, 5)
        assert len(moore_neighbors(grid, grid.node_id(2, 2))) == 8
        assert [grid.coords(n) for n in moore_neighbors(grid, 0)] == [(0, 1), (1, 0), (1, 1)]


class TestGraphTopology:
    """Test suite for explicit edge lists."""

    @pytest.fixture
    def path_graph(self):
        return GraphTopology.from_edges(3, [(0, 1), (2, 1)])

    def test_neighbors_sorted(self, path_graph):
        assert path_graph.neighbors(0) == [1]
        assert path_graph.neighbors(1) == [0, 2]
        assert path_graph.neighbors(2) == [1]

    def test_duplicate_edge_rejected(self):
        with pytest.raises(TopologyError):
            GraphTopology.from_edges(3, [(0, 1), (1, 0)])

    def test_self_loop_rejected(self):
        with pytest.raises(TopologyError):
            GraphTopology(3, frozenset({(1, 1)}))

    def test_isolated_node_has_empty_neighborhood(self):
        graph = GraphTopology(3, frozenset({(0, 1)}))
        assert graph.neighbors(2) == []
        assert not graph.is_connected()

    def test_graph_neighbors_on_complete_graph(self):
        k4 = GraphTopology.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        assert graph_neighbors(k4, 0) == [1, 2, 3]
        assert graph_neighbors(GraphTopology(2, frozenset()), 1) == []


class TestLoadTopology:
    """Test suite for the topology file format."""

    def test_parse_with_comments(self):
        graph = load_topology("# two rooms\n\n3\n0 1\n# bridge\n1 2\n")
        assert graph.node_count == 3
        assert graph.neighbors(1) == [0, 2]
        assert graph.is_connected()

    @pytest.mark.parametrize("text, line_no", [
        ("3\n0 1\n1 1\n", 3),
        ("3\n0 1\n0 3\n", 3),
        ("3\n0 1\n1 0\n", 3),
        ("3\n0 1 2\n", 2),
        ("x\n", 1),
        ("\u00b2\n0 1\n", 1),
        ("3\n0 \u00b2\n", 2),
        ("3\n\u0661 2\n", 2),
    ])
    def test_malformed_lines_report_line_number(self, text, line_no):
        with pytest.raises(TopologyParseError) as exc:
            load_topology(text)
        assert exc.value.line_no == line_no

    def test_missing_count(self):
        with pytest.raises(TopologyError):
            load_topology("# nothing here\n")

    @pytest.mark.parametrize("name, nodes", [("room_a", 4), ("room_b", 3), ("room_c", 5)])
    def test_shipped_rooms(self, config_dir, name, nodes):
        graph = load_topology(config_dir / "topologies" / f"{name}.txt")
        assert graph.node_count == nodes
        assert graph.is_connected()
