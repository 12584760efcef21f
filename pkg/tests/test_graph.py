import numpy as np
import pytest

from liminal.graph import (Graph, GraphError, bits, build_family, cartesian_product, cliques, complete,
                           disjoint_union, graded_lex_order, grid, hypercube, mask_of, path,
                           random_tree, read_edge_list, strong_product, write_edge_list)
from oracles import bfs_distances


def edge_set(g):
    return set(g.edges())


def test_family_sizes():
    q3 = build_family("hypercube:3")
    assert (q3.n, q3.num_edges, q3.diameter()) == (8, 12, 3)
    g5 = build_family("grid:5x5")
    assert (g5.n, g5.num_edges) == (25, 40)
    c = build_family("cliques:2x3")
    assert (c.n, c.num_edges, len(c.components())) == (6, 6, 2)


@pytest.mark.parametrize("spec", ["path:0", "grid:3", "spider:2,3", "wheel:5", "caterpillar:1,2",
                                  "path:-1", "cart(path:2)", ""])
def test_malformed_specs(spec):
    with pytest.raises(GraphError):
        build_family(spec)


def test_hypercube_indexing():
    q = hypercube(4)
    for u in range(16):
        for v in range(16):
            assert q.distance(u, v) == bin(u ^ v).count("1")


def test_grid_indexing():
    g = grid(3, 4)
    # vertex (x, y) is x*4 + y
    assert g.distance(0 * 4 + 0, 2 * 4 + 3) == 5
    assert set(g.neighbors(1 * 4 + 1)) == {1, 9, 4, 6}


def test_products():
    c4 = cartesian_product(path(2), path(2))
    assert c4.n == 4 and c4.num_edges == 4 and all(c4.degree(v) == 2 for v in range(4))
    assert edge_set(cartesian_product(path(5), path(5))) == edge_set(grid(5, 5))
    p2k3 = cartesian_product(path(2), complete(3))
    assert (p2k3.n, p2k3.num_edges) == (6, 9)
    k4 = strong_product(complete(2), complete(2))
    assert k4.num_edges == 6
    p3k2 = strong_product(path(3), complete(2))
    assert (p3k2.n, p3k2.num_edges) == (6, 11)


def test_strong_identity_factor():
    h = Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert edge_set(strong_product(h, complete(1))) == edge_set(h)


def test_disjoint_union():
    u = disjoint_union(path(3), complete(3))
    assert u.n == 6 and len(u.components()) == 2
    assert disjoint_union(complete(1), complete(1)).num_edges == 0
    assert disjoint_union(path(2), cliques(2, 4)).n == 10


def test_distance_sentinel():
    c = cliques(2, 3)
    assert c.distances()[0, 5] == c.n
    assert path(4).distance(0, 3) == 3
    assert c.diameter() == 1


def test_distances_match_bfs_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = random_tree(int(rng.integers(1, 15)), rng)
        want = bfs_distances(g.n, g.edges())
        assert g.distances().tolist() == want


def test_graded_lex():
    o = graded_lex_order(2, 2)
    assert o.order.tolist() == [0, 1, 2, 3]
    o3 = graded_lex_order(3, 3)
    assert o3.rank[1 * 3 + 1] < o3.rank[2 * 3 + 0]
    assert graded_lex_order(5, 5).smallest((1 << 25) - 1, 3) == [0, 1, 5]


def test_bitset_helpers():
    assert list(bits(0b10110)) == [1, 2, 4]
    assert mask_of([1, 2, 4]) == 0b10110


def test_edge_list_roundtrip():
    g = build_family("spider:3,2")
    h = read_edge_list(write_edge_list(g))
    assert edge_set(h) == edge_set(g) and h.n == g.n


@pytest.mark.parametrize("text", ["", "3 1\n0 5\n", "3 2\n0 1\n", "2 1\n0 0\n", "x y\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphError):
        read_edge_list(text)


def test_automorphism_check():
    c = build_family("cycle:5")
    assert c.is_automorphism([1, 2, 3, 4, 0])
    assert not c.is_automorphism([0, 2, 1, 3, 4])
