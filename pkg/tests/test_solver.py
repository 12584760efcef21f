import numpy as np
import pytest

from liminal.engine import replay
from liminal.graph import build_family, complete, graded_lex_order, hypercube, path, random_connected, random_tree
from liminal.solver import (LiminalSolver, cooling_sequence, solve_burning, solve_cooling, solve_liminal,
                            value_fixed_arsonist, value_fixed_saboteur)
from liminal.strategies import (EccentricPairArsonist, GreedyArsonist, first_by_index_saboteur,
                                smallest_index_arsonist)
from oracles import burning_number, cooling_number, game_value


def test_spec_values():
    assert solve_liminal(path(4), 2).value == 3
    assert solve_liminal(hypercube(3), 1).value == 3
    for m in range(2, 6):
        for k in range(1, m + 1):
            assert solve_liminal(complete(m), k).value == 2


def test_single_player_values():
    assert solve_burning(path(4)) == 2
    assert solve_burning(complete(1)) == 1
    assert solve_burning(hypercube(4)) == 3
    assert solve_cooling(hypercube(2)) == 2
    assert solve_cooling(hypercube(4)) == 4
    assert all(solve_cooling(complete(m)) == 2 for m in range(2, 6))


@pytest.mark.parametrize("seed", range(6))
def test_matches_minimax_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    g = random_connected(n, 0.4, rng) if seed % 2 else random_tree(n, rng)
    es = g.edges()
    for k in range(1, n + 1):
        assert solve_liminal(g, k).value == game_value(n, es, k)
    assert solve_burning(g) == burning_number(n, es)
    assert solve_cooling(g) == cooling_number(n, es)


def test_disconnected_graph():
    g = build_family("union(path:3,path:2)")
    assert [solve_liminal(g, k).value for k in (1, 2, 3)] == [4, 3, 3]


def test_pv_replays_to_value():
    g = build_family("grid:3x3")
    res = solve_liminal(g, 2, pv=True)
    assert res.pv is not None and res.pv.length == res.value
    assert replay(g, res.pv).length == res.value


def test_budget_reports_partial():
    res = solve_liminal(hypercube(4), 2, budget_nodes=20)
    assert not res.complete and res.value is None
    assert res.lower is None or res.lower <= solve_liminal(hypercube(4), 2).value


def test_memo_budget():
    res = solve_liminal(hypercube(4), 2, budget_memo=5)
    assert not res.complete


def test_options_agree():
    g = build_family("spider:3,2")
    base = [solve_liminal(g, k).value for k in range(1, 4)]
    assert [solve_liminal(g, k, memo=False).value for k in range(1, 4)] == base
    assert [solve_liminal(g, k, dominance=False).value for k in range(1, 4)] == base
    assert [solve_liminal(g, k, threads=2).value for k in range(1, 4)] == base


def test_strict_mode_never_shorter_for_saboteur():
    g = path(5)
    for k in (1, 2, 3):
        loose = solve_liminal(g, k).value
        strict = solve_liminal(g, k, strict=True).value
        # a smaller Arsonist pool can only help the Saboteur
        assert strict >= loose


def test_vertex_cap_and_k():
    with pytest.raises(ValueError):
        LiminalSolver(path(10), 1, max_vertices=8)
    with pytest.raises(ValueError):
        solve_liminal(path(3), 0)


def test_cooling_sequence_is_valid():
    for spec in ("path:9", "hypercube:3", "spider:3,2"):
        g = build_family(spec)
        seq = cooling_sequence(g)
        # the last round may be pure spreading, so CL-1 sources can suffice
        assert len(seq) in (solve_cooling(g), solve_cooling(g) - 1)
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                assert g.distance(seq[i], seq[j]) >= j - i + 1


def test_fixed_saboteur_is_lower_bound():
    for spec in ("path:6", "cycle:5", "grid:2x3"):
        g = build_family(spec)
        for k in (1, 2):
            fixed = value_fixed_saboteur(g, k, first_by_index_saboteur(g.n)).value
            assert fixed <= solve_liminal(g, k).value


def test_fixed_arsonist():
    assert value_fixed_arsonist(path(4), 2, smallest_index_arsonist(4)).value == 3
    assert value_fixed_arsonist(complete(3), 2, smallest_index_arsonist(3)).value == 2
    res = value_fixed_arsonist(path(4), 2, smallest_index_arsonist(4),
                               saboteur_pool=lambda g, s, k: [])
    assert not res.certified and res.notes


def test_fixed_arsonist_is_upper_bound():
    g = build_family("grid:3x3")
    for k in (2, 3):
        opt = solve_liminal(g, k).value
        assert value_fixed_arsonist(g, k, EccentricPairArsonist()).value >= opt
        assert value_fixed_arsonist(g, k, GreedyArsonist(graded_lex_order(3, 3))).value >= opt
