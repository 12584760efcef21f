import json

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from liminal import bounds as bd
from liminal.constructions import rainbow_sperner, tree_pairing, verify_sperner
from liminal.engine import Transcript, play, replay
from liminal.graph import Graph, VertexOrder, permute_mask
from liminal.reduction import QbfFormula, eval_qbf, parse_qdimacs
from liminal.solver import solve_burning, solve_cooling, solve_liminal
from liminal.strategies import BasicSaboteur, GreedyArsonist
from oracles import bfs_distances, game_value, qbf_truth

FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=6, connected=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # hang every vertex off an earlier one first
        tree = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
        edges = sorted(set(edges) | set(tree))
    return Graph(n, edges)


@st.composite
def trees(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    return Graph(n, [(draw(st.integers(0, v - 1)), v) for v in range(1, n)])


@FAST
@given(graphs(), st.integers(1, 6))
def test_solver_matches_oracle(g, k):
    assert solve_liminal(g, k).value == game_value(g.n, g.edges(), k)


@FAST
@given(graphs(max_n=5), st.integers(1, 5))
def test_compulsory_burning_changes_nothing(g, k):
    assert game_value(g.n, g.edges(), k) == game_value(g.n, g.edges(), k, allow_pass=True)


@FAST
@given(graphs(max_n=7))
def test_chain_and_endpoints(g):
    vals = [solve_liminal(g, k).value for k in range(1, g.n + 1)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[0] == solve_cooling(g)
    assert vals[-1] == solve_burning(g)


@FAST
@given(graphs(max_n=6), st.integers(1, 3), st.randoms(use_true_random=False))
def test_relabelling_invariance(g, k, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = Graph.from_rows([permute_mask(g.adj[perm.index(v)], perm) for v in range(g.n)])
    assert solve_liminal(h, k).value == solve_liminal(g, k).value


@FAST
@given(graphs(max_n=6), st.integers(1, 3))
def test_strict_pool_only_helps_saboteur(g, k):
    assert solve_liminal(g, k, strict=True).value >= solve_liminal(g, k).value


@FAST
@given(graphs(max_n=6), st.integers(1, 3))
def test_memo_and_dominance_are_transparent(g, k):
    v = solve_liminal(g, k).value
    assert solve_liminal(g, k, memo=False, dominance=False).value == v


@FAST
@given(graphs(max_n=6), st.integers(1, 3))
def test_pv_is_a_legal_game_of_the_value(g, k):
    res = solve_liminal(g, k, pv=True)
    assert replay(g, res.pv).length == res.value


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=12))
def test_distances_match_bfs(g):
    want = bfs_distances(g.n, g.edges())
    got = g.distances().tolist()
    for u in range(g.n):
        for v in range(g.n):
            assert got[u][v] == (g.n if want[u][v] is None else want[u][v])


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10, connected=True), st.integers(1, 4), st.randoms(use_true_random=False))
def test_transcripts_roundtrip(g, k, rnd):
    order = list(range(g.n))
    rnd.shuffle(order)
    o = VertexOrder(order)
    t = play(g, k, BasicSaboteur(o), GreedyArsonist(o, "largest"))
    assert t.length <= g.n + g.diameter()
    t2 = Transcript.from_json(t.to_json())
    assert json.loads(replay(g, t2).to_json()) == json.loads(t.to_json())


@settings(max_examples=60, deadline=None)
@given(trees(max_n=30))
def test_tree_pairing_always_valid(g):
    w = tree_pairing(g)
    assert w.validate(g) == []


@FAST
@given(trees(max_n=8), st.integers(1, 4))
def test_tree_reports_never_contradicted(g, k):
    g.name = "tree"
    v = solve_liminal(g, k).value
    rep = bd.bounds_for_graph(g, k)
    assert rep.consistent() and rep.violations(v) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 40))
def test_sperner_always_verifies(n):
    assert verify_sperner(rainbow_sperner(n)).ok


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 100), st.integers(1, 10000))
def test_grid_bounds_ordered(n, k):
    k = min(k, n * n)
    assert bd.grid_lower(n, k) <= bd.grid_upper(n, k) + 1e-9


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10 ** 12))
def test_grid_bounds_ordered_large_n(k):
    assert bd.grid_lower(10 ** 6, k) <= bd.grid_upper(10 ** 6, k) + 1e-9


@st.composite
def formulas(draw):
    n = draw(st.integers(1, 4))
    qs = [(v, draw(st.sampled_from("ea"))) for v in range(1, n + 1)]
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.tuples(lit, lit, lit), min_size=1, max_size=5))
    return QbfFormula(qs, clauses)


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_eval_matches_truth_table(f):
    assert eval_qbf(f) == qbf_truth(f.quantifiers, f.clauses)
    assert eval_qbf(parse_qdimacs(f.to_qdimacs())) == eval_qbf(f)
