from itertools import product

import numpy as np
import pytest

from liminal.graph import complete, path, strong_product
from liminal.reduction import (QbfError, QbfFormula, ReductionError, build_gphi, build_ht, build_reduction,
                               conp_instance, eval_qbf, expected_order, pad_formula, parse_qdimacs,
                               random_qbf, truth_table_qbf, verify_reduction)
from liminal.solver import solve_cooling
from oracles import qbf_truth

SMALL_QBF = "p cnf 3 2\ne 1 2 3 0\n1 2 -3 0\n-1 -2 3 0\n"


def test_parse_example():
    f = parse_qdimacs("e 1 0\na 2 0\n1 -2 2 0\n")
    assert f.quantifiers == [(1, "e"), (2, "a")]
    assert f.clauses == [(1, -2, 2)]


@pytest.mark.parametrize("text", [
    "e 1 0\n",                       # no clauses
    "e 1 2 0\n1 2 -1 2 0\n",         # four literals
    "e 1 0\n1 2 1 0\n",              # unquantified variable
    "e 1 0\n1 1 1\n",                # missing terminator
    "e 1 0\n1 1 1 0\na 2 0\n",       # quantifier after clauses
    "p cnf 2 5\ne 1 2 0\n1 2 2 0\n",  # header count mismatch
    "x 1 0\n1 1 1 0\n",
])
def test_parse_errors(text):
    with pytest.raises(QbfError):
        parse_qdimacs(text)


def test_qdimacs_roundtrip():
    f = parse_qdimacs(SMALL_QBF)
    assert parse_qdimacs(f.to_qdimacs()).clauses == f.clauses


def test_eval_examples():
    assert eval_qbf(QbfFormula([(1, "e")], [(1, 1, 1)]))
    assert not eval_qbf(QbfFormula([(1, "a")], [(1, 1, 1)]))
    assert eval_qbf(QbfFormula([(1, "e"), (2, "a")], [(1, -2, 2)]))


def test_eval_matches_oracle():
    rng = np.random.default_rng(5)
    for _ in range(150):
        n = int(rng.integers(1, 5))
        f = random_qbf(n, int(rng.integers(1, 5)), rng, pad=False)
        want = qbf_truth(f.quantifiers, f.clauses)
        assert eval_qbf(f) == want == truth_table_qbf(f)


def test_padding_adds_missing_literals():
    f = pad_formula(QbfFormula([(1, "e"), (2, "a")], [(1, 2, 2)]))
    lits = {l for c in f.clauses for l in c}
    assert {1, -1, 2, -2} <= lits and f.padded
    assert eval_qbf(f) == eval_qbf(QbfFormula([(1, "e"), (2, "a")], [(1, 2, 2)]))


def test_gphi_three_variable_formula():
    g = build_gphi(parse_qdimacs(SMALL_QBF))
    assert (g.n, g.num_edges, g.diameter()) == (25, 37, 7)
    # x1 to C1 runs through n + j - i - 1 = 2 internal vertices
    path_names = [l for l in g.labels if l.startswith("P1.1.")]
    assert len(path_names) == 2


def test_gphi_single_variable():
    f = QbfFormula([(1, "e")], [(1, -1, 1)])
    g = build_gphi(f)
    idx = {l: i for i, l in enumerate(g.labels)}
    assert g.adj[idx["a0"]] >> idx["a1"] & 1
    for lit in ("x1", "~x1"):
        assert g.adj[idx[lit]] >> idx["a1"] & 1
    triangle = [idx[f"C1.{p}"] for p in (1, 2, 3)]
    assert all(g.adj[u] >> v & 1 for u in triangle for v in triangle if u != v)


def test_ht():
    h4 = build_ht(4)
    assert (h4.n, h4.num_edges) == (10, 24)
    assert build_ht(1).n == 1
    assert build_ht(2, 2).n == 6
    h2 = build_ht(2)
    assert {frozenset(e) for e in strong_product(h2, complete(1)).edges()} == {frozenset(e) for e in h2.edges()}
    assert [solve_cooling(build_ht(t)) for t in range(1, 6)] == [1, 2, 3, 4, 5]


def test_reduction_diameter_and_order():
    f = parse_qdimacs(SMALL_QBF)
    rg = build_reduction(f, 2)
    assert rg.graph.diameter() == rg.T + 2 * rg.formula.n + rg.formula.m
    assert rg.graph.n == expected_order(rg.formula, 2, rg.T)
    assert rg.threshold == rg.target_diameter + 1
    rep = verify_reduction(rg)
    assert rep.ok, rep.failures()


def test_reduction_tiny_instance():
    rg = build_reduction(QbfFormula([(1, "e")], [(1, 1, 1)]), 2)
    assert rg.graph.diameter() == rg.T + 2 * 1 + rg.formula.m


def test_double_assignment_cliques():
    rg = build_reduction(parse_qdimacs(SMALL_QBF), 2)
    g = rg.graph
    for i in range(1, 4):
        dp, dn = rg.gadgets[f"D:x{i}"], rg.gadgets[f"D:~x{i}"]
        assert len(dp) == len(dn) == 2
        assert all(g.adj[u] >> v & 1 for u in dp for v in dn)


def test_random_instances_keep_diameter():
    rng = np.random.default_rng(2)
    for _ in range(4):
        f = random_qbf(int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)
        rg = build_reduction(f, 2)
        assert verify_reduction(rg).ok


def test_corrupted_connector_is_located():
    f = parse_qdimacs(SMALL_QBF)
    rg = build_reduction(f, 2, connector_offsets={"Q1.1": 1}, check=False)
    rep = verify_reduction(rg)
    assert not rep.ok
    assert "Q1.1" in {name for name, _, _ in rep.failures()}


def test_long_connector_rule_breaks_identity():
    rg = build_reduction(parse_qdimacs(SMALL_QBF), 2, connector_rule="long", check=False)
    assert rg.graph.diameter() != rg.target_diameter
    with pytest.raises(ReductionError):
        build_reduction(parse_qdimacs(SMALL_QBF), 2, connector_rule="long")


def test_reduction_needs_k2():
    with pytest.raises(ValueError):
        build_reduction(QbfFormula([(1, "e")], [(1, 1, 1)]), 1)


def test_certificate_on_tiny_true_instances():
    for q in ("e", "a"):
        f = QbfFormula([(1, q)], [(1, -1, 1)])
        rep = verify_reduction(build_reduction(f, 2), certify=True)
        assert rep.ok and rep.certificate is not None


def test_certificate_skipped_for_false_formula():
    rep = verify_reduction(build_reduction(QbfFormula([(1, "a")], [(1, 1, 1)]), 2), certify=True)
    assert rep.certificate is None and "false" in rep.certificate_note


def test_conp_instance():
    g = path(3)
    inst = conp_instance(g, 2, 3)
    assert inst.graph.n == 3 + 2 * 3 and inst.k == 3 and inst.threshold == 2 + 1
    assert len(inst.graph.components()) == 3
    assert conp_instance(g, 2, 1).graph is g
    with pytest.raises(ValueError):
        conp_instance(g, 2, 0)


def test_truth_table_all_small_prefixes():
    clauses = [(1, -2, 2), (-1, 2, 1)]
    for qs in product("ea", repeat=2):
        f = QbfFormula([(1, qs[0]), (2, qs[1])], clauses)
        assert eval_qbf(f) == qbf_truth(f.quantifiers, f.clauses)
