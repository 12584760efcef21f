import math

import numpy as np
import pytest

from liminal import bounds as bd
from liminal.graph import build_family, path
from liminal.solver import solve_liminal


def by_id(entries):
    return {e.theorem: e for e in entries}


def test_general_bounds():
    e = by_id(bd.general_bounds(10, 3, b=2, cl=4))
    assert e["cooling-over-k"].integer == 2 and e["burning-plus-n-over-k"].integer == 6
    assert by_id(bd.general_bounds(10, 1, cl=7))["cooling-over-k"].integer == 7
    assert by_id(bd.general_bounds(10, 10, b=4))["burning-plus-n-over-k"].integer == 5


def test_path_bounds():
    e = by_id(bd.path_bounds(10, 2))
    assert (e["path-lower"].integer, e["path-upper"].integer) == (4, 6)
    e = by_id(bd.path_bounds(4, 2))
    assert (e["path-lower"].integer, e["path-upper"].integer) == (2, 3)
    for k in (5, 9, 30):
        want = math.floor((-1 + math.sqrt(5 + 4 * k)) / 2)
        assert by_id(bd.path_bounds(4, k))["path-lower"].integer == want
    assert e["path-lower"].tag


def test_path_conjecture_is_reported_only():
    assert bd.path_conjecture(10, 2) == 4 + 1
    assert all(e.theorem != "path-conjecture" for e in bd.path_bounds(10, 2))


def test_hypercube_bounds():
    e = by_id(bd.hypercube_bounds(4, 6))
    far = e["hypercube-far-pair"]
    assert far.active and far.integer == 4 and "d=1" in far.notes
    e = by_id(bd.hypercube_bounds(10, 4))
    assert e["hypercube-log"].integer == 8
    assert not e["hypercube-exact-k4"].active
    e = by_id(bd.hypercube_bounds(12, 2))
    assert e["hypercube-exact-k2"].active and e["hypercube-exact-k2"].integer == 11


def test_unverified_entries_never_active():
    for n in range(4, 16):
        for k in (2, 5, 40):
            for e in bd.hypercube_bounds(n, k):
                if e.tag == "unverified":
                    assert not e.active


def test_grid_spot_values():
    e = by_id(bd.grid_bounds(100, 1))
    assert e["grid-lower"].value == 188 and e["grid-upper"].value == 190
    assert bd.grid_upper(100, 50) == pytest.approx(173.75)
    assert bd.grid_upper(100, 405) == pytest.approx(10000 / 405 + 1.5 ** (1 / 3) * 100 ** (2 / 3))
    assert bd.grid_upper(100, 405) == pytest.approx(49.35, abs=0.01)
    # 405 sits just below the last threshold (~405.5), so the middle piece applies there
    assert bd.grid_lower(100, 405) == pytest.approx(10002 / 407)
    assert bd.grid_lower(100, 406) == pytest.approx(1.5 ** (1 / 3) * 100 ** (2 / 3) - 1)
    assert bd.grid_lower(100, 406) == pytest.approx(23.66, abs=0.01)


def test_grid_vectorised_matches_scalar():
    ks = np.arange(1, 2000)
    lo, hi = bd.grid_lower(100, ks), bd.grid_upper(100, ks)
    for k in (1, 7, 48, 49, 57, 58, 222, 223, 405, 406, 1999):
        assert lo[k - 1] == pytest.approx(bd.grid_lower(100, int(k)))
        assert hi[k - 1] == pytest.approx(bd.grid_upper(100, int(k)))


def test_grid_bounds_domain():
    with pytest.raises(ValueError):
        bd.grid_bounds(5, 26)
    with pytest.raises(ValueError):
        bd.grid_bounds(5, 0)


def test_grid_asymptotic_entry_flagged():
    e = by_id(bd.grid_bounds(100, 500))
    assert e["grid-upper"].tag == "asymptotic" and not e["grid-upper"].active


def test_table_ranges_cover_k():
    rows = bd.table_ranges(10 ** 6)
    assert rows[0][1] == 1 and rows[-1][2] == 10 ** 12
    for (_, _, last, _), (_, first, _, _) in zip(rows, rows[1:]):
        assert first == last + 1


def test_product_bounds():
    e = by_id(bd.product_bounds(diam=1, k=2, j=3, product_cl=3))
    assert e["product-clique-cooling"].active
    e = by_id(bd.product_bounds(k=3, b=2, t=2, g_order=3))
    assert e["cliques-union"].integer == 4 and e["cliques-union"].active
    e = by_id(bd.product_bounds(k=1, m=2, power=3))
    assert e["power-lower"].integer == 4 and e["power-cooling-lower"].integer == 4
    assert not by_id(bd.product_bounds(diam=2, k=2, j=3, product_cl=5))["product-clique-cooling"].active


def test_special_bounds():
    assert bd.special_and_cover_bounds(10, 2, 2)[0].integer == 7
    assert bd.special_and_cover_bounds(100, 9, 4, T=16)[0].integer == 20
    assert bd.special_and_cover_bounds(10, 2) == []


def test_report_envelope_and_violations():
    rep = bd.BoundReport()
    rep.extend([bd.BoundEntry("a", "lower", 2.2), bd.BoundEntry("b", "upper", 5.9),
                bd.BoundEntry("c", "upper", 1, hypotheses=False)])
    assert (rep.lower, rep.upper) == (3, 5) and rep.consistent()
    assert [e.theorem for e in rep.violations(6)] == ["b"]
    assert "envelope [3, 5]" in rep.format()
    assert rep.to_dict()["entries"][0]["integer"] == 3


@pytest.mark.parametrize("spec", ["path:7", "hypercube:3", "grid:3x3", "spider:3,2",
                                  "caterpillar:[2,0,3]", "cycle:6"])
def test_reports_hold_on_exact_values(spec):
    g = build_family(spec)
    for k in range(1, min(g.n, 5) + 1):
        v = solve_liminal(g, k).value
        rep = bd.bounds_for_graph(g, k)
        assert rep.violations(v) == [], (spec, k)


def test_sweep_rows_and_csv():
    rows = bd.grid_sweep(10, [1, 5])
    assert list(rows[0]) == list(bd.SWEEP_HEADER)
    text = bd.sweep_csv(rows)
    assert text.splitlines()[0] == "k,lower,upper,heur_small,heur_large"
    assert len(text.splitlines()) == 3


def test_grid100_k1_sweep():
    row = bd.grid_sweep(100, [1])[0]
    assert 189 in (row["heur_small"], row["heur_large"])
    assert row["lower"] <= 189 <= row["upper"]


def test_path_window_small():
    for n in range(2, 8):
        for k in range(1, n + 1):
            v = solve_liminal(path(n), k).value
            e = by_id(bd.path_bounds(n, k))
            assert e["path-lower"].integer <= v <= e["path-upper"].integer


@pytest.mark.parametrize("fn", [bd.path_bounds, bd.hypercube_bounds, bd.general_bounds])
def test_k_must_be_positive(fn):
    with pytest.raises(ValueError):
        fn(5, 0)


def test_hypercube_k_beyond_vertex_count():
    e = by_id(bd.hypercube_bounds(4, 40))
    assert not e["hypercube-far-pair"].active
