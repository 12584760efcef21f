from dataclasses import replace
from math import comb

import pytest

from liminal.engine import (GameState, IllegalMove, Phase, Transcript, apply_burn, apply_reveal,
                            burn_options, play, propagate, replay, reveal_options)
from liminal.graph import VertexOrder, build_family, complete, graded_lex_order, grid, mask_of, path
from liminal.strategies import BasicSaboteur, GreedyArsonist, first_by_index_saboteur


def at_round(r, burned=0, revealed=0):
    return GameState(burned=burned, revealed=revealed, round=r)


def test_propagate():
    p3 = path(3)
    s = propagate(p3, at_round(2, burned=mask_of([1])))
    assert s.burned == 0b111 and s.phase is Phase.PRE_REVEAL
    assert propagate(p3, at_round(2)).burned == 0
    g = grid(3, 3)
    s = propagate(g, at_round(2, burned=1))
    assert s.burned == mask_of([0, 1, 3])


def test_first_round_does_not_spread():
    assert propagate(path(3), at_round(1, burned=0b010)).burned == 0b010


def test_reveal_sizes():
    g = path(5)
    s = propagate(g, at_round(1))
    size, pool = reveal_options(g, s, 2)
    assert size == 2 and comb(bin(pool).count("1"), size) == 10
    s = propagate(g, at_round(2, burned=0b00111))
    # only vertex 4 is unlit after spreading from {0,1,2}
    size, pool = reveal_options(g, s, 3)
    assert (size, pool) == (1, 0b10000)
    s = propagate(g, at_round(2, burned=0b00111, revealed=0b11000))
    assert reveal_options(g, s, 2)[0] == 0


def test_illegal_reveals():
    g = path(5)
    s = propagate(g, at_round(1))
    with pytest.raises(IllegalMove):
        apply_reveal(g, s, 0b1, 2)
    s2 = apply_reveal(g, s, 0b11, 2)
    with pytest.raises(IllegalMove):
        apply_reveal(g, s2, 0b100, 2)
    with pytest.raises(IllegalMove):
        apply_reveal(g, replace(s, revealed=0b1), 0b11, 2)


def test_burn_rules():
    g = path(8)
    s = replace(propagate(g, at_round(1)), revealed=mask_of([2, 7]), phase=Phase.PRE_BURN)
    s2 = apply_burn(g, s, 7)
    assert s2.burned >> 7 & 1 and s2.round == 2
    with pytest.raises(IllegalMove):
        apply_burn(g, s, None)
    with pytest.raises(IllegalMove):
        apply_burn(g, s, 3)
    empty = replace(s, revealed=0)
    assert apply_burn(g, empty, None).round == 2


def test_strict_pool_and_fallback():
    s = GameState(burned=0, revealed=0b111, fresh=0b100, phase=Phase.PRE_BURN)
    assert burn_options(s) == 0b111
    assert burn_options(s, strict=True) == 0b100
    assert burn_options(replace(s, fresh=0), strict=True) == 0b111


def test_small_games():
    assert play(complete(1), 3, first_by_index_saboteur(1), GreedyArsonist(graded_lex_order(1, 1))).length == 1
    for sab_order in ([0, 1], [1, 0]):
        t = play(path(2), 2, BasicSaboteur(VertexOrder(sab_order)), GreedyArsonist(VertexOrder(sab_order)))
        assert t.length == 2
    k5 = complete(5)
    t = play(k5, 5, first_by_index_saboteur(5), GreedyArsonist(graded_lex_order(1, 5), "largest"))
    assert t.length == 2


def test_phase_guards():
    g = path(3)
    with pytest.raises(IllegalMove):
        apply_reveal(g, at_round(1), 0b1, 1)
    with pytest.raises(IllegalMove):
        propagate(g, propagate(g, at_round(1)))


def test_transcript_roundtrip_and_replay():
    g = build_family("grid:5x5")
    t = play(g, 2, BasicSaboteur(graded_lex_order(5, 5)), GreedyArsonist(graded_lex_order(5, 5)))
    t2 = Transcript.from_json(t.to_json())
    assert t2.to_json() == t.to_json()
    assert replay(g, t2).to_json() == t.to_json()


def test_grid100_k1_playout():
    g = grid(100, 100)
    order = graded_lex_order(100, 100)
    t = play(g, 1, BasicSaboteur(order), GreedyArsonist(order))
    assert t.length == 189


def test_bad_k():
    with pytest.raises(ValueError):
        play(path(2), 0, first_by_index_saboteur(2), GreedyArsonist(graded_lex_order(1, 2)))
