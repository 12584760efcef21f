"""Exact game values and one-sided certificates.

The liminal search answers threshold questions "can the Saboteur force at
least t more rounds from this pre-reveal state?" with early exits on both
sides, and raises t until the answer turns negative.  Proven bounds are kept
per state as a (low, high) pair, so repeated threshold probes reuse work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .engine import (GameState, IllegalMove, RoundRecord, Transcript,
                     apply_burn, apply_reveal, burn_options, permute_state, propagate)
from .graph import Graph, bits, popcount

DEFAULT_MAX_VERTICES = 128
_INF = 1 << 30


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class SolveResult:
    value: int | None
    nodes_expanded: int = 0
    memo_entries: int = 0
    complete: bool = True
    # largest value proven achievable when the search stopped early
    lower: int | None = None
    certified: bool = True
    pv: Transcript | None = None
    notes: list[str] = field(default_factory=list)


def _combos(pool: int, size: int):
    items = [1 << v for v in bits(pool)]
    if size == 0:
        yield 0
        return
    for c in itertools.combinations(items, size):
        yield sum(c)


class LiminalSolver:
    """b_k(G) by threshold search over (burned, revealed) states."""

    def __init__(self, g: Graph, k: int, *, strict: bool = False, memo: bool = True,
                 dominance: bool = True, budget_nodes: int | None = None,
                 budget_memo: int | None = None, max_vertices: int = DEFAULT_MAX_VERTICES):
        if k < 1:
            raise ValueError("k must be at least 1")
        if g.n > max_vertices:
            raise ValueError(f"graph has {g.n} vertices; solver cap is {max_vertices}")
        self.g = g
        self.k = k
        self.strict = strict
        self.memo = memo
        self.dominance = dominance
        self.budget_nodes = budget_nodes
        self.budget_memo = budget_memo
        self.full = g.full
        self.tt: dict[tuple[int, int], tuple[int, int]] = {}
        self._ub_cache: dict[int, int] = {}
        self.nodes = 0

    # bounds on the remaining rounds at a pre-reveal state

    def _prop_bound(self, B: int) -> int:
        if not B:
            return _INF
        ub = self._ub_cache.get(B) if self.memo else None
        if ub is None:
            e = self.g.eccentricity_of_set(B)
            ub = _INF if e is None else e + 1
            if self.memo:
                self._ub_cache[B] = ub
        return ub

    def _lookup(self, key):
        if self.memo:
            got = self.tt.get(key)
            if got is not None:
                return got
        B = key[0]
        lo = 1 if popcount(self.full & ~B) <= 1 else 2
        return lo, self._prop_bound(B)

    def _store(self, key, lo, hi):
        if not self.memo:
            return
        self.tt[key] = (lo, hi)
        if self.budget_memo is not None and len(self.tt) > self.budget_memo:
            raise BudgetExceeded("memo budget exceeded")

    def _after(self, B1: int, R: int, t: int) -> bool:
        """Does the round after the burn that produced B1 leave >= t-1 rounds?"""
        B2 = self.g.closed_neighborhood(B1)
        if B2 == self.full:
            return t <= 2
        return self.ge(B2, R & ~B2, t - 1)

    def ge(self, B: int, R: int, t: int) -> bool:
        """True iff the Saboteur can force at least t rounds counting this one."""
        if t <= 1:
            return True
        key = (B, R)
        lo, hi = self._lookup(key)
        if t <= lo:
            return True
        if t > hi:
            return False
        self.nodes += 1
        if self.budget_nodes is not None and self.nodes > self.budget_nodes:
            raise BudgetExceeded("node budget exceeded")

        full = self.full
        unlit = full & ~(B | R)
        size = min(self.k, popcount(unlit))
        closed = {}
        seen = set() if self.dominance else None
        result = False
        for X in _combos(unlit, size):
            R2 = R | X
            opts = X if (self.strict and X) else (R2 & ~B)
            if seen is not None:
                sig = self._signature(B, R2, opts, closed)
                if sig in seen:
                    continue
                seen.add(sig)
            if not opts:
                ok = self._after(B, R2, t)
            else:
                ok = True
                for v in self._order_options(B, opts, closed):
                    B1 = B | 1 << v
                    if B1 == full or not self._after(B1, R2, t):
                        ok = False
                        break
            if ok:
                result = True
                break
        if result:
            self._store(key, max(lo, t), hi)
        else:
            self._store(key, lo, min(hi, t - 1))
        return result

    def _closed_after(self, B, v, closed):
        c = closed.get(v)
        if c is None:
            c = self.g.closed_neighborhood(B | 1 << v)
            closed[v] = c
        return c

    def _signature(self, B, R2, opts, closed):
        # The set of positions the Arsonist can move to (after next-round
        # propagation) determines the value of this reveal exactly.
        if not opts:
            B2 = self.g.closed_neighborhood(B)
            return (None, B2, R2 & ~B2)
        out = []
        for v in bits(opts):
            if B | 1 << v == self.full:
                out.append((self.full, 0))
            else:
                c = self._closed_after(B, v, closed)
                out.append((c, R2 & ~c))
        return frozenset(out)

    def _order_options(self, B, opts, closed):
        vs = list(bits(opts))
        if len(vs) > 1:
            vs.sort(key=lambda v: -popcount(self._closed_after(B, v, closed)))
        return vs

    # exact values

    def exact(self, B: int = 0, R: int = 0) -> int:
        lo, _ = self._lookup((B, R))
        t = max(lo, 1)
        while self.ge(B, R, t + 1):
            t += 1
        return t

    def solve(self, *, pv: bool = False) -> SolveResult:
        g = self.g
        if g.n == 0:
            return SolveResult(0)
        proven = 1
        try:
            t = 1
            while self.ge(0, 0, t + 1):
                t += 1
                proven = t
            value = t
        except BudgetExceeded as exc:
            return SolveResult(None, self.nodes, len(self.tt), complete=False, lower=proven,
                               notes=[str(exc)])
        res = SolveResult(value, self.nodes, len(self.tt), lower=value)
        if value > g.n + g.diameter() and g.is_connected():
            raise AssertionError(f"value {value} exceeds n + diam; solver bug")
        if pv:
            try:
                res.pv = self.principal_variation()
            except BudgetExceeded as exc:
                res.notes.append(f"principal variation skipped: {exc}")
        return res

    def _reveal_value(self, B, R, X):
        """Exact value of the position after reveal X (Arsonist to move)."""
        R2 = R | X
        opts = X if (self.strict and X) else (R2 & ~B)
        if not opts:
            return self._next_value(B, R2), None
        best, arg = _INF, None
        for v in bits(opts):
            B1 = B | 1 << v
            val = 1 if B1 == self.full else self._next_value(B1, R2)
            if val < best:
                best, arg = val, v
        return best, arg

    def _next_value(self, B1, R2):
        B2 = self.g.closed_neighborhood(B1)
        if B2 == self.full:
            return 2
        return 1 + self.exact(B2, R2 & ~B2)

    def principal_variation(self) -> Transcript:
        """Lexicographically smallest optimal line for both players."""
        g, k = self.g, self.k
        t = Transcript(g.name, k, strict=self.strict)
        s = GameState()
        while True:
            before = s.burned
            s = propagate(g, s)
            rec = RoundRecord(sorted(bits(s.burned & ~before)), [], None)
            t.rounds.append(rec)
            if s.burned == g.full:
                t.length = s.round
                return t
            B, R = s.burned, s.revealed & ~s.burned
            target = self.exact(B, R)
            unlit = g.full & ~(B | R)
            size = min(k, popcount(unlit))
            for X in sorted(_combos(unlit, size), key=lambda m: sorted(bits(m))):
                val, v = self._reveal_value(B, R, X)
                if val == target:
                    break
            else:
                raise AssertionError("no reveal attains the solved value")
            s = apply_reveal(g, s, X, k)
            rec.revealed = sorted(bits(X))
            rec.burned = v
            s2 = apply_burn(g, s, v, strict=self.strict)
            if s2.burned == g.full:
                t.length = s.round
                return t
            s = s2


def _root_task(args):
    g, k, strict, X = args
    solver = LiminalSolver(g, k, strict=strict)
    return solver._reveal_value(0, 0, X)[0]


def solve_liminal(g: Graph, k: int, *, strict: bool = False, memo: bool = True,
                  dominance: bool = True, budget_nodes: int | None = None,
                  budget_memo: int | None = None, threads: int = 1, pv: bool = False,
                  max_vertices: int = DEFAULT_MAX_VERTICES) -> SolveResult:
    """b_k(G): optimal game length with the Saboteur maximizing."""
    if threads > 1 and g.n > 0 and budget_nodes is None and budget_memo is None:
        return _solve_parallel(g, k, strict, threads, pv, max_vertices)
    solver = LiminalSolver(g, k, strict=strict, memo=memo, dominance=dominance,
                           budget_nodes=budget_nodes, budget_memo=budget_memo,
                           max_vertices=max_vertices)
    return solver.solve(pv=pv)


def _solve_parallel(g, k, strict, threads, pv, max_vertices):
    # Root reveals are split across worker processes, each with its own table.
    from concurrent.futures import ProcessPoolExecutor
    import multiprocessing as mp

    if g.n > max_vertices:
        raise ValueError(f"graph has {g.n} vertices; solver cap is {max_vertices}")
    size = min(k, g.n)
    tasks = [(g, k, strict, X) for X in _combos(g.full, size)]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as ex:
        values = list(ex.map(_root_task, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    res = SolveResult(max(values), notes=[f"parallel over {len(tasks)} root reveals"])
    res.lower = res.value
    if pv:
        res.pv = LiminalSolver(g, k, strict=strict, max_vertices=max_vertices).principal_variation()
    return res


# single-player processes


def _single_player(g: Graph, better, budget_nodes):
    full = g.full
    memo: dict[int, int] = {}
    counter = [0]

    def f(B):
        # B is the burned set after propagation, not full
        got = memo.get(B)
        if got is not None:
            return got
        counter[0] += 1
        if budget_nodes is not None and counter[0] > budget_nodes:
            raise BudgetExceeded("node budget exceeded")
        best = None
        for v in bits(full & ~B):
            B1 = B | 1 << v
            if B1 == full:
                val = 1
            else:
                B2 = g.closed_neighborhood(B1)
                val = 2 if B2 == full else 1 + f(B2)
            if best is None or better(val, best):
                best = val
        memo[B] = best
        return best

    return f, memo


def solve_burning(g: Graph, budget_nodes: int | None = None) -> int:
    """b(G): fewest rounds to burn everything with one new source per round."""
    if g.n == 0:
        return 0
    f, _ = _single_player(g, lambda a, b: a < b, budget_nodes)
    return f(0)


def solve_cooling(g: Graph, budget_nodes: int | None = None) -> int:
    """CL(G): most rounds the same process can be made to last."""
    if g.n == 0:
        return 0
    f, _ = _single_player(g, lambda a, b: a > b, budget_nodes)
    return f(0)


def cooling_sequence(g: Graph) -> list[int]:
    """An optimal cooling sequence (lexicographically smallest choices)."""
    if g.n == 0:
        return []
    f, _ = _single_player(g, lambda a, b: a > b, None)
    full = g.full
    seq, B = [], 0
    while True:
        target = f(B)
        for v in bits(full & ~B):
            B1 = B | 1 << v
            if B1 == full:
                val = 1
            else:
                B2 = g.closed_neighborhood(B1)
                val = 2 if B2 == full else 1 + f(B2)
            if val == target:
                break
        seq.append(v)
        if B1 == full:
            return seq
        B = g.closed_neighborhood(B1)
        if B == full:
            return seq


def longest_cooling_sequence(g: Graph) -> int:
    """Most sources any cooling run can place (CL or CL-1)."""
    full = g.full
    memo: dict[int, int] = {}

    def f(B):
        if B in memo:
            return memo[B]
        best = 0
        for v in bits(full & ~B):
            B1 = B | 1 << v
            if B1 == full:
                val = 1
            else:
                B2 = g.closed_neighborhood(B1)
                val = 1 if B2 == full else 1 + f(B2)
            best = max(best, val)
        memo[B] = best
        return best

    return f(0) if g.n else 0


# one-sided certificates


def _relabel_if_needed(g, sab, s):
    if s.round == 2 and hasattr(sab, "relabel"):
        perm = sab.relabel(g, s)
        if perm is not None:
            perm = list(perm)
            if not g.is_automorphism(perm):
                raise IllegalMove("relabel is not an automorphism", s)
            return permute_state(s, perm)
    return s


def value_fixed_saboteur(g: Graph, k: int, sab, *, strict: bool = False,
                         budget_nodes: int | None = None) -> SolveResult:
    """Shortest game over every Arsonist reply to a fixed Saboteur.

    This certifies a lower bound on b_k(G).  The strategy must depend only on
    the burned set, the revealed set and the round number, unless it sets
    ``history = True``; then the source sequence joins the memo key.
    """
    full = g.full
    history = getattr(sab, "history", False)
    memo: dict[tuple[int, int, int], int] = {}
    counter = [0]

    def go(s: GameState) -> int:
        # s is in pre-propagation phase
        s = propagate(g, s)
        if s.burned == full:
            return s.round
        key = (s.round, s.burned, s.revealed & ~s.burned)
        if history:
            key += (s.sources,)
        got = memo.get(key)
        if got is not None:
            return got
        counter[0] += 1
        if budget_nodes is not None and counter[0] > budget_nodes:
            raise BudgetExceeded("node budget exceeded")
        X = sab(g, s, k)
        try:
            s1 = apply_reveal(g, s, X, k)
        except IllegalMove as exc:
            raise IllegalMove(f"Saboteur: {exc}") from None
        opts = burn_options(s1, strict)
        best = _INF
        choices = list(bits(opts)) or [None]
        for v in choices:
            s2 = apply_burn(g, s1, v, strict=strict)
            if s2.burned == full:
                val = s1.round
            else:
                val = go(_relabel_if_needed(g, sab, s2))
            if val < best:
                best = val
        memo[key] = best
        return best

    try:
        value = go(GameState())
    except BudgetExceeded as exc:
        return SolveResult(None, counter[0], len(memo), complete=False, notes=[str(exc)])
    return SolveResult(value, counter[0], len(memo))


def value_fixed_arsonist(g: Graph, k: int, ars, *, saboteur_pool: Callable | None = None,
                         strict: bool = False, budget_nodes: int | None = None) -> SolveResult:
    """Longest game over every Saboteur reply to a fixed Arsonist.

    Unrestricted, this certifies an upper bound on b_k(G).  With
    ``saboteur_pool(g, state, k) -> list of reveal masks`` the Saboteur is
    restricted and the result is only heuristic.
    """
    full = g.full
    compulsory = getattr(ars, "compulsory", True)
    memo: dict = {}
    counter = [0]

    def go(s: GameState) -> int:
        s = propagate(g, s)
        if s.burned == full:
            return s.round
        key = (s.round, s.burned, s.revealed, s.sources)
        got = memo.get(key)
        if got is not None:
            return got
        counter[0] += 1
        if budget_nodes is not None and counter[0] > budget_nodes:
            raise BudgetExceeded("node budget exceeded")
        unlit = s.unlit(full)
        size = min(k, popcount(unlit))
        reveals = saboteur_pool(g, s, k) if saboteur_pool else _combos(unlit, size)
        best = 0
        for X in reveals:
            s1 = apply_reveal(g, s, X, k)
            v = ars(g, s1, burn_options(s1, strict))
            s2 = apply_burn(g, s1, v, strict=strict, compulsory=compulsory)
            val = s1.round if s2.burned == full else go(s2)
            best = max(best, val)
        memo[key] = best
        return best

    try:
        value = go(GameState())
    except BudgetExceeded as exc:
        return SolveResult(None, counter[0], len(memo), complete=False, certified=False,
                           notes=[str(exc)])
    res = SolveResult(value, counter[0], len(memo), certified=saboteur_pool is None)
    if saboteur_pool is not None:
        res.notes.append("restricted Saboteur pool: heuristic, not a certificate")
    return res
