"""Slow reference implementations written from the game rules alone.

Nothing here imports the engine or the solver: vertex sets are frozensets and
adjacency is a dict of sets, so an agreement with the library is meaningful.
"""

from collections import deque
from functools import lru_cache
from itertools import combinations, product


def adjacency(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def spread(adj, burned):
    out = set(burned)
    for v in burned:
        out |= adj[v]
    return frozenset(out)


def game_value(n, edges, k, allow_pass=False):
    """b_k by plain minimax over (burned, revealed) sets.

    With allow_pass the Arsonist may decline to burn.
    """
    adj = adjacency(n, edges)
    everything = frozenset(range(n))
    if n == 0:
        return 0

    @lru_cache(maxsize=None)
    def rounds_left(burned, revealed, first):
        # rounds still to be played, counting this one
        if not first:
            burned = spread(adj, burned)
            if burned == everything:
                return 1
        unlit = sorted(everything - burned - revealed)
        best = 0
        for reveal in combinations(unlit, min(k, len(unlit))):
            rev = revealed | frozenset(reveal)
            pool = rev - burned
            options = [1 if burned | {v} == everything else 1 + rounds_left(burned | {v}, rev, False)
                       for v in pool]
            # a pass that changes nothing would repeat the state forever
            stalls = not reveal and spread(adj, burned) == burned
            if not pool or (allow_pass and not stalls):
                options.append(1 + rounds_left(burned, rev, False))
            val = min(options)
            best = max(best, val)
        return best

    return rounds_left(frozenset(), frozenset(), True)


def _single_player(n, edges, pick):
    adj = adjacency(n, edges)
    everything = frozenset(range(n))

    @lru_cache(maxsize=None)
    def rounds_left(burned, first):
        if not first:
            burned = spread(adj, burned)
            if burned == everything:
                return 1
        vals = [1 if burned | {v} == everything else 1 + rounds_left(burned | {v}, False)
                for v in everything - burned]
        return pick(vals)

    return rounds_left(frozenset(), True) if n else 0


def burning_number(n, edges):
    return _single_player(n, edges, min)


def cooling_number(n, edges):
    return _single_player(n, edges, max)


def bfs_distances(n, edges):
    """Distance lists with None for unreachable pairs."""
    adj = adjacency(n, edges)
    out = []
    for s in range(n):
        dist = [None] * n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if dist[w] is None:
                    dist[w] = dist[u] + 1
                    q.append(w)
        out.append(dist)
    return out


def qbf_truth(quantifiers, clauses):
    """Evaluate a prenex formula by trying every assignment of the prefix."""
    variables = [v for v, _ in quantifiers]

    def sat(assign):
        return all(any(assign[abs(l)] == (l > 0) for l in c) for c in clauses)

    table = {}
    for values in product((False, True), repeat=len(variables)):
        table[values] = sat(dict(zip(variables, values)))

    def fold(prefix):
        if len(prefix) == len(variables):
            return table[prefix]
        branch = [fold(prefix + (b,)) for b in (False, True)]
        return any(branch) if quantifiers[len(prefix)][1] == "e" else all(branch)

    return fold(())


def is_antichain(sets):
    return not any(a < b or b < a for a, b in combinations(sets, 2))
