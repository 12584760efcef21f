"""Saboteur and Arsonist strategies.

Saboteurs are callables ``(graph, state, k) -> reveal mask`` and Arsonists
are callables ``(graph, state, options) -> vertex or None``.  All of them are
deterministic functions of the state and their frozen parameters.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Sequence

from .constructions import rainbow_sperner, rainbow_sperner_forced
from .graph import (Graph, GraphError, VertexOrder, bits, graded_lex_order, index_order,
                    mask_of, popcount)


class StrategyViolation(AssertionError):
    """A certified strategy met a state its proof says cannot occur."""


def _pad(g: Graph, state, chosen: list[int], need: int) -> int:
    """Chosen vertices plus the smallest-index unlit vertices, `need` in total."""
    m = mask_of(chosen)
    free = state.unlit(g.full) & ~m
    while popcount(m) < need and free:
        low = free & -free
        m |= low
        free ^= low
    return m


class BasicSaboteur:
    """Reveal the smallest unlit vertices under a fixed order."""

    name = "basic-sab"

    def __init__(self, order: VertexOrder):
        self.order = order

    def __call__(self, g, state, k):
        pool = state.unlit(g.full)
        need = min(k, popcount(pool))
        return mask_of(self.order.smallest(pool, need))


class GreedyArsonist:
    """Burn the smallest (or largest) selectable vertex under a fixed order."""

    def __init__(self, order: VertexOrder, variant: str = "smallest"):
        if variant not in ("smallest", "largest"):
            raise ValueError(f"unknown greedy variant {variant!r}")
        self.order = order
        self.variant = variant
        self.name = f"greedy-ars:{variant}"

    def __call__(self, g, state, options):
        if not options:
            return None
        if self.variant == "smallest":
            return self.order.smallest(options, 1)[0]
        return self.order.largest(options)


def first_by_index_saboteur(n: int) -> BasicSaboteur:
    return BasicSaboteur(index_order(n))


def smallest_index_arsonist(n: int) -> GreedyArsonist:
    return GreedyArsonist(index_order(n), "smallest")


class CoolingChunkSaboteur:
    """Reveal a cooling sequence k vertices at a time."""

    name = "cooling-chunk"

    def __init__(self, g: Graph, seq: Sequence[int], k: int):
        seq = list(seq)
        if len(set(seq)) != len(seq):
            raise ValueError("cooling sequence repeats a vertex")
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if g.distance(seq[i], seq[j]) < j - i + 1:
                    raise ValueError(f"not a cooling sequence: d(v{i + 1}, v{j + 1}) < {j - i + 1}")
        self.seq = seq
        self.k = k

    def __call__(self, g, state, k):
        r = state.round
        block = self.seq[(r - 1) * self.k: r * self.k]
        unlit = state.unlit(g.full)
        lit = [v for v in block if not unlit >> v & 1]
        if lit:
            raise StrategyViolation(f"cooling block vertices {lit} lit in round {r}")
        return _pad(g, state, block, min(k, popcount(unlit)))


def _log2_ceil(k: int) -> int:
    return (k - 1).bit_length()


def hypercube_cooling_sequence(n: int) -> list[int]:
    """(∅, S_2, ..., S_{n-1}) on [n] as vertex masks."""
    if n >= 3:
        return [0] + rainbow_sperner(n).as_masks()
    return [0]


class HypercubeLogSaboteur:
    """Reveal c_i ∪ A for subsets A of the last ceil(log2 k) coordinates."""

    name = "hc-log"

    def __init__(self, n: int, k: int):
        m = _log2_ceil(k)
        if n - m < 1:
            raise ValueError("need n > ceil(log2 k)")
        self.n, self.k, self.m = n, k, m
        base = n - m
        self.seq = hypercube_cooling_sequence(base)
        self.rounds = []
        for c in self.seq:
            self.rounds.append([c | (a << base) for a in range(1 << m)][:k])

    def __call__(self, g, state, k):
        unlit = state.unlit(g.full)
        need = min(k, popcount(unlit))
        r = state.round
        if r <= len(self.rounds):
            block = self.rounds[r - 1][:need]
            lit = [v for v in block if not unlit >> v & 1]
            if lit:
                raise StrategyViolation(f"hc-log vertices {lit} lit in round {r}")
            return _pad(g, state, block, need)
        return _pad(g, state, [], need)


def b4_schedule(n: int) -> dict[int, list[int]]:
    """Reveal sets for rounds 2..n-4 as vertex masks (elements 1..n)."""
    if n < 11:
        raise ValueError("the b4 schedule needs n >= 11")

    def vx(*elems):
        return sum(1 << (e - 1) for e in elems)

    sched = {
        2: [vx(1, 4), vx(1, n - 3), vx(2, 3), vx(2, 4)],
        3: [vx(2, n - 3, n - 2), vx(2, n - 2, n - 1), vx(2, n - 2, n), vx(3, n - 3, n - 1)],
        4: [vx(3, n - 2, n - 1, n), vx(4, n - 3, n - 2, n), vx(4, n - 3, n - 1, n),
            vx(4, n - 2, n - 1, n)],
    }
    base = range(1, n - 3)
    fams = [
        (rainbow_sperner_forced([e for e in base if e not in (1, 2, 3)], 4), (n - 3, n - 2, n - 1)),
        (rainbow_sperner_forced([e for e in base if e not in (1, 2, 4)], 3), (n - 3, n - 2, n)),
        (rainbow_sperner_forced([e for e in base if e not in (1, 3, 4)], 2), (n - 3, n - 1, n)),
        (rainbow_sperner_forced([e for e in base if e not in (2, 3, 4)], 1), (n - 2, n - 1, n)),
    ]
    for i in range(5, n - 4):
        sched[i] = [vx(*fam.sets[i - 5], *tail) for fam, tail in fams]
    everything = set(range(1, n + 1))
    sched[n - 4] = [vx(*(everything - set(drop))) for drop in
                    [(1, 2, n - 3, n - 2), (1, 2, n - 3, n - 1), (1, 2, n - 3, n), (1, 2, n - 2, n - 1)]]
    return sched


def verify_b4_schedule(n: int) -> list[str]:
    """Check rounds 2..n-4 form a 4-rainbow antichain avoiding {1,2}, {1,3} as subsets."""
    sched = b4_schedule(n)
    fails = []
    everything = []
    for i in range(2, n - 3):
        sets = sched.get(i, [])
        if len(sets) != 4 or len(set(sets)) != 4:
            fails.append(f"round {i} has {len(set(sets))} distinct sets")
        for v in sets:
            if popcount(v) != i:
                fails.append(f"round {i} set {sorted(e + 1 for e in bits(v))} has size {popcount(v)}")
            for w in (0b011, 0b101):
                if v & w == w and v != w:
                    fails.append(f"round {i} set {sorted(e + 1 for e in bits(v))} contains "
                                 f"{sorted(e + 1 for e in bits(w))}")
        everything += sets
    for a in range(len(everything)):
        for b in range(len(everything)):
            u, v = everything[a], everything[b]
            if a != b and u != v and u & v == u:
                fails.append(f"{sorted(e + 1 for e in bits(u))} is inside {sorted(e + 1 for e in bits(v))}")
    return fails


class HypercubeB4Saboteur:
    """Four reveals per round keeping Q_n burning for n-1 rounds (n >= 11).

    With ``width`` < 4 only the first ``width`` reveals of each scheduled round
    are used, for playing with k = width.
    """

    name = "hc-b4"

    def __init__(self, n: int, width: int = 4):
        self.n = n
        self.width = width
        self.schedule = b4_schedule(n)
        self.size_mask = {}
        full = (1 << n) - 1
        self.full = full

    def relabel(self, g, state):
        # Map the Arsonist's round-1 source to ∅, the other round-1 reveals to
        # {1}, {1,2}, {1,3}.
        a = state.sources[0] if state.sources else None
        if not a:
            return None
        j = a.bit_length() - 1
        coords = list(range(self.n))
        low = [c for c in (0, 1, 2) if c != j]
        coords[j], coords[low[0]], coords[low[1]] = 0, 1, 2
        perm = []
        for v in range(1 << self.n):
            x = v ^ a
            y = 0
            for c in bits(x):
                y |= 1 << coords[c]
            perm.append(y)
        return perm

    def __call__(self, g, state, k):
        n, r = self.n, state.round
        unlit = state.unlit(g.full)
        need = min(k, popcount(unlit))
        if r == 1:
            block = [0, 1, 2, 4][:self.width]
        elif r in self.schedule:
            block = self.schedule[r][:self.width]
        elif r == n - 3:
            block = [v for v in bits(unlit) if popcount(v) == n - 2][:self.width]
            if len(block) < self.width:
                raise StrategyViolation(f"fewer than {self.width} unlit (n-2)-sets in round {r}")
        elif r == n - 2:
            lit_big = [w for w in bits(state.revealed) if popcount(w) == n - 2]
            vs = [v for v in bits(unlit) if popcount(v) == n - 1
                  and not any(v & w == w for w in lit_big)]
            if not vs or not unlit >> self.full & 1:
                raise StrategyViolation(f"no unlit pair {{v, [n]}} in round {r}")
            block = [self.full, vs[0]]
        else:
            return _pad(g, state, [], need)
        block = block[:need]
        lit = [v for v in block if not unlit >> v & 1]
        if lit:
            raise StrategyViolation(f"hc-b4 vertices {lit} lit in round {r}")
        return _pad(g, state, block, need)


class EccentricPairArsonist:
    """Burn both ends of a farthest round-1 pair, then pass."""

    name = "eccentric-ars"
    compulsory = False

    @staticmethod
    def _pair(g, mask):
        vs = list(bits(mask))
        if len(vs) == 1:
            return vs[0], None
        best = None
        for i, u in enumerate(vs):
            for w in vs[i + 1:]:
                d = g.distance(u, w)
                if best is None or d > best[0]:
                    best = (d, u, w)
        return best[1], best[2]

    def __call__(self, g, state, options):
        if state.round == 1:
            return self._pair(g, state.revealed)[0] if options else None
        if state.round == 2:
            first = state.revealed & ~state.fresh
            if not first:
                return None
            w = self._pair(g, first)[1]
            return w if w is not None and options >> w & 1 else None
        return None


class PartitionArsonist:
    """Put a source into a part that has no burned vertex whenever possible."""

    name = "partition-ars"

    def __init__(self, parts: Sequence[Sequence[int]], n: int | None = None, k: int | None = None):
        self.parts = [list(p) for p in parts]
        self.masks = [mask_of(p) for p in self.parts]
        seen = 0
        for m in self.masks:
            if seen & m:
                raise ValueError("partition parts overlap")
            seen |= m
        if n is not None and seen != (1 << n) - 1:
            raise ValueError("partition does not cover the vertex set")
        if k is not None and any(len(p) > k for p in self.parts):
            raise ValueError(f"a part has more than {k} vertices")
        self.cover = seen

    def __call__(self, g, state, options):
        if self.cover != g.full:
            raise ValueError("partition does not cover the vertex set")
        if not options:
            return None
        lit = state.burned | state.revealed
        open_parts = [m for m in self.masks if not m & state.burned]
        for m in open_parts:
            if m & options:
                return (m & options & -(m & options)).bit_length() - 1
        if open_parts and any(m & lit for m in open_parts):
            raise StrategyViolation("a sourceless part holds lit vertices but none selectable")
        return (options & -options).bit_length() - 1


class SolverArsonist:
    """Optimal Arsonist backed by the exact solver."""

    name = "solver"

    def __init__(self, g: Graph, k: int, strict: bool = False, budget_nodes: int | None = None):
        from .solver import LiminalSolver

        self.solver = LiminalSolver(g, k, strict=strict, budget_nodes=budget_nodes)

    def __call__(self, g, state, options):
        if not options:
            return None
        B, R = state.burned, state.revealed & ~state.burned
        best = None
        for v in bits(options):
            B1 = B | 1 << v
            val = 1 if B1 == g.full else self.solver._next_value(B1, R)
            if best is None or val < best[0]:
                best = (val, v)
        return best[1]


class SolverSaboteur:
    name = "solver"

    def __init__(self, g: Graph, k: int, strict: bool = False, budget_nodes: int | None = None):
        from .solver import LiminalSolver, _combos

        self._combos = _combos
        self.solver = LiminalSolver(g, k, strict=strict, budget_nodes=budget_nodes)

    def __call__(self, g, state, k):
        B, R = state.burned, state.revealed & ~state.burned
        unlit = state.unlit(g.full)
        best = None
        for X in self._combos(unlit, min(k, popcount(unlit))):
            val = self.solver._reveal_value(B, R, X)[0]
            if best is None or val > best[0]:
                best = (val, X)
        return best[1]


# descriptors


def grid_shape(g: Graph) -> tuple[int, int] | None:
    m = re.fullmatch(r"grid:(\d+)x(\d+)", g.name or "")
    return (int(m.group(1)), int(m.group(2))) if m else None


def hypercube_dim(g: Graph) -> int:
    n = g.n.bit_length() - 1
    if g.n != 1 << n or any(popcount(g.adj[v]) != n for v in range(g.n)):
        raise GraphError("strategy needs a hypercube graph")
    return n


def _order_for(g: Graph, which: str | None) -> VertexOrder:
    shape = grid_shape(g)
    if which in (None, "grlex") and shape:
        return graded_lex_order(*shape)
    if which == "grlex":
        raise GraphError("grlex order needs a grid:MxN graph")
    return index_order(g.n)


def parse_saboteur(desc: str, g: Graph, k: int, strict: bool = False):
    name, _, arg = desc.partition(":")
    if name == "basic-sab":
        return BasicSaboteur(_order_for(g, arg or None))
    if name == "cooling-chunk":
        from .solver import cooling_sequence

        return CoolingChunkSaboteur(g, cooling_sequence(g), k)
    if name == "hc-log":
        return HypercubeLogSaboteur(hypercube_dim(g), k)
    if name == "hc-b4":
        return HypercubeB4Saboteur(hypercube_dim(g), width=min(k, 4))
    if name == "solver":
        return SolverSaboteur(g, k, strict)
    raise ValueError(f"unknown Saboteur strategy {desc!r}")


def parse_arsonist(desc: str, g: Graph, k: int, strict: bool = False):
    name, _, arg = desc.partition(":")
    if name == "greedy-ars":
        variant, _, order = (arg or "smallest").partition(":")
        return GreedyArsonist(_order_for(g, order or None), variant)
    if name == "eccentric-ars":
        return EccentricPairArsonist()
    if name == "partition-ars":
        parts = json.loads(Path(arg).read_text())
        if isinstance(parts, dict):
            parts = parts["parts"]
        return PartitionArsonist(parts, g.n, k)
    if name == "solver":
        return SolverArsonist(g, k, strict)
    raise ValueError(f"unknown Arsonist strategy {desc!r}")
