"""Rainbow Sperner families, (k,d)-special witnesses and partition covers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .graph import Graph, bits, mask_of, popcount


class ConstructionError(ValueError):
    pass


@dataclass
class SpernerFamily:
    ground: tuple
    sets: list[frozenset]
    multiplicity: int = 1

    def sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    def as_masks(self) -> list[int]:
        """Sets over [n] (elements 1..n) as hypercube vertex indices."""
        return [sum(1 << (e - 1) for e in s) for s in self.sets]


@dataclass
class SpernerReport:
    ok: bool
    failures: list[str] = field(default_factory=list)


def rainbow_sperner(n: int) -> SpernerFamily:
    """Antichain on [n] with one set of each size 2..n-1."""
    if n < 3:
        raise ConstructionError("rainbow Sperner family needs n >= 3")
    return SpernerFamily(tuple(range(1, n + 1)), _rs(n), 1)


def _rs(n: int) -> list[frozenset]:
    if n == 3:
        return [frozenset({1, 2})]
    if n == 4:
        return [frozenset({1, 2}), frozenset({1, 3, 4})]
    inner = _rs(n - 2)
    out = [frozenset({n - 1, n})]
    # inner[i - 2] has size i; the recursion runs over 2 <= i <= n-3
    for a in inner:
        out.append(a | {n})
    out.append(frozenset(range(1, n)))
    return out


def _rs_forced(m: int) -> list[frozenset]:
    """Family on [m] in which m lies in every set except the largest."""
    if m == 3:
        return [frozenset({2, 3})]
    if m == 4:
        return [frozenset({3, 4}), frozenset({1, 2, 3})]
    return _rs(m)


def rainbow_sperner_forced(ground: Sequence[Hashable], forced: Hashable) -> SpernerFamily:
    """Rainbow Sperner family on `ground` whose sets all contain `forced`, except the largest."""
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        raise ConstructionError("ground set has repeated elements")
    if forced not in ground:
        raise ConstructionError(f"forced element {forced!r} not in the ground set")
    m = len(ground)
    if m < 3:
        raise ConstructionError("ground set needs at least 3 elements")
    others = sorted((e for e in ground if e != forced), key=_sort_key)
    names = {i + 1: e for i, e in enumerate(others)}
    names[m] = forced
    sets = [frozenset(names[x] for x in s) for s in _rs_forced(m)]
    for s in sets[:-1]:
        if forced not in s:
            raise ConstructionError("forced element missing from a non-maximal set")
    fam = SpernerFamily(ground, sets, 1)
    rep = verify_sperner(fam, symdiff=False)
    if not rep.ok:
        raise ConstructionError("; ".join(rep.failures))
    return fam


def _sort_key(e):
    return (0, e, "") if isinstance(e, (int, np.integer)) else (1, 0, str(e))


def verify_sperner(fam: SpernerFamily, symdiff: bool = True) -> SpernerReport:
    """Multiplicity per size, antichain, and (multiplicity 1) |S_i Δ S_j| >= |i-j| + 2."""
    fails = []
    ground = set(fam.ground)
    for s in fam.sets:
        if not s <= ground:
            fails.append(f"{sorted(s, key=_sort_key)} leaves the ground set")
    counts: dict[int, int] = {}
    for s in fam.sets:
        counts[len(s)] = counts.get(len(s), 0) + 1
    if fam.sets:
        top = max(counts)
        for size in range(2, top + 1):
            if counts.get(size, 0) != fam.multiplicity:
                fails.append(f"{counts.get(size, 0)} sets of size {size}, expected {fam.multiplicity}")
        if min(counts) < 2:
            fails.append("sets smaller than 2")
    for i, a in enumerate(fam.sets):
        for b in fam.sets[i + 1:]:
            if a <= b or b <= a:
                fails.append(f"{_fmt(a)} and {_fmt(b)} are nested")
    if symdiff and fam.multiplicity == 1:
        by_size = {len(s): s for s in fam.sets}
        for i in by_size:
            for j in by_size:
                if i < j and len(by_size[i] ^ by_size[j]) < j - i + 2:
                    fails.append(f"|S_{i} Δ S_{j}| = {len(by_size[i] ^ by_size[j])} < {j - i + 2}")
    return SpernerReport(not fails, fails)


def _fmt(s):
    return "{" + ",".join(str(x) for x in sorted(s, key=_sort_key)) + "}"


# (k,d)-special witnesses


@dataclass
class SpecialWitness:
    parts: list[list[int]]
    k: int
    d: int

    def validate(self, g: Graph, exact_sizes: bool = True) -> list[str]:
        """Problems found by recomputing distances; empty when the witness holds.

        With exact_sizes the part count must be ceil(n/k) with every part of
        size k except at most one; otherwise parts only need size <= k.
        """
        fails = []
        seen = 0
        for p in self.parts:
            m = mask_of(p)
            if seen & m or len(set(p)) != len(p):
                fails.append(f"part {p} overlaps another")
            seen |= m
        if seen != g.full:
            fails.append(f"vertices {sorted(bits(g.full & ~seen))} uncovered")
        sizes = [len(p) for p in self.parts]
        if any(s > self.k or s == 0 for s in sizes):
            fails.append(f"part sizes {sizes} outside 1..{self.k}")
        if exact_sizes:
            if len(self.parts) != -(-g.n // self.k):
                fails.append(f"{len(self.parts)} parts, expected {-(-g.n // self.k)}")
            if sum(1 for s in sizes if s != self.k) > 1:
                fails.append(f"more than one part of size other than {self.k}")
        dist = g.distances()
        for p in self.parts:
            if len(p) > 1:
                diam = int(dist[np.ix_(p, p)].max())
                if diam > self.d:
                    fails.append(f"part {p} has diameter {diam} > {self.d}")
        return fails

    @property
    def bound(self) -> int:
        return len(self.parts) + self.d


def path_partition(n: int, k: int) -> SpecialWitness:
    if n < 1 or k < 1:
        raise ConstructionError("n and k must be positive")
    parts = [list(range(i, min(i + k, n))) for i in range(0, n, k)]
    return SpecialWitness(parts, k, k - 1)


def tree_pairing(g: Graph) -> SpecialWitness:
    """Pairs at distance <= 2 (plus one singleton when n is odd) covering a tree."""
    if not g.is_tree():
        raise ConstructionError("tree_pairing needs a tree")
    alive = set(range(g.n))
    nbrs = [set(g.neighbors(v)) for v in range(g.n)]
    parts: list[list[int]] = []

    def deg(v):
        return len(nbrs[v] & alive)

    while alive:
        if len(alive) == 1:
            parts.append([alive.pop()])
            break
        if len(alive) == 2:
            parts.append(sorted(alive))
            break
        for u in sorted(alive):
            if deg(u) <= 1:
                continue
            around = nbrs[u] & alive
            leaves = sorted(w for w in around if deg(w) == 1)
            inner = [w for w in around if deg(w) > 1]
            if leaves and len(inner) <= 1:
                break
        else:
            raise AssertionError("no vertex with a leaf and at most one non-leaf neighbour")
        while len(leaves) >= 2:
            a, b = leaves.pop(0), leaves.pop(0)
            parts.append([a, b])
            alive -= {a, b}
        if leaves:
            parts.append([leaves[0], u])
            alive -= {leaves[0], u}
        elif not inner:
            # u was the centre of the remaining star
            parts.append([u])
            alive.discard(u)
    return SpecialWitness(parts, 2, 2)


def caterpillar_order(g: Graph) -> list[int]:
    """Leaves of each spine vertex followed by the spine vertex, along the spine."""
    if not g.is_tree():
        raise ConstructionError("not a caterpillar: not a tree")
    if g.n <= 2:
        return list(range(g.n))
    leaves = {v for v in range(g.n) if g.degree(v) == 1}
    spine = [v for v in range(g.n) if v not in leaves]
    sp = set(spine)
    sdeg = {v: sum(1 for w in g.neighbors(v) if w in sp) for v in spine}
    ends = [v for v in spine if sdeg[v] <= 1]
    if any(d > 2 for d in sdeg.values()) or (len(spine) > 1 and len(ends) != 2):
        raise ConstructionError("not a caterpillar: spine is not a path")
    start = min(ends)
    walk, prev = [start], None
    while len(walk) < len(spine):
        cur = walk[-1]
        nxt = [w for w in g.neighbors(cur) if w in sp and w != prev]
        prev = cur
        walk.append(nxt[0])
    order = []
    for v in walk:
        order += sorted(w for w in g.neighbors(v) if w in leaves)
        order.append(v)
    return order


def caterpillar_partition(g: Graph, k: int) -> SpecialWitness:
    order = caterpillar_order(g)
    parts = [order[i:i + k] for i in range(0, len(order), k)]
    w = SpecialWitness(parts, k, k)
    bad = w.validate(g)
    if bad:
        raise AssertionError("caterpillar blocks failed validation: " + "; ".join(bad))
    return w


def grid_block_partition(n: int, k: int) -> SpecialWitness:
    """K x K blocks of G_n with K = floor(sqrt(k)).

    d is the largest block diameter, 2K - 2 unless the grid is smaller than a block.
    """
    if n < 1 or k < 1:
        raise ConstructionError("n and k must be positive")
    K = math.isqrt(k)
    parts = []
    for bi in range(0, n, K):
        for bj in range(0, n, K):
            parts.append([x * n + y for x in range(bi, min(bi + K, n))
                          for y in range(bj, min(bj + K, n))])
    return SpecialWitness(parts, k, 2 * (min(K, n) - 1))


def validate_grid_partition(n: int, w: SpecialWitness) -> list[str]:
    """Like SpecialWitness.validate on G_n, using Manhattan distance instead of a matrix."""
    fails = []
    seen = np.zeros(n * n, dtype=np.int32)
    for p in w.parts:
        idx = np.asarray(p, dtype=np.int64)
        if idx.size == 0 or idx.size > w.k:
            fails.append(f"part of size {idx.size} outside 1..{w.k}")
            continue
        seen[idx] += 1
        x, y = idx // n, idx % n
        diam = int((x.max() - x.min()) + (y.max() - y.min()))
        # blocks are rectangles, so the bounding box gives the diameter
        if len(p) != (x.max() - x.min() + 1) * (y.max() - y.min() + 1):
            diam = int((np.abs(x[:, None] - x[None, :]) + np.abs(y[:, None] - y[None, :])).max())
        if diam > w.d:
            fails.append(f"part starting at {p[0]} has diameter {diam} > {w.d}")
    if (seen != 1).any():
        fails.append(f"{int((seen == 0).sum())} vertices uncovered, {int((seen > 1).sum())} covered twice")
    return fails


@dataclass
class SpecialSearch:
    witness: SpecialWitness | None
    refuted: bool
    nodes: int
    complete: bool


def is_kd_special(g: Graph, k: int, d: int, budget: int | None = 1_000_000) -> SpecialSearch:
    """Backtracking search for a (k,d)-special partition."""
    n = g.n
    if n == 0:
        return SpecialSearch(SpecialWitness([], k, d), False, 0, True)
    dist = g.distances()
    near = [mask_of(np.nonzero(dist[v] <= d)[0].tolist()) for v in range(n)]
    short = n - k * (-(-n // k) - 1)  # size of the one exceptional part
    if short == k:
        short = None
    parts: list[list[int]] = []
    nodes = [0]

    class _Stop(Exception):
        pass

    def grow(cur, allowed, size, start_from):
        # extend cur (a list) to `size` vertices drawn from `allowed`
        if len(cur) == size:
            yield list(cur)
            return
        for w in bits(allowed >> start_from << start_from):
            cur.append(w)
            yield from grow(cur, allowed & near[w] & ~((1 << (w + 1)) - 1), size, w + 1)
            cur.pop()

    def rec(left, used_short):
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _Stop
        if not left:
            return True
        v = (left & -left).bit_length() - 1
        sizes = [k]
        if short is not None and not used_short:
            sizes.append(short)
        for size in sizes:
            if size > popcount(left):
                continue
            allowed = left & near[v] & ~(1 << v)
            for part in grow([v], allowed, size, 0):
                parts.append(part)
                if rec(left & ~mask_of(part), used_short or size != k):
                    return True
                parts.pop()
        return False

    try:
        found = rec(g.full, False)
    except _Stop:
        return SpecialSearch(None, False, nodes[0], False)
    if found:
        return SpecialSearch(SpecialWitness([sorted(p) for p in parts], k, d), False, nodes[0], True)
    return SpecialSearch(None, True, nodes[0], True)


def greedy_partition_cover(g: Graph, k: int, d: int) -> SpecialWitness:
    """Greedy partition into parts of size <= k and diameter <= d.

    Each step grows a compact part around every uncovered vertex and keeps the
    largest one; the bound on b_k is the number of parts plus d.
    """
    n = g.n
    if n == 0:
        return SpecialWitness([], k, d)
    dist = g.distances().astype(np.int64)
    uncovered = np.ones(n, dtype=bool)
    parts = []
    while uncovered.any():
        best = None
        for v in np.nonzero(uncovered)[0]:
            part = _grow_compact(dist, uncovered, int(v), k, d)
            if best is None or len(part) > len(best):
                best = part
                if len(best) == k:
                    break
        parts.append(sorted(best))
        uncovered[best] = False
    return SpecialWitness(parts, k, d)


def _grow_compact(dist, uncovered, v, k, d):
    part = [v]
    cand = np.nonzero(uncovered & (dist[v] <= d))[0]
    cand = cand[cand != v]
    far = dist[v].copy()      # max distance from each vertex to the part
    tot = dist[v].copy()      # sum of distances to the part
    diam = 0
    while len(part) < k and cand.size:
        cand = cand[far[cand] <= d]
        if not cand.size:
            break
        # smallest resulting diameter, then most central, then lowest index
        grown = np.maximum(far[cand], diam)
        w = int(cand[np.lexsort((cand, tot[cand], grown))[0]])
        part.append(w)
        diam = max(diam, int(far[w]))
        far = np.maximum(far, dist[w])
        tot = tot + dist[w]
        cand = cand[cand != w]
    return part
