"""Bitset graphs, family generators, products and vertex orders.

Vertex sets are Python ints used as bit-vectors: bit ``v`` is set when vertex
``v`` is in the set.  Rows of the adjacency structure are such ints.
"""

from __future__ import annotations

import re
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

# Hard ceiling for graph construction (products grow fast).  The solver keeps
# its own, much smaller, cap because its states are memo keys.
MAX_GRAPH_VERTICES = 1 << 16

# Above this many distinct index offsets the shift-based propagation stops
# paying off and we fall back to per-vertex row unions.
_MAX_OFFSET_GROUPS = 48


class GraphError(ValueError):
    """Malformed graph description or an operation the graph cannot support."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def mask_to_bool(mask: int, n: int) -> np.ndarray:
    """Bit-vector to a boolean numpy array of length n."""
    nbytes = max(1, (n + 7) // 8)
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def bool_to_mask(arr: np.ndarray) -> int:
    packed = np.packbits(np.asarray(arr, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


class Graph:
    """Simple undirected graph on vertices 0..n-1 with bitset rows.

    Instances are treated as immutable once built.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 labels: Sequence[str] | None = None, name: str = ""):
        if n < 0:
            raise GraphError("negative vertex count")
        if n > MAX_GRAPH_VERTICES:
            raise GraphError(f"{n} vertices exceeds the supported width {MAX_GRAPH_VERTICES}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self._init(n, rows, labels, name)

    @classmethod
    def from_rows(cls, rows: Sequence[int], labels: Sequence[str] | None = None,
                  name: str = "") -> "Graph":
        g = cls.__new__(cls)
        n = len(rows)
        if n > MAX_GRAPH_VERTICES:
            raise GraphError(f"{n} vertices exceeds the supported width {MAX_GRAPH_VERTICES}")
        full = (1 << n) - 1
        for v, r in enumerate(rows):
            if r >> v & 1 or r & ~full:
                raise GraphError(f"bad adjacency row for vertex {v}")
        for v, r in enumerate(rows):
            for u in bits(r):
                if not rows[u] >> v & 1:
                    raise GraphError(f"asymmetric edge {v}->{u}")
        g._init(n, list(rows), labels, name)
        return g

    def _init(self, n, rows, labels, name):
        self.n = n
        self.adj = tuple(rows)
        self.full = (1 << n) - 1
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise GraphError("label count does not match vertex count")
        self.labels = labels
        self.name = name
        self._dist = None
        self._build_spread()

    def _build_spread(self):
        groups: dict[int, int] = defaultdict(int)
        for u, row in enumerate(self.adj):
            for v in bits(row):
                groups[v - u] |= 1 << u
        if len(groups) <= _MAX_OFFSET_GROUPS:
            self._offsets = tuple(sorted(groups.items()))
        else:
            self._offsets = None

    # basic queries

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Graph{tag} n={self.n} m={self.num_edges}>"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self):
        return hash(self.adj)

    def __getstate__(self):
        return {"n": self.n, "adj": self.adj, "labels": self.labels, "name": self.name}

    def __setstate__(self, st):
        self._init(st["n"], list(st["adj"]), st["labels"], st["name"])

    @property
    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def index_of(self, label: str) -> int:
        if not self.labels:
            return int(label)
        return self.labels.index(label)

    def closed_neighborhood(self, mask: int) -> int:
        """N[S] for a vertex set S given as a bit-vector."""
        if self._offsets is not None:
            out = mask
            for d, m in self._offsets:
                sel = mask & m
                if sel:
                    out |= sel << d if d > 0 else sel >> -d
            return out
        out = mask
        adj = self.adj
        for v in bits(mask):
            out |= adj[v]
        return out

    def layers(self, source_mask: int) -> list[int]:
        """BFS layers from a vertex set (layer 0 is the set itself)."""
        seen = source_mask
        out = [source_mask]
        while True:
            nxt = self.closed_neighborhood(seen)
            if nxt == seen:
                return out
            out.append(nxt & ~seen)
            seen = nxt

    def eccentricity_of_set(self, mask: int) -> int | None:
        """Rounds of pure propagation needed to burn everything from mask.

        None when some component contains no vertex of mask.
        """
        seen, steps = mask, 0
        while seen != self.full:
            nxt = self.closed_neighborhood(seen)
            if nxt == seen:
                return None
            seen, steps = nxt, steps + 1
        return steps

    def components(self) -> list[int]:
        left, comps = self.full, []
        while left:
            low = left & -left
            comp = low
            while True:
                nxt = self.closed_neighborhood(comp)
                if nxt == comp:
                    break
                comp = nxt
            comps.append(comp)
            left &= ~comp
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.n >= 1 and self.num_edges == self.n - 1 and self.is_connected()

    def distances(self) -> np.ndarray:
        """All-pairs BFS distances; unreachable pairs hold the sentinel n."""
        if self._dist is None:
            from scipy.sparse import csr_matrix
            from scipy.sparse.csgraph import shortest_path

            n = self.n
            if n == 0:
                self._dist = np.zeros((0, 0), dtype=np.int32)
                return self._dist
            es = self.edges()
            if es:
                r = np.array([e[0] for e in es] + [e[1] for e in es])
                c = np.array([e[1] for e in es] + [e[0] for e in es])
            else:
                r = c = np.zeros(0, dtype=int)
            a = csr_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
            d = shortest_path(a, method="D", unweighted=True, directed=False)
            d[np.isinf(d)] = n
            self._dist = d.astype(np.int32)
            self._dist.setflags(write=False)
        return self._dist

    def distance(self, u: int, v: int) -> int:
        if self._dist is not None:
            return int(self._dist[u, v])
        if u == v:
            return 0
        target = 1 << v
        seen, steps = 1 << u, 0
        while not seen & target:
            nxt = self.closed_neighborhood(seen)
            if nxt == seen:
                return self.n
            seen, steps = nxt, steps + 1
        return steps

    def diameter(self) -> int:
        """Largest finite distance (the maximum over components)."""
        if self.n == 0:
            return 0
        d = self.distances()
        finite = d[d < self.n]
        return int(finite.max()) if finite.size else 0

    def set_diameter(self, mask: int) -> int:
        """Max distance in G between two members of the set (sentinel n if split)."""
        vs = list(bits(mask))
        if len(vs) < 2:
            return 0
        d = self.distances()
        return int(d[np.ix_(vs, vs)].max())

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if sorted(perm) != list(range(self.n)):
            return False
        for u, row in enumerate(self.adj):
            if permute_mask(row, perm) != self.adj[perm[u]]:
                return False
        return True

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        es = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        labels = [self.label(v) for v in vertices] if self.labels else None
        return Graph(len(vertices), es, labels)


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


# family generators


def path(n: int) -> Graph:
    _positive(n, "path")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], [f"v{i}" for i in range(n)], f"path:{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    es = [(i, (i + 1) % n) for i in range(n)]
    return Graph(n, es, [f"v{i}" for i in range(n)], f"cycle:{n}")


def complete(n: int) -> Graph:
    _positive(n, "complete")
    es = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, es, [f"v{i}" for i in range(n)], f"complete:{n}")


def subset_label(mask: int) -> str:
    return "{" + ",".join(str(j + 1) for j in bits(mask)) + "}"


def hypercube(n: int) -> Graph:
    """Q_n; vertex i is the subset of [n] whose characteristic vector is i."""
    _positive(n, "hypercube")
    if 1 << n > MAX_GRAPH_VERTICES:
        raise GraphError(f"hypercube:{n} exceeds the supported width")
    size = 1 << n
    rows = [0] * size
    for v in range(size):
        r = 0
        for j in range(n):
            r |= 1 << (v ^ (1 << j))
        rows[v] = r
    g = Graph.from_rows(rows, [subset_label(v) for v in range(size)], f"hypercube:{n}")
    return g


def grid(m: int, n: int) -> Graph:
    """P_m □ P_n; vertex (x, y) has index x*n + y."""
    _positive(m, "grid")
    _positive(n, "grid")
    es = []
    for x in range(m):
        for y in range(n):
            v = x * n + y
            if y + 1 < n:
                es.append((v, v + 1))
            if x + 1 < m:
                es.append((v, v + n))
    labels = [f"({x},{y})" for x in range(m) for y in range(n)]
    return Graph(m * n, es, labels, f"grid:{m}x{n}")


def spider(legs: int, length: int) -> Graph:
    """Head 0 plus `legs` paths of `length` vertices each."""
    if legs < 3:
        raise GraphError("a spider needs at least 3 legs")
    _positive(length, "spider leg length")
    es, labels = [], ["h"]
    for leg in range(legs):
        prev = 0
        for j in range(length):
            v = 1 + leg * length + j
            es.append((prev, v))
            labels.append(f"l{leg}.{j}")
            prev = v
    return Graph(1 + legs * length, es, labels, f"spider:{legs},{length}")


def caterpillar(leaf_counts: Sequence[int]) -> Graph:
    """Spine v_1..v_r first (indices 0..r-1), then the leaves of each spine vertex."""
    r = len(leaf_counts)
    if r == 0 or any(c < 0 for c in leaf_counts):
        raise GraphError("caterpillar needs a nonempty list of leaf counts")
    es = [(i, i + 1) for i in range(r - 1)]
    labels = [f"s{i}" for i in range(r)]
    v = r
    for i, c in enumerate(leaf_counts):
        for j in range(c):
            es.append((i, v))
            labels.append(f"s{i}.{j}")
            v += 1
    return Graph(v, es, labels, "caterpillar:[" + ",".join(map(str, leaf_counts)) + "]")


def cliques(t: int, r: int) -> Graph:
    """K^t_r: t disjoint copies of K_r."""
    _positive(t, "clique count")
    _positive(r, "clique order")
    es = []
    for c in range(t):
        base = c * r
        es += [(base + u, base + v) for u in range(r) for v in range(u + 1, r)]
    labels = [f"c{c}.{i}" for c in range(t) for i in range(r)]
    return Graph(t * r, es, labels, f"cliques:{t}x{r}")


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform labelled tree via a Pruefer sequence."""
    _positive(n, "tree")
    if n == 1:
        return Graph(1, [], name="tree:1")
    if n == 2:
        return Graph(2, [(0, 1)], name="tree:2")
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    es = []
    import heapq

    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        es.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    es.append((u, v))
    return Graph(n, es, name=f"tree:{n}")


def random_connected(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Random tree plus independent extra edges with probability p."""
    t = random_tree(n, rng)
    es = set(t.edges())
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in es and rng.random() < p:
                es.add((u, v))
    return Graph(n, sorted(es), name=f"random:{n}")


def _positive(n, what):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise GraphError(f"{what} needs a positive size, got {n!r}")


# products


def _check_product_width(g: Graph, h: Graph):
    if g.n == 0 or h.n == 0:
        raise GraphError("product of an empty graph")
    if g.n * h.n > MAX_GRAPH_VERTICES:
        raise GraphError(f"product has {g.n * h.n} vertices, over the supported width")


def _pair_labels(g: Graph, h: Graph):
    if g.labels is None and h.labels is None:
        return None
    return [f"({g.label(u)},{h.label(v)})" for u in range(g.n) for v in range(h.n)]


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G □ H with (u, v) at index u*|V(H)| + v."""
    _check_product_width(g, h)
    nh = h.n
    rows = []
    for u in range(g.n):
        for v in range(nh):
            r = h.adj[v] << (u * nh)
            for x in bits(g.adj[u]):
                r |= 1 << (x * nh + v)
            rows.append(r)
    return Graph.from_rows(rows, _pair_labels(g, h), f"cart({g.name},{h.name})")


def strong_product(g: Graph, h: Graph) -> Graph:
    """G ⊠ H: distinct pairs adjacent when both coordinates are within distance 1."""
    _check_product_width(g, h)
    nh = h.n
    rows = []
    for u in range(g.n):
        gu = g.adj[u] | 1 << u
        for v in range(nh):
            hv = h.adj[v] | 1 << v
            r = 0
            for x in bits(gu):
                r |= hv << (x * nh)
            rows.append(r & ~(1 << (u * nh + v)))
    return Graph.from_rows(rows, _pair_labels(g, h), f"strong({g.name},{h.name})")


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.n
    rows = list(g.adj) + [r << shift for r in h.adj]
    labels = None
    if g.labels is not None or h.labels is not None:
        labels = [f"a:{g.label(v)}" for v in range(g.n)] + [f"b:{h.label(v)}" for v in range(h.n)]
    return Graph.from_rows(rows, labels, f"union({g.name},{h.name})")


# vertex orders


class VertexOrder:
    """A strict total order on 0..n-1, stored as the ascending vertex sequence."""

    def __init__(self, order: Sequence[int]):
        arr = np.asarray(order, dtype=np.int64)
        n = len(arr)
        if sorted(arr.tolist()) != list(range(n)):
            raise GraphError("vertex order must be a permutation of 0..n-1")
        self.order = arr
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[arr] = np.arange(n)
        self.n = n

    def __len__(self):
        return self.n

    def smallest(self, mask: int, count: int) -> list[int]:
        """The `count` smallest members of a vertex set."""
        if count <= 0 or not mask:
            return []
        inside = mask_to_bool(mask, self.n)[self.order]
        return self.order[inside][:count].tolist()

    def largest(self, mask: int) -> int | None:
        if not mask:
            return None
        return max(bits(mask), key=lambda v: self.rank[v])

    def least(self, mask: int) -> int | None:
        if not mask:
            return None
        return min(bits(mask), key=lambda v: self.rank[v])


def index_order(n: int) -> VertexOrder:
    return VertexOrder(range(n))


def graded_lex_order(m: int, n: int) -> VertexOrder:
    """Grid vertices by increasing x+y, ties by increasing x."""
    cells = sorted(((x + y, x, x * n + y) for x in range(m) for y in range(n)))
    return VertexOrder([c[2] for c in cells])


# edge-list files and the family DSL


def write_edge_list(g: Graph) -> str:
    es = g.edges()
    lines = [f"{g.n} {len(es)}"] + [f"{u} {v}" for u, v in es]
    return "\n".join(lines) + "\n"


def read_edge_list(text: str, name: str = "") -> Graph:
    rows = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in rows if ln and not ln.startswith("#")]
    if not rows:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in rows[0].split())
        es = [tuple(int(x) for x in ln.split()) for ln in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if any(len(e) != 2 for e in es):
        raise GraphError("each edge line needs exactly two endpoints")
    if len(es) != m:
        raise GraphError(f"header declares {m} edges, found {len(es)}")
    return Graph(n, es, name=name)


_SIMPLE = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "hypercube": hypercube,
}


def _split_args(body: str) -> list[str]:
    depth, start, out = 0, 0, []
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(body[start:i])
            start = i + 1
    out.append(body[start:])
    return [s.strip() for s in out]


def build_family(spec: str) -> Graph:
    """Build a graph from a family descriptor such as ``grid:5x5`` or ``cart(path:2,complete:3)``."""
    s = spec.strip()
    m = re.fullmatch(r"(cart|strong|union)\((.*)\)", s)
    if m:
        parts = _split_args(m.group(2))
        if len(parts) != 2:
            raise GraphError(f"{m.group(1)} takes two graphs: {spec!r}")
        a, b = (build_family(p) for p in parts)
        op = {"cart": cartesian_product, "strong": strong_product, "union": disjoint_union}[m.group(1)]
        g = op(a, b)
        g.name = s
        return g
    if ":" not in s:
        raise GraphError(f"malformed graph spec {spec!r}")
    kind, arg = s.split(":", 1)
    try:
        if kind in _SIMPLE:
            g = _SIMPLE[kind](_int(arg))
        elif kind == "grid":
            a, b = arg.lower().split("x")
            g = grid(_int(a), _int(b))
        elif kind == "cliques":
            a, b = arg.lower().split("x")
            g = cliques(_int(a), _int(b))
        elif kind == "spider":
            a, b = arg.split(",")
            g = spider(_int(a), _int(b))
        elif kind == "caterpillar":
            inner = arg.strip()
            if not (inner.startswith("[") and inner.endswith("]")):
                raise GraphError("caterpillar expects [d1,...,dr]")
            g = caterpillar([_int(x) for x in inner[1:-1].split(",") if x.strip()])
        elif kind == "file":
            g = read_edge_list(Path(arg).read_text(), name=s)
        else:
            raise GraphError(f"unknown graph family {kind!r}")
    except GraphError:
        raise
    except (ValueError, OSError) as exc:
        raise GraphError(f"malformed graph spec {spec!r}: {exc}") from None
    g.name = s
    return g


def _int(text: str) -> int:
    text = text.strip()
    if not re.fullmatch(r"\d+", text):
        raise GraphError(f"expected a non-negative integer, got {text!r}")
    return int(text)
