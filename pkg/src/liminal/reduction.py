"""3-QBF formulas and the gadget graphs used to reduce them to liminal burning.

Literals are signed variable numbers as in DIMACS.  Variable positions follow
the quantifier prefix, so position i (1-based) is x_i in the gadgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, cliques, disjoint_union, popcount

MAX_QBF_VARS = 20


class QbfError(ValueError):
    pass


class ReductionError(AssertionError):
    pass


@dataclass
class QbfFormula:
    quantifiers: list[tuple[int, str]]  # (variable, "e" or "a") in prefix order
    clauses: list[tuple[int, int, int]]
    padded: list[int] = field(default_factory=list)  # indices of inserted clauses

    def __post_init__(self):
        seen = set()
        for v, q in self.quantifiers:
            if q not in ("e", "a"):
                raise QbfError(f"unknown quantifier {q!r}")
            if v <= 0 or v in seen:
                raise QbfError(f"variable {v} quantified twice or invalid")
            seen.add(v)
        if not self.clauses:
            raise QbfError("formula has no clauses")
        for c in self.clauses:
            if len(c) != 3:
                raise QbfError(f"clause {list(c)} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) not in seen:
                    raise QbfError(f"literal {lit} uses an unquantified variable")

    @property
    def n(self) -> int:
        return len(self.quantifiers)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def position(self, var: int) -> int:
        """1-based position of a variable in the prefix."""
        return self._pos()[var]

    def _pos(self):
        return {v: i + 1 for i, (v, _) in enumerate(self.quantifiers)}

    def literal_name(self, lit: int) -> str:
        i = self.position(abs(lit))
        return f"x{i}" if lit > 0 else f"~x{i}"

    def to_qdimacs(self) -> str:
        vs = max(v for v, _ in self.quantifiers)
        lines = [f"p cnf {vs} {self.m}"]
        for v, q in self.quantifiers:
            lines.append(f"{q} {v} 0")
        for c in self.clauses:
            lines.append(" ".join(map(str, c)) + " 0")
        return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QbfFormula:
    """Read the QDIMACS subset: optional p line, c comments, e/a lines, 3-literal clauses."""
    quants, clauses = [], []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise QbfError(f"line {lineno}: bad problem line")
            header = (_num(toks[2], lineno), _num(toks[3], lineno))
            continue
        if toks[-1] != "0":
            raise QbfError(f"line {lineno}: missing terminating 0")
        if toks[0] in ("e", "a"):
            if clauses:
                raise QbfError(f"line {lineno}: quantifier after clauses")
            quants += [(_num(t, lineno), toks[0]) for t in toks[1:-1]]
            continue
        lits = tuple(_num(t, lineno) for t in toks[:-1])
        if len(lits) != 3:
            raise QbfError(f"line {lineno}: clause has {len(lits)} literals, need 3")
        clauses.append(lits)
    if header is not None:
        if header[1] != len(clauses):
            raise QbfError(f"problem line declares {header[1]} clauses, found {len(clauses)}")
        if any(v > header[0] for v, _ in quants):
            raise QbfError("variable exceeds the declared count")
    return QbfFormula(quants, clauses)


def _num(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise QbfError(f"line {lineno}: expected an integer, got {tok!r}") from None


def pad_formula(f: QbfFormula) -> QbfFormula:
    """Add (x or not x or x) for every variable with a literal missing from the clauses."""
    present = {lit for c in f.clauses for lit in c}
    clauses = list(f.clauses)
    padded = list(f.padded)
    for v, _ in f.quantifiers:
        if v not in present or -v not in present:
            padded.append(len(clauses))
            clauses.append((v, -v, v))
    return QbfFormula(list(f.quantifiers), clauses, padded)


def random_qbf(n: int, m: int, rng: np.random.Generator, pad: bool = True) -> QbfFormula:
    quants = [(v, "ea"[int(rng.integers(2))]) for v in range(1, n + 1)]
    clauses = []
    for _ in range(m):
        vs = rng.integers(1, n + 1, size=3)
        signs = rng.choice([-1, 1], size=3)
        clauses.append(tuple(int(s * v) for s, v in zip(signs, vs)))
    f = QbfFormula(quants, clauses)
    return pad_formula(f) if pad else f


# evaluation


def _clause_true(c, assign: dict[int, bool]) -> bool:
    return any(assign[abs(l)] == (l > 0) for l in c)


def _eval_from(f: QbfFormula, i: int, assign: dict[int, bool]) -> bool:
    if i == f.n:
        return all(_clause_true(c, assign) for c in f.clauses)
    v, q = f.quantifiers[i]
    for val in (False, True):
        assign[v] = val
        r = _eval_from(f, i + 1, assign)
        del assign[v]
        if q == "e" and r:
            return True
        if q == "a" and not r:
            return False
    return q == "a"


def eval_qbf(f: QbfFormula) -> bool:
    """Truth value by expanding the quantifier tree."""
    if f.n > MAX_QBF_VARS:
        raise QbfError(f"{f.n} variables exceeds the cap of {MAX_QBF_VARS}")
    return _eval_from(f, 0, {})


def exists_choice(f: QbfFormula, prefix: list[bool]) -> bool:
    """A value for the next (existential) variable keeping the rest true, if any."""
    v = f.quantifiers[len(prefix)][0]
    assign = {f.quantifiers[i][0]: b for i, b in enumerate(prefix)}
    assign[v] = True
    return _eval_from(f, len(prefix) + 1, assign)


def truth_table_qbf(f: QbfFormula) -> bool:
    """Independent check: fold the full truth table over the quantifiers."""
    n = f.n
    if n > MAX_QBF_VARS:
        raise QbfError("too many variables")
    pos = f._pos()
    idx = np.arange(1 << n)
    # bit (n-1-p) of idx holds variable at position p+1, so axis p is that variable
    vals = [(idx >> (n - p)) & 1 == 1 for p in range(1, n + 1)]
    sat = np.ones(1 << n, dtype=bool)
    for c in f.clauses:
        cs = np.zeros(1 << n, dtype=bool)
        for lit in c:
            x = vals[pos[abs(lit)] - 1]
            cs |= x if lit > 0 else ~x
        sat &= cs
    table = sat.reshape((2,) * n) if n else sat.reshape(())
    for p in range(n - 1, -1, -1):
        q = f.quantifiers[p][1]
        table = table.any(axis=p) if q == "e" else table.all(axis=p)
    return bool(table)


# gadget graphs


class _Builder:
    def __init__(self):
        self.labels: list[str] = []
        self.roles: list[str] = []
        self.edges: set[tuple[int, int]] = set()
        self.gadgets: dict[str, list[int]] = {}

    def add(self, name: str, size: int, role: str) -> list[int]:
        start = len(self.labels)
        vs = list(range(start, start + size))
        for t in range(size):
            self.labels.append(name if size == 1 else f"{name}#{t}")
            self.roles.append(role)
        self.gadgets[name] = vs
        self.clique(vs)
        return vs

    def clique(self, vs):
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                self.edges.add((vs[a], vs[b]))

    def join(self, xs, ys):
        for u in xs:
            for v in ys:
                if u != v:
                    self.edges.add((min(u, v), max(u, v)))

    def chain(self, start: list[int], name: str, length: int, end: list[int], role: str) -> list[int]:
        """Path of `length` single vertices from every vertex of start to every vertex of end."""
        prev = start
        inner = []
        for t in range(length):
            v = self.add(f"{name}.{t + 1}", 1, role)
            self.join(prev, v)
            inner += v
            prev = v
        self.join(prev, end)
        self.gadgets[name] = inner
        return inner

    def graph(self, name: str) -> Graph:
        return Graph(len(self.labels), sorted(self.edges), list(self.labels), name)


def _occurrences(f: QbfFormula):
    """(j, pos, literal, variable position) for every clause slot, 1-based j and pos."""
    for j, c in enumerate(f.clauses, 1):
        for p, lit in enumerate(c, 1):
            yield j, p, lit, f.position(abs(lit))


def _literal_names(i: int):
    return f"x{i}", f"~x{i}"


def _base(b: _Builder, f: QbfFormula, k: int | None, with_a0: bool):
    n = f.n
    a = [None] * (n + 1)
    for i in range(0 if with_a0 else 1, n + 1):
        a[i] = b.add(f"a{i}", 1, "spine")
    for i in range(1, n):
        b.join(a[i], a[i + 1])
    if with_a0:
        b.join(a[0], a[1])
    lits = {}
    for i, (_, q) in enumerate(f.quantifiers, 1):
        if k is None:
            sizes = (1, 1)
        elif q == "e":
            sizes = (k, k)
        else:
            sizes = (math.ceil(k / 2), k // 2)
        pos, neg = _literal_names(i)
        lits[pos] = b.add(pos, sizes[0], "literal")
        lits[neg] = b.add(neg, sizes[1], "literal")
        b.join(lits[pos], lits[neg])
        for name in (pos, neg):
            b.join(lits[name], a[i])
            if i < n:
                b.join(lits[name], a[i + 1])
    for j in range(1, f.m + 1):
        slots = [b.add(f"C{j}.{p}", 1 if k is None else k, "clause") for p in (1, 2, 3)]
        b.join(slots[0], slots[1])
        b.join(slots[0], slots[2])
        b.join(slots[1], slots[2])
    for j, p, lit, i in _occurrences(f):
        b.chain(lits[f.literal_name(lit)], f"P{j}.{p}", n + j - i - 1,
                b.gadgets[f"C{j}.{p}"], "clause-path")
    return a, lits


def build_gphi(f: QbfFormula) -> Graph:
    """The cooling gadget graph of a 3-CNF with its quantifiers ignored."""
    b = _Builder()
    _base(b, f, None, with_a0=True)
    return b.graph("gphi")


def build_ht(t: int, k: int = 1) -> Graph:
    """H_t, strong-multiplied by K_k when k > 1.

    Column i holds u^i_1..u^i_i as a clique; every vertex of column i is
    adjacent to u^{i+1}_b for b <= i.
    """
    b = _Builder()
    _add_ht(b, t, k)
    return b.graph(f"H{t}" if k == 1 else f"H{t}xK{k}")


def _add_ht(b: _Builder, t: int, k: int) -> dict[tuple[int, int], list[int]]:
    if t < 1:
        raise ValueError("t must be at least 1")
    u = {}
    for i in range(1, t + 1):
        for a in range(1, i + 1):
            u[i, a] = b.add(f"u{i}_{a}", k, "H")
    for i in range(1, t + 1):
        col = [v for a in range(1, i + 1) for v in u[i, a]]
        b.clique(col)
        if i < t:
            nxt = [v for bb in range(1, i + 1) for v in u[i + 1, bb]]
            b.join(col, nxt)
    return u


@dataclass
class ReductionGraph:
    graph: Graph
    formula: QbfFormula
    k: int
    T: int
    roles: list[str]
    gadgets: dict[str, list[int]]
    connector_rule: str = "fixed"

    @property
    def n_vars(self) -> int:
        return self.formula.n

    @property
    def m_clauses(self) -> int:
        return self.formula.m

    @property
    def threshold(self) -> int:
        return self.T + 2 * self.n_vars + self.m_clauses + 1

    @property
    def target_diameter(self) -> int:
        return self.T + 2 * self.n_vars + self.m_clauses

    def meta(self) -> dict:
        return {"k": self.k, "T": self.T, "n_vars": self.n_vars, "m_clauses": self.m_clauses,
                "threshold": self.threshold, "connector_rule": self.connector_rule,
                "padded_clauses": self.formula.padded,
                "clauses": [list(c) for c in self.formula.clauses],
                "quantifiers": [[v, q] for v, q in self.formula.quantifiers],
                "roles": self.roles, "gadgets": self.gadgets}


def connector_length(rule: str, m: int, i: int, j: int) -> int:
    if rule == "fixed":
        return m + i - j
    if rule == "long":
        return m + 2 * i - j - 1
    raise ValueError(f"unknown connector rule {rule!r}")


def build_reduction(f: QbfFormula, k: int, *, connector_rule: str = "fixed",
                    connector_offsets: dict[str, int] | None = None,
                    check: bool = True) -> ReductionGraph:
    """G' for a 3-QBF instance: b_k(G') >= T+2n+m+1 iff the formula is true.

    ``connector_offsets`` lengthens named connectors (fault injection).  The
    diameter identity is asserted when ``check`` is set.
    """
    if k < 2:
        raise ValueError("the reduction needs k >= 2")
    f = pad_formula(f)
    T = build_gphi(f).diameter()
    offsets = connector_offsets or {}
    b = _Builder()
    u = _add_ht(b, T, k)
    a, lits = _base(b, f, k, with_a0=False)
    b.join(a[1], [v for bb in range(1, T + 1) for v in u[T, bb]])
    for i in range(1, f.n + 1):
        pos, neg = _literal_names(i)
        dp = b.add(f"D:{pos}", k, "double-assignment")
        dn = b.add(f"D:{neg}", k, "double-assignment")
        b.join(dp, dn)
    m = f.m
    for j, p, lit, i in _occurrences(f):
        path = b.gadgets[f"P{j}.{p}"]
        start = [path[-1]] if path else lits[f.literal_name(lit)]
        name = f"Q{j}.{p}"
        length = connector_length(connector_rule, m, i, j) + offsets.get(name, 0)
        b.chain(start, name, length, b.gadgets[f"D:{f.literal_name(lit)}"], "connector")
    g = b.graph("reduction")
    rg = ReductionGraph(g, f, k, T, list(b.roles), dict(b.gadgets), connector_rule)
    if check:
        d = g.diameter()
        if d != rg.target_diameter:
            raise ReductionError(f"diameter {d} differs from T+2n+m = {rg.target_diameter}")
    return rg


def expected_order(f: QbfFormula, k: int, T: int) -> int:
    """|V(G')| recomputed term by term from the padded formula."""
    n, m = f.n, f.m
    h = k * T * (T + 1) // 2
    spine = n
    literal = sum(2 * k if q == "e" else k for _, q in f.quantifiers)
    clause = 3 * m * k
    paths = sum(n + j - i - 1 for j, _, _, i in _occurrences(f))
    conns = sum(m + i - j for j, _, _, i in _occurrences(f))
    double = 2 * n * k
    return h + spine + literal + clause + paths + conns + double


@dataclass
class ReductionReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    certificate: int | None = None
    certificate_note: str = ""

    @property
    def ok(self) -> bool:
        return all(c[1] for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def failures(self) -> list[tuple[str, bool, str]]:
        return [c for c in self.checks if not c[1]]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [{"check": c, "ok": o, "detail": d} for c, o, d in self.checks],
                "certificate": self.certificate, "certificate_note": self.certificate_note}


def _is_chain(g: Graph, start, inner, end) -> bool:
    prev = start
    for v in inner:
        if any(not g.adj[p] >> v & 1 for p in prev):
            return False
        prev = [v]
    return all(g.adj[p] >> e & 1 for p in prev for e in end)


def verify_reduction(rg: ReductionGraph, *, certify: bool = False,
                     budget_nodes: int | None = 2_000_000) -> ReductionReport:
    g, f, k, T = rg.graph, rg.formula, rg.k, rg.T
    rep = ReductionReport()
    d = g.diameter()
    rep.add("diameter", d == rg.target_diameter, f"diam={d}, T+2n+m={rg.target_diameter}")
    want = expected_order(f, k, T) if rg.connector_rule == "fixed" else None
    if want is not None:
        rep.add("order", g.n == want, f"|V|={g.n}, expected {want}")
    gd = rg.gadgets
    for (i, a), vs in ((tuple(map(int, name[1:].split("_"))), vs)
                       for name, vs in gd.items() if name.startswith("u")):
        rep.add(f"u{i}_{a}", len(vs) == k, f"order {len(vs)}")
    for i, (_, q) in enumerate(f.quantifiers, 1):
        pos, neg = _literal_names(i)
        want_sizes = (k, k) if q == "e" else (math.ceil(k / 2), k // 2)
        got = (len(gd[pos]), len(gd[neg]))
        rep.add(f"{pos}/{neg} orders", got == want_sizes, f"{got} vs {want_sizes}")
        dp, dn = gd[f"D:{pos}"], gd[f"D:{neg}"]
        joined = all(g.adj[x] >> y & 1 for x in dp for y in dn)
        rep.add(f"D:{pos} joined", len(dp) == k and len(dn) == k and joined,
                f"orders {len(dp)}, {len(dn)}")
    for j in range(1, f.m + 1):
        for p in (1, 2, 3):
            rep.add(f"C{j}.{p}", len(gd[f"C{j}.{p}"]) == k)
    a1 = gd["a1"][0]
    top = [v for name, vs in gd.items() if name.startswith(f"u{T}_") for v in vs]
    rep.add("a1 to column T", all(g.adj[a1] >> v & 1 for v in top), f"{len(top)} vertices")
    for j, p, lit, i in _occurrences(f):
        path = gd[f"P{j}.{p}"]
        lname = f.literal_name(lit)
        rep.add(f"P{j}.{p}", len(path) == f.n + j - i - 1
                and _is_chain(g, gd[lname], path, gd[f"C{j}.{p}"]),
                f"{len(path)} internal, expected {f.n + j - i - 1}")
        conn = gd[f"Q{j}.{p}"]
        want_c = connector_length(rg.connector_rule, f.m, i, j)
        start = [path[-1]] if path else gd[lname]
        rep.add(f"Q{j}.{p}", len(conn) == want_c and _is_chain(g, start, conn, gd[f"D:{lname}"]),
                f"{len(conn)} internal, expected {want_c}")
    if certify:
        _certify(rg, rep, budget_nodes)
    return rep


def _certify(rg: ReductionGraph, rep: ReductionReport, budget_nodes):
    from .solver import value_fixed_saboteur

    if not eval_qbf(rg.formula):
        rep.certificate_note = "formula is false; no Saboteur certificate exists"
        return
    res = value_fixed_saboteur(rg.graph, rg.k, ReductionSaboteur(rg), budget_nodes=budget_nodes)
    if not res.complete:
        rep.certificate_note = f"budget exceeded after {res.nodes_expanded} nodes"
        return
    rep.certificate = res.value
    rep.certificate_note = f"{res.nodes_expanded} nodes, threshold {rg.threshold}"
    rep.add("certificate", res.value >= rg.threshold, f"value {res.value} vs {rg.threshold}")


class ReductionSaboteur:
    """Saboteur schedule that turns a true 3-QBF into a long game on G'.

    Rounds 1..T reveal the u^i_i cliques; the next n rounds play the
    quantifiers (existential values from a brute-force policy, universal
    ones left to the Arsonist); then one true literal per clause; then the
    unburned double-assignment clique of each variable.
    """

    history = True

    def __init__(self, rg: ReductionGraph):
        self.rg = rg
        self.owner = {}
        for i in range(1, rg.n_vars + 1):
            pos, neg = _literal_names(i)
            for v in rg.gadgets[pos]:
                self.owner[v] = (i, False)  # burning x_i sets it false
            for v in rg.gadgets[neg]:
                self.owner[v] = (i, True)

    def _assignment(self, state) -> list[bool]:
        T = self.rg.T
        vals = []
        for r, v in enumerate(state.sources, 1):
            if T < r <= T + self.rg.n_vars and v in self.owner:
                vals.append(self.owner[v][1])
        return vals

    def __call__(self, g, state, k):
        from .strategies import _pad

        rg, f = self.rg, self.rg.formula
        T, n, m = rg.T, f.n, f.m
        r = state.round
        need = min(k, popcount(state.unlit(g.full)))
        want: list[int] = []
        if r <= T:
            want = rg.gadgets[f"u{r}_{r}"]
        elif r <= T + n:
            i = r - T
            pos, neg = _literal_names(i)
            if f.quantifiers[i - 1][1] == "a":
                want = rg.gadgets[pos] + rg.gadgets[neg]
            else:
                prefix = self._assignment(state)
                val = exists_choice(f, prefix) if len(prefix) == i - 1 else True
                want = rg.gadgets[neg if val else pos]
        elif r <= T + n + m:
            j = r - T - n
            vals = self._assignment(state)
            if len(vals) == n:
                assign = {f.quantifiers[t][0]: vals[t] for t in range(n)}
                for p, lit in enumerate(f.clauses[j - 1], 1):
                    if assign[abs(lit)] == (lit > 0):
                        want = rg.gadgets[f"C{j}.{p}"]
                        break
        elif r <= T + 2 * n + m:
            i = r - T - n - m
            vals = self._assignment(state)
            if len(vals) == n:
                pos, neg = _literal_names(i)
                want = rg.gadgets[f"D:{pos}" if vals[i - 1] else f"D:{neg}"]
        unlit = state.unlit(g.full)
        chosen = [v for v in want if unlit >> v & 1][:need]
        return _pad(g, state, chosen, need)


# co-NP hardness instance


@dataclass
class ConpInstance:
    graph: Graph
    k: int
    threshold: int


def conp_instance(g: Graph, c: int, t: int) -> ConpInstance:
    """(G plus t-1 disjoint copies of K_n, (t-1)+(c-1)) with k = n = |V(G)|."""
    if t < 1:
        raise ValueError("t must be positive")
    n = g.n
    h = g if t == 1 else disjoint_union(g, cliques(t - 1, n))
    return ConpInstance(h, n, (t - 1) + (c - 1))
