"""Round mechanics of k-liminal burning and transcript recording.

A round is: propagation (skipped in round 1), the Saboteur's reveal, the
Arsonist's burn.  States are immutable; every transition returns a new one.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from typing import Callable, Protocol, Sequence

from .graph import Graph, bits, mask_of, permute_mask, popcount


class Phase(enum.Enum):
    PRE_PROPAGATION = "pre-propagation"
    PRE_REVEAL = "pre-reveal"
    PRE_BURN = "pre-burn"


class IllegalMove(ValueError):
    """A move that the rules forbid in the given state."""

    def __init__(self, message: str, state: "GameState | None" = None):
        super().__init__(message if state is None else f"{message} (state: {state.describe()})")
        self.state = state


@dataclass(frozen=True)
class GameState:
    burned: int = 0
    revealed: int = 0
    round: int = 1
    phase: Phase = Phase.PRE_PROPAGATION
    # reveals made in the current round; needed for strict mode
    fresh: int = 0
    # Arsonist sources in burn order (None for a pass)
    sources: tuple = ()

    @property
    def selectable(self) -> int:
        return self.revealed & ~self.burned

    def unlit(self, full: int) -> int:
        return full & ~(self.burned | self.revealed)

    def describe(self) -> str:
        return (f"round={self.round} phase={self.phase.value} "
                f"burned={sorted(bits(self.burned))} revealed={sorted(bits(self.revealed))}")


class Saboteur(Protocol):
    def __call__(self, g: Graph, state: GameState, k: int) -> int: ...


class Arsonist(Protocol):
    def __call__(self, g: Graph, state: GameState, options: int) -> int | None: ...


def initial_state() -> GameState:
    return GameState()


def propagate(g: Graph, s: GameState) -> GameState:
    if s.phase is not Phase.PRE_PROPAGATION:
        raise IllegalMove("propagation outside the pre-propagation phase", s)
    burned = s.burned if s.round == 1 else g.closed_neighborhood(s.burned)
    return replace(s, burned=burned, phase=Phase.PRE_REVEAL, fresh=0)


def reveal_options(g: Graph, s: GameState, k: int) -> tuple[int, int]:
    """(required reveal size, candidate pool) for the Saboteur."""
    pool = s.unlit(g.full)
    return min(k, popcount(pool)), pool


def apply_reveal(g: Graph, s: GameState, r: int, k: int) -> GameState:
    if s.phase is not Phase.PRE_REVEAL:
        raise IllegalMove("reveal outside the pre-reveal phase", s)
    size, pool = reveal_options(g, s, k)
    if r & ~pool:
        raise IllegalMove(f"reveal of lit vertices {sorted(bits(r & ~pool))}", s)
    if popcount(r) != size:
        raise IllegalMove(f"reveal has {popcount(r)} vertices, {size} required", s)
    return replace(s, revealed=s.revealed | r, fresh=r, phase=Phase.PRE_BURN)


def burn_options(s: GameState, strict: bool = False) -> int:
    """Vertices the Arsonist may burn now.

    In strict mode only this round's reveals count, except when the Saboteur
    had nothing left to reveal; then the cumulative pool is used so that play
    cannot stall forever.
    """
    if strict and s.fresh:
        return s.fresh & ~s.burned
    return s.selectable


def apply_burn(g: Graph, s: GameState, v: int | None, *, strict: bool = False,
               compulsory: bool = True) -> GameState:
    if s.phase is not Phase.PRE_BURN:
        raise IllegalMove("burn outside the pre-burn phase", s)
    options = burn_options(s, strict)
    if v is None:
        if options and compulsory:
            raise IllegalMove("pass while a revealed vertex is unburned", s)
        burned = s.burned
    else:
        if not (0 <= v < g.n) or not options >> v & 1:
            raise IllegalMove(f"vertex {v} is not selectable", s)
        burned = s.burned | 1 << v
    return replace(s, burned=burned, round=s.round + 1, phase=Phase.PRE_PROPAGATION,
                   sources=s.sources + (v,))


def permute_state(s: GameState, perm: Sequence[int]) -> GameState:
    return replace(
        s,
        burned=permute_mask(s.burned, perm),
        revealed=permute_mask(s.revealed, perm),
        fresh=permute_mask(s.fresh, perm),
        sources=tuple(None if v is None else perm[v] for v in s.sources),
    )


@dataclass
class RoundRecord:
    propagated: list[int]
    revealed: list[int]
    burned: int | None
    relabel: list[int] | None = None


@dataclass
class Transcript:
    graph_spec: str
    k: int
    rounds: list[RoundRecord] = field(default_factory=list)
    length: int = 0
    strict: bool = False

    def to_json(self) -> str:
        rounds = []
        for r in self.rounds:
            item = {"propagated": r.propagated, "revealed": r.revealed, "burned": r.burned}
            if r.relabel is not None:
                item["relabel"] = r.relabel
            rounds.append(item)
        doc = {"graph_spec": self.graph_spec, "k": self.k, "rounds": rounds, "length": self.length}
        if self.strict:
            doc["strict"] = True
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        doc = json.loads(text)
        rounds = [RoundRecord(list(r["propagated"]), list(r["revealed"]), r["burned"], r.get("relabel"))
                  for r in doc["rounds"]]
        return cls(doc["graph_spec"], int(doc["k"]), rounds, int(doc["length"]), bool(doc.get("strict", False)))


class TranscriptSaboteur:
    """Replays the reveals of a recorded game."""

    def __init__(self, t: Transcript):
        self.t = t

    def __call__(self, g, state, k):
        return mask_of(self.t.rounds[state.round - 1].revealed)

    def relabel(self, g, state):
        return self.t.rounds[0].relabel if self.t.rounds else None


class TranscriptArsonist:
    def __init__(self, t: Transcript):
        self.t = t

    def __call__(self, g, state, options):
        return self.t.rounds[state.round - 1].burned


class GameOverflow(RuntimeError):
    pass


def play(g: Graph, k: int, sab: Saboteur, ars: Arsonist, *, strict: bool = False,
         compulsory: bool | None = None, max_rounds: int | None = None,
         on_round: Callable[[GameState], None] | None = None) -> Transcript:
    """Play a full game and return its transcript.

    A Saboteur may define ``relabel(g, state) -> permutation | None``; it is
    called once after round 1 and the permutation (an automorphism) is applied
    to the state before play continues.  An Arsonist with ``compulsory = False``
    may pass while vertices are selectable.
    """
    if compulsory is None:
        compulsory = getattr(ars, "compulsory", True)
    if k < 1:
        raise ValueError("k must be at least 1")
    t = Transcript(g.name, k, strict=strict)
    if g.n == 0:
        return t
    limit = max_rounds if max_rounds is not None else 2 * g.n + 1
    s = initial_state()
    while True:
        before = s.burned
        s = propagate(g, s)
        rec = RoundRecord(sorted(bits(s.burned & ~before)), [], None)
        t.rounds.append(rec)
        if s.burned == g.full:
            t.length = s.round
            return t
        r = sab(g, s, k)
        try:
            s = apply_reveal(g, s, r, k)
        except IllegalMove as exc:
            raise IllegalMove(f"Saboteur: {exc}") from None
        rec.revealed = sorted(bits(r))
        v = ars(g, s, burn_options(s, strict))
        try:
            s2 = apply_burn(g, s, v, strict=strict, compulsory=compulsory)
        except IllegalMove as exc:
            raise IllegalMove(f"Arsonist: {exc}") from None
        rec.burned = v
        if s2.burned == g.full:
            t.length = s.round
            return t
        s = s2
        if s.round == 2 and hasattr(sab, "relabel"):
            perm = sab.relabel(g, s)
            if perm is not None:
                perm = list(perm)
                if not g.is_automorphism(perm):
                    raise IllegalMove("relabel is not an automorphism", s)
                s = permute_state(s, perm)
                rec.relabel = perm
        if on_round is not None:
            on_round(s)
        if s.round > limit:
            raise GameOverflow(f"game exceeded {limit} rounds")


def replay(g: Graph, t: Transcript) -> Transcript:
    return play(g, t.k, TranscriptSaboteur(t), TranscriptArsonist(t), strict=t.strict,
                compulsory=False)
