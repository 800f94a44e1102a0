"""Wins words truncated at a finite bound, and bounded play of move sequences.

A wins word is a string over ``"01"``; position ``j`` (1-based) records
whether population size ``j`` is already won.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automaton import Label, LabelledAutomaton


class UndefinedPath(ValueError):
    """A move leaves the domain of the transition function."""


@dataclass(frozen=True)
class LassoMove:
    """The infinite word ``prefix + cycle + cycle + ...``.

    Both parts are tuples of letters.
    """

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def expand(self, n: int) -> tuple:
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.cycle[: n - len(out)])
        return tuple(out)

    def __str__(self):
        return f"{' '.join(self.prefix)} ({' '.join(self.cycle)})^w".lstrip()


@dataclass(frozen=True)
class Loss:
    """A BAD label hit a position that was not yet won."""

    position: int
    path: tuple
    move_index: Optional[int] = None


class Outcome(enum.Enum):
    WON = "won"
    UNDECIDED = "undecided"
    LOST = "lost"


@dataclass
class PlayResult:
    outcome: Outcome
    trace: list = field(default_factory=list)
    won_at: Optional[int] = None
    loss: Optional[Loss] = None


def zeros(n: int) -> str:
    return "0" * n


def ones(n: int) -> str:
    return "1" * n


def leq(w: str, w2: str) -> bool:
    """Pointwise order on wins words of equal length."""
    if len(w) != len(w2):
        raise ValueError("wins words of different lengths")
    return all(a <= b for a, b in zip(w, w2))


def apply_move(aut: LabelledAutomaton, w: str, q: str, move: Sequence[str]):
    """Successor of ``w`` when ``move`` is read from ``q``, or a ``Loss``."""
    if len(move) != len(w):
        raise ValueError(f"move of length {len(move)} for a wins word of length {len(w)}")
    bits = list(w)
    path = [q]
    table = aut.transitions
    for j, letter in enumerate(move):
        hit = table.get((q, letter))
        if hit is None:
            raise UndefinedPath(f"no transition from {q} on {letter!r} at position {j + 1}")
        q, label = hit
        path.append(q)
        if label is Label.GOOD:
            bits[j] = "1"
        elif label is Label.BAD and bits[j] == "0":
            return Loss(j + 1, tuple(path))
    return "".join(bits)


def apply_lasso(aut: LabelledAutomaton, w: str, move: LassoMove):
    return apply_move(aut, w, aut.initial, move.expand(len(w)))


def play_sequence(aut: LabelledAutomaton, moves: Sequence[LassoMove], bound: int) -> PlayResult:
    """Apply ``moves`` from the all-zero word; stop at the first loss."""
    w = zeros(bound)
    result = PlayResult(Outcome.UNDECIDED, [w])
    if w == ones(bound):
        result.outcome, result.won_at = Outcome.WON, 0
    for i, move in enumerate(moves, start=1):
        nxt = apply_lasso(aut, w, move)
        if isinstance(nxt, Loss):
            loss = Loss(nxt.position, nxt.path, i)
            return PlayResult(Outcome.LOST, result.trace, None, loss)
        w = nxt
        result.trace.append(w)
        if result.won_at is None and w == ones(bound):
            result.outcome, result.won_at = Outcome.WON, i
    return result


def state_grid(aut: LabelledAutomaton, moves: Sequence[LassoMove], bound: int) -> list:
    """Per move, the list of ``(state, label)`` after each of ``bound`` letters."""
    grid = []
    for move in moves:
        q = aut.initial
        row = []
        for letter in move.expand(bound):
            hit = aut.transitions.get((q, letter))
            if hit is None:
                break
            q = hit[0]
            row.append(hit)
        grid.append(row)
    return grid
