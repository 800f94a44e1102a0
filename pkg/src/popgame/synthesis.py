"""Build an explicit winning strategy from a certificate.

A slice is a list of rows ``(state, word)``.  All words have the same
length, or all are lassos.  Rows are played in order, each from its own
start state, and the slice's result is the wins word they reach from all
zeros.  Slices whose end order matches the next one's start order can be
glued column-wise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

from .automaton import LabelledAutomaton, run
from .decision import Certificate, verify_certificate
from .frontiers import omega_split, reduce
from .winswords import LassoMove, Loss, UndefinedPath, apply_move, zeros

Word = Union[tuple, LassoMove]


class SliceError(ValueError):
    pass


class SliceLoss(SliceError):
    def __init__(self, loss: Loss, row: int):
        super().__init__(f"row {row} hits BAD at unwon position {loss.position}")
        self.loss = loss
        self.row = row


class OrderMismatch(SliceError):
    pass


class InvalidCertificate(ValueError):
    pass


@dataclass(frozen=True)
class Slice:
    rows: tuple  # of (state, word)

    def __post_init__(self):
        rows = tuple((q, w if isinstance(w, LassoMove) else tuple(w)) for q, w in self.rows)
        if not rows:
            raise SliceError("empty slice")
        lasso = {isinstance(w, LassoMove) for _, w in rows}
        if len(lasso) != 1:
            raise SliceError("mixing finite and infinite rows")
        if not lasso.pop() and len({len(w) for _, w in rows}) != 1:
            raise SliceError("rows of different lengths")
        object.__setattr__(self, "rows", rows)

    @property
    def infinite(self) -> bool:
        return isinstance(self.rows[0][1], LassoMove)

    @property
    def length(self) -> int:
        if self.infinite:
            raise SliceError("infinite slice has no length")
        return len(self.rows[0][1])

    def start_order(self) -> tuple:
        return reduce(q for q, _ in self.rows)

    def end_states(self, aut: LabelledAutomaton) -> tuple:
        out = []
        for q, w in self.rows:
            hit = run(aut, q, w) if w else (q, None)
            if hit is None:
                raise UndefinedPath(f"row from {q} leaves the automaton")
            out.append(hit[0])
        return tuple(out)

    def end_order(self, aut: LabelledAutomaton) -> tuple:
        return reduce(self.end_states(aut))


def slice_result(aut: LabelledAutomaton, s: Slice, n: int = None) -> str:
    """Wins word reached by the rows from all zeros; infinite slices are cut at ``n``."""
    if s.infinite:
        if n is None:
            raise SliceError("infinite slice needs a length")
        words = [w.expand(n) for _, w in s.rows]
    else:
        n = s.length
        words = [w for _, w in s.rows]
    w = zeros(n)
    for i, ((q, _), word) in enumerate(zip(s.rows, words)):
        nxt = apply_move(aut, w, q, word)
        if isinstance(nxt, Loss):
            raise SliceLoss(nxt, i)
        w = nxt
    return w


def _concat(v: tuple, w: Word) -> Word:
    if isinstance(w, LassoMove):
        return LassoMove(v + w.prefix, w.cycle)
    return v + w


def compose_slices(aut: LabelledAutomaton, s: Slice, t: Slice) -> Slice:
    """Glue ``t`` after ``s``; the result is ``result(s) + result(t)``.

    Rows of both slices are used in their original order, possibly
    repeating earlier ones; a repeated row never loses nor wins anything
    new, so both halves keep their results.
    """
    if s.infinite:
        raise SliceError("the left slice must be finite")
    ends = s.end_states(aut)
    if reduce(ends) != t.start_order():
        raise OrderMismatch(f"end order {reduce(ends)} differs from start order {t.start_order()}")
    left, right = s.rows, t.rows
    p, r = len(left), len(right)
    out = []
    a = b = 0
    while a < p or b < r:
        if a < p:
            j = next((j for j in range(min(b + 1, r)) if right[j][0] == ends[a]), None)
            if j is not None:
                out.append((left[a][0], _concat(left[a][1], right[j][1])))
                a += 1
                b = max(b, j + 1)
                continue
        if b < r:
            i = next((i for i in range(a) if ends[i] == right[b][0]), None)
            if i is not None:
                out.append((left[i][0], _concat(left[i][1], right[b][1])))
                b += 1
                continue
        raise AssertionError(f"merge stalled at rows {a}/{p} and {b}/{r}")
    return Slice(tuple(out))


def _table_slice(table) -> Slice:
    return Slice(tuple((row[0], word) for row, word in zip(table.rows, table.letters)))


def synthesize(aut: LabelledAutomaton, cert: Certificate, bound: int) -> list:
    """Lasso moves whose play wins every population size up to ``bound``.

    The moves are the rows of one infinite slice: the ``f`` witness, then
    enough copies of the ``g`` witness to pass ``bound``, then prefixes of
    the ``g`` witness that shrink the end order down to the states of the
    diagonal pairs of ``g``, then the rows for those pairs repeated forever.
    Every position of that slice is eventually won without a loss.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    check = verify_certificate(aut, cert)
    if not check:
        raise InvalidCertificate(check.reason)
    g = tuple(cert.g)
    p = omega_split(g)
    table = cert.witness_g
    g_rows = list(zip(table.rows, table.letters))
    order = tuple(x for x, _ in g[:p])

    s = _table_slice(cert.witness_f)
    for _ in range(max(0, math.ceil((bound - cert.k) / cert.l))):
        s = compose_slices(aut, s, _table_slice(table))

    current = s.end_order(aut)
    while len(current) > len(order):
        t = next(i for i, (row, _) in enumerate(g_rows) if row[0] == current[-1])
        step = Slice(tuple((row[0], word) for row, word in g_rows[: t + 1]))
        s = compose_slices(aut, s, step)
        nxt = s.end_order(aut)
        if len(nxt) >= len(current) or nxt[: len(order)] != order:
            raise AssertionError("descent did not shrink the end order")
        current = nxt
    if current != order:
        raise AssertionError("descent ended away from the diagonal states")

    if p == 0:
        raise AssertionError("omega-iterable frontier without diagonal pairs")
    last = next(i for i, (row, _) in enumerate(g_rows) if (row[0], row[-1]) == g[p - 1])
    loops = Slice(tuple((row[0], LassoMove((), word)) for row, word in g_rows[: last + 1]))
    s = compose_slices(aut, s, loops)
    return [w for _, w in s.rows]


# -- move files -------------------------------------------------------------------

_MOVE = re.compile(r"^move:\s*(.*?)\s*\(([^()]*)\)\^w\s*$")


def format_moves(moves: Sequence[LassoMove]) -> str:
    return "".join(f"move: {m}\n" for m in moves)


def parse_moves(text: str) -> list:
    moves = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        hit = _MOVE.match(line)
        if not hit or not hit.group(2).split():
            raise ValueError(f"line {lineno}: expected 'move: <prefix> (<cycle>)^w'")
        moves.append(LassoMove(tuple(hit.group(1).split()), tuple(hit.group(2).split())))
    return moves
