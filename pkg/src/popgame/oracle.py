"""Brute-force reference engines, kept independent of the frontier machinery.

``bounded_solve`` plays the game truncated to the first ``B`` population
sizes; ``brute_psi`` lists frontier sets by searching over rows directly;
``naive_star`` computes the product of two frontiers from the definition.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automaton import Label, LabelledAutomaton
from .morphism import CapExceeded

WINNABLE, UNWINNABLE, INCONCLUSIVE = "WINNABLE", "UNWINNABLE", "INCONCLUSIVE"


@dataclass
class OracleResult:
    kind: str
    moves: list = field(default_factory=list)
    explored: int = 0

    @property
    def winnable(self) -> bool:
        return self.kind == WINNABLE


def successor_words(aut: LabelledAutomaton, w: str) -> dict:
    """Every wins word one lossless length-``len(w)`` move reaches from ``w``,
    with the lexicographically least move reaching it."""
    n = len(w)
    letters = sorted(aut.alphabet)
    layer = {(aut.initial, w): ()}
    for j in range(n):
        nxt = {}
        for (q, bits), word in sorted(layer.items(), key=lambda item: item[1]):
            for a in letters:
                hit = aut.transitions.get((q, a))
                if hit is None:
                    continue
                q2, label = hit
                if label is Label.BAD and bits[j] == "0":
                    continue
                nbits = bits[:j] + "1" + bits[j + 1:] if label is Label.GOOD else bits
                nxt.setdefault((q2, nbits), word + (a,))
        layer = nxt
    out = {}
    for (_, bits), word in sorted(layer.items(), key=lambda item: item[1]):
        out.setdefault(bits, word)
    return out


def bounded_solve(
    aut: LabelledAutomaton, bound: int, max_words: Optional[int] = None, time_limit: Optional[float] = None
) -> OracleResult:
    """Breadth-first search from all zeros to all ones; a shortest move list when winnable."""
    if bound < 1:
        raise ValueError("bound must be positive")
    clock = time.monotonic()
    start, goal = "0" * bound, "1" * bound
    parent = {start: None}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if w == goal:
            moves = []
            while parent[w] is not None:
                w, move = parent[w]
                moves.append(move)
            return OracleResult(WINNABLE, moves[::-1], len(parent))
        for w2, move in successor_words(aut, w).items():
            if w2 in parent:
                continue
            parent[w2] = (w, move)
            queue.append(w2)
        if max_words is not None and len(parent) > max_words:
            return OracleResult(INCONCLUSIVE, explored=len(parent))
        if time_limit is not None and time.monotonic() - clock > time_limit:
            return OracleResult(INCONCLUSIVE, explored=len(parent))
    return OracleResult(UNWINNABLE, explored=len(parent))


def brute_psi(aut: LabelledAutomaton, w: str, max_states: int = 10**6) -> set:
    """Frontiers of all row lists that take ``w`` to all ones.

    A row is a start state and a defined word of length ``len(w)``.  Rows
    that neither win a new position nor add a new pair change nothing, so
    only the others are tried.
    """
    n = len(w)
    if n == 0 or set(w) - {"0", "1"}:
        raise ValueError(f"expected a nonempty word over 0/1, got {w!r}")
    letters = sorted(aut.alphabet)
    rows = []
    for q in aut.states:
        for word in itertools.product(letters, repeat=n):
            state, labels = q, []
            for a in word:
                hit = aut.transitions.get((state, a))
                if hit is None:
                    break
                state, label = hit
                labels.append(label)
            else:
                rows.append(((q, state), tuple(labels)))
    goal = "1" * n
    found = set()
    seen = set()
    stack = [(w, ())]
    while stack:
        cur, h = stack.pop()
        if (cur, h) in seen:
            continue
        seen.add((cur, h))
        if len(seen) > max_states:
            raise CapExceeded(f"more than {max_states} search states")
        if cur == goal and h:
            found.add(h)
        for pair, labels in rows:
            if any(lab is Label.BAD and cur[j] == "0" for j, lab in enumerate(labels)):
                continue
            nxt = "".join("1" if lab is Label.GOOD else cur[j] for j, lab in enumerate(labels))
            fresh = pair not in h
            if nxt == cur and not fresh:
                continue
            stack.append((nxt, h + (pair,) if fresh else h))
    return found


def naive_star(f: Sequence, g: Sequence, max_states: int = 10**6) -> set:
    """All ``h`` with ``f * g -> h``, by growing triple lists whose
    projections stay prefixes of ``f`` and ``g``."""
    f, g = tuple(map(tuple, f)), tuple(map(tuple, g))
    triples = [(x, y, z) for (x, y) in f for (y2, z) in g if y == y2]
    out = set()
    seen = set()
    stack = [((), (), ())]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        if len(seen) > max_states:
            raise CapExceeded(f"more than {max_states} search states")
        left, right, outer = state
        if left == f and right == g and outer:
            out.add(outer)
        for x, y, z in triples:
            nl = left if (x, y) in left else left + ((x, y),)
            nr = right if (y, z) in right else right + ((y, z),)
            no = outer if (x, z) in outer else outer + ((x, z),)
            if f[: len(nl)] != nl or g[: len(nr)] != nr:
                continue
            if (nl, nr, no) != state:
                stack.append((nl, nr, no))
    return out
