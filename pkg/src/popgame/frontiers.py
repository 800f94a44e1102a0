"""Frontiers: duplicate-free sequences of state pairs, and their product.

A frontier is a tuple of ``(state, state)`` tuples.  Triple tables (tuples
of ``(x, y, z)``) witness products; wider state tables witness longer
chains of products.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class FrontierError(ValueError):
    pass


class IncompatibleTables(ValueError):
    """The merge of two tables along a triple table cannot proceed."""


def reduce(seq: Iterable) -> tuple:
    """Drop repeated items, keeping the order of first appearance."""
    return tuple(dict.fromkeys(seq))


def make_frontier(pairs: Iterable) -> tuple:
    f = tuple(tuple(p) for p in pairs)
    if not f:
        raise FrontierError("frontiers are nonempty")
    if len(set(f)) != len(f):
        raise FrontierError("frontier repeats a pair")
    if any(len(p) != 2 for p in f):
        raise FrontierError("frontier items must be pairs")
    return f


def starts(f: Sequence) -> tuple:
    return reduce(p[0] for p in f)


def ends(f: Sequence) -> tuple:
    return reduce(p[-1] for p in f)


def format_frontier(f: Sequence) -> str:
    return "[" + ",".join(f"({x},{y})" for x, y in f) + "]"


_PAIR = re.compile(r"\(\s*([^\s,()]+)\s*,\s*([^\s,()]+)\s*\)")


def parse_frontier(text: str) -> tuple:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise FrontierError(f"not a frontier: {text!r}")
    inner = body[1:-1]
    pairs = _PAIR.findall(inner)
    if _PAIR.sub("", inner).replace(",", "").strip():
        raise FrontierError(f"not a frontier: {text!r}")
    return make_frontier(pairs)


# -- the product ---------------------------------------------------------

def star_products(f: Sequence, g: Sequence) -> dict:
    """All ``h`` with ``f * g -> h``, each mapped to a witnessing triple table.

    The search only builds triple sequences in which every triple brings a
    new pair to at least one of the three projections; any other triple
    leaves all three reductions unchanged.
    """
    f, g = tuple(f), tuple(g)
    if ends(f) != starts(g):
        return {}
    nf, ng = len(f), len(g)
    g_from = defaultdict(list)
    for b, (y, z) in enumerate(g):
        g_from[y].append(b)
    memo: dict = {}

    def explore(i, j, seen):
        key = (i, j, seen)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = {}
        if i == nf and j == ng:
            out[()] = ()
        for a in range(min(i + 1, nf)):
            x, y = f[a]
            for b in g_from[y]:
                if b > j:
                    break
                z = g[b][1]
                ni = i + 1 if a == i else i
                nj = j + 1 if b == j else j
                fresh = (x, z) not in seen
                if not fresh and ni == i and nj == j:
                    continue
                nseen = seen | {(x, z)} if fresh else seen
                for tail, table in explore(ni, nj, nseen).items():
                    full = ((x, z),) + tail if fresh else tail
                    if full not in out:
                        out[full] = ((x, y, z),) + table
        memo[key] = out
        return out

    return explore(0, 0, frozenset())


def is_product(f: Sequence, g: Sequence, h: Sequence) -> Optional[tuple]:
    """A triple table witnessing ``f * g -> h``, or None.

    Unlike ``star_products`` this search is steered by ``h``: a triple
    whose outer pair is new must be the next pair of ``h``, so the search
    state is just three counters.
    """
    f, g, h = tuple(f), tuple(g), tuple(h)
    if not h or ends(f) != starts(g) or starts(h) != starts(f) or ends(h) != ends(g):
        return None
    nf, ng, nh = len(f), len(g), len(h)
    h_index = {p: c for c, p in enumerate(h)}
    g_from = defaultdict(list)
    for b, (y, z) in enumerate(g):
        g_from[y].append(b)
    # the counters fully determine what may come next: plain reachability
    parent = {(0, 0, 0): None}
    stack = [(0, 0, 0)]
    while stack:
        state = stack.pop()
        i, j, c = state
        if i == nf and j == ng and c == nh:
            table = []
            while parent[state] is not None:
                state, triple = parent[state]
                table.append(triple)
            return tuple(reversed(table))
        for a in range(min(i + 1, nf)):
            x, y = f[a]
            for b in g_from[y]:
                if b > j:
                    break
                pos = h_index.get((x, g[b][1]))
                if pos is None or pos > c:
                    continue
                nxt = (i + 1 if a == i else i, j + 1 if b == j else j, c + 1 if pos == c else c)
                if nxt == state or nxt in parent:
                    continue
                parent[nxt] = (state, (x, y, g[b][1]))
                stack.append(nxt)
    return None


def check_triples(f: Sequence, g: Sequence, h: Sequence, table: Sequence) -> bool:
    """Whether ``table`` witnesses ``f * g -> h``."""
    if not table:
        return False
    return (
        reduce((t[0], t[1]) for t in table) == tuple(f)
        and reduce((t[1], t[2]) for t in table) == tuple(g)
        and reduce((t[0], t[2]) for t in table) == tuple(h)
    )


def set_star(F: Iterable, G: Iterable, cache: Optional[dict] = None) -> set:
    """Lift the product to sets.  ``cache`` memoizes per-pair results if given."""
    G = list(G)
    out = set()
    for f in F:
        for g in G:
            if cache is None:
                out.update(star_products(f, g))
                continue
            key = (f, g)
            hit = cache.get(key)
            if hit is None:
                hit = cache[key] = frozenset(star_products(f, g))
            out.update(hit)
    return out


# -- tables --------------------------------------------------------------

@dataclass(frozen=True)
class WitnessTable:
    """Rows of states; optional letters realize consecutive columns.

    ``letters[i][c]`` leads from ``rows[i][c]`` to ``rows[i][c + 1]``.
    """

    rows: tuple
    letters: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise FrontierError("empty table")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise FrontierError("ragged table")
        if self.letters is not None:
            letters = tuple(tuple(w) for w in self.letters)
            if len(letters) != len(rows) or any(len(w) != width - 1 for w in letters):
                raise FrontierError("letters do not fit the rows")
            object.__setattr__(self, "letters", letters)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def frontier(self, first: int = 0, last: int = -1) -> tuple:
        return reduce((r[first], r[last]) for r in self.rows)

    def column_frontiers(self) -> list:
        return [self.frontier(c, c + 1) for c in range(self.width - 1)]

    def check_letters(self, aut) -> bool:
        if self.letters is None:
            return False
        for row, word in zip(self.rows, self.letters):
            for c, letter in enumerate(word):
                hit = aut.step(row[c], letter)
                if hit is None or hit[0] != row[c + 1]:
                    return False
        return True


def unify_product(x: WitnessTable, y: WitnessTable, w: Sequence, stats: Optional[dict] = None) -> WitnessTable:
    """Merge ``x`` (width m) and ``y`` (width n) into a width ``m + n - 1`` table.

    ``w`` is a triple table gluing the end/start columns.  Rows of ``x``,
    ``y`` and ``w`` first appear in the result in their original order, so
    every reduction of ``x``, ``y`` and ``w`` is preserved.  Only rows
    bringing a first appearance are appended.
    """
    xr, yr, wr = x.rows, y.rows, reduce(tuple(t) for t in w)
    r, s, d = len(xr), len(yr), len(wr)
    with_letters = x.letters is not None and y.letters is not None
    seen_x, seen_y, seen_w = set(), set(), set()
    rows, words = [], []
    alpha = beta = gamma = 0
    appends = 0
    while alpha < r or beta < s or gamma < d:
        na, nb, nc = alpha, beta, gamma
        for i in range(min(alpha + 1, r)):
            tx = xr[i]
            for j in range(min(beta + 1, s)):
                ty = yr[j]
                if tx[-1] != ty[0]:
                    continue
                for k in range(min(gamma + 1, d)):
                    tw = wr[k]
                    if tx[0] != tw[0] or tx[-1] != tw[1] or ty[-1] != tw[2]:
                        continue
                    if i in seen_x and j in seen_y and k in seen_w:
                        continue
                    seen_x.add(i)
                    seen_y.add(j)
                    seen_w.add(k)
                    rows.append(tx + ty[1:])
                    if with_letters:
                        words.append(x.letters[i] + y.letters[j])
                    appends += 1
                    na, nb, nc = max(na, i + 1), max(nb, j + 1), max(nc, k + 1)
        if (na, nb, nc) == (alpha, beta, gamma):
            raise IncompatibleTables(
                f"merge stalled with {alpha}/{r} left rows, {beta}/{s} right rows, {gamma}/{d} triples"
            )
        alpha, beta, gamma = na, nb, nc
    if stats is not None:
        stats["appends"] = appends
    return WitnessTable(tuple(rows), tuple(words) if with_letters else None)


def unify_postconditions(x: WitnessTable, y: WitnessTable, w: Sequence, z: WitnessTable) -> bool:
    m = x.width
    h = reduce((t[0], t[2]) for t in w)
    return (
        reduce(r[:m] for r in z.rows) == reduce(x.rows)
        and reduce(r[m - 1:] for r in z.rows) == reduce(y.rows)
        and reduce((r[0], r[m - 1], r[-1]) for r in z.rows) == reduce(tuple(t) for t in w)
        and z.frontier() == h
    )


def decompose_check(h: Sequence, parts: Sequence, table: WitnessTable) -> bool:
    """Whether ``table`` witnesses ``h`` as the product of ``parts`` in order."""
    if table.width != len(parts) + 1:
        return False
    if table.frontier() != tuple(h):
        return False
    return all(table.frontier(c, c + 1) == tuple(p) for c, p in enumerate(parts))


# -- structural predicates ------------------------------------------------

def is_initial(f: Sequence, q_init) -> bool:
    return all(x == q_init for x, _ in f)


def omega_split(g: Sequence) -> Optional[int]:
    """Length of the diagonal prefix of an iterable split of ``g``, or None.

    The longest diagonal prefix is used: growing it never invalidates a
    later pair, since the pool of earlier sources stays the same.
    """
    p = 0
    while p < len(g) and g[p][0] == g[p][1]:
        p += 1
    sources = {x for x, _ in g[:p]}
    for y, z in g[p:]:
        if z not in sources:
            return None
        sources.add(y)
    return p


def is_omega_iterable(g: Sequence) -> bool:
    return omega_split(g) is not None


def window_frontier(grid: Sequence, k: int, l: int) -> tuple:
    """Pairs of columns ``k`` and ``l`` over the rows of a state grid."""
    if not 0 <= k < l:
        raise IndexError("need 0 <= k < l")
    for row in grid:
        if len(row) <= l:
            raise IndexError(f"column {l} outside a row of length {len(row)}")
    return reduce((row[k], row[l]) for row in grid)
