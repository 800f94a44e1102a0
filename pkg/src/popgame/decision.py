"""Decide whether one population strategy wins for every population size.

A positive answer comes with a certificate: an initial frontier ``f`` and
an omega-iterable frontier ``g``, both describing windows of won columns,
with ``f * g -> f`` and ``g * g -> g``.  Three engines are tried in turn:

* refutation: a nonempty set of positions that no move can ever win
  first, or a bounded truncation that cannot be won at all;
* window search: play a greedy strategy on a bounded game and look for
  three columns whose windows form a certificate;
* the exact closure of winning-window frontiers.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automaton import Label, LabelledAutomaton
from .frontiers import (
    FrontierError,
    WitnessTable,
    check_triples,
    ends,
    format_frontier,
    is_initial,
    is_omega_iterable,
    is_product,
    parse_frontier,
    reduce,
    starts,
)
from .morphism import psi0plus_closure, reconstruct_witness
from .winswords import Loss, apply_move, ones, zeros


@dataclass(frozen=True)
class Caps:
    max_frontiers: Optional[int] = 10**6
    time_limit: Optional[float] = 60.0
    trace_bounds: tuple = (8, 16, 32, 64, 128)
    refute_rounds: int = 64
    refute_steps: int = 100_000
    # engine switches, mostly for cross-checking the engines against each other
    refute: bool = True
    windows: bool = True


# -- ultimately periodic position sets ------------------------------------------


@dataclass(frozen=True)
class PositionSet:
    """Positions ``1..len(prefix)`` read from ``prefix``; after that ``cycle`` repeats."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        prefix = tuple(bool(b) for b in self.prefix)
        cycle = tuple(bool(b) for b in self.cycle)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        for d in range(1, len(cycle) + 1):
            if len(cycle) % d == 0 and cycle == cycle[:d] * (len(cycle) // d):
                cycle = cycle[:d]
                break
        while prefix and prefix[-1] == cycle[-1]:
            cycle = (prefix[-1],) + cycle[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    def __contains__(self, p: int) -> bool:
        if p <= len(self.prefix):
            return self.prefix[p - 1]
        return self.cycle[(p - len(self.prefix) - 1) % len(self.cycle)]

    def is_empty(self) -> bool:
        return not any(self.prefix) and not any(self.cycle)

    def minus(self, other: "PositionSet") -> "PositionSet":
        a = max(len(self.prefix), len(other.prefix))
        m = math.lcm(len(self.cycle), len(other.cycle))
        bits = [(p in self) and (p not in other) for p in range(1, a + m + 1)]
        return PositionSet(tuple(bits[:a]), tuple(bits[a:]))

    def first(self) -> Optional[int]:
        for p in range(1, len(self.prefix) + len(self.cycle) + 1):
            if p in self:
                return p
        return None

    def members(self, upto: int) -> list:
        return [p for p in range(1, upto + 1) if p in self]

    def __str__(self):
        if not any(self.cycle):
            return "{" + ", ".join(map(str, self.members(len(self.prefix)))) + "}"
        shown = self.members(len(self.prefix) + 3 * len(self.cycle))[:24]
        tail = f", ... (period {len(self.cycle)}"
        tail += f" after position {len(self.prefix)})" if self.prefix else ")"
        return "{" + ", ".join(map(str, shown)) + tail + "}"


def good_positions(aut: LabelledAutomaton, blocked: PositionSet, max_steps: int = 100_000) -> Optional[PositionSet]:
    """Positions where some infinite move has a GOOD label while avoiding
    BAD labels at every position of ``blocked``; None past ``max_steps``."""
    a, m = len(blocked.prefix), len(blocked.cycle)
    span = a + m
    hit = list(blocked.prefix) + list(blocked.cycle)
    nxt = [c + 1 if c + 1 < span else a for c in range(span)]
    idx = {q: i for i, q in enumerate(aut.states)}
    out = [[(idx[q2], lab) for _, q2, lab in aut.edges(q)] for q in aut.states]

    def allowed(lab, c):
        return not (lab is Label.BAD and hit[c])

    # product states (q, clock) from which an infinite allowed path exists
    n = len(aut.states)
    count = [[0] * span for _ in range(n)]
    preds = [[[] for _ in range(span)] for _ in range(n)]
    for q in range(n):
        for c in range(span):
            for q2, lab in out[q]:
                if allowed(lab, c):
                    count[q][c] += 1
                    preds[q2][nxt[c]].append((q, c))
    live = [[True] * span for _ in range(n)]
    queue = [(q, c) for q in range(n) for c in range(span) if count[q][c] == 0]
    for q, c in queue:
        live[q][c] = False
    while queue:
        q, c = queue.pop()
        for pq, pc in preds[q][c]:
            if live[pq][pc]:
                count[pq][pc] -= 1
                if count[pq][pc] == 0:
                    live[pq][pc] = False
                    queue.append((pq, pc))

    start = idx[aut.initial]
    reach = frozenset([start]) if live[start][0] else frozenset()
    clock, steps = 0, 0
    history, goods = {}, []
    while (reach, clock) not in history:
        history[(reach, clock)] = steps
        nc = nxt[clock]
        step_reach, good = set(), False
        for q in reach:
            for q2, lab in out[q]:
                if allowed(lab, clock) and live[q2][nc]:
                    step_reach.add(q2)
                    good = good or lab is Label.GOOD
        goods.append(good)
        reach, clock = frozenset(step_reach), nc
        steps += 1
        if steps > max_steps:
            return None
    first = history[(reach, clock)]
    return PositionSet(tuple(goods[:first]), tuple(goods[first:]))


def _periodic_guesses(bits: Sequence[bool], limit: int) -> list:
    """Ultimately periodic sets agreeing with ``bits`` that show at least two full periods."""
    size = len(bits)
    guesses = []
    for p in range(1, size // 2 + 1):
        a = size - p
        while a > 0 and bits[a - 1] == bits[a - 1 + p]:
            a -= 1
        if a + 2 * p <= size and any(bits[a:a + p]):
            guesses.append(PositionSet(tuple(bits[:a]), tuple(bits[a:a + p])))
    guesses = list(dict.fromkeys(guesses))
    guesses.sort(key=lambda u: len(u.prefix) + len(u.cycle))
    return guesses[:limit]


def never_winnable(
    aut: LabelledAutomaton, max_rounds: int = 64, max_steps: int = 100_000, guesses: int = 16
) -> Optional[PositionSet]:
    """A nonempty set of positions that no strategy can ever win, or None.

    Any nonempty ``U`` such that no infinite move avoiding BAD labels on
    ``U`` has a GOOD label in ``U`` is a proof: the first move to win a
    position of ``U`` would take a BAD label at an unwon position.

    Start from all positions and repeatedly drop those such a move wins.
    When a round leaves the start of the set unchanged, periodic
    continuations of that stable start are also tried, since the
    descending chain need not stop after finitely many rounds.
    """
    current = PositionSet((), (True,))
    tried = set()
    for _ in range(max_rounds):
        good = good_positions(aut, current, max_steps)
        if good is None:
            return None
        smaller = current.minus(good)
        if smaller.is_empty():
            return None
        if smaller == current:
            return current
        stable = current.minus(smaller).first() - 1
        for guess in _periodic_guesses([p in smaller for p in range(1, stable + 1)], guesses):
            if guess in tried:
                continue
            tried.add(guess)
            if check_never_winnable(aut, guess, max_steps):
                return guess
        current = smaller
    return None


def check_never_winnable(aut: LabelledAutomaton, blocked: PositionSet, max_steps: int = 100_000) -> bool:
    if blocked.is_empty():
        return False
    good = good_positions(aut, blocked, max_steps)
    return good is not None and blocked.minus(good) == blocked


# -- greedy bounded play -----------------------------------------------------------


@dataclass(frozen=True)
class BoundedRow:
    word: tuple
    states: tuple  # len(word) + 1 states, starting at the initial state


def greedy_rows(aut: LabelledAutomaton, bound: int) -> Optional[list]:
    """Moves of length ``bound`` that win every position, or None if the
    bounded game cannot be won.

    Each move wins the smallest position that can still be won without a
    loss.  Winning more never disables a move, so this reaches the largest
    reachable wins word whatever the order; None is therefore exact.
    """
    idx = {q: i for i, q in enumerate(aut.states)}
    n = len(aut.states)
    out = [[(letter, idx[q2], lab) for letter, q2, lab in aut.edges(q)] for q in aut.states]
    start = idx[aut.initial]
    won = [False] * (bound + 1)
    rows = []

    def ok(lab, pos):
        return lab is not Label.BAD or won[pos]

    while not all(won[1:]):
        alive = [None] * (bound + 1)
        alive[bound] = [True] * n
        for j in range(bound - 1, -1, -1):
            nxt = alive[j + 1]
            alive[j] = [any(ok(lab, j + 1) and nxt[q2] for _, q2, lab in out[q]) for q in range(n)]
        reach = [set() for _ in range(bound + 1)]
        reach[0].add(start)
        for j in range(bound):
            for q in reach[j]:
                for _, q2, lab in out[q]:
                    if ok(lab, j + 1) and alive[j + 1][q2]:
                        reach[j + 1].add(q2)
        target = None
        for p in range(1, bound + 1):
            if won[p]:
                continue
            ends_at = {
                q for q in reach[p - 1] if any(lab is Label.GOOD and alive[p][q2] for _, q2, lab in out[q])
            }
            if ends_at:
                target = (p, ends_at)
                break
        if target is None:
            return None
        p, ends_at = target
        can = [None] * p
        can[p - 1] = [q in ends_at for q in range(n)]
        for j in range(p - 2, -1, -1):
            nxt = can[j + 1]
            can[j] = [any(ok(lab, j + 1) and nxt[q2] for _, q2, lab in out[q]) for q in range(n)]
        q, word, path = start, [], [start]

        def step(pred):
            nonlocal q
            for letter, q2, lab in out[q]:
                if pred(q2, lab):
                    word.append(letter)
                    path.append(q2)
                    q = q2
                    return
            raise AssertionError("greedy path lost its way")

        for j in range(p - 1):
            step(lambda q2, lab, j=j: ok(lab, j + 1) and can[j + 1][q2])
        step(lambda q2, lab: lab is Label.GOOD and alive[p][q2])
        for j in range(p, bound):
            step(lambda q2, lab, j=j: ok(lab, j + 1) and alive[j + 1][q2])
        for j in range(bound):
            lab = aut.transitions[(aut.states[path[j]], word[j])][1]
            if lab is Label.GOOD:
                won[j + 1] = True
        rows.append(BoundedRow(tuple(word), tuple(aut.states[i] for i in path)))
    return rows


# -- certificates -------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    f: tuple
    g: tuple
    k: int
    l: int
    witness_f: WitnessTable
    witness_g: WitnessTable
    fg_table: tuple
    gg_table: tuple


def window_table(rows: Sequence[BoundedRow], first: int, last: int) -> WitnessTable:
    seen = dict.fromkeys((r.states[first:last + 1], r.word[first:last]) for r in rows)
    return WitnessTable(tuple(s for s, _ in seen), tuple(w for _, w in seen))


def certificate_from_rows(rows: Sequence[BoundedRow], max_column: Optional[int] = None) -> Optional[Certificate]:
    """Look for columns ``k < l < m`` of a winning bounded play such that
    windows ``(0,k)`` and ``(0,l)`` agree, windows ``(k,l)``, ``(l,m)`` and
    ``(k,m)`` agree, and that common window is omega-iterable.

    Every column is won by the rows, so each window lies in the closure,
    and the column triples witness both products.
    """
    if not rows:
        return None
    cols = list(zip(*(r.states for r in rows)))
    width = len(cols) - 1 if max_column is None else min(max_column, len(cols) - 1)
    init = [reduce(zip(cols[0], cols[k])) for k in range(width + 1)]
    cache = {}

    def window(k, l):
        key = (k, l)
        if key not in cache:
            cache[key] = reduce(zip(cols[k], cols[l]))
        return cache[key]

    for m in range(3, width + 1):
        for l in range(2, m):
            g = window(l, m)
            if not is_omega_iterable(g):
                continue
            for k in range(1, l):
                if init[k] != init[l] or window(k, l) != g or window(k, m) != g:
                    continue
                f = init[k]
                return Certificate(
                    f,
                    g,
                    k,
                    l - k,
                    window_table(rows, 0, k),
                    window_table(rows, k, l),
                    reduce(zip(cols[0], cols[k], cols[l])),
                    reduce(zip(cols[k], cols[l], cols[m])),
                )
    return None


@dataclass
class Check:
    ok: bool
    reason: str = "ok"

    def __bool__(self):
        return self.ok


def _replays(aut: LabelledAutomaton, table: WitnessTable, width: int) -> bool:
    if table.letters is None or table.width != width + 1 or not table.check_letters(aut):
        return False
    w = zeros(width)
    for row, word in zip(table.rows, table.letters):
        w = apply_move(aut, w, row[0], word)
        if isinstance(w, Loss):
            return False
    return w == ones(width)


def verify_certificate(aut: LabelledAutomaton, cert: Certificate) -> Check:
    """Re-check every condition from scratch; the reason names the first failure."""
    f, g = tuple(cert.f), tuple(cert.g)
    if not is_initial(f, aut.initial):
        return Check(False, "f-not-initial")
    if not is_omega_iterable(g):
        return Check(False, "g-not-omega-iterable")
    if not (ends(f) == starts(g) == ends(g)):
        return Check(False, "interface-order")
    if not check_triples(f, g, f, cert.fg_table) or is_product(f, g, f) is None:
        return Check(False, "fg-product")
    if not check_triples(g, g, g, cert.gg_table) or is_product(g, g, g) is None:
        return Check(False, "gg-product")
    if cert.k < 1 or cert.witness_f.frontier() != f or not _replays(aut, cert.witness_f, cert.k):
        return Check(False, "f-witness")
    if cert.l < 1 or cert.witness_g.frontier() != g or not _replays(aut, cert.witness_g, cert.l):
        return Check(False, "g-witness")
    return Check(True)


# -- verdicts -----------------------------------------------------------------------

YES, NO, INCONCLUSIVE = "YES", "NO", "INCONCLUSIVE"


@dataclass
class Verdict:
    kind: str
    method: str
    certificate: Optional[Certificate] = None
    blocked: Optional[PositionSet] = None
    bound: Optional[int] = None
    stats: dict = field(default_factory=dict)

    @property
    def is_yes(self) -> bool:
        return self.kind == YES


def _closure_search(aut: LabelledAutomaton, caps: Caps, stats: dict):
    """Closure with certificate detection as entries arrive."""
    initial_by_end = {}
    iterable_by_order = {}
    counts = {"initial": 0, "omega": 0}
    found = []

    def try_pair(fe, ge):
        table = is_product(fe.frontier, ge.frontier, fe.frontier)
        if table is not None:
            found.append((fe, ge, table))
            return True
        return False

    def on_new(entry):
        h = entry.frontier
        if is_initial(h, aut.initial):
            counts["initial"] += 1
            initial_by_end.setdefault(ends(h), []).append(entry)
            for ge in iterable_by_order.get(ends(h), ()):
                if try_pair(entry, ge):
                    return True
        if is_omega_iterable(h) and starts(h) == ends(h):
            counts["omega"] += 1
            if is_product(h, h, h) is not None:
                iterable_by_order.setdefault(starts(h), []).append(entry)
                for fe in initial_by_end.get(starts(h), ()):
                    if try_pair(fe, entry):
                        return True
        return False

    closure = psi0plus_closure(aut, caps.max_frontiers, caps.time_limit, on_new)
    stats.update(closure.stats)
    stats.update(initial_frontiers=counts["initial"], omega_iterable_frontiers=counts["omega"])
    if found:
        fe, ge, fg = found[0]
        cert = Certificate(
            fe.frontier,
            ge.frontier,
            fe.depth,
            ge.depth,
            reconstruct_witness(fe, aut),
            reconstruct_witness(ge, aut),
            fg,
            is_product(ge.frontier, ge.frontier, ge.frontier),
        )
        return cert, closure
    return None, closure


def decide(aut: LabelledAutomaton, caps: Caps = Caps()) -> Verdict:
    clock = time.monotonic()
    stats: dict = {}

    def done(verdict):
        verdict.stats.update(stats, seconds=round(time.monotonic() - clock, 3))
        return verdict

    blocked = never_winnable(aut, caps.refute_rounds, caps.refute_steps) if caps.refute else None
    if blocked is not None:
        return done(Verdict(NO, "never-winnable positions", blocked=blocked))

    for bound in caps.trace_bounds if caps.windows else ():
        rows = greedy_rows(aut, bound)
        if rows is None:
            return done(Verdict(NO, "bounded game lost", bound=bound))
        cert = certificate_from_rows(rows)
        if cert is not None and verify_certificate(aut, cert):
            stats["trace_bound"] = bound
            return done(Verdict(YES, "windows of a bounded play", certificate=cert))

    cert, closure = _closure_search(aut, caps, stats)
    if cert is not None:
        check = verify_certificate(aut, cert)
        if not check:
            raise AssertionError(f"closure produced a bad certificate: {check.reason}")
        return done(Verdict(YES, "closure", certificate=cert))
    if closure.complete:
        return done(Verdict(NO, "complete closure"))
    return done(Verdict(INCONCLUSIVE, f"closure cap ({closure.cap})"))


def explain(verdict: Verdict) -> str:
    lines = [f"verdict: {verdict.kind}", f"method: {verdict.method}"]
    cert = verdict.certificate
    if cert is not None:
        lines += [
            f"f: {format_frontier(cert.f)}  (depth {cert.k})",
            f"g: {format_frontier(cert.g)}  (depth {cert.l})",
        ]
    if verdict.blocked is not None:
        lines.append(f"never won: {verdict.blocked}")
    if verdict.bound is not None:
        lines.append(f"lost bounded game at bound {verdict.bound}")
    for key in sorted(verdict.stats):
        lines.append(f"{key}: {verdict.stats[key]}")
    return "\n".join(lines) + "\n"


# -- text form -----------------------------------------------------------------------


def _format_row(states, letters) -> str:
    parts = [states[0]]
    for letter, state in zip(letters, states[1:]):
        parts += [letter, state]
    return " ".join(parts)


def format_certificate(cert: Certificate) -> str:
    lines = [
        f"f: {format_frontier(cert.f)}",
        f"g: {format_frontier(cert.g)}",
        f"k: {cert.k}",
        f"l: {cert.l}",
    ]
    lines += [f"f-row: {_format_row(s, w)}" for s, w in zip(cert.witness_f.rows, cert.witness_f.letters)]
    lines += [f"g-row: {_format_row(s, w)}" for s, w in zip(cert.witness_g.rows, cert.witness_g.letters)]
    lines += [f"fg: {' '.join(t)}" for t in cert.fg_table]
    lines += [f"gg: {' '.join(t)}" for t in cert.gg_table]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    fields = {"f-row": [], "g-row": [], "fg": [], "gg": []}
    single = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise FrontierError(f"line {lineno}: expected '<key>: ...'")
        if key in fields:
            fields[key].append(rest.split())
        elif key in ("f", "g", "k", "l"):
            single[key] = rest.strip()
        else:
            raise FrontierError(f"line {lineno}: unknown key {key!r}")
    missing = {"f", "g", "k", "l"} - set(single)
    if missing:
        raise FrontierError(f"certificate lacks {', '.join(sorted(missing))}")

    def table(rows):
        if not rows or any(len(r) % 2 == 0 for r in rows):
            raise FrontierError("rows alternate states and letters and start with a state")
        return WitnessTable(tuple(tuple(r[0::2]) for r in rows), tuple(tuple(r[1::2]) for r in rows))

    def triples(rows):
        if any(len(r) != 3 for r in rows):
            raise FrontierError("triple lines need three states")
        return tuple(tuple(r) for r in rows)

    return Certificate(
        parse_frontier(single["f"]),
        parse_frontier(single["g"]),
        int(single["k"]),
        int(single["l"]),
        table(fields["f-row"]),
        table(fields["g-row"]),
        triples(fields["fg"]),
        triples(fields["gg"]),
    )
