"""Frontier sets of short wins words and the closure over all-zero words.

``psi0`` frontiers summarize one column in which some row wins: a prefix
of pairs realized by NEUTRAL letters, one pair realized by a GOOD letter,
then anything.  ``psi1`` frontiers summarize an arbitrary column.  The
closure collects every frontier of a window of columns that are all won.
"""

from __future__ import annotations

import itertools
import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .automaton import Label, LabelledAutomaton, pair_letters
from .frontiers import (
    WitnessTable,
    is_product,
    set_star,
    unify_product,
)


class CapExceeded(RuntimeError):
    """A resource cap stopped an exhaustive computation."""


# -- single columns --------------------------------------------------------

def _pair_classes(aut: LabelledAutomaton):
    letters = pair_letters(aut)
    good = [p for p, labs in letters.items() if Label.GOOD in labs]
    neutral = [p for p, labs in letters.items() if Label.NEUTRAL in labs and Label.GOOD not in labs]
    return letters, neutral, good, list(letters)


def _arrangements(pool: Sequence, max_len: Optional[int]) -> Iterator[tuple]:
    top = len(pool) if max_len is None else min(max_len, len(pool))
    for n in range(top + 1):
        yield from itertools.permutations(pool, n)


class Psi0Enumeration:
    """Iterable over ``(frontier, letters)`` for the one-column winning frontiers.

    The pivot is the first pair with a GOOD letter, so every frontier is
    produced once.  After iteration, ``truncated`` tells whether
    ``max_len`` cut off longer frontiers.
    """

    def __init__(self, aut: LabelledAutomaton, max_len: Optional[int] = None):
        self.aut = aut
        self.max_len = max_len
        self.truncated = False

    def __iter__(self):
        letters, neutral, good, every = _pair_classes(self.aut)
        if not good:
            return
        cap = self.max_len
        if cap is not None and cap < len(every):
            self.truncated = True
        for head in _arrangements(neutral, None if cap is None else cap - 1):
            used = set(head)
            for pivot in good:
                if pivot in used:
                    continue
                room = None if cap is None else cap - len(head) - 1
                rest = [p for p in every if p not in used and p != pivot]
                for tail in _arrangements(rest, room):
                    frontier = head + (pivot,) + tail
                    word = (
                        tuple(letters[p][Label.NEUTRAL] for p in head)
                        + (letters[pivot][Label.GOOD],)
                        + tuple(min(letters[p].values()) for p in tail)
                    )
                    yield frontier, word


def enum_psi0(aut: LabelledAutomaton, max_len: Optional[int] = None) -> Psi0Enumeration:
    return Psi0Enumeration(aut, max_len)


def enum_psi1(aut: LabelledAutomaton, max_len: Optional[int] = None) -> Iterator[tuple]:
    every = list(pair_letters(aut))
    for n in range(1, (len(every) if max_len is None else min(max_len, len(every))) + 1):
        yield from itertools.permutations(every, n)


def psi0_letters(aut: LabelledAutomaton, frontier: Sequence) -> Optional[tuple]:
    """One letter per pair showing ``frontier`` wins its column, or None."""
    letters = pair_letters(aut)
    word = []
    pivot_seen = False
    for pair in frontier:
        labs = letters.get(tuple(pair))
        if labs is None:
            return None
        if pivot_seen:
            word.append(min(labs.values()))
        elif Label.GOOD in labs:
            word.append(labs[Label.GOOD])
            pivot_seen = True
        elif Label.NEUTRAL in labs:
            word.append(labs[Label.NEUTRAL])
        else:
            return None
    return tuple(word) if pivot_seen else None


def psi_of_word(aut: LabelledAutomaton, word: str, max_size: Optional[int] = None, cache=None) -> set:
    """Frontier set of a 0/1 word, as the product of its letters' sets.

    ``cache`` is an optional dict reused across calls to memoize the
    products of frontier pairs.
    """
    if not word or set(word) - {"0", "1"}:
        raise ValueError(f"expected a nonempty word over 0/1, got {word!r}")
    base = {}
    for bit in set(word):
        if bit == "0":
            base[bit] = {f for f, _ in enum_psi0(aut)}
        else:
            base[bit] = set(enum_psi1(aut))
    current = base[word[0]]
    for bit in word[1:]:
        current = set_star(current, base[bit], cache=cache)
        if max_size is not None and len(current) > max_size:
            raise CapExceeded(f"frontier set grew past {max_size}")
    return set(current)


# -- one more winning column -------------------------------------------------

def successor_search(aut: LabelledAutomaton):
    """Build ``succ(h)``: every ``h'`` with ``h * g -> h'`` for a one-column
    winning ``g``, mapped to one such ``g``.

    The search extends ``h`` and ``g`` together, triple by triple, so the
    (large) set of one-column frontiers is never listed.  A new pair of
    ``g`` that has a GOOD letter becomes the pivot when none was placed
    yet: as a pivot it allows every later pair, so nothing is lost.
    """
    letters = pair_letters(aut)
    out = defaultdict(list)
    for (y, z), labs in letters.items():
        out[y].append((z, Label.GOOD in labs, Label.NEUTRAL in labs))

    def succ(h: Sequence) -> dict:
        h = tuple(h)
        nh = len(h)
        found = {}
        seen = set()
        stack = [(0, (), False, ())]
        while stack:
            state = stack.pop()
            if state in seen:
                continue
            seen.add(state)
            i, gp, won, hp = state
            if i == nh and won and hp not in found:
                found[hp] = gp
            g_used = set(gp)
            h_used = set(hp)
            for a in range(min(i + 1, nh)):
                x, y = h[a]
                ni = i + 1 if a == i else i
                for z, has_good, has_neutral in out[y]:
                    pair = (y, z)
                    if pair in g_used:
                        ngp, nwon = gp, won
                    elif won or has_good:
                        ngp, nwon = gp + (pair,), True
                    elif has_neutral:
                        ngp, nwon = gp + (pair,), False
                    else:
                        continue
                    fresh = (x, z) not in h_used
                    if not fresh and ni == i and ngp is gp:
                        continue
                    stack.append((ni, ngp, nwon, hp + ((x, z),) if fresh else hp))
        return found

    return succ


# -- closure -------------------------------------------------------------------

@dataclass(eq=False)
class ProvenancedFrontier:
    """A closure member with the first way it was found.

    Depth-1 entries carry ``letters``; deeper entries point at the entry
    they extend and the one-column frontier used.
    """

    frontier: tuple
    depth: int
    parent: Optional["ProvenancedFrontier"] = None
    generator: Optional[tuple] = None
    letters: Optional[tuple] = None

    def chain(self) -> list:
        out, node = [], self
        while node is not None:
            out.append(node)
            node = node.parent
        return out[::-1]


@dataclass
class Closure:
    entries: dict = field(default_factory=dict)
    complete: bool = False
    stopped: bool = False
    cap: Optional[str] = None
    stats: dict = field(default_factory=dict)

    def __contains__(self, frontier) -> bool:
        return tuple(frontier) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def get(self, frontier) -> Optional[ProvenancedFrontier]:
        return self.entries.get(tuple(frontier))


def psi0plus_closure(
    aut: LabelledAutomaton,
    max_frontiers: Optional[int] = 10**6,
    time_limit: Optional[float] = None,
    on_new: Optional[Callable[[ProvenancedFrontier], bool]] = None,
) -> Closure:
    """Breadth-first closure of the one-column frontiers under one more column.

    ``on_new`` sees each new entry; returning True stops the search (the
    closure is then marked ``stopped`` and not complete).
    """
    clock = time.monotonic()
    result = Closure()
    entries = result.entries
    queue = deque()

    def admit(entry) -> bool:
        entries[entry.frontier] = entry
        queue.append(entry)
        if on_new is not None and on_new(entry):
            result.stopped = True
            return False
        if max_frontiers is not None and len(entries) >= max_frontiers:
            result.cap = "frontiers"
            return False
        if time_limit is not None and time.monotonic() - clock > time_limit:
            result.cap = "time"
            return False
        return True

    def finish(complete: bool) -> Closure:
        result.complete = complete
        result.stats.update(
            frontiers=len(entries),
            one_column=sum(1 for e in entries.values() if e.depth == 1),
            max_depth=max((e.depth for e in entries.values()), default=0),
            seconds=round(time.monotonic() - clock, 3),
        )
        return result

    for frontier, letters in enum_psi0(aut):
        if not admit(ProvenancedFrontier(frontier, 1, letters=letters)):
            return finish(False)
    succ = successor_search(aut)
    while queue:
        entry = queue.popleft()
        for frontier, gen in succ(entry.frontier).items():
            if frontier in entries:
                continue
            if not admit(ProvenancedFrontier(frontier, entry.depth + 1, entry, gen)):
                return finish(False)
    return finish(True)


class ProvenanceError(ValueError):
    pass


def reconstruct_witness(entry: ProvenancedFrontier, aut: LabelledAutomaton) -> WitnessTable:
    """A lettered table of width ``depth + 1`` whose rows win every column."""
    chain = entry.chain()
    root = chain[0]
    if root.depth != 1 or root.letters is None:
        raise ProvenanceError("chain does not start at a one-column entry")
    table = WitnessTable(tuple(root.frontier), tuple((a,) for a in root.letters))
    for prev, node in zip(chain, chain[1:]):
        if node.depth != prev.depth + 1 or node.generator is None:
            raise ProvenanceError(f"broken link at depth {node.depth}")
        gen_letters = psi0_letters(aut, node.generator)
        if gen_letters is None:
            raise ProvenanceError("generator does not win its column")
        triples = is_product(prev.frontier, node.generator, node.frontier)
        if triples is None:
            raise ProvenanceError(f"no product reaches the frontier at depth {node.depth}")
        column = WitnessTable(tuple(node.generator), tuple((a,) for a in gen_letters))
        table = unify_product(table, column, triples)
    return table
