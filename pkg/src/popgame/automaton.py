"""Labelled deterministic automata: model, text format, execution."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


class Label(enum.IntEnum):
    """Transition label. The integer order is the canonical one."""

    NEUTRAL = 0
    GOOD = 1
    BAD = 2

    @property
    def mark(self) -> str:
        return {Label.NEUTRAL: "-", Label.GOOD: "+", Label.BAD: "x"}[self]


class PairClass(enum.Enum):
    """Which transitions may realize a state pair."""

    NEUTRAL_ONLY = "neutral"
    GOOD = "good"
    ANY = "any"


class AutomatonError(ValueError):
    """Raised when an automaton violates a structural invariant."""


class ParseError(AutomatonError):
    """Automaton text could not be read.

    ``kind`` is one of ``syntax``, ``duplicate``, ``unknown`` or
    ``missing-init``.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0, kind: str = "syntax"):
        self.line = line
        self.column = column
        self.kind = kind
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True, eq=False)
class LabelledAutomaton:
    """Deterministic, possibly partial automaton whose transitions carry labels.

    ``transitions`` maps ``(state, letter)`` to ``(target, Label)``.  States
    keep their declaration order; letters are kept sorted.
    """

    states: tuple
    initial: str
    alphabet: tuple
    transitions: Mapping = field(repr=False)

    def __post_init__(self):
        states = tuple(self.states)
        if len(set(states)) != len(states):
            raise AutomatonError("repeated state identifier")
        letters = tuple(sorted(set(self.alphabet)))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", letters)
        if self.initial not in states:
            raise AutomatonError(f"initial state {self.initial!r} is not declared")
        state_set, letter_set = set(states), set(letters)
        table = {}
        for (src, letter), (dst, label) in dict(self.transitions).items():
            if src not in state_set or dst not in state_set:
                raise AutomatonError(f"transition {src} {letter} -> {dst} uses an unknown state")
            if letter not in letter_set:
                raise AutomatonError(f"transition {src} {letter} uses an unknown letter")
            table[(src, letter)] = (dst, Label(label))
        object.__setattr__(self, "transitions", table)
        index = {q: i for i, q in enumerate(states)}
        object.__setattr__(self, "_index", index)
        # per-state outgoing edges, letters in alphabet order
        out = {q: [] for q in states}
        for letter in letters:
            for q in states:
                hit = table.get((q, letter))
                if hit is not None:
                    out[q].append((letter, hit[0], hit[1]))
        object.__setattr__(self, "_out", {q: tuple(v) for q, v in out.items()})

    # -- basic queries -------------------------------------------------
    def step(self, q: str, letter: str) -> Optional[tuple]:
        """Return ``(target, label)`` or None when undefined."""
        return self.transitions.get((q, letter))

    def edges(self, q: str) -> tuple:
        """Outgoing ``(letter, target, label)`` triples of ``q``."""
        return self._out[q]

    def state_index(self, q: str) -> int:
        return self._index[q]

    def __eq__(self, other):
        if not isinstance(other, LabelledAutomaton):
            return NotImplemented
        return (
            self.states == other.states
            and self.initial == other.initial
            and self.alphabet == other.alphabet
            and self.transitions == other.transitions
        )

    def __hash__(self):
        return hash((self.states, self.initial, self.alphabet, frozenset(self.transitions.items())))

    def __repr__(self):
        return (
            f"LabelledAutomaton(states={len(self.states)}, letters={len(self.alphabet)}, "
            f"transitions={len(self.transitions)}, initial={self.initial!r})"
        )


def run(aut: LabelledAutomaton, q: str, word: Sequence[str]) -> Optional[tuple]:
    """Read ``word`` from ``q``; return ``(state, label of last step)`` or None."""
    if len(word) == 0:
        raise ValueError("run needs a nonempty word")
    label = None
    for letter in word:
        hit = aut.transitions.get((q, letter))
        if hit is None:
            return None
        q, label = hit
    return q, label


def trace(aut: LabelledAutomaton, q: str, word: Sequence[str]) -> Optional[list]:
    """States and labels along ``word``: ``[(state, label), ...]`` after each letter."""
    out = []
    for letter in word:
        hit = aut.transitions.get((q, letter))
        if hit is None:
            return None
        q = hit[0]
        out.append(hit)
    return out


def pairs_by_class(aut: LabelledAutomaton, cls: PairClass) -> dict:
    """Map each realizable state pair of the class to its first witnessing letter."""
    cls = PairClass(cls)
    found = {}
    for q in aut.states:
        for letter, dst, label in aut.edges(q):
            if cls is PairClass.GOOD and label is not Label.GOOD:
                continue
            if cls is PairClass.NEUTRAL_ONLY and label is not Label.NEUTRAL:
                continue
            found.setdefault((q, dst), letter)
    return found


def pair_letters(aut: LabelledAutomaton) -> dict:
    """Map every realizable pair to ``{label: first letter}``."""
    found = {}
    for q in aut.states:
        for letter, dst, label in aut.edges(q):
            found.setdefault((q, dst), {}).setdefault(label, letter)
    return found


# -- text format -------------------------------------------------------

_TOKEN = re.compile(r"\S+")
_KEYS = ("states", "init", "alphabet", "trans")


def _tokens(line: str):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def parse(text: str) -> LabelledAutomaton:
    """Read the line-oriented automaton format.

    ``alphabet:`` is optional; when absent the letters used by transitions
    form the alphabet.  ``states:`` and ``init:`` are required.
    """
    states: list = []
    alphabet: Optional[list] = None
    initial = None
    init_pos = (0, 0)
    trans_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, sep, rest = line.partition(":")
        key = head.strip()
        col = len(head) - len(head.lstrip()) + 1
        if not sep or key not in _KEYS or " " in key:
            raise ParseError(f"expected one of {', '.join(k + ':' for k in _KEYS)}", lineno, col)
        offset = len(head) + 1
        toks = [(t, c + offset) for t, c in _tokens(rest)]
        if key == "states":
            for tok, c in toks:
                if tok in states:
                    raise ParseError(f"state {tok!r} declared twice", lineno, c, "duplicate")
                states.append(tok)
        elif key == "alphabet":
            alphabet = alphabet or []
            for tok, c in toks:
                if tok in alphabet:
                    raise ParseError(f"letter {tok!r} declared twice", lineno, c, "duplicate")
                alphabet.append(tok)
        elif key == "init":
            if len(toks) != 1:
                raise ParseError("init takes exactly one state", lineno, offset + 1)
            if initial is not None:
                raise ParseError("init declared twice", lineno, toks[0][1], "duplicate")
            initial = toks[0][0]
            init_pos = (lineno, toks[0][1])
        else:
            if len(toks) != 4:
                raise ParseError("trans takes <src> <letter> <GOOD|NEUTRAL|BAD> <dst>", lineno, offset + 1)
            trans_lines.append((lineno, toks))
    if initial is None:
        raise ParseError("missing init declaration", kind="missing-init")
    if initial not in states:
        raise ParseError(f"unknown initial state {initial!r}", *init_pos, kind="unknown")
    used_letters = []
    table = {}
    known = set(states)
    for lineno, toks in trans_lines:
        (src, c1), (letter, c2), (lab, c3), (dst, c4) = toks
        if src not in known:
            raise ParseError(f"unknown state {src!r}", lineno, c1, "unknown")
        if dst not in known:
            raise ParseError(f"unknown state {dst!r}", lineno, c4, "unknown")
        if alphabet is not None and letter not in alphabet:
            raise ParseError(f"unknown letter {letter!r}", lineno, c2, "unknown")
        try:
            label = Label[lab]
        except KeyError:
            raise ParseError(f"bad label {lab!r}", lineno, c3) from None
        if (src, letter) in table:
            raise ParseError(f"second transition for ({src}, {letter})", lineno, c1, "duplicate")
        table[(src, letter)] = (dst, label)
        if letter not in used_letters:
            used_letters.append(letter)
    letters = alphabet if alphabet is not None else used_letters
    return LabelledAutomaton(tuple(states), initial, tuple(letters), table)


def serialize(aut: LabelledAutomaton) -> str:
    """Canonical text.  The alphabet line is written only when some letter is unused."""
    lines = [f"states: {' '.join(aut.states)}", f"init: {aut.initial}"]
    used = {letter for (_, letter) in aut.transitions}
    if used != set(aut.alphabet):
        lines.append(f"alphabet: {' '.join(aut.alphabet)}")
    for q in aut.states:
        for letter, dst, label in aut.edges(q):
            lines.append(f"trans: {q} {letter} {label.name} {dst}")
    return "\n".join(lines) + "\n"


def build(states: Iterable[str], initial: str, edges: Iterable[tuple]) -> LabelledAutomaton:
    """Convenience constructor from ``(src, letter, label, dst)`` tuples."""
    table = {}
    letters = []
    for src, letter, label, dst in edges:
        if (src, letter) in table:
            raise AutomatonError(f"second transition for ({src}, {letter})")
        table[(src, letter)] = (dst, Label[label] if isinstance(label, str) else Label(label))
        letters.append(letter)
    return LabelledAutomaton(tuple(states), initial, tuple(letters), table)
