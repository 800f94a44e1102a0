"""Instance generators: the small worked automata, plus two reductions
(unary NFA universality, and termination of space-bounded Turing machines).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .automaton import Label, LabelledAutomaton, ParseError, build

# -- worked examples ---------------------------------------------------------


def gen_fig1() -> LabelledAutomaton:
    """Two states: a losing loop on ``a``, a winning exit on ``b``."""
    return build(
        ["q0", "q1"],
        "q0",
        [("q0", "a", "BAD", "q0"), ("q0", "b", "GOOD", "q1"), ("q1", "a", "NEUTRAL", "q1")],
    )


def gen_fig3(n1: int, n2: int) -> LabelledAutomaton:
    """Winnable for every population size iff ``gcd(n1, n2) == 1``.

    The upper cycle has ``n1`` states and wins sizes ``1 + k*n1``.  The
    lower branch waits on ``b``, wins with ``a`` and then walks a chain of
    ``n2`` states into a BAD edge ``n2`` positions later.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be positive")
    upper = [f"u{i}" for i in range(1, n1 + 1)]
    chain = [f"c{i}" for i in range(1, n2 + 1)]
    edges = [("init", "a", "GOOD", "u1"), ("init", "b", "NEUTRAL", "wait")]
    edges += [(upper[i], "a", "NEUTRAL", upper[i + 1]) for i in range(n1 - 1)]
    edges.append((upper[-1], "a", "GOOD", "u1"))
    edges += [("wait", "b", "NEUTRAL", "wait"), ("wait", "a", "GOOD", "c1")]
    edges += [(chain[i], "a", "NEUTRAL", chain[i + 1]) for i in range(n2 - 1)]
    edges += [(chain[-1], "a", "BAD", "sink"), ("sink", "a", "NEUTRAL", "sink")]
    return build(["init"] + upper + ["wait"] + chain + ["sink"], "init", edges)


def gen_fig5() -> LabelledAutomaton:
    return build(
        ["q0", "q1", "q2", "q3", "q4"],
        "q0",
        [
            ("q0", "a", "GOOD", "q1"),
            ("q0", "b", "NEUTRAL", "q3"),
            ("q1", "a", "NEUTRAL", "q2"),
            ("q2", "a", "GOOD", "q1"),
            ("q3", "a", "BAD", "q3"),
            ("q3", "b", "GOOD", "q4"),
            ("q4", "a", "NEUTRAL", "q4"),
        ],
    )


def gen_fig7() -> LabelledAutomaton:
    """Every GOOD edge is followed by a forced BAD one.

    Each finite truncation of the game can be won from the right end, but
    no first population size can ever be won for good.
    """
    return build(
        ["A", "B1", "B2", "B3", "C1"],
        "A",
        [
            ("A", "a", "NEUTRAL", "B1"),
            ("A", "b", "GOOD", "C1"),
            ("C1", "a", "BAD", "C1"),
            ("B1", "a", "NEUTRAL", "B1"),
            ("B1", "b", "GOOD", "B2"),
            ("B2", "a", "BAD", "B3"),
            ("B3", "a", "NEUTRAL", "B1"),
            ("B3", "b", "GOOD", "B2"),
        ],
    )


# -- unary NFA ---------------------------------------------------------------


@dataclass(frozen=True)
class UnaryNFA:
    states: tuple
    initial: str
    finals: frozenset
    edges: tuple  # (src, dst) pairs, all reading the single letter

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "edges", tuple(dict.fromkeys(tuple(e) for e in self.edges)))
        known = set(self.states)
        if self.initial not in known or not self.finals <= known:
            raise ValueError("initial and final states must be declared")
        if any(a not in known or b not in known for a, b in self.edges):
            raise ValueError("edge uses an undeclared state")


def nfa_universal(nfa: UnaryNFA) -> bool:
    """Whether every length is accepted, by iterating the reachable subsets."""
    succ = {q: set() for q in nfa.states}
    for a, b in nfa.edges:
        succ[a].add(b)
    current = frozenset([nfa.initial])
    seen = set()
    while current not in seen:
        if not current & nfa.finals:
            return False
        seen.add(current)
        current = frozenset(b for a in current for b in succ[a])
    return True


def _fresh(name: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    while name in taken:
        name += "_"
    return name


def gen_from_unary_nfa(nfa: UnaryNFA) -> LabelledAutomaton:
    """Edge ``i`` gets letter ``e<i>`` and a NEUTRAL label; every final
    state gets a GOOD edge into a fresh state that idles forever.

    A move wins population size ``p`` exactly when the NFA accepts the
    word of length ``p - 1``; nothing ever loses.
    """
    top = _fresh("top", nfa.states)
    edges = [(a, f"e{i}", "NEUTRAL", b) for i, (a, b) in enumerate(nfa.edges)]
    edges += [(q, "win", "GOOD", top) for q in nfa.states if q in nfa.finals]
    edges.append((top, "stay", "NEUTRAL", top))
    return build(list(nfa.states) + [top], nfa.initial, edges)


def parse_nfa(text: str) -> UnaryNFA:
    """Lines ``states:``, ``init:``, ``final:`` and repeated ``edge: <src> <dst>``."""
    states, finals, edges, initial = [], [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        toks = rest.split()
        key = key.strip()
        if not sep:
            raise ParseError("expected '<key>: ...'", lineno, 1)
        if key == "states":
            states += toks
        elif key == "init" and len(toks) == 1:
            initial = toks[0]
        elif key == "final":
            finals += toks
        elif key == "edge" and len(toks) == 2:
            edges.append(tuple(toks))
        else:
            raise ParseError(f"bad line for key {key!r}", lineno, 1)
    if initial is None:
        raise ParseError("missing init declaration", kind="missing-init")
    try:
        return UnaryNFA(tuple(states), initial, frozenset(finals), tuple(edges))
    except ValueError as err:
        raise ParseError(str(err), kind="unknown") from None


def format_nfa(nfa: UnaryNFA) -> str:
    lines = [f"states: {' '.join(nfa.states)}", f"init: {nfa.initial}"]
    lines.append("final: " + " ".join(q for q in nfa.states if q in nfa.finals))
    lines += [f"edge: {a} {b}" for a, b in nfa.edges]
    return "\n".join(lines) + "\n"


# -- space-bounded Turing machines ----------------------------------------------

SEP = "#"


@dataclass(frozen=True)
class BoundedDTM:
    """Deterministic one-tape machine; ``delta`` maps ``(state, letter)`` to
    ``(state, letter, "L" | "R")``.  The first tape letter is the blank."""

    states: tuple
    tape: tuple
    delta: dict = field(hash=False)
    initial: str = ""
    finals: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "tape", tuple(self.tape))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if not self.tape:
            raise ValueError("tape alphabet is empty")
        if self.initial not in self.states or not self.finals <= set(self.states):
            raise ValueError("initial and final states must be declared")
        for (s, a), (t, b, d) in self.delta.items():
            if s not in self.states or t not in self.states or a not in self.tape or b not in self.tape:
                raise ValueError(f"transition ({s}, {a}) uses an undeclared symbol")
            if d not in ("L", "R"):
                raise ValueError(f"direction must be L or R, got {d!r}")

    @property
    def blank(self) -> str:
        return self.tape[0]


@dataclass(frozen=True)
class DTMRun:
    configs: tuple  # each config is a tuple of cells: tape letters or (state, letter)
    accepted: bool
    halted: bool


def run_dtm(m: BoundedDTM, n: int, max_steps: int = 10_000) -> DTMRun:
    """Direct simulation on ``n`` cells.

    The run stops in a final state (accepting), on an undefined
    transition, or when the head would leave the tape (both rejecting).
    A repeated configuration means the run loops forever.
    """
    if n < 1:
        raise ValueError("space bound must be positive")
    tape = [m.blank] * n
    head, state = 0, m.initial
    configs, seen = [], set()
    for _ in range(max_steps):
        cells = tuple((state, a) if i == head else a for i, a in enumerate(tape))
        configs.append(cells)
        if state in m.finals:
            return DTMRun(tuple(configs), True, True)
        if cells in seen:
            return DTMRun(tuple(configs), False, False)
        seen.add(cells)
        step = m.delta.get((state, tape[head]))
        if step is None:
            return DTMRun(tuple(configs), False, True)
        nstate, letter, d = step
        nhead = head + (1 if d == "R" else -1)
        if not 0 <= nhead < n:
            return DTMRun(tuple(configs), False, True)
        tape[head] = letter
        head, state = nhead, nstate
    raise RuntimeError(f"no verdict within {max_steps} steps")


def cell_alphabet(m: BoundedDTM) -> tuple:
    """Separator, tape letters, then head cells; the index is the bit offset."""
    return (SEP,) + m.tape + tuple((s, a) for s in m.states for a in m.tape)


def _is_head(cell) -> bool:
    return isinstance(cell, tuple)


def _head_stays(m: BoundedDTM, cell, left, right) -> bool:
    state, letter = cell
    step = m.delta.get((state, letter))
    if state in m.finals or step is None:
        return True
    return (left if step[2] == "L" else right) == SEP


def next_cell(m: BoundedDTM, left, cell, right):
    """The cell below ``cell`` in the next configuration.

    Triples that never occur in a real run (two heads) map to the
    separator.
    """
    if sum(_is_head(c) for c in (left, cell, right)) > 1:
        return SEP
    if cell == SEP:
        return SEP
    if _is_head(cell):
        if _head_stays(m, cell, left, right):
            return cell
        return m.delta[cell][1]
    if left != SEP and _is_head(left):
        step = m.delta.get(left)
        if step is not None and step[2] == "R" and left[0] not in m.finals:
            return (step[0], cell)
    if right != SEP and _is_head(right):
        step = m.delta.get(right)
        if step is not None and step[2] == "L" and right[0] not in m.finals:
            return (step[0], cell)
    return cell


def run_word(m: BoundedDTM, n: int, length: int) -> list:
    """Separator-delimited configurations of the run, repeating the last
    one if it stops, cut to ``length`` cells."""
    run = run_dtm(m, n)
    configs = list(run.configs)
    if not run.halted:
        # the loop repeats from the first occurrence of the last configuration
        start = configs.index(configs[-1])
        cycle = configs[start:-1]
        configs = configs[:-1]
    else:
        cycle = [configs[-1]]
    out = [SEP]
    i = 0
    while len(out) < length:
        cfg = configs[i] if i < len(configs) else cycle[(i - len(configs)) % len(cycle)]
        out.extend(cfg)
        out.append(SEP)
        i += 1
    return out[:length]


class _Builder:
    def __init__(self):
        self.states = []
        self.edges = []
        self.counter = 0

    def state(self, name=None):
        if name is None:
            self.counter += 1
            name = f"t{self.counter}"
        self.states.append(name)
        return name

    def path(self, sources, first_letter, labels, end=None):
        """Walk ``labels`` from every state in ``sources`` (sharing the path)."""
        node = None
        for k, label in enumerate(labels):
            last = k == len(labels) - 1
            target = end if last and end is not None else self.state()
            if k == 0:
                for src in sources:
                    self.edges.append((src, first_letter, label, target))
            else:
                self.edges.append((node, "n", label, target))
            node = target
        return node


def gen_from_dtm(m: BoundedDTM, n: int) -> LabelledAutomaton:
    """Automaton whose population game is winnable iff the run on ``n``
    cells reaches a final state.

    Cell letters are written as one-hot blocks of ``len(cell_alphabet)``
    bits.  Branches from the start: write the first configuration; read
    three consecutive cells, skip to the cell one configuration later and
    write its successor; read a final head cell and win everything after
    it; write a full block of wins before a block that is already all won.
    All but the first branch may begin after any number of skipped blocks.
    """
    if n < 1:
        raise ValueError("space bound must be positive")
    gamma = cell_alphabet(m)
    width = len(gamma)
    index = {c: i for i, c in enumerate(gamma)}
    N, G, B = Label.NEUTRAL.name, Label.GOOD.name, Label.BAD.name

    def write(c):
        return [N] * index[c] + [G] + [N] * (width - index[c] - 1)

    def read(c):
        return [N] * index[c] + [B] + [N] * (width - index[c] - 1)

    bld = _Builder()
    start, block = bld.state("start"), bld.state("block")
    idle, allwin = bld.state("idle"), bld.state("allwin")
    bld.edges.append((idle, "n", N, idle))
    bld.edges.append((allwin, "n", G, allwin))
    heads = (start, block)

    bld.path(heads, "skip", [N] * width, end=block)

    first = [SEP, (m.initial, m.blank)] + [m.blank] * (n - 1) + [SEP]
    bld.path([start], "init", [lab for c in first for lab in write(c)], end=idle)

    writers = {}
    for c in gamma:
        entry = bld.state()
        writers[c] = entry
        labels = [N] * (width * (n - 1)) + write(c)
        # the entry state's single edge starts the skip-then-write path
        bld.path([entry], "n", labels, end=idle)
    level1 = {c1: bld.path(heads, f"r{index[c1]}", read(c1)) for c1 in gamma}
    level2 = {
        (c1, c2): bld.path([level1[c1]], f"r{index[c2]}", read(c2)) for c1 in gamma for c2 in gamma
    }
    for (c1, c2), node in level2.items():
        for c3 in gamma:
            bld.path([node], f"r{index[c3]}", read(c3), end=writers[next_cell(m, c1, c2, c3)])

    for s in sorted(m.finals, key=m.states.index):
        for a in m.tape:
            bld.path(heads, f"f{index[(s, a)]}", read((s, a)), end=allwin)

    bld.path(heads, "w", [G] * width + [B] * width, end=idle)
    return build(bld.states, start, bld.edges)


def parse_dtm(text: str) -> BoundedDTM:
    """Lines ``states:``, ``init:``, ``final:``, ``tape:`` (blank first) and
    repeated ``delta: <state> <letter> <state> <letter> <L|R>``."""
    states, finals, tape, delta, initial = [], [], [], {}, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key, toks = key.strip(), rest.split()
        if not sep:
            raise ParseError("expected '<key>: ...'", lineno, 1)
        if key == "states":
            states += toks
        elif key == "init" and len(toks) == 1:
            initial = toks[0]
        elif key == "final":
            finals += toks
        elif key == "tape":
            tape += toks
        elif key == "delta" and len(toks) == 5:
            s, a, t, b, d = toks
            if (s, a) in delta:
                raise ParseError(f"second transition for ({s}, {a})", lineno, 1, "duplicate")
            delta[(s, a)] = (t, b, d)
        else:
            raise ParseError(f"bad line for key {key!r}", lineno, 1)
    if initial is None:
        raise ParseError("missing init declaration", kind="missing-init")
    try:
        return BoundedDTM(tuple(states), tuple(tape), delta, initial, frozenset(finals))
    except ValueError as err:
        raise ParseError(str(err), kind="unknown") from None


def format_dtm(m: BoundedDTM) -> str:
    lines = [
        f"states: {' '.join(m.states)}",
        f"init: {m.initial}",
        "final: " + " ".join(s for s in m.states if s in m.finals),
        f"tape: {' '.join(m.tape)}",
    ]
    lines += [f"delta: {s} {a} {t} {b} {d}" for (s, a), (t, b, d) in m.delta.items()]
    return "\n".join(lines) + "\n"


def halting_dtm() -> BoundedDTM:
    """Starts in a final state."""
    return BoundedDTM(("s0",), ("b",), {}, "s0", frozenset(["s0"]))


def looping_dtm() -> BoundedDTM:
    """Bounces between two cells forever (stops at the edge of a one-cell
    tape); the final state is unreachable."""
    delta = {("s0", "b"): ("s1", "b", "R"), ("s1", "b"): ("s0", "b", "L")}
    return BoundedDTM(("s0", "s1", "acc"), ("b",), delta, "s0", frozenset(["acc"]))


def stepping_dtm() -> BoundedDTM:
    """Reaches its final state after one step to the right (needs two cells)."""
    delta = {("s0", "b"): ("acc", "b", "R")}
    return BoundedDTM(("s0", "acc"), ("b",), delta, "s0", frozenset(["acc"]))
