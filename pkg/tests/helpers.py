import itertools
import random

from popgame.automaton import Label, LabelledAutomaton

LABELS = (Label.NEUTRAL, Label.GOOD, Label.BAD)


def random_automaton(rng: random.Random, n_states=3, letters="ab", density=0.8) -> LabelledAutomaton:
    states = tuple(f"q{i}" for i in range(n_states))
    table = {}
    for q in states:
        for a in letters:
            if rng.random() < density:
                table[(q, a)] = (rng.choice(states), rng.choice(LABELS))
    return LabelledAutomaton(states, "q0", tuple(letters), table)


def all_automata(n_states, letters):
    """Every partial labelled automaton over the given states and letters."""
    states = tuple(f"q{i}" for i in range(n_states))
    slots = [(q, a) for q in states for a in letters]
    options = [None] + [(d, lab) for d in states for lab in LABELS]
    for choice in itertools.product(options, repeat=len(slots)):
        table = {slot: hit for slot, hit in zip(slots, choice) if hit is not None}
        yield LabelledAutomaton(states, "q0", tuple(letters), table)


def all_frontiers(states, max_len=None):
    pairs = [(x, y) for x in states for y in states]
    top = len(pairs) if max_len is None else max_len
    for n in range(1, top + 1):
        yield from itertools.permutations(pairs, n)


def random_frontier(rng, states, max_len):
    pairs = [(x, y) for x in states for y in states]
    return tuple(rng.sample(pairs, rng.randint(1, max_len)))
