"""Games built from unary NFAs and from bounded-tape machines, decided and
compared with the direct answer."""

import random

from popgame import decide, instances

rng = random.Random(0)
agree = 0
for _ in range(20):
    states = tuple(f"s{i}" for i in range(rng.randint(1, 4)))
    nfa = instances.UnaryNFA(
        states,
        "s0",
        [s for s in states if rng.random() < 0.7],
        [(x, y) for x in states for y in states if rng.random() < 0.35],
    )
    verdict = decide(instances.gen_from_unary_nfa(nfa))
    agree += (verdict.kind == "YES") == instances.nfa_universal(nfa)
print(f"unary NFAs: {agree}/20 verdicts match universality")

for name in ("halting_dtm", "looping_dtm", "stepping_dtm"):
    machine = getattr(instances, name)()
    for n in (1, 2):
        aut = instances.gen_from_dtm(machine, n)
        verdict = decide(aut)
        accepted = instances.run_dtm(machine, n).accepted
        print(f"{name} on {n} cells: accepts={accepted} verdict={verdict.kind} "
              f"({len(aut.states)} states, {verdict.method})")
