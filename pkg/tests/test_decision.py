import dataclasses
import random

import pytest

from popgame import instances
from popgame.automaton import LabelledAutomaton, build
from popgame.decision import (
    INCONCLUSIVE,
    NO,
    YES,
    Caps,
    PositionSet,
    certificate_from_rows,
    check_never_winnable,
    decide,
    explain,
    format_certificate,
    good_positions,
    greedy_rows,
    never_winnable,
    parse_certificate,
    verify_certificate,
)
from popgame.frontiers import WitnessTable
from popgame.oracle import bounded_solve

from helpers import random_automaton

F1 = (("q0", "q1"), ("q0", "q0"))
G1 = (("q1", "q1"), ("q0", "q1"), ("q0", "q0"))
CLOSURE_ONLY = Caps(refute=False, windows=False, max_frontiers=5000, time_limit=3)


def test_fig1_certificate(fig1):
    verdict = decide(fig1)
    assert verdict.kind == YES
    cert = verdict.certificate
    assert (cert.f, cert.g, cert.k, cert.l) == (F1, G1, 1, 1)
    assert verify_certificate(fig1, cert)


def test_fig5_certificate(fig5):
    cert = decide(fig5).certificate
    assert cert.f == (("q0", "q2"), ("q0", "q4"), ("q0", "q3"))
    assert cert.g == (("q2", "q2"), ("q4", "q4"), ("q3", "q4"), ("q3", "q3"))
    assert verify_certificate(fig5, cert)


def test_coprime_examples():
    assert decide(instances.gen_fig3(2, 3)).kind == YES
    verdict = decide(instances.gen_fig3(2, 4))
    assert verdict.kind == NO
    assert verdict.blocked == PositionSet((), (False, True))


def test_closure_engine_alone(fig1):
    verdict = decide(fig1, CLOSURE_ONLY)
    assert verdict.kind == YES and verdict.method == "closure"
    assert verify_certificate(fig1, verdict.certificate)


def test_complete_closure_gives_no():
    aut = build(["p", "r"], "p", [("p", "a", "NEUTRAL", "r"), ("r", "a", "BAD", "p")])
    verdict = decide(aut, CLOSURE_ONLY)
    assert verdict.kind == NO and verdict.method == "complete closure"


def test_cap_gives_inconclusive():
    verdict = decide(instances.gen_fig7(), dataclasses.replace(CLOSURE_ONLY, max_frontiers=50))
    assert verdict.kind == INCONCLUSIVE
    assert "cap" in explain(verdict)


def test_perturbed_certificates_fail(fig1):
    cert = decide(fig1).certificate
    swapped = dataclasses.replace(cert, g=(G1[1], G1[0], G1[2]))
    assert not verify_certificate(fig1, swapped)
    rows = cert.witness_g
    bad_letters = WitnessTable(rows.rows, (("b",),) + rows.letters[1:])
    check = verify_certificate(fig1, dataclasses.replace(cert, witness_g=bad_letters))
    assert not check and check.reason == "g-witness"
    check = verify_certificate(fig1, dataclasses.replace(cert, fg_table=cert.fg_table[:1]))
    assert check.reason == "fg-product"
    check = verify_certificate(fig1, dataclasses.replace(cert, f=(("q1", "q1"),)))
    assert check.reason == "f-not-initial"


def test_certificate_text_round_trip(fig1, fig5):
    for aut in (fig1, fig5, instances.gen_fig3(3, 4)):
        cert = decide(aut).certificate
        again = parse_certificate(format_certificate(cert))
        assert again == cert
        assert verify_certificate(aut, again)


def test_explain():
    yes = explain(decide(instances.gen_fig1()))
    assert "verdict: YES" in yes and "[(q0,q1),(q0,q0)]" in yes and "depth 1" in yes
    no = explain(decide(instances.gen_fig7()))
    assert "verdict: NO" in no and "never won" in no
    aut = build(["p"], "p", [("p", "a", "BAD", "p")])
    closed = explain(decide(aut, CLOSURE_ONLY))
    assert "frontiers: 0" in closed


def test_position_sets():
    evens = PositionSet((False, True, False, True), (False, True))
    assert evens == PositionSet((), (False, True))
    assert 4 in evens and 5 not in evens
    assert str(evens) == "{2, 4, 6, ... (period 2)}"
    assert str(PositionSet((True,), (False,))) == "{1}"
    thirds = PositionSet((), (False, False, True))
    assert evens.minus(thirds).members(12) == [2, 4, 8, 10]
    assert PositionSet((True,), (False,)).minus(PositionSet((), (True,))).is_empty()


def test_good_positions_on_fig1(fig1):
    # with nothing won, only the first GOOD edge is usable
    assert good_positions(fig1, PositionSet((), (True,))) == PositionSet((True,), (False,))
    # once position 1 may take a BAD edge, one loop reaches position 2
    assert good_positions(fig1, PositionSet((False,), (True,))).members(5) == [1, 2]


def test_never_winnable():
    assert never_winnable(instances.gen_fig7()) == PositionSet((), (True,))
    assert never_winnable(instances.gen_fig1()) is None
    blocked = never_winnable(instances.gen_fig3(3, 3))
    assert blocked.members(9) == [2, 3, 5, 6, 8, 9]
    assert check_never_winnable(instances.gen_fig3(3, 3), blocked)
    assert not check_never_winnable(instances.gen_fig3(3, 4), blocked)


def test_greedy_rows_match_bounded_game():
    rng = random.Random(8)
    for _ in range(300):
        aut = random_automaton(rng, n_states=rng.randint(1, 3), density=rng.uniform(0.5, 1))
        bound = rng.randint(1, 5)
        rows = greedy_rows(aut, bound)
        assert (rows is not None) == bounded_solve(aut, bound).winnable


def test_window_search_on_fig1_rows(fig1):
    rows = greedy_rows(fig1, 8)
    assert [r.word[:3] for r in rows[:3]] == [("b", "a", "a"), ("a", "b", "a"), ("a", "a", "b")]
    cert = certificate_from_rows(rows)
    assert verify_certificate(fig1, cert)


def test_refutations_are_sound_on_random_automata():
    rng = random.Random(12)
    for _ in range(150):
        aut = random_automaton(rng, n_states=rng.randint(1, 3), density=rng.uniform(0.5, 1))
        verdict = decide(aut)
        if verdict.blocked is not None:
            assert check_never_winnable(aut, verdict.blocked)
        if verdict.kind == YES:
            assert verify_certificate(aut, verdict.certificate)
            for bound in range(1, 6):
                assert bounded_solve(aut, bound).winnable
        if verdict.bound is not None:
            assert not bounded_solve(aut, verdict.bound).winnable


def test_verdict_ignores_state_order():
    rng = random.Random(21)
    for _ in range(60):
        aut = random_automaton(rng, n_states=3, density=rng.uniform(0.5, 1))
        states = list(aut.states)
        rng.shuffle(states)
        moved = LabelledAutomaton(tuple(states), aut.initial, aut.alphabet, aut.transitions)
        assert decide(aut).kind == decide(moved).kind


def test_fast_engines_agree_with_exact_closure():
    rng = random.Random(1)
    agreed = 0
    for _ in range(80):
        aut = random_automaton(rng, n_states=rng.randint(1, 3), density=rng.uniform(0.5, 1))
        exact = decide(aut, CLOSURE_ONLY)
        if exact.kind != INCONCLUSIVE:
            assert decide(aut).kind == exact.kind
            agreed += 1
    assert agreed >= 60
