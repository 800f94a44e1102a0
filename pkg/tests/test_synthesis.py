import dataclasses
import random

import pytest

from popgame import instances
from popgame.decision import window_table, decide, greedy_rows
from popgame.frontiers import ends, starts
from popgame.morphism import psi0plus_closure, reconstruct_witness
from popgame.synthesis import (
    InvalidCertificate,
    OrderMismatch,
    Slice,
    SliceLoss,
    compose_slices,
    format_moves,
    parse_moves,
    slice_result,
    synthesize,
)
from popgame.winswords import LassoMove, Loss, Outcome, apply_lasso, play_sequence, state_grid, zeros

from test_frontiers import FIG5_GRID


def table_slice(table):
    return Slice(tuple((row[0], word) for row, word in zip(table.rows, table.letters)))


def test_slice_result(fig1):
    assert slice_result(fig1, Slice((("q0", "b"),))) == "1"
    assert slice_result(fig1, Slice((("q1", "a"), ("q0", "b"), ("q0", "a")))) == "1"
    with pytest.raises(SliceLoss):
        slice_result(fig1, Slice((("q0", "a"),)))


def test_slice_shape_checks():
    with pytest.raises(ValueError):
        Slice(())
    with pytest.raises(ValueError):
        Slice((("q0", "ab"), ("q0", "a")))


def test_compose_certificate_witnesses(fig1):
    cert = decide(fig1).certificate
    s = compose_slices(fig1, table_slice(cert.witness_f), table_slice(cert.witness_g))
    assert s.length == 2
    assert slice_result(fig1, s) == "11"
    assert s.start_order() == ("q0",)


def test_compose_with_neutral_extension(fig1):
    s = Slice((("q0", "b"),))
    extended = compose_slices(fig1, s, Slice((("q1", "a"),)))
    assert extended.rows == (("q0", ("b", "a")),)
    assert slice_result(fig1, extended) == "10"


def test_compose_mismatched_orders(fig1):
    s = Slice((("q0", "b"), ("q0", "a")))
    with pytest.raises(OrderMismatch):
        compose_slices(fig1, s, Slice((("q0", "a"), ("q1", "a"))))


def test_compose_infinite(fig1):
    s = compose_slices(fig1, Slice((("q0", "b"),)), Slice((("q1", LassoMove((), ("a",))),)))
    assert s.infinite
    assert slice_result(fig1, s, 4) == "1000"


def test_compose_keeps_results_on_closure_witnesses(fig1):
    closure = psi0plus_closure(fig1)
    pairs = 0
    for left in closure:
        for right in closure:
            if ends(left.frontier) != starts(right.frontier):
                continue
            pairs += 1
            s = table_slice(reconstruct_witness(left, fig1))
            t = table_slice(reconstruct_witness(right, fig1))
            glued = compose_slices(fig1, s, t)
            assert slice_result(fig1, glued) == slice_result(fig1, s) + slice_result(fig1, t)
            assert glued.end_order(fig1) == t.end_order(fig1)
    assert pairs > 5


def test_compose_keeps_results_on_play_windows():
    # windows of a winning play are closure members, and neighbours share an interface
    rng = random.Random(3)
    for aut in (instances.gen_fig5(), instances.gen_fig3(3, 4), instances.gen_fig3(2, 5)):
        rows = greedy_rows(aut, 24)
        for _ in range(50):
            a, b, c = sorted(rng.sample(range(25), 3))
            s = table_slice(window_table(rows, a, b))
            t = table_slice(window_table(rows, b, c))
            glued = compose_slices(aut, s, t)
            assert slice_result(aut, glued) == slice_result(aut, s) + slice_result(aut, t)
            assert glued.start_order() == s.start_order()
            assert glued.end_order(aut) == t.end_order(aut)


def test_fig1_staircase(fig1):
    moves = synthesize(fig1, decide(fig1).certificate, 3)
    assert [m.expand(3) for m in moves[:3]] == [("b", "a", "a"), ("a", "b", "a"), ("a", "a", "b")]
    result = play_sequence(fig1, moves, 3)
    assert result.outcome is Outcome.WON


def test_fig5_staircase(fig5):
    moves = synthesize(fig5, decide(fig5).certificate, 8)
    assert play_sequence(fig5, moves, 8).trace[-1] == "1" * 8
    grid = [["q0"] + [q for q, _ in row] for row in state_grid(fig5, moves, 8)]
    assert [row[:7] for row in grid[:5]] == FIG5_GRID


def test_bound_one(fig1):
    moves = synthesize(fig1, decide(fig1).certificate, 1)
    assert play_sequence(fig1, moves, 1).outcome is Outcome.WON
    assert moves[0].expand(1) == ("b",)


def test_moves_never_lose_deeper_than_the_bound():
    for aut in (instances.gen_fig1(), instances.gen_fig5(), instances.gen_fig3(3, 4)):
        cert = decide(aut).certificate
        for bound in (1, 5, 12):
            w = zeros(4 * bound)
            for move in synthesize(aut, cert, bound):
                w = apply_lasso(aut, w, move)
                assert not isinstance(w, Loss)


def test_rejects_invalid_certificate(fig1):
    cert = decide(fig1).certificate
    broken = dataclasses.replace(cert, g=cert.g[::-1])
    with pytest.raises(InvalidCertificate):
        synthesize(fig1, broken, 3)
    with pytest.raises(ValueError):
        synthesize(fig1, cert, 0)


def test_move_text_round_trip(fig5):
    moves = synthesize(fig5, decide(fig5).certificate, 6)
    text = format_moves(moves)
    assert text.splitlines()[0].startswith("move: ")
    assert parse_moves(text) == moves
    assert parse_moves("move: (a)^w\n") == [LassoMove((), ("a",))]
    with pytest.raises(ValueError):
        parse_moves("move: a b\n")
