"""Decide the two-state example, print its certificate, then play the
synthesized strategy for six population sizes and show the state grid."""

from popgame import decide, instances, play_sequence, synthesize
from popgame.cli import render_grid
from popgame.decision import explain, format_certificate
from popgame.winswords import state_grid

aut = instances.gen_fig1()
verdict = decide(aut)
print(explain(verdict))
print(format_certificate(verdict.certificate))

bound = 6
moves = synthesize(aut, verdict.certificate, bound)
result = play_sequence(aut, moves, bound)
print(render_grid(result.trace, state_grid(aut, moves[: result.won_at], bound)))
print(f"won all {bound} sizes after {result.won_at} moves")
