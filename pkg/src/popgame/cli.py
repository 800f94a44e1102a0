"""Command-line front end.

Exit codes: 0 for YES or a won play, 1 for NO, unwinnable or a loss,
2 for an inconclusive run, 3 for usage and input errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import instances
from .automaton import AutomatonError, parse, serialize
from .decision import (
    INCONCLUSIVE,
    YES,
    Caps,
    decide,
    explain,
    format_certificate,
    parse_certificate,
    verify_certificate,
)
from .frontiers import FrontierError
from .oracle import UNWINNABLE, WINNABLE, bounded_solve
from .synthesis import format_moves, parse_moves, synthesize
from .winswords import Outcome, UndefinedPath, play_sequence, state_grid

EXIT_YES, EXIT_NO, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def render_grid(trace: Sequence[str], grid: Sequence[Sequence[tuple]]) -> str:
    """One line per move, one column per population size.

    Each cell is the state reached and the label mark of the transition
    into it; the wins word after the move closes the line.
    """
    width = max((len(row) for row in grid), default=0)
    cell = max([len(str(width))] + [len(q) + 1 for row in grid for q, _ in row])
    lines = ["move " + " ".join(str(c).rjust(cell) for c in range(1, width + 1))]
    for i, row in enumerate(grid, start=1):
        cells = [(q + lab.mark).rjust(cell) for q, lab in row]
        cells += ["?".rjust(cell)] * (width - len(row))
        tail = f"  {trace[i]}" if i < len(trace) else ""
        lines.append(f"{i:>4} " + " ".join(cells) + tail)
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _load_automaton(path: str):
    return parse(_read(path))


def cmd_decide(args) -> int:
    aut = _load_automaton(args.file)
    caps = Caps(max_frontiers=args.cap, time_limit=args.time_limit)
    verdict = decide(aut, caps)
    out = explain(verdict)
    if verdict.certificate is not None:
        text = format_certificate(verdict.certificate)
        if args.cert_out:
            _write(args.cert_out, text)
        else:
            out += "\n" + text
    sys.stdout.write(out)
    if verdict.kind == YES:
        return EXIT_YES
    return EXIT_INCONCLUSIVE if verdict.kind == INCONCLUSIVE else EXIT_NO


def cmd_verify(args) -> int:
    aut = _load_automaton(args.file)
    cert = parse_certificate(_read(args.certificate))
    check = verify_certificate(aut, cert)
    print("valid" if check else f"invalid: {check.reason}")
    return EXIT_YES if check else EXIT_NO


def _certificate_for(aut, args):
    if args.certificate:
        cert = parse_certificate(_read(args.certificate))
        check = verify_certificate(aut, cert)
        if not check:
            raise UsageError(f"certificate rejected: {check.reason}")
        return cert, None
    verdict = decide(aut)
    return verdict.certificate, verdict


def cmd_synth(args) -> int:
    aut = _load_automaton(args.file)
    cert, verdict = _certificate_for(aut, args)
    if cert is None:
        sys.stderr.write(explain(verdict))
        return EXIT_INCONCLUSIVE if verdict.kind == INCONCLUSIVE else EXIT_NO
    _write(args.out, format_moves(synthesize(aut, cert, args.bound)))
    return EXIT_YES


def cmd_simulate(args) -> int:
    aut = _load_automaton(args.file)
    moves = parse_moves(_read(args.moves))
    try:
        result = play_sequence(aut, moves, args.bound)
    except UndefinedPath as err:
        raise UsageError(str(err)) from None
    if args.grid:
        played = len(result.trace) - 1 + (result.loss is not None)
        sys.stdout.write(render_grid(result.trace, state_grid(aut, moves[:played], args.bound)))
    else:
        for i, w in enumerate(result.trace):
            print(f"{i:>4} {w}")
    if result.outcome is Outcome.LOST:
        loss = result.loss
        print(f"lost: move {loss.move_index} hits BAD at unwon position {loss.position}")
        return EXIT_NO
    if result.outcome is Outcome.WON:
        print(f"won after {result.won_at} moves")
        return EXIT_YES
    print("not won yet")
    return EXIT_NO


def cmd_oracle(args) -> int:
    aut = _load_automaton(args.file)
    result = bounded_solve(aut, args.bound, max_words=args.max_words, time_limit=args.time_limit)
    print(f"{result.kind} at bound {args.bound} ({result.explored} wins words explored)")
    for move in result.moves:
        print("move: " + " ".join(move))
    if result.kind == WINNABLE:
        return EXIT_YES
    return EXIT_NO if result.kind == UNWINNABLE else EXIT_INCONCLUSIVE


_DTM_FIXTURES = {
    "halting": instances.halting_dtm,
    "looping": instances.looping_dtm,
    "stepping": instances.stepping_dtm,
}


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "fig1":
        aut = instances.gen_fig1()
    elif kind == "fig3":
        aut = instances.gen_fig3(args.n1, args.n2)
    elif kind == "fig5":
        aut = instances.gen_fig5()
    elif kind == "fig7":
        aut = instances.gen_fig7()
    elif kind == "nfa":
        if not args.source:
            raise UsageError("gen nfa needs an NFA file")
        aut = instances.gen_from_unary_nfa(instances.parse_nfa(_read(args.source)))
    else:
        if args.fixture:
            machine = _DTM_FIXTURES[args.fixture]()
        elif args.source:
            machine = instances.parse_dtm(_read(args.source))
        else:
            raise UsageError("gen dtm needs a machine file or --fixture")
        aut = instances.gen_from_dtm(machine, args.n)
    _write(args.out, serialize(aut))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="popgame", description="Population games on labelled automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide and print a certificate")
    p.add_argument("file", help="automaton file, '-' for stdin")
    p.add_argument("--cap", type=int, default=10**6, help="closure size cap")
    p.add_argument("--time-limit", type=float, default=60.0, help="closure time cap in seconds")
    p.add_argument("--cert-out", help="write the certificate here instead of stdout")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="check a certificate")
    p.add_argument("file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="write winning moves for sizes up to a bound")
    p.add_argument("file")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--certificate", help="use this certificate instead of deciding")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="play moves up to a bound")
    p.add_argument("file")
    p.add_argument("--moves", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--grid", action="store_true", help="print the state grid")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="solve the game for sizes up to a bound")
    p.add_argument("file")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--max-words", type=int)
    p.add_argument("--time-limit", type=float)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated automaton")
    p.add_argument("kind", choices=["fig1", "fig3", "fig5", "fig7", "nfa", "dtm"])
    p.add_argument("source", nargs="?", help="NFA or machine file for nfa/dtm")
    p.add_argument("--n1", type=int, default=2)
    p.add_argument("--n2", type=int, default=3)
    p.add_argument("--n", type=int, default=1, help="tape cells for dtm")
    p.add_argument("--fixture", choices=sorted(_DTM_FIXTURES))
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    try:
        return args.func(args)
    except (UsageError, AutomatonError, FrontierError, ValueError) as err:
        sys.stderr.write(f"popgame: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
