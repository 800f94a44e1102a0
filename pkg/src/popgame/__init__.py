"""Population games on labelled automata: decide, certify and synthesize."""

from .automaton import Label, LabelledAutomaton, build, parse, serialize
from .decision import Caps, Certificate, Verdict, decide, verify_certificate
from .synthesis import synthesize
from .winswords import LassoMove, play_sequence

__all__ = [
    "Caps",
    "Certificate",
    "Label",
    "LabelledAutomaton",
    "LassoMove",
    "Verdict",
    "build",
    "decide",
    "parse",
    "play_sequence",
    "serialize",
    "synthesize",
    "verify_certificate",
]
