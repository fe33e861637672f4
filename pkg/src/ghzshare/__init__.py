"""Simulator and verification harness for a (3,3) GHZ secret sharing scheme."""

from .protocol import (
    GateAction,
    Transcript,
    decode_secret,
    encode_secret,
    replay,
    run_protocol,
)
from .qcore import (
    BellOutcome,
    PauliGate,
    StateLabel,
    apply_gate,
    bell_probabilities,
    global_phase_equal,
    measure_bell,
    prepare_state,
)
from .recon import ReconstructionResult, TamperReport, reconstruct
from .symexact import SymbolicState, Term, bell_decompose, bell_terms, expand_product

__all__ = [
    "BellOutcome",
    "GateAction",
    "PauliGate",
    "ReconstructionResult",
    "StateLabel",
    "SymbolicState",
    "TamperReport",
    "Term",
    "Transcript",
    "apply_gate",
    "bell_decompose",
    "bell_probabilities",
    "bell_terms",
    "decode_secret",
    "encode_secret",
    "expand_product",
    "global_phase_equal",
    "measure_bell",
    "prepare_state",
    "reconstruct",
    "replay",
    "run_protocol",
]

__version__ = "0.1.0"
