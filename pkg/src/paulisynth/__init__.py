"""Pauli-rotation synthesis into Clifford+Rz circuits with few CNOTs.

The search explores the order in which rotations are implemented; each step
reduces one Pauli string to a single-qubit Z rotation with Clifford blocks, and
the accumulated Clifford is resynthesized once at the end.
"""

from .circuit import Circuit, cnot_count, compose, depth, emit_qasm
from .gates import CX, Gate, H, Rz, S, Sdg, X, Z
from .mcts import SearchConfig, SearchResult, Solution, search
from .ordering import CommutationDag, ContractViolation, OrderingMode, available_actions, build_dag
from .pauli import PauliString, PauliWord, apply_gate, parse_string, render
from .tableau import Tableau, accumulate_tail, synthesize

__version__ = "0.1.0"

__all__ = [
    "CX",
    "Circuit",
    "CommutationDag",
    "ContractViolation",
    "Gate",
    "H",
    "OrderingMode",
    "PauliString",
    "PauliWord",
    "Rz",
    "S",
    "SearchConfig",
    "SearchResult",
    "Sdg",
    "Solution",
    "Tableau",
    "X",
    "Z",
    "accumulate_tail",
    "apply_gate",
    "available_actions",
    "build_dag",
    "cnot_count",
    "compose",
    "depth",
    "emit_qasm",
    "parse_string",
    "render",
    "search",
    "synthesize",
]
