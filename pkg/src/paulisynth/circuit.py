"""Clifford+Rz circuits: gate lists in execution order, statistics, QASM output.

The matrix of a circuit is the product of its gate matrices with the last gate
leftmost, times ``exp(i * global_phase)``.  ``Rz(a)`` is ``diag(e^{-ia/2}, e^{ia/2})``,
so a rotation ``exp(-i t (+/-Z_q))`` is ``Rz(+/-2t)`` on ``q``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .gates import ALL_KINDS, Gate, inverse
from .pauli import DimensionError

_QASM_NAME = {"H": "h", "S": "s", "Sdg": "sdg", "X": "x", "Z": "z", "CX": "cx", "Rz": "rz"}


@dataclass
class Circuit:
    n: int
    gates: list = field(default_factory=list)
    global_phase: float = 0.0

    def __post_init__(self):
        self.gates = list(self.gates)
        for g in self.gates:
            _validate(g, self.n)

    def append(self, g: Gate) -> None:
        _validate(g, self.n)
        self.gates.append(g)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def __len__(self):
        return len(self.gates)

    def copy(self) -> "Circuit":
        return Circuit(self.n, list(self.gates), self.global_phase)

    def inverse(self) -> "Circuit":
        return Circuit(self.n, [inverse(g) for g in reversed(self.gates)], -self.global_phase)

    def stats(self) -> dict:
        return {"cnots": cnot_count(self), "depth": depth(self), "gates": len(self.gates)}


def _validate(g: Gate, n: int) -> None:
    if g.kind not in ALL_KINDS:
        raise ValueError(f"unsupported gate kind {g.kind!r}")
    want = 2 if g.kind == "CX" else 1
    if len(g.qubits) != want:
        raise ValueError(f"{g.kind} takes {want} qubit(s), got {g.qubits}")
    if g.kind == "CX" and g.qubits[0] == g.qubits[1]:
        raise ValueError(f"CX on a single qubit: {g.qubits}")
    if (g.angle is not None) != (g.kind == "Rz"):
        raise ValueError(f"only Rz carries an angle: {g!r}")
    for q in g.qubits:
        if not 0 <= q < n:
            raise IndexError(f"{g!r} outside a {n}-qubit circuit")


def cnot_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind == "CX")


def depth(c: Circuit) -> int:
    """ASAP layer count; every gate, one- or two-qubit, occupies one layer."""
    level = [0] * c.n
    for g in c.gates:
        d = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = d
    return max(level, default=0)


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Run ``a`` then ``b``."""
    if a.n != b.n:
        raise DimensionError(f"cannot compose {a.n}-qubit and {b.n}-qubit circuits")
    return Circuit(a.n, a.gates + b.gates, a.global_phase + b.global_phase)


def emit_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"// global_phase: {c.global_phase!r}", f"qreg q[{c.n}];"]
    for g in c.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind == "Rz":
            lines.append(f"rz({g.angle!r}) {args};")
        else:
            lines.append(f"{_QASM_NAME[g.kind]} {args};")
    return "\n".join(lines) + "\n"


def stats_json(c: Circuit) -> str:
    return json.dumps(c.stats())
