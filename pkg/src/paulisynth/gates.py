"""Gate records shared by the Pauli, tableau and circuit layers."""

from __future__ import annotations

from typing import NamedTuple, Optional

from . import _kernels

CLIFFORD_KINDS = ("H", "S", "Sdg", "CX")
ALL_KINDS = ("H", "S", "Sdg", "X", "Z", "CX", "Rz")

_KERNEL_CODE = {"H": _kernels.GATE_H, "S": _kernels.GATE_S, "Sdg": _kernels.GATE_SDG, "CX": _kernels.GATE_CX}
_INVERSE_KIND = {"H": "H", "S": "Sdg", "Sdg": "S", "X": "X", "Z": "Z", "CX": "CX"}


class Gate(NamedTuple):
    """One gate. ``qubits`` is ``(q,)`` or ``(control, target)``; only Rz has an angle."""

    kind: str
    qubits: tuple
    angle: Optional[float] = None

    def __repr__(self):
        args = ", ".join(str(q) for q in self.qubits)
        if self.kind == "Rz":
            return f"Rz({self.angle!r}, {args})"
        return f"{self.kind}({args})"


def H(q: int) -> Gate:
    return Gate("H", (q,))


def S(q: int) -> Gate:
    return Gate("S", (q,))


def Sdg(q: int) -> Gate:
    return Gate("Sdg", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def Z(q: int) -> Gate:
    return Gate("Z", (q,))


def CX(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError(f"CX needs two distinct qubits, got ({control}, {target})")
    return Gate("CX", (control, target))


def Rz(angle: float, q: int) -> Gate:
    return Gate("Rz", (q,), float(angle))


def inverse(g: Gate) -> Gate:
    if g.kind == "Rz":
        return Gate("Rz", g.qubits, -g.angle)
    return Gate(_INVERSE_KIND[g.kind], g.qubits)


def kernel_args(g: Gate) -> tuple[int, int, int]:
    """``(kind_code, a, b)`` for the conjugation kernels; raises on non-Clifford gates."""
    try:
        code = _KERNEL_CODE[g.kind]
    except KeyError:
        raise ValueError(f"{g.kind} is not one of the Clifford generators {CLIFFORD_KINDS}") from None
    a = g.qubits[0]
    b = g.qubits[1] if code == _kernels.GATE_CX else 0
    return code, a, b
