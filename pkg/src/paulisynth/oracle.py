"""Dense-matrix ground truth for small qubit counts.

Qubit 0 is the least-significant tensor factor: the matrix of ``"XZ"`` is
``kron(X, Z)``.  Nothing here touches the bit-vector code paths, so it can be
used to check them.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit
from .pauli import DimensionError, PauliString, PauliWord

MAX_QUBITS = 10


class OracleLimitError(ValueError):
    pass


_I2 = np.eye(2, dtype=complex)
_PAULI = {
    (0, 0): _I2,
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}
_SQ = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": _PAULI[(1, 0)],
    "Z": _PAULI[(0, 1)],
}
# basis index 2*control + target
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _check_n(n: int) -> None:
    if n > MAX_QUBITS:
        raise OracleLimitError(f"dense oracle is capped at {MAX_QUBITS} qubits, got {n}")


def gate_matrix(g) -> np.ndarray:
    """Local matrix of one gate (2x2, or 4x4 in (control, target) order)."""
    if g.kind == "CX":
        return _CX
    if g.kind == "Rz":
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    return _SQ[g.kind]


def pauli_matrix(p: PauliString) -> np.ndarray:
    _check_n(p.n)
    out = np.ones((1, 1), dtype=complex)
    for q in range(p.n - 1, -1, -1):
        out = np.kron(out, _PAULI[(int(p.x[q]), int(p.z[q]))])
    return -out if p.sign else out


def rotation_matrix(p: PauliString, theta: float) -> np.ndarray:
    """``exp(-i theta P) = cos(theta) I - i sin(theta) P``."""
    m = pauli_matrix(p)
    return np.cos(theta) * np.eye(m.shape[0]) - 1j * np.sin(theta) * m


def _apply_local(u: np.ndarray, mat: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    k = len(qubits)
    dim = u.shape[1]
    t = u.reshape([2] * n + [dim])
    axes = [n - 1 - q for q in qubits]
    t = np.tensordot(mat.reshape([2] * (2 * k)), t, axes=(list(range(k, 2 * k)), axes))
    t = np.moveaxis(t, list(range(k)), axes)
    return t.reshape(2**n, dim)


def circuit_unitary(c: Circuit) -> np.ndarray:
    _check_n(c.n)
    u = np.eye(2**c.n, dtype=complex)
    for g in c.gates:
        u = _apply_local(u, gate_matrix(g), g.qubits, c.n)
    return np.exp(1j * c.global_phase) * u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    m = a.conj().T @ b
    diag = np.diag(m)
    lam = diag[0]
    if abs(abs(lam) - 1.0) > tol:
        return False
    if np.max(np.abs(diag - lam)) > tol:
        return False
    off = m - np.diag(diag)
    return bool(np.max(np.abs(off), initial=0.0) <= tol)


def word_unitary(w: PauliWord, order: Optional[Sequence[int]] = None) -> np.ndarray:
    """Product of the word's rotations; ``order[0]`` acts first (rightmost factor).

    ``order`` lists original row indices; the default is the word's own row order.
    """
    _check_n(w.n)
    ids = [int(i) for i in w.orig_index]
    if order is None:
        order = ids
    order = [int(i) for i in order]
    if sorted(order) != sorted(ids):
        raise ValueError(f"order {order} is not a permutation of the word's rows {ids}")
    pos = {orig: k for k, orig in enumerate(ids)}
    u = np.eye(2**w.n, dtype=complex)
    for orig in order:
        k = pos[orig]
        u = rotation_matrix(w.row(k), w.thetas[k]) @ u
    return u
