"""Symplectic bit-vector Pauli strings and words.

A Pauli string on ``n`` qubits is stored as two ``uint8`` bit vectors ``x`` and
``z`` plus a sign bit (0 for +, 1 for -), with per-qubit encoding
X=[1|0], Y=[1|1], Z=[0|1], I=[0|0].  In text form the leftmost letter is the
highest qubit, so ``"XZ"`` means X on qubit 1 and Z on qubit 0.

Clifford conjugation ``g P g^dagger`` uses simultaneous-assignment update rules:

* H(i):  swap x[i], z[i]; sign ^= x[i] z[i]
* S(i):  z[i] ^= x[i]; sign ^= x[i] z[i]
* Sdg(i): z[i] ^= x[i]; sign ^= x[i] (1 - z[i])
* CX(c, t): x[t] ^= x[c]; z[c] ^= z[t]; sign ^= x[c] z[t] (x[t] ^ z[c] ^ 1)

The CX sign rule is the standard tableau rule; it reproduces the CX
conjugation table including X_c Z_t -> -Y_c Y_t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .gates import Gate, kernel_args

LETTERS = "IXZY"  # indexed by code = x | (z << 1)
_CODE = {"I": 0, "X": 1, "Z": 2, "Y": 3}


class PauliParseError(ValueError):
    pass


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PauliString:
    x: np.ndarray
    z: np.ndarray
    sign: int = 0

    def __post_init__(self):
        x = np.array(self.x, dtype=np.uint8, copy=True)
        z = np.array(self.z, dtype=np.uint8, copy=True)
        if x.ndim != 1 or x.shape != z.shape or x.size == 0:
            raise DimensionError(f"x and z must be equal-length non-empty vectors, got {x.shape} and {z.shape}")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "sign", int(self.sign) & 1)

    @property
    def n(self) -> int:
        return self.x.size

    def letter(self, q: int) -> str:
        return LETTERS[int(self.x[q]) | (int(self.z[q]) << 1)]

    def support(self) -> list[int]:
        return [int(q) for q in np.flatnonzero(self.x | self.z)]

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.sign == other.sign and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self):
        return hash((self.sign, self.x.tobytes(), self.z.tobytes()))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"PauliString({render(self)!r})"


def parse_string(text: str) -> PauliString:
    """Parse ``[+-]?[IXYZ]+``; the leftmost letter lands on the highest qubit."""
    s = text.strip()
    sign = 0
    body = s
    if s[:1] in "+-" and s:
        sign = 1 if s[0] == "-" else 0
        body = s[1:]
    if not body:
        raise PauliParseError(f"empty Pauli string {text!r}")
    offset = len(s) - len(body)
    for pos, ch in enumerate(body):
        if ch not in _CODE:
            raise PauliParseError(f"invalid Pauli letter {ch!r} at position {pos + offset} in {text!r}")
    codes = np.array([_CODE[ch] for ch in reversed(body)], dtype=np.uint8)
    return PauliString(codes & 1, codes >> 1, sign)


def render(p: PauliString, *, plus: bool = False) -> str:
    body = "".join(LETTERS[c] for c in (p.x | (p.z << 1))[::-1])
    if p.sign:
        return "-" + body
    return ("+" + body) if plus else body


def weight(p: PauliString) -> int:
    return int(np.count_nonzero(p.x | p.z))


def commutes(p: PauliString, q: PauliString) -> bool:
    if p.n != q.n:
        raise DimensionError(f"cannot compare Paulis on {p.n} and {q.n} qubits")
    acc = int(np.count_nonzero(p.x & q.z)) + int(np.count_nonzero(p.z & q.x))
    return acc % 2 == 0


def _check_indices(g: Gate, n: int):
    for q in g.qubits:
        if not 0 <= q < n:
            raise IndexError(f"{g!r} acts outside qubits 0..{n - 1}")


def conjugate_rows(g: Gate, x: np.ndarray, z: np.ndarray, sign: np.ndarray) -> None:
    """In-place ``g P g^dagger`` for every row; also accepts the Pauli gates X and Z."""
    if g.kind == "X":
        sign ^= z[:, g.qubits[0]]
        return
    if g.kind == "Z":
        sign ^= x[:, g.qubits[0]]
        return
    kind, a, b = kernel_args(g)
    _kernels.conjugate(x, z, sign, kind, a, b)


def apply_gate(g: Gate, p: PauliString) -> PauliString:
    """Return ``g P g^dagger``."""
    _check_indices(g, p.n)
    x = p.x.reshape(1, -1).copy()
    z = p.z.reshape(1, -1).copy()
    s = np.array([p.sign], dtype=np.uint8)
    conjugate_rows(g, x, z, s)
    return PauliString(x[0], z[0], int(s[0]))


class PauliWord:
    """Ordered rows of Pauli strings with rotation angles and original positions.

    Storage is ``K x n`` ``uint8`` matrices.  Operations that change the rows
    return new words; ``_mut`` methods mutate in place and are meant for
    exclusively-owned scratch copies.
    """

    __slots__ = ("x", "z", "sign", "thetas", "orig_index")

    def __init__(self, x, z, sign, thetas, orig_index=None):
        x = np.array(x, dtype=np.uint8, copy=True, ndmin=2)
        z = np.array(z, dtype=np.uint8, copy=True, ndmin=2)
        k = x.shape[0]
        if x.shape != z.shape:
            raise DimensionError(f"x and z shapes differ: {x.shape} vs {z.shape}")
        self.x = x
        self.z = z
        self.sign = np.array(sign, dtype=np.uint8, copy=True).reshape(k)
        self.thetas = np.array(thetas, dtype=np.float64, copy=True).reshape(k)
        if orig_index is None:
            orig_index = np.arange(k)
        self.orig_index = np.array(orig_index, dtype=np.int64, copy=True).reshape(k)
        if len(set(self.orig_index.tolist())) != k:
            raise ValueError("orig_index entries must be distinct")

    @classmethod
    def from_strings(cls, strings: Sequence, thetas: Optional[Iterable[float]] = None, n: Optional[int] = None):
        rows = [parse_string(s) if isinstance(s, str) else s for s in strings]
        if rows:
            n_rows = {r.n for r in rows}
            if len(n_rows) != 1:
                raise DimensionError(f"Pauli strings of different lengths: {sorted(n_rows)}")
            n = rows[0].n
        elif n is None:
            n = 1
        k = len(rows)
        x = np.zeros((k, n), dtype=np.uint8)
        z = np.zeros((k, n), dtype=np.uint8)
        s = np.zeros(k, dtype=np.uint8)
        for r, p in enumerate(rows):
            x[r] = p.x
            z[r] = p.z
            s[r] = p.sign
        th = np.zeros(k) if thetas is None else np.asarray(list(thetas), dtype=np.float64)
        if th.shape != (k,):
            raise ValueError(f"expected {k} angles, got {th.size}")
        return cls(x, z, s, th)

    @property
    def n(self) -> int:
        return self.x.shape[1]

    def __len__(self) -> int:
        return self.x.shape[0]

    def row(self, k: int) -> PauliString:
        return PauliString(self.x[k], self.z[k], int(self.sign[k]))

    def rows(self) -> list[PauliString]:
        return [self.row(k) for k in range(len(self))]

    def position(self, orig: int) -> int:
        hits = np.flatnonzero(self.orig_index == orig)
        if hits.size == 0:
            raise KeyError(f"row {orig} is not in this word")
        return int(hits[0])

    def weights(self) -> np.ndarray:
        return np.count_nonzero(self.x | self.z, axis=1)

    def occupancy(self) -> np.ndarray:
        return self.x | self.z

    def copy(self) -> "PauliWord":
        return PauliWord(self.x, self.z, self.sign, self.thetas, self.orig_index)

    def take(self, keep) -> "PauliWord":
        keep = np.asarray(keep)
        return PauliWord(self.x[keep], self.z[keep], self.sign[keep], self.thetas[keep], self.orig_index[keep])

    def apply_mut(self, g: Gate) -> None:
        _check_indices(g, self.n)
        conjugate_rows(g, self.x, self.z, self.sign)

    def state_key(self) -> bytes:
        """Canonical bytes of (rows, signs, row ids); angles never change and are left out."""
        return b"".join((self.orig_index.tobytes(), self.x.tobytes(), self.z.tobytes(), self.sign.tobytes()))

    def __eq__(self, other):
        if not isinstance(other, PauliWord):
            return NotImplemented
        return (
            self.x.shape == other.x.shape
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.sign, other.sign)
            and np.array_equal(self.thetas, other.thetas)
            and np.array_equal(self.orig_index, other.orig_index)
        )

    __hash__ = None

    def __repr__(self):
        body = ", ".join(render(r) for r in self.rows())
        return f"PauliWord([{body}])"


def apply_gate_word(g: Gate, w: PauliWord) -> PauliWord:
    out = w.copy()
    if len(out):
        out.apply_mut(g)
    else:
        _check_indices(g, w.n)
    return out
