"""Stabilizer tableaux for the trailing Clifford and its resynthesis.

A tableau stores the images ``U X_q U^dagger`` (rows ``0..n-1``) and
``U Z_q U^dagger`` (rows ``n..2n-1``) as signed Pauli strings.  Appending a gate
to the circuit conjugates every row by that gate.

Synthesis reduces the tableau to a signed identity by appending gates
(symplectic Gaussian elimination, one qubit at a time), inverts that gate list,
and finishes with one layer of X/Z gates that fixes the signs.  The greedy pass
decouples the cheapest qubit first; the naive pass takes qubits in index order.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from . import gates as G
from ._kernels import anticommute
from .circuit import Circuit, cnot_count
from .pauli import PauliString, apply_gate, conjugate_rows


class InvalidTableauError(ValueError):
    pass


class Tableau:
    __slots__ = ("n", "x", "z", "sign")

    def __init__(self, n: int, x, z, sign):
        self.n = n
        self.x = np.array(x, dtype=np.uint8, copy=True).reshape(2 * n, n)
        self.z = np.array(z, dtype=np.uint8, copy=True).reshape(2 * n, n)
        self.sign = np.array(sign, dtype=np.uint8, copy=True).reshape(2 * n)

    @classmethod
    def identity(cls, n: int) -> "Tableau":
        eye = np.eye(n, dtype=np.uint8)
        zero = np.zeros((n, n), dtype=np.uint8)
        return cls(n, np.vstack([eye, zero]), np.vstack([zero, eye]), np.zeros(2 * n, dtype=np.uint8))

    @classmethod
    def from_circuit(cls, c: Circuit) -> "Tableau":
        t = cls.identity(c.n)
        for g in c.gates:
            t.apply_mut(g)
        return t

    @classmethod
    def from_rows(cls, rows: Sequence[PauliString]) -> "Tableau":
        n = rows[0].n
        return cls(n, [r.x for r in rows], [r.z for r in rows], [r.sign for r in rows])

    def copy(self) -> "Tableau":
        return Tableau(self.n, self.x, self.z, self.sign)

    def rows(self) -> list[PauliString]:
        return [PauliString(self.x[k], self.z[k], int(self.sign[k])) for k in range(2 * self.n)]

    def image_x(self, q: int) -> PauliString:
        return PauliString(self.x[q], self.z[q], int(self.sign[q]))

    def image_z(self, q: int) -> PauliString:
        k = self.n + q
        return PauliString(self.x[k], self.z[k], int(self.sign[k]))

    def apply_mut(self, g) -> None:
        if g.kind == "Rz":
            raise ValueError("Rz is not a Clifford gate")
        for q in g.qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"{g!r} acts outside qubits 0..{self.n - 1}")
        conjugate_rows(g, self.x, self.z, self.sign)

    def is_valid(self) -> bool:
        n = self.n
        want = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        want[:n, n:] = np.eye(n, dtype=np.uint8)
        want[n:, :n] = np.eye(n, dtype=np.uint8)
        return bool(np.array_equal(anticommute(self.x, self.z), want))

    def __eq__(self, other):
        if not isinstance(other, Tableau):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.sign, other.sign)
        )

    __hash__ = None

    def __repr__(self):
        from .pauli import render

        xs = ", ".join(render(self.image_x(q), plus=True) for q in range(self.n))
        zs = ", ".join(render(self.image_z(q), plus=True) for q in range(self.n))
        return f"Tableau(X -> [{xs}], Z -> [{zs}])"


def tableau_apply(t: Tableau, g) -> Tableau:
    out = t.copy()
    out.apply_mut(g)
    return out


def tail_circuit(n: int, blocks: Iterable) -> Circuit:
    """The literal trailing Clifford: the inverse of every block gate, last block first."""
    return Circuit(n, [G.inverse(g) for g in reversed(list(blocks))])


def accumulate_tail(n: int, blocks: Iterable) -> Tableau:
    """Tableau of the trailing Clifford for blocks listed in implementation order."""
    return Tableau.from_circuit(tail_circuit(n, blocks))


# ---------------------------------------------------------------------------
# single-qubit canonical forms
# ---------------------------------------------------------------------------

_I, _X, _Z, _Y = 0, 1, 2, 3
_CONJ = {"H": (0, 2, 1, 3), "S": (0, 3, 2, 1)}


def _canonical(pair: tuple[int, int]) -> tuple[int, int]:
    a, b = pair
    if a == _I and b == _I:
        return (_I, _I)
    if b == _I:
        return (_X, _I)
    if a == _I:
        return (_I, _Z)
    if a == b:
        return (_X, _X)
    return (_X, _Z)


def _build_canon_table() -> dict:
    """Shortest H/S word taking each (letter, letter) pair to its class representative."""
    table = {}
    for a in range(4):
        for b in range(4):
            start = (a, b)
            goal = _canonical(start)
            queue = deque([(start, ())])
            seen = {start}
            while queue:
                cur, path = queue.popleft()
                if cur == goal:
                    table[start] = path
                    break
                for name, perm in _CONJ.items():
                    nxt = (perm[cur[0]], perm[cur[1]])
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append((nxt, path + (name,)))
    return table


_CANON = _build_canon_table()


def _codes(t: Tableau, row: int, cols: np.ndarray) -> np.ndarray:
    return t.x[row, cols].astype(np.int64) | (t.z[row, cols].astype(np.int64) << 1)


def _classify(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """0 = anticommuting pair, 1 = equal letters, 2 = only first, 3 = only second, 4 = II."""
    cls = np.full(a.shape, 4, dtype=np.int64)
    both = (a != 0) & (b != 0)
    cls[both & (a != b)] = 0
    cls[both & (a == b)] = 1
    cls[(a != 0) & (b == 0)] = 2
    cls[(a == 0) & (b != 0)] = 3
    return cls


def _decouple_cost(cls: np.ndarray, pivot_in_a: bool, chain_b: bool) -> int:
    na, nb, nc, nd = (int(np.count_nonzero(cls == k)) for k in range(4))
    if na % 2 == 0:
        raise InvalidTableauError("images of X and Z on one qubit commute")
    cost = 3 * (na - 1) // 2 + nc + nd
    if nb:
        cost += nb + 1 if chain_b else 2 * nb
    if not pivot_in_a:
        cost += 3
    return cost


class _Reducer:
    def __init__(self, t: Tableau):
        if not t.is_valid():
            raise InvalidTableauError("tableau rows do not form a symplectic basis")
        self.t = t.copy()
        self.ops: list = []

    def apply(self, g) -> None:
        self.t.apply_mut(g)
        self.ops.append(g)

    def decouple(self, q: int, remaining: list, chain_b: bool) -> None:
        n = self.t.n
        cols = np.array(remaining, dtype=np.int64)
        a = _codes(self.t, q, cols)
        b = _codes(self.t, n + q, cols)
        for k, la, lb in zip(remaining, a, b):
            for name in _CANON[(int(la), int(lb))]:
                self.apply(G.Gate(name, (k,)))
        cls = _classify(_codes(self.t, q, cols), _codes(self.t, n + q, cols))
        pos = {k: i for i, k in enumerate(remaining)}
        if cls[pos[q]] != 0:
            other = next(k for k in remaining if cls[pos[k]] == 0)
            for g in (G.CX(q, other), G.CX(other, q), G.CX(q, other)):
                self.apply(g)
            cls[pos[q]], cls[pos[other]] = cls[pos[other]], cls[pos[q]]
        group = {c: [k for k in remaining if k != q and cls[pos[k]] == c] for c in range(4)}
        pairs = group[0]
        for k1, k2 in zip(pairs[0::2], pairs[1::2]):
            self.apply(G.CX(k2, k1))
            group[3].append(k1)
            group[2].append(k2)
        bs = group[1]
        if bs:
            if chain_b:
                for k in bs[1:]:
                    self.apply(G.CX(bs[0], k))
                bs = bs[:1]
            for k in bs:
                self.apply(G.CX(q, k))
                self.apply(G.H(k))
                self.apply(G.CX(k, q))
        for k in sorted(group[2]):
            self.apply(G.CX(q, k))
        for k in sorted(group[3]):
            self.apply(G.CX(k, q))
        px, pz = self.t.image_x(q), self.t.image_z(q)
        if px.support() != [q] or pz.support() != [q] or px.letter(q) != "X" or pz.letter(q) != "Z":
            raise InvalidTableauError(f"elimination failed on qubit {q}")

    def pivot_cost(self, q: int, remaining: list, chain_b: bool) -> int:
        cols = np.array(remaining, dtype=np.int64)
        cls = _classify(_codes(self.t, q, cols), _codes(self.t, self.t.n + q, cols))
        return _decouple_cost(cls, cls[remaining.index(q)] == 0, chain_b)

    def finish(self) -> Circuit:
        n = self.t.n
        inv = [G.inverse(g) for g in reversed(self.ops)]
        # the reduced tableau is the Pauli P with x = signs of Z-images, z = signs of X-images
        p = PauliString(self.t.sign[n:], self.t.sign[:n], 0)
        for g in inv:
            p = apply_gate(g, p)
        layer = []
        for q in range(n):
            if p.x[q]:
                layer.append(G.X(q))
            if p.z[q]:
                layer.append(G.Z(q))
        return Circuit(n, inv + layer)


def synthesize_greedy(t: Tableau) -> Circuit:
    """Cheapest-qubit-first elimination."""
    red = _Reducer(t)
    remaining = list(range(t.n))
    while remaining:
        q = min(remaining, key=lambda k: (red.pivot_cost(k, remaining, True), k))
        red.decouple(q, remaining, chain_b=True)
        remaining.remove(q)
    return red.finish()


def synthesize_naive(t: Tableau) -> Circuit:
    """Fixed-order elimination without pair batching; a baseline for ``synthesize``."""
    red = _Reducer(t)
    remaining = list(range(t.n))
    for q in range(t.n):
        red.decouple(q, remaining, chain_b=False)
        remaining.remove(q)
    return red.finish()


def synthesize(t: Tableau) -> Circuit:
    """Clifford circuit whose tableau equals ``t`` including signs.

    The greedy pass is usually cheaper but not always, so the fixed-order pass
    runs too and the circuit with fewer CNOTs (then fewer gates) is kept.
    """
    best = None
    for fn in (synthesize_greedy, synthesize_naive):
        c = fn(t)
        if best is None or (cnot_count(c), len(c)) < (cnot_count(best), len(best)):
            best = c
    return best
