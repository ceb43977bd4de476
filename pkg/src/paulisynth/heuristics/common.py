"""Pieces shared by the implementation heuristics.

A heuristic takes a residual word and one row id, conjugates the word by
Clifford blocks until that row has weight one, then prunes every row that is
now weight <= 1 and legal to implement.  Pruning rotates the single remaining
Pauli to Z with H/S gates (no CNOTs) and emits the Rz.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import gates as G
from ..circuit import Circuit, cnot_count
from ..ordering import CommutationDag, ContractViolation, OrderingMode
from ..pauli import PauliWord

Q_NAMES = ("I", "H", "S")
Q_PAIRS = tuple((a, b) for a in Q_NAMES for b in Q_NAMES)

_CODE = {"I": 0, "X": 1, "Z": 2, "Y": 3}
_LETTER = "IXZY"
# letter code -> letter code under conjugation by I, H, S (signs ignored)
_QMAP = np.array([[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 2, 1]], dtype=np.int64)

REDUCIBLE = frozenset({("X", "X"), ("Z", "Z"), ("Y", "X"), ("Z", "Y")})
INCREASING = frozenset({("X", "I"), ("I", "Z"), ("Y", "I"), ("I", "Y")})


def reducible_pair(ctrl: str, targ: str) -> bool:
    return (ctrl, targ) in REDUCIBLE


def increasing_pair(ctrl: str, targ: str) -> bool:
    return (ctrl, targ) in INCREASING


def conjugate_letter(q: str, letter: str) -> str:
    return _LETTER[_QMAP[Q_NAMES.index(q), _CODE[letter]]]


def gen_q_pairs(ctrl: str, targ: str) -> list[tuple[str, str]]:
    """Every (Q_i, Q_j) in {I, H, S}^2 that turns (ctrl, targ) into a reducible pair."""
    if ctrl == "I" or targ == "I":
        raise ContractViolation(f"no Clifford block reduces the pair ({ctrl}, {targ})")
    return [(a, b) for a, b in Q_PAIRS if reducible_pair(conjugate_letter(a, ctrl), conjugate_letter(b, targ))]


def _build_tables():
    score = np.zeros((9, 16), dtype=np.int64)
    rp = np.zeros((9, 16), dtype=np.int64)
    valid = np.zeros((16, 9), dtype=np.bool_)
    for qi, (a, b) in enumerate(Q_PAIRS):
        for ca, la in enumerate(_LETTER):
            for cb, lb in enumerate(_LETTER):
                na, nb = conjugate_letter(a, la), conjugate_letter(b, lb)
                code = 4 * _CODE[la] + _CODE[lb]
                score[qi, code] = int(reducible_pair(na, nb)) - int(increasing_pair(na, nb))
                rp[qi, code] = int(reducible_pair(na, nb))
                valid[code, qi] = reducible_pair(na, nb)
    return score, rp, valid


SCORE_TAB, RP_TAB, VALID_TAB = _build_tables()


def _pair_counts(word: PauliWord, i: int, j: int, qpair) -> tuple[int, int]:
    qa, qb = Q_NAMES.index(qpair[0]), Q_NAMES.index(qpair[1])
    ci = word.x[:, i].astype(np.int64) | (word.z[:, i].astype(np.int64) << 1)
    cj = word.x[:, j].astype(np.int64) | (word.z[:, j].astype(np.int64) << 1)
    code = 4 * _QMAP[qa][ci] + _QMAP[qb][cj]
    return int(SCORE_TAB[0][code].sum()), int(RP_TAB[0][code].sum())


def benefit(word: PauliWord, i: int, j: int, qpair) -> int:
    """(#RP - #IP) on columns (i, j) after conjugating by ``qpair`` minus the same count before."""
    after, _ = _pair_counts(word, i, j, qpair)
    before, _ = _pair_counts(word, i, j, ("I", "I"))
    return after - before


def q_gates(q: str, qubit: int) -> list:
    if q == "H":
        return [G.H(qubit)]
    if q == "S":
        return [G.S(qubit)]
    return []


@dataclass(frozen=True)
class CliffordBlock:
    q_i: str
    q_j: str
    control: int
    target: int

    def gates(self) -> list:
        return q_gates(self.q_i, self.control) + q_gates(self.q_j, self.target) + [G.CX(self.control, self.target)]


# single-qubit gates taking X, Y, Z to +/-Z
_TO_Z = {1: ("H",), 3: ("Sdg", "H"), 2: ()}


@dataclass
class HeuristicOutcome:
    reduced_word: PauliWord
    leading_circuit: Circuit
    implemented: list  # (orig_index, qubit, Rz angle)
    blocks: list  # Clifford gates applied to the word, in order
    order: list = field(default_factory=list)  # orig ids in implementation order, identity rows included
    dropped: list = field(default_factory=list)  # identity rows removed as pure phase
    dag: Optional[CommutationDag] = None

    @property
    def cnots(self) -> int:
        return cnot_count(self.leading_circuit)


class Workspace:
    """Mutable scratch state for one heuristic call; owns copies of word and DAG."""

    def __init__(self, word: PauliWord, dag: Optional[CommutationDag], mode: OrderingMode):
        self.word = word.copy()
        self.dag = dag.copy() if dag is not None else None
        self.mode = OrderingMode(mode)
        self.circuit = Circuit(word.n)
        self.blocks: list = []
        self.implemented: list = []
        self.order: list = []
        self.dropped: list = []

    def apply(self, g) -> None:
        self.word.apply_mut(g)
        self.blocks.append(g)
        self.circuit.gates.append(g)

    def apply_block(self, block: CliffordBlock) -> None:
        for g in block.gates():
            self.apply(g)

    def position(self, orig: int) -> int:
        return self.word.position(orig)

    def target_weight(self, orig: int) -> int:
        k = self.position(orig)
        return int(np.count_nonzero(self.word.x[k] | self.word.z[k]))

    def legal(self, orig: int) -> bool:
        if self.dag is None or self.mode == OrderingMode.MODIFY:
            return True
        return self.dag.is_front(orig)

    def implement(self, orig: int) -> None:
        """Emit the rotation of a weight <= 1 row and remove it from the word."""
        k = self.position(orig)
        occ = np.flatnonzero(self.word.x[k] | self.word.z[k])
        theta = float(self.word.thetas[k])
        if occ.size > 1:
            raise ContractViolation(f"row {orig} still has weight {occ.size}")
        if occ.size == 0:
            s = int(self.word.sign[k])
            self.circuit.global_phase += -theta * (-1.0) ** s
            self.dropped.append(orig)
        else:
            q = int(occ[0])
            code = int(self.word.x[k, q]) | (int(self.word.z[k, q]) << 1)
            for name in _TO_Z[code]:
                self.apply(G.Gate(name, (q,)))
            k = self.position(orig)
            s = int(self.word.sign[k])
            angle = 2.0 * theta * (-1.0) ** s
            self.circuit.gates.append(G.Rz(angle, q))
            self.implemented.append((orig, q, angle))
        self.order.append(orig)
        keep = np.ones(len(self.word), dtype=bool)
        keep[self.position(orig)] = False
        self.word = self.word.take(keep)
        if self.dag is not None:
            self.dag.remove_mut(orig, self.mode)

    def prune(self) -> None:
        """Implement every legal weight <= 1 row, repeating as removals open the front layer."""
        while True:
            w = self.word.weights()
            ready = [int(o) for o, wt in zip(self.word.orig_index, w) if wt <= 1 and self.legal(int(o))]
            if not ready:
                return
            for orig in sorted(ready):
                self.implement(orig)

    def outcome(self) -> HeuristicOutcome:
        return HeuristicOutcome(
            reduced_word=self.word,
            leading_circuit=self.circuit,
            implemented=self.implemented,
            blocks=self.blocks,
            order=self.order,
            dropped=self.dropped,
            dag=self.dag,
        )


def drop_identity(word: PauliWord, ndx: int, dag=None, mode=OrderingMode.MODIFY) -> HeuristicOutcome:
    """Remove a weight-0 row as a pure global phase."""
    ws = Workspace(word, dag, mode)
    if ws.target_weight(ndx) != 0:
        raise ContractViolation(f"row {ndx} is not the identity")
    if not ws.legal(ndx):
        raise ContractViolation(f"row {ndx} is not in the front layer")
    ws.implement(ndx)
    return ws.outcome()
