"""Greedy all-to-all heuristic built from (Q_i, Q_j, CX) Clifford blocks."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import _kernels
from ..ordering import CommutationDag, ContractViolation, OrderingMode
from ..pauli import PauliWord
from .common import Q_PAIRS, RP_TAB, SCORE_TAB, VALID_TAB, CliffordBlock, HeuristicOutcome, Workspace


def choose_block(word: PauliWord, pos: int) -> CliffordBlock:
    """Best block for the row at position ``pos``.

    Highest benefit wins; ties go to the larger RP count, then to the lowest
    (i, j, Q-pair enumeration index).
    """
    support = np.flatnonzero(word.x[pos] | word.z[pos]).astype(np.int64)
    benefit, rp, ok = _kernels.block_scores(word.x, word.z, pos, support, SCORE_TAB, RP_TAB, VALID_TAB)
    k = len(word)
    key = np.where(ok, benefit * (k + 2) + rp, np.iinfo(np.int64).min)
    a, b, q = np.unravel_index(int(np.argmax(key)), key.shape)
    if not ok[a, b, q]:
        raise ContractViolation(f"no reducible block for row at position {pos}")
    qi, qj = Q_PAIRS[q]
    return CliffordBlock(qi, qj, int(support[a]), int(support[b]))


def logical_greedy_implement(
    word: PauliWord,
    ndx: int,
    dag: Optional[CommutationDag] = None,
    mode: OrderingMode = OrderingMode.MODIFY,
) -> HeuristicOutcome:
    """Reduce row ``ndx`` (an ``orig_index``) to a single-qubit Z rotation and prune.

    ``dag``/``mode`` decide which co-reduced rows may be pruned along with it;
    without a DAG every weight <= 1 row is pruned.
    """
    ws = Workspace(word, dag, mode)
    w = ws.target_weight(ndx)
    if w == 0:
        raise ContractViolation(f"row {ndx} has weight 0; drop it as a phase instead")
    if not ws.legal(ndx):
        raise ContractViolation(f"row {ndx} is not in the front layer")
    while w > 1:
        block = choose_block(ws.word, ws.position(ndx))
        ws.apply_block(block)
        new_w = ws.target_weight(ndx)
        assert new_w == w - 1, "a reducible block must lower the target weight by one"
        w = new_w
    ws.implement(ndx)
    ws.prune()
    return ws.outcome()
