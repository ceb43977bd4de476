"""Legal implementation orders: the anticommutation DAG and its front layer."""

from __future__ import annotations

import enum
from typing import Iterable

import numpy as np

from . import _kernels
from .pauli import PauliWord


class OrderingMode(str, enum.Enum):
    PRESERVE = "preserve"
    MODIFY = "modify"


class ContractViolation(RuntimeError):
    pass


class CommutationDag:
    """Edges run from an earlier row to every later row it anticommutes with.

    Nodes are identified by the word's ``orig_index``.  The successor lists are
    shared between copies; only the in-degree counts and the active mask are
    copied, so snapshots are cheap.
    """

    __slots__ = ("ids", "succ", "indegree", "active", "_pos")

    def __init__(self, ids, succ, indegree, active, pos=None):
        self.ids = ids
        self.succ = succ
        self.indegree = indegree
        self.active = active
        self._pos = pos if pos is not None else {int(i): k for k, i in enumerate(ids)}

    def copy(self) -> "CommutationDag":
        return CommutationDag(self.ids, self.succ, self.indegree.copy(), self.active.copy(), self._pos)

    @property
    def nodes(self) -> list[int]:
        return [int(i) for i in self.ids[self.active]]

    def __len__(self) -> int:
        return int(np.count_nonzero(self.active))

    def front_layer(self) -> list[int]:
        return [int(i) for i in self.ids[self.active & (self.indegree == 0)]]

    def is_front(self, node: int) -> bool:
        k = self._pos[node]
        return bool(self.active[k] and self.indegree[k] == 0)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for k in np.flatnonzero(self.active):
            for v in self.succ[k]:
                if self.active[v]:
                    out.append((int(self.ids[k]), int(self.ids[v])))
        return out

    def remove_mut(self, node: int, mode: OrderingMode = OrderingMode.PRESERVE) -> None:
        k = self._pos.get(node)
        if k is None or not self.active[k]:
            raise ContractViolation(f"row {node} is not an active node")
        if mode == OrderingMode.PRESERVE and self.indegree[k] != 0:
            raise ContractViolation(f"row {node} is not in the front layer (in-degree {self.indegree[k]})")
        self.active[k] = False
        succ = self.succ[k]
        if succ.size:
            self.indegree[succ] -= 1


def build_dag(w: PauliWord) -> CommutationDag:
    order = np.argsort(w.orig_index, kind="stable")
    ids = w.orig_index[order].copy()
    anti = _kernels.anticommute(np.ascontiguousarray(w.x[order]), np.ascontiguousarray(w.z[order]))
    k = ids.size
    upper = np.triu(anti.astype(bool), 1)
    succ = tuple(np.flatnonzero(upper[u]) for u in range(k))
    indegree = upper.sum(axis=0).astype(np.int64)
    return CommutationDag(ids, succ, indegree, np.ones(k, dtype=bool))


def available_actions(dag: CommutationDag, mode: OrderingMode) -> list[int]:
    """Front layer when preserving the unitary, every remaining row otherwise."""
    if mode == OrderingMode.MODIFY:
        return dag.nodes
    return dag.front_layer()


def remove_rows(dag: CommutationDag, ids: Iterable[int], mode: OrderingMode = OrderingMode.PRESERVE) -> CommutationDag:
    """Remove ``ids``; in preserve mode each must reach the front layer as earlier ones go."""
    out = dag.copy()
    pending = sorted(set(int(i) for i in ids))
    missing = [i for i in pending if i not in out._pos or not out.active[out._pos[i]]]
    if missing:
        raise ContractViolation(f"rows {missing} are not active nodes")
    while pending:
        ready = [i for i in pending if mode == OrderingMode.MODIFY or out.is_front(i)]
        if not ready:
            raise ContractViolation(f"rows {pending} cannot be removed without violating commutation order")
        for i in ready:
            out.remove_mut(i, mode)
        pending = [i for i in pending if i not in ready]
    return out
