"""Connectivity-constrained heuristic: every CX acts on a coupled pair.

Each step picks one (Q_c, Q_t, CX(c, t)) block on a coupling edge touching the
target row's support.  A block either removes one occupied qubit from the
target (the pair is reducible after the Q layer) or adds one (the pair is an
increasing pair); blocks that leave the support unchanged only waste a CNOT and
are never generated.

Normal steps pick the candidate that minimises the row's distance metric.
When the word returns to a state seen earlier in the same call, the search
rewinds to that state's first appearance and takes one aggressive step that
favours weight reduction, then goes back to the metric.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import _kernels
from ..ordering import CommutationDag, ContractViolation, OrderingMode
from ..pauli import PauliWord
from .common import _QMAP, Q_PAIRS, CliffordBlock, HeuristicOutcome, Workspace

_X, _Z, _Y = 1, 2, 3
_DROP_TARGET = {(_X, _X), (_Y, _X)}
_DROP_CONTROL = {(_Z, _Z), (_Z, _Y)}
_GROW_TARGET = {(_X, 0), (_Y, 0)}
_GROW_CONTROL = {(0, _Z), (0, _Y)}


class DisconnectedGraphError(ValueError):
    pass


class HeuristicLoopError(RuntimeError):
    pass


def all_pairs_distance(n: int, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """BFS hop distances; raises if the graph is disconnected."""
    adj = [[] for _ in range(n)]
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ValueError(f"bad coupling edge ({i}, {j}) for {n} qubits")
        adj[i].append(j)
        adj[j].append(i)
    dist = np.full((n, n), -1, dtype=np.int64)
    for src in range(n):
        dist[src, src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[src, v] < 0:
                    dist[src, v] = dist[src, u] + 1
                    queue.append(v)
    if (dist < 0).any():
        comps = []
        seen = set()
        for q in range(n):
            if q not in seen:
                comp = sorted(int(p) for p in np.flatnonzero(dist[q] >= 0))
                seen.update(comp)
                comps.append(comp)
        raise DisconnectedGraphError(f"coupling graph is disconnected; components: {comps}")
    return dist


@dataclass(frozen=True, eq=False)
class HardwareContext:
    n: int
    coupling: tuple
    distance: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "HardwareContext":
        norm = sorted({(min(int(i), int(j)), max(int(i), int(j))) for i, j in edges})
        return cls(n, tuple(norm), all_pairs_distance(n, norm))

    def coupled(self, i: int, j: int) -> bool:
        return self.distance[i, j] == 1


def occupancy(word: PauliWord) -> np.ndarray:
    return word.x | word.z


def dist_metric(word: PauliWord, k: int, ctx: HardwareContext) -> int:
    """Sum over the row's occupied qubit pairs (both orders) of their hop distance."""
    occ = np.ascontiguousarray(occupancy(word)[k : k + 1])
    return int(_kernels.row_distance(occ, ctx.distance)[0])


@dataclass(frozen=True)
class Candidate:
    block: CliffordBlock
    occ_after: frozenset
    weight_after: int
    dist_after: int
    drops_farthest: bool
    approach: int
    index: int


def _set_dist(occ: frozenset, dist: np.ndarray) -> int:
    idx = np.fromiter(occ, dtype=np.int64)
    return int(dist[np.ix_(idx, idx)].sum())


def gen_ops(word: PauliWord, pos: int, ctx: HardwareContext) -> list[Candidate]:
    """Blocks on coupled pairs touching the target support that change that support."""
    codes = word.x[pos].astype(np.int64) | (word.z[pos].astype(np.int64) << 1)
    occ = frozenset(int(q) for q in np.flatnonzero(codes))
    dist = ctx.distance
    contrib = {q: int(sum(dist[q, p] for p in occ)) for q in occ}
    far = max(contrib.values())
    farthest = {q for q, c in contrib.items() if c == far}
    out = []
    index = 0
    for u, v in ctx.coupling:
        for c, t in ((u, v), (v, u)):
            if c not in occ and t not in occ:
                continue
            for qidx, (qc, qt) in enumerate(Q_PAIRS):
                a = int(_QMAP[qidx // 3, codes[c]])
                b = int(_QMAP[qidx % 3, codes[t]])
                dropped = added = None
                if (a, b) in _DROP_TARGET:
                    dropped = t
                elif (a, b) in _DROP_CONTROL:
                    dropped = c
                elif (a, b) in _GROW_TARGET:
                    added = t
                elif (a, b) in _GROW_CONTROL:
                    added = c
                else:
                    continue
                if dropped is not None:
                    after = occ - {dropped}
                    approach = 0
                else:
                    after = occ | {added}
                    source = c if added == t else t
                    rest = [p for p in occ if p != source]
                    approach = int(min(dist[added, p] for p in rest)) if rest else 0
                out.append(
                    Candidate(
                        block=CliffordBlock(qc, qt, c, t),
                        occ_after=frozenset(after),
                        weight_after=len(after),
                        dist_after=_set_dist(after, dist),
                        drops_farthest=dropped in farthest,
                        approach=approach,
                        index=index,
                    )
                )
                index += 1
    return out


def _metric_key(c: Candidate, seen_occ):
    return (c.dist_after, not c.drops_farthest, c.occ_after in seen_occ, c.index)


def _greedy_key(c: Candidate, seen_occ):
    return (c.weight_after, c.approach, c.dist_after, c.occ_after in seen_occ, c.index)


def _apply_block(word: PauliWord, block: CliffordBlock) -> PauliWord:
    out = word.copy()
    for g in block.gates():
        out.apply_mut(g)
    return out


def best_operation(word: PauliWord, candidates: list, dist_now: int, greedy: bool, seen_occ, visited):
    """Pick a candidate; returns ``(candidate, new_word, state_key)``.

    Metric mode only considers blocks that drop a farthest qubit or lower the
    distance metric; when there are none it falls back to the greedy ordering.
    Greedy mode skips blocks leading back to an already visited state when it can.
    """
    if not greedy:
        kept = [c for c in candidates if c.drops_farthest or c.dist_after < dist_now]
        if kept:
            best = min(kept, key=lambda c: _metric_key(c, seen_occ))
            new = _apply_block(word, best.block)
            return best, new, new.state_key()
    first = None
    for cand in sorted(candidates, key=lambda c: _greedy_key(c, seen_occ)):
        new = _apply_block(word, cand.block)
        key = new.state_key()
        if first is None:
            first = (cand, new, key)
        if key not in visited:
            return cand, new, key
    return first


def hardware_implement(
    word: PauliWord,
    ndx: int,
    ctx: HardwareContext,
    dag: Optional[CommutationDag] = None,
    mode: OrderingMode = OrderingMode.MODIFY,
) -> HeuristicOutcome:
    if word.n != ctx.n:
        raise ValueError(f"word has {word.n} qubits but the coupling graph has {ctx.n}")
    ws = Workspace(word, dag, mode)
    w = ws.target_weight(ndx)
    if w == 0:
        raise ContractViolation(f"row {ndx} has weight 0; drop it as a phase instead")
    if not ws.legal(ndx):
        raise ContractViolation(f"row {ndx} is not in the front layer")
    cap = 64 * word.n * w
    # elapsed[t] is the word after the first t committed blocks; gates[t] the matching gate count
    elapsed = [ws.word.state_key()]
    snapshots = [(ws.word.copy(), 0)]
    visited = {elapsed[0]: 0}
    seen_occ = set()
    greedy = False
    steps = 0
    while w > 1:
        steps += 1
        if steps > cap:
            raise HeuristicLoopError(
                f"hardware heuristic exceeded {cap} steps on row {ndx}; "
                f"weight {w}, residual word {ws.word!r}, committed gates {ws.blocks[-12:]!r}"
            )
        pos = ws.position(ndx)
        occ_now = frozenset(int(q) for q in np.flatnonzero(ws.word.x[pos] | ws.word.z[pos]))
        seen_occ.add(occ_now)
        candidates = gen_ops(ws.word, pos, ctx)
        if not candidates:
            raise ContractViolation(f"no coupled block touches row {ndx}")
        dist_now = _set_dist(occ_now, ctx.distance)
        cand, new, key = best_operation(ws.word, candidates, dist_now, greedy, seen_occ, visited)
        if key in visited:
            # loop: rewind to the first appearance of this state, then take one greedy step
            idx = visited[key]
            for stale in elapsed[idx + 1 :]:
                visited.pop(stale, None)
            del elapsed[idx + 1 :]
            del snapshots[idx + 1 :]
            saved, ngates = snapshots[idx]
            ws.word = saved.copy()
            del ws.blocks[ngates:]
            del ws.circuit.gates[ngates:]
            greedy = True
        else:
            for g in cand.block.gates():
                ws.blocks.append(g)
                ws.circuit.gates.append(g)
            ws.word = new
            visited[key] = len(elapsed)
            elapsed.append(key)
            snapshots.append((new.copy(), len(ws.blocks)))
            greedy = False
        w = ws.target_weight(ndx)
    ws.implement(ndx)
    ws.prune()
    return ws.outcome()
