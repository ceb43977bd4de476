"""Monte Carlo tree search over implementation orders.

Each tree edge implements one row with a heuristic (which may prune further
rows for free); the reward of an edge is minus the CNOTs it emitted.  One
iteration walks down by UCT until it reaches a node that was never simulated,
expands at most one child, finishes the word with the least-weight-first
rollout, and backs the suffix reward sums up the path.

The search draws no random numbers: every tie is broken by row id, so the seed
in :class:`SearchConfig` is only recorded.  The first iteration simulates from
the root and therefore returns the pure greedy rollout.

Transitions are deterministic, so a subtree whose terminals have all been
archived cannot yield anything new; selection skips such subtrees, and once the
whole tree is exhausted the remaining iterations are no-ops.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .circuit import Circuit, cnot_count, compose, depth
from .heuristics import HardwareContext, HeuristicOutcome, drop_identity, get_heuristic
from .ordering import CommutationDag, ContractViolation, OrderingMode, available_actions, build_dag
from .pauli import PauliWord
from .tableau import accumulate_tail, synthesize, tail_circuit


@dataclass
class SearchConfig:
    iterations: int = 1
    mu: float = math.sqrt(2.0)
    seed: int = 0
    mode: OrderingMode = OrderingMode.PRESERVE
    heuristic: str = "logical"
    context: Optional[HardwareContext] = None
    tail_opt: bool = True

    def __post_init__(self):
        if int(self.iterations) < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not (self.mu >= 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be a finite non-negative number, got {self.mu}")
        self.iterations = int(self.iterations)
        self.mode = OrderingMode(self.mode)


@dataclass
class Solution:
    order: list
    circuit: Circuit  # leading blocks and rotations, tail excluded
    cnots_leading: int
    source: str  # "rollout" or "explored"
    tail: Circuit
    discovery: int

    @property
    def full_circuit(self) -> Circuit:
        return compose(self.circuit, self.tail)

    @property
    def cnots(self) -> int:
        return self.cnots_leading + cnot_count(self.tail)

    @property
    def depth(self) -> int:
        return depth(self.full_circuit)

    def rank(self) -> tuple:
        return (self.cnots, self.depth, self.discovery)


@dataclass
class SearchResult:
    best: Solution
    archive: list
    best_per_iteration: list
    elapsed_ms: list  # wall time of each iteration
    root: "SearchNode"


class SearchNode:
    __slots__ = (
        "word", "dag", "parent", "action", "outcome", "children", "V", "N_s", "N_sa", "r_sa", "archived", "exhausted"
    )

    def __init__(self, word: PauliWord, dag: CommutationDag, parent=None, action=None, outcome=None):
        self.word = word
        self.dag = dag
        self.parent = parent
        self.action = action
        self.outcome = outcome
        self.children: dict = {}
        self.V = 0.0
        self.N_s = 0
        self.N_sa: dict = {}
        self.r_sa: dict = {}
        self.archived = False
        self.exhausted = False  # every terminal below has been archived

    @property
    def terminal(self) -> bool:
        return len(self.word) == 0

    @property
    def state_key(self) -> bytes:
        return self.word.state_key()

    def path_outcomes(self) -> list:
        out = []
        node = self
        while node.parent is not None:
            out.append(node.outcome)
            node = node.parent
        return out[::-1]


def uct_select(node: SearchNode, actions, mu: float) -> int:
    """argmax of r(s,a) + V(child) + mu*sqrt(ln N_s / N_sa); unvisited actions first, lowest id wins ties."""
    actions = sorted(int(a) for a in actions)
    if not actions:
        raise ContractViolation("uct_select needs at least one action")
    best, best_score = None, -math.inf
    for a in actions:
        child = node.children.get(a)
        n_sa = node.N_sa.get(a, 0)
        if child is None or n_sa == 0 or child.N_s == 0:
            return a
        score = node.r_sa[a] + child.V + mu * math.sqrt(math.log(node.N_s) / n_sa)
        if score > best_score:
            best, best_score = a, score
    return best


def _mark_exhausted(path: list, mode) -> None:
    for node in reversed(path):
        if node.terminal:
            node.exhausted = True
            continue
        acts = available_actions(node.dag, mode)
        node.exhausted = all(a in node.children and node.children[a].exhausted for a in acts)
        if not node.exhausted:
            return


def backpropagate(path: list, rewards: list) -> None:
    """Update visit counts and running means along ``path``.

    ``rewards[d]`` is the reward earned after leaving ``path[d]``; the tail of the
    list past the last tree node holds the rollout rewards.  Node ``d`` averages
    the suffix sum ``sum(rewards[d:])``.
    """
    suffix = [0.0] * (len(rewards) + 1)
    for d in range(len(rewards) - 1, -1, -1):
        suffix[d] = suffix[d + 1] + rewards[d]
    for d, node in enumerate(path):
        node.N_s += 1
        if d + 1 < len(path):
            a = path[d + 1].action
            node.N_sa[a] = node.N_sa.get(a, 0) + 1
        node.V += (suffix[d] - node.V) / node.N_s


def transition(word, dag, action, mode, heuristic) -> HeuristicOutcome:
    k = word.position(action)
    if not (word.x[k] | word.z[k]).any():
        return drop_identity(word, action, dag=dag, mode=mode)
    return heuristic(word, action, dag=dag, mode=mode)


def least_weight_action(word: PauliWord, actions) -> int:
    weights = word.weights()
    return min(actions, key=lambda a: (int(weights[word.position(a)]), a))


def rollout(word: PauliWord, dag: CommutationDag, mode, heuristic, step=None) -> list:
    """Greedy completion: repeatedly implement the available row of least weight.

    Returns the list of ``(action, outcome)`` steps; ``step`` overrides the
    transition function (the search passes a memoizing one).
    """
    step = step or (lambda w, d, a: transition(w, d, a, mode, heuristic))
    out = []
    while len(word):
        a = least_weight_action(word, available_actions(dag, mode))
        res = step(word, dag, a)
        out.append((a, res))
        word, dag = res.reduced_word, res.dag
    return out


def assemble(n: int, outcomes: list, tail_opt: bool = True, tail_cache: Optional[dict] = None):
    """Leading circuit, order and (optimized or literal) tail for a full sequence of outcomes."""
    lead = Circuit(n)
    order = []
    blocks = []
    for res in outcomes:
        lead.gates.extend(res.leading_circuit.gates)
        lead.global_phase += res.leading_circuit.global_phase
        order.extend(res.order)
        blocks.extend(res.blocks)
    if tail_opt:
        t = accumulate_tail(n, blocks)
        key = t.x.tobytes() + t.z.tobytes() + t.sign.tobytes()
        tail = tail_cache.get(key) if tail_cache is not None else None
        if tail is None:
            tail = synthesize(t)
            if tail_cache is not None:
                tail_cache[key] = tail
    else:
        tail = tail_circuit(n, blocks)
    return lead, order, tail


def search(
    word: PauliWord,
    cfg: SearchConfig,
    progress: Optional[Callable[[int, int, float], None]] = None,
) -> SearchResult:
    if len(word) == 0:
        raise ContractViolation("cannot search over an empty word")
    heuristic = get_heuristic(cfg.heuristic, cfg.context)
    mode = cfg.mode
    n = word.n
    memo: dict = {}
    tail_cache: dict = {}

    def step(w, d, a):
        # rows removed so far fix the DAG state, so the word key alone identifies it
        key = (w.state_key(), a)
        res = memo.get(key)
        if res is None:
            res = transition(w, d, a, mode, heuristic)
            memo[key] = res
        return res

    root = SearchNode(word.copy(), build_dag(word))
    archive: list = []
    best: Optional[Solution] = None
    curve: list = []
    elapsed: list = []

    def record(outcomes, source):
        nonlocal best
        lead, order, tail = assemble(n, outcomes, cfg.tail_opt, tail_cache)
        sol = Solution(order, lead, cnot_count(lead), source, tail, len(archive))
        archive.append(sol)
        if best is None or sol.rank() < best.rank():
            best = sol

    t_start = time.perf_counter()
    for it in range(cfg.iterations):
        t0 = time.perf_counter()
        if root.exhausted:
            elapsed.append((time.perf_counter() - t0) * 1e3)
            curve.append(best.cnots)
            if progress is not None:
                progress(it + 1, best.cnots, (time.perf_counter() - t_start) * 1e3)
            continue
        node = root
        path = [root]
        while not node.terminal and node.N_s > 0:
            live = [a for a in available_actions(node.dag, mode) if a not in node.children or not node.children[a].exhausted]
            a = uct_select(node, live, cfg.mu)
            child = node.children.get(a)
            if child is None:
                res = step(node.word, node.dag, a)
                child = SearchNode(res.reduced_word, res.dag, node, a, res)
                node.children[a] = child
                node.r_sa[a] = -res.cnots
                path.append(child)
                node = child
                break
            path.append(child)
            node = child
        rewards = [p.r_sa[c.action] for p, c in zip(path, path[1:])]
        if node.terminal:
            if not node.archived:
                node.archived = True
                record(node.path_outcomes(), "explored")
        else:
            steps = rollout(node.word, node.dag, mode, heuristic, step)
            rewards += [-res.cnots for _, res in steps]
            record(node.path_outcomes() + [res for _, res in steps], "rollout")
        backpropagate(path, rewards)
        _mark_exhausted(path, mode)
        elapsed.append((time.perf_counter() - t0) * 1e3)
        curve.append(best.cnots)
        if progress is not None:
            progress(it + 1, best.cnots, (time.perf_counter() - t_start) * 1e3)
    return SearchResult(best, archive, curve, elapsed, root)
