import math

import pytest
from conftest import exhaustive_best, is_topological, random_word

from paulisynth.circuit import cnot_count
from paulisynth.heuristics import HardwareContext, get_heuristic
from paulisynth.io import ring_edges
from paulisynth.mcts import (
    SearchConfig,
    SearchNode,
    backpropagate,
    rollout,
    search,
    uct_select,
)
from paulisynth.oracle import circuit_unitary, equal_up_to_phase, word_unitary
from paulisynth.ordering import ContractViolation, OrderingMode, build_dag
from paulisynth.pauli import PauliWord

P, M = OrderingMode.PRESERVE, OrderingMode.MODIFY


def _node_with(stats, n_s):
    """Root with visited children: stats maps action -> (r, V, N_sa)."""
    w = PauliWord.from_strings(["Z"])
    node = SearchNode(w, build_dag(w))
    node.N_s = n_s
    for a, (r, v, n) in stats.items():
        child = SearchNode(w, build_dag(w), node, a)
        child.V, child.N_s = v, n
        node.children[a] = child
        node.N_sa[a] = n
        node.r_sa[a] = r
    return node


class TestUct:
    def test_single(self):
        assert uct_select(_node_with({4: (0, 0, 1)}, 1), [4], 1.0) == 4

    def test_unvisited_first(self):
        node = _node_with({0: (0, 100, 5)}, 6)
        assert uct_select(node, [0, 1], math.sqrt(2)) == 1

    def test_unvisited_tie_lowest_id(self):
        node = _node_with({}, 0)
        assert uct_select(node, [5, 2, 9], math.sqrt(2)) == 2

    def test_hand_evaluated(self):
        node = _node_with({0: (-3, -10, 4), 1: (-5, -7, 4)}, 8)
        assert uct_select(node, [0, 1], math.sqrt(2)) == 1

    def test_exploration_term(self):
        # equal value, fewer visits wins once mu > 0
        node = _node_with({0: (-1, -5, 6), 1: (-1, -5, 2)}, 9)
        assert uct_select(node, [0, 1], 1.0) == 1
        assert uct_select(node, [0, 1], 0.0) == 0

    def test_empty(self):
        with pytest.raises(ContractViolation):
            uct_select(_node_with({}, 0), [], 1.0)


class TestBackprop:
    def _path(self, k):
        w = PauliWord.from_strings(["Z"])
        nodes = [SearchNode(w, build_dag(w))]
        for a in range(k):
            nodes.append(SearchNode(w, build_dag(w), nodes[-1], a))
        return nodes

    def test_first_visit(self):
        path = self._path(1)
        backpropagate(path, [-3, -2])
        assert path[0].V == -5 and path[1].V == -2
        assert path[0].N_s == 1 and path[0].N_sa == {0: 1}

    def test_running_mean(self):
        path = self._path(0)
        backpropagate(path, [-4])
        backpropagate(path, [-8])
        assert path[0].V == pytest.approx(-6)
        assert path[0].N_s == 2

    def test_suffix_sums(self, rng):
        path = self._path(3)
        rewards = [-float(v) for v in rng.integers(0, 6, 6)]
        backpropagate(path, rewards)
        for d, node in enumerate(path):
            assert node.V == pytest.approx(sum(rewards[d:]))


class TestRollout:
    def test_single_row(self):
        w = PauliWord.from_strings(["XYZ"], [0.2])
        steps = rollout(w, build_dag(w), M, get_heuristic("logical"))
        assert [a for a, _ in steps] == [0]
        assert steps[0][1].cnots == 2

    def test_least_weight_first(self):
        w = PauliWord.from_strings(["ZZ", "IZ"], [0.1, 0.2])
        steps = rollout(w, build_dag(w), M, get_heuristic("logical"))
        assert steps[0][0] == 1

    def test_terminal_equivalence(self, rng):
        w = random_word(rng, 4, 6)
        steps = rollout(w, build_dag(w), M, get_heuristic("logical"))
        from paulisynth.mcts import assemble

        lead, order, tail = assemble(4, [r for _, r in steps])
        full = lead.copy()
        full.gates += tail.gates
        assert sorted(order) == list(range(6))
        assert equal_up_to_phase(circuit_unitary(full), word_unitary(w, order))


def _check_tree(node, mode):
    for a, child in node.children.items():
        _check_tree(child, mode)
    if node.N_s and not node.terminal:
        assert node.N_s == sum(node.N_sa.values()) + 1
        assert math.isfinite(node.V)


class TestSearch:
    def test_single_iteration_is_greedy_rollout(self, rng):
        for _ in range(5):
            w = random_word(rng, 4, 6)
            res = search(w, SearchConfig(iterations=1, mode=M))
            steps = rollout(w, build_dag(w), M, get_heuristic("logical"))
            assert res.best.order == [o for _, r in steps for o in r.order]
            assert res.best.source == "rollout"

    def test_single_row(self):
        w = PauliWord.from_strings(["XXYZ"], [0.3])
        for it in (1, 5, 20):
            res = search(w, SearchConfig(iterations=it))
            assert res.best.order == [0] and res.best.cnots_leading == 3

    def test_empty_word(self):
        with pytest.raises(ContractViolation):
            search(PauliWord.from_strings([], n=2), SearchConfig())

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(iterations=0)
        with pytest.raises(ValueError):
            SearchConfig(mu=-1)

    def test_commuting_triple_matches_exhaustive(self):
        w = PauliWord.from_strings(["XXI", "IZZ", "YIY"], [0.1, 0.2, 0.3])
        cfg = SearchConfig(iterations=12, mode=M)
        assert search(w, cfg).best.cnots == exhaustive_best(w, cfg)

    def test_exhausted_tree_is_fully_enumerated(self):
        # raw CNOT rewards make plain UCT revisit one branch; skipping exhausted subtrees reaches every order
        w = PauliWord.from_strings(["-XXIX", "ZYYZ", "-IXZY"], [0.4, -0.7, 1.1])
        cfg = SearchConfig(iterations=60, mode=M)
        res = search(w, cfg)
        assert res.root.exhausted
        assert len({tuple(s.order) for s in res.archive}) == 6
        assert res.best.cnots == exhaustive_best(w, cfg)

    def test_anytime_and_tree_invariants(self, rng):
        for mode in (P, M):
            w = random_word(rng, 5, 8)
            res = search(w, SearchConfig(iterations=40, mode=mode))
            curve = res.best_per_iteration
            assert all(b <= a for a, b in zip(curve, curve[1:]))
            assert len(curve) == len(res.elapsed_ms) == 40
            assert res.best.cnots == min(s.cnots for s in res.archive)
            _check_tree(res.root, mode)

    @pytest.mark.parametrize("mode", [P, M])
    def test_soundness(self, mode, rng):
        for _ in range(10):
            w = random_word(rng, int(rng.integers(2, 5)), int(rng.integers(2, 7)))
            res = search(w, SearchConfig(iterations=15, mode=mode))
            order = None if mode == P else res.best.order
            assert equal_up_to_phase(circuit_unitary(res.best.full_circuit), word_unitary(w, order))
            for sol in res.archive:
                assert sorted(sol.order) == list(range(len(w)))
                if mode == P:
                    assert is_topological(sol.order, build_dag(w).edges())

    def test_leading_reward_accounting(self, rng):
        w = random_word(rng, 4, 6)
        res = search(w, SearchConfig(iterations=10, mode=M))
        for sol in res.archive:
            assert sol.cnots_leading == cnot_count(sol.circuit)
            assert sol.cnots == cnot_count(sol.full_circuit)

    def test_deterministic(self, rng):
        w = random_word(rng, 5, 8)
        a = search(w, SearchConfig(iterations=30, mode=M, seed=3))
        b = search(w, SearchConfig(iterations=30, mode=M, seed=3))
        assert a.best.order == b.best.order
        assert a.best.full_circuit.gates == b.best.full_circuit.gates
        assert a.best_per_iteration == b.best_per_iteration

    def test_no_tail_opt_uses_literal_tail(self, rng):
        w = random_word(rng, 3, 4)
        res = search(w, SearchConfig(iterations=3, tail_opt=False))
        assert equal_up_to_phase(circuit_unitary(res.best.full_circuit), word_unitary(w))

    def test_hardware_search(self, rng):
        ctx = HardwareContext.from_edges(5, ring_edges(5))
        w = random_word(rng, 5, 6)
        res = search(w, SearchConfig(iterations=10, heuristic="hardware", context=ctx))
        assert all(ctx.coupled(*g.qubits) for g in res.best.circuit.gates if g.kind == "CX")

    def test_identity_rows_become_phase(self):
        w = PauliWord.from_strings(["II", "ZZ", "-II"], [0.3, 0.2, 0.5])
        res = search(w, SearchConfig(iterations=4))
        assert sorted(res.best.order) == [0, 1, 2]
        assert equal_up_to_phase(circuit_unitary(res.best.full_circuit), word_unitary(w))
        assert res.best.circuit.global_phase == pytest.approx(-0.3 + 0.5)

    def test_progress_callback(self, rng):
        seen = []
        search(random_word(rng, 3, 4), SearchConfig(iterations=5), progress=lambda *a: seen.append(a))
        assert [s[0] for s in seen] == [1, 2, 3, 4, 5]
        assert all(isinstance(s[1], int) for s in seen)
