import itertools
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from paulisynth import gates as G  # noqa: E402
from paulisynth.circuit import Circuit  # noqa: E402
from paulisynth.pauli import PauliString, PauliWord  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LETTERS = "IXYZ"


def pauli_strings(n_min=1, n_max=4, signed=True):
    @st.composite
    def build(draw):
        n = draw(st.integers(n_min, n_max))
        body = draw(st.text(alphabet=LETTERS, min_size=n, max_size=n))
        sign = draw(st.sampled_from(["", "-"])) if signed else ""
        return sign + body

    return build()


@st.composite
def words(draw, n_min=1, n_max=4, k_min=1, k_max=6, signed=True):
    n = draw(st.integers(n_min, n_max))
    k = draw(st.integers(k_min, k_max))
    rows = []
    for _ in range(k):
        body = draw(st.text(alphabet=LETTERS, min_size=n, max_size=n))
        sign = draw(st.sampled_from(["", "-"])) if signed else ""
        rows.append(sign + body)
    thetas = draw(st.lists(st.floats(-3.0, 3.0, allow_nan=False), min_size=k, max_size=k))
    return PauliWord.from_strings(rows, thetas)


@st.composite
def clifford_gates(draw, n):
    kind = draw(st.sampled_from(["H", "S", "Sdg", "CX", "X", "Z"]))
    if kind == "CX":
        if n < 2:
            return G.H(0)
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 2))
        return G.CX(a, b if b < a else b + 1)
    return G.Gate(kind, (draw(st.integers(0, n - 1)),))


def random_word(rng, n, k, signed=True, allow_identity=True):
    rows = []
    for _ in range(k):
        while True:
            body = "".join(rng.choice(list(LETTERS), n))
            if allow_identity or set(body) != {"I"}:
                break
        rows.append(("-" if signed and rng.random() < 0.3 else "") + body)
    return PauliWord.from_strings(rows, rng.uniform(-1.5, 1.5, k))


def random_clifford(rng, n, length, kinds=("H", "S", "Sdg", "CX")):
    c = Circuit(n)
    for _ in range(length):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "CX":
            a, b = rng.choice(n, 2, replace=False)
            c.append(G.CX(int(a), int(b)))
        else:
            c.append(G.Gate(kind, (int(rng.integers(n)),)))
    return c


def all_paulis(n, signed=False):
    signs = ["", "-"] if signed else [""]
    for s in signs:
        for body in itertools.product(LETTERS, repeat=n):
            yield s + "".join(body)


def is_topological(order, dag_edges):
    pos = {v: i for i, v in enumerate(order)}
    return all(pos[u] < pos[v] for u, v in dag_edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def ps(text) -> PauliString:
    from paulisynth.pauli import parse_string

    return parse_string(text)


def exhaustive_best(word, cfg):
    """Minimum total CNOTs over every legal action sequence, using the search's own transition and tail."""
    from paulisynth.circuit import cnot_count
    from paulisynth.heuristics import get_heuristic
    from paulisynth.mcts import assemble, transition
    from paulisynth.ordering import available_actions, build_dag

    heuristic = get_heuristic(cfg.heuristic, cfg.context)
    best = [None]

    def walk(w, dag, outcomes):
        if len(w) == 0:
            lead, _, tail = assemble(word.n, outcomes, cfg.tail_opt)
            total = cnot_count(lead) + cnot_count(tail)
            if best[0] is None or total < best[0]:
                best[0] = total
            return
        for a in available_actions(dag, cfg.mode):
            res = transition(w, dag, a, cfg.mode, heuristic)
            walk(res.reduced_word, res.dag, outcomes + [res])

    walk(word, build_dag(word), [])
    return best[0]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
