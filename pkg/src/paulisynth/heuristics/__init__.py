"""Implementation heuristics and the name registry used by the search and CLI.

A heuristic is any callable ``(word, ndx, dag, mode) -> HeuristicOutcome`` that
removes at least the row ``ndx`` from ``word``.  New targets plug in through
:func:`register`.
"""

from __future__ import annotations

from typing import Callable, Optional

from .common import (
    Q_PAIRS,
    CliffordBlock,
    HeuristicOutcome,
    benefit,
    drop_identity,
    gen_q_pairs,
    increasing_pair,
    reducible_pair,
)
from .hardware import (
    DisconnectedGraphError,
    HardwareContext,
    HeuristicLoopError,
    all_pairs_distance,
    dist_metric,
    gen_ops,
    hardware_implement,
    occupancy,
)
from .logical import choose_block, logical_greedy_implement

Heuristic = Callable[..., HeuristicOutcome]

_REGISTRY: dict[str, Callable[[Optional[HardwareContext]], Heuristic]] = {}


def register(name: str, factory: Callable[[Optional[HardwareContext]], Heuristic]) -> None:
    _REGISTRY[name] = factory


def get_heuristic(name: str, ctx: Optional[HardwareContext] = None) -> Heuristic:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown heuristic {name!r}; choose from {sorted(_REGISTRY)}") from None
    return factory(ctx)


def _hardware_factory(ctx):
    if ctx is None:
        raise ValueError("the hardware heuristic needs a coupling graph")

    def implement(word, ndx, dag=None, mode="modify"):
        return hardware_implement(word, ndx, ctx, dag=dag, mode=mode)

    return implement


register("logical", lambda ctx: logical_greedy_implement)
register("hardware", _hardware_factory)

__all__ = [
    "Q_PAIRS",
    "CliffordBlock",
    "DisconnectedGraphError",
    "HardwareContext",
    "HeuristicLoopError",
    "HeuristicOutcome",
    "all_pairs_distance",
    "benefit",
    "choose_block",
    "dist_metric",
    "drop_identity",
    "gen_ops",
    "gen_q_pairs",
    "get_heuristic",
    "hardware_implement",
    "increasing_pair",
    "logical_greedy_implement",
    "occupancy",
    "reducible_pair",
    "register",
]
