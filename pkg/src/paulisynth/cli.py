"""Command-line driver: ``paulisynth synth``, ``gen-heisenberg`` and ``gen-random``.

Exit codes: 0 on success, 2 on usage or input errors, 3 when ``--verify`` finds
the circuit is not equivalent to the rotation product.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .circuit import Circuit, cnot_count, depth, emit_qasm
from .heuristics import DisconnectedGraphError, HardwareContext
from .io import FormatError, format_hamiltonian, generate_heisenberg, generate_random_word, parse_coupling, parse_hamiltonian
from .mcts import SearchConfig, search
from .ordering import OrderingMode
from .oracle import MAX_QUBITS, circuit_unitary, equal_up_to_phase, word_unitary
from .pauli import PauliParseError, PauliWord

log = logging.getLogger("paulisynth")

REPORT_SCHEMA = 1
TIMING_FIELDS = ("elapsed_ms", "total_ms")
EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    n: int
    strings: int
    cnots: int
    cnots_leading: int
    cnots_tail: int
    depth: int
    gates: int
    iterations: int
    seed: int
    mu: float
    mode: str
    heuristic: str
    tail_opt: bool
    order: list
    best_per_iteration: list
    elapsed_ms: list
    total_ms: float
    verify: Optional[bool] = None
    schema: int = REPORT_SCHEMA
    extra: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            for k in TIMING_FIELDS:
                d.pop(k)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


@dataclass
class RunOutput:
    report: RunReport
    circuit: Circuit
    qasm: str


def _configure_logging() -> None:
    level = os.environ.get("SYNTH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _load_context(args, n: int) -> Optional[HardwareContext]:
    if args.heuristic != "hardware":
        if args.coupling:
            log.warning("--coupling is ignored by the logical heuristic")
        return None
    if not args.coupling:
        raise UsageError("--heuristic hardware needs --coupling FILE")
    cn, edges = parse_coupling(args.coupling)
    if cn != n:
        raise UsageError(f"coupling graph has {cn} qubits but the Hamiltonian has {n}")
    return HardwareContext.from_edges(n, edges)


def run(args) -> RunOutput:
    """Parse, search, synthesize the tail, optionally verify; no files are written here."""
    word = parse_hamiltonian(args.hamiltonian)
    if args.verify and word.n > MAX_QUBITS:
        raise UsageError(f"--verify supports at most {MAX_QUBITS} qubits, the input has {word.n}")
    ctx = _load_context(args, word.n)
    if ctx is not None:
        log.warning("hardware mode: the trailing Clifford is synthesized without coupling constraints")
    cfg = SearchConfig(
        iterations=args.iterations,
        mu=args.mu,
        seed=args.seed,
        mode=OrderingMode(args.mode),
        heuristic=args.heuristic,
        context=ctx,
        tail_opt=not args.no_tail_opt,
    )

    progress = None
    if args.progress:

        def progress(it, best, ms):
            print(f"{it},{best},{ms:.3f}", file=sys.stderr, flush=True)

    t0 = time.perf_counter()
    result = search(word, cfg, progress)
    best = result.best
    circuit = best.full_circuit
    total_ms = (time.perf_counter() - t0) * 1e3
    log.info("best of %d archived solutions: %d CNOTs", len(result.archive), best.cnots)

    verified = None
    if args.verify:
        order = None if cfg.mode == OrderingMode.PRESERVE else best.order
        verified = equal_up_to_phase(circuit_unitary(circuit), word_unitary(word, order))
        log.info("verification %s", "passed" if verified else "FAILED")

    report = RunReport(
        n=word.n,
        strings=len(word),
        cnots=cnot_count(circuit),
        cnots_leading=best.cnots_leading,
        cnots_tail=cnot_count(best.tail),
        depth=depth(circuit),
        gates=len(circuit),
        iterations=cfg.iterations,
        seed=cfg.seed,
        mu=cfg.mu,
        mode=cfg.mode.value,
        heuristic=cfg.heuristic,
        tail_opt=cfg.tail_opt,
        order=[int(i) for i in best.order],
        best_per_iteration=list(result.best_per_iteration),
        elapsed_ms=[round(v, 3) for v in result.elapsed_ms],
        total_ms=round(total_ms, 3),
        verify=verified,
    )
    return RunOutput(report, circuit, emit_qasm(circuit))


def _cmd_synth(args) -> int:
    out = run(args)
    if args.emit == "qasm":
        if args.out:
            Path(args.out).write_text(out.qasm)
        else:
            sys.stdout.write(out.qasm)
    if args.report:
        Path(args.report).write_text(out.report.to_json())
    r = out.report
    print(f"cnots={r.cnots} depth={r.depth} gates={r.gates} verify={r.verify}", file=sys.stderr)
    if r.verify is False:
        return EXIT_VERIFY
    return EXIT_OK


def _write_word(word: PauliWord, out: Optional[str]) -> int:
    text = format_hamiltonian(word)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_heisenberg(args) -> int:
    return _write_word(generate_heisenberg(args.rows, args.cols, args.J, args.theta), args.out)


def _cmd_random(args) -> int:
    return _write_word(generate_random_word(args.qubits, args.strings, args.density, args.seed), args.out)


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a finite value >= 0, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paulisynth", description="Synthesize Pauli rotations into Clifford+Rz circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="compile a Hamiltonian file")
    s.add_argument("hamiltonian", help="file of '<pauli> <angle>' lines")
    s.add_argument("--mode", choices=[m.value for m in OrderingMode], default="preserve")
    s.add_argument("--heuristic", choices=["logical", "hardware"], default="logical")
    s.add_argument("--coupling", help="coupling graph file (required for --heuristic hardware)")
    s.add_argument("--iterations", type=_positive_int, default=1)
    s.add_argument("--mu", type=_nonneg_float, default=math.sqrt(2.0))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emit", choices=["qasm", "none"], default="qasm")
    s.add_argument("--out", help="QASM output path (default: stdout)")
    s.add_argument("--report", help="JSON report path")
    s.add_argument("--verify", action="store_true", help="check the circuit against the dense rotation product")
    s.add_argument("--no-tail-opt", action="store_true", help="emit the trailing Clifford literally")
    s.add_argument("--progress", action="store_true", help="print iter,best_cnots,elapsed_ms to stderr")
    s.set_defaults(func=_cmd_synth)

    h = sub.add_parser("gen-heisenberg", help="write a Heisenberg lattice Hamiltonian")
    h.add_argument("rows", type=_positive_int)
    h.add_argument("cols", type=_positive_int)
    h.add_argument("--J", type=float, default=1.0)
    h.add_argument("--theta", type=float, default=0.1)
    h.add_argument("--out")
    h.set_defaults(func=_cmd_heisenberg)

    r = sub.add_parser("gen-random", help="write a random Pauli word")
    r.add_argument("qubits", type=_positive_int)
    r.add_argument("strings", type=_positive_int)
    r.add_argument("--density", type=float, default=0.5)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=_cmd_random)
    return p


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, PauliParseError, DisconnectedGraphError, OSError, ValueError) as exc:
        print(f"paulisynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
