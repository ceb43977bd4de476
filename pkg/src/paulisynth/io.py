"""Hamiltonian and coupling-graph files, plus small model generators.

Hamiltonian files hold one ``<letters> <angle>`` pair per line, where a line
``XZ 0.5`` stands for ``exp(-0.5i XZ)``.  Letters may carry a leading sign.
Coupling files start with the qubit count, followed by one ``i j`` edge per
line.  Both formats accept ``#`` comments and blank lines.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .pauli import PauliParseError, PauliWord, parse_string, render


class FormatError(ValueError):
    pass


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_hamiltonian_text(text: str, source: str = "<string>") -> PauliWord:
    strings, thetas = [], []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"{source}:{lineno}: expected '<pauli> <angle>', got {line!r}")
        try:
            p = parse_string(parts[0])
        except PauliParseError as exc:
            raise FormatError(f"{source}:{lineno}: {exc}") from None
        try:
            theta = float(parts[1])
        except ValueError:
            raise FormatError(f"{source}:{lineno}: bad angle {parts[1]!r}") from None
        if not math.isfinite(theta):
            raise FormatError(f"{source}:{lineno}: angle must be finite, got {parts[1]!r}")
        if strings and p.n != strings[0].n:
            raise FormatError(f"{source}:{lineno}: string has {p.n} qubits, expected {strings[0].n}")
        strings.append(p)
        thetas.append(theta)
    if not strings:
        raise FormatError(f"{source}: no Pauli strings found")
    return PauliWord.from_strings(strings, thetas)


def parse_hamiltonian(path) -> PauliWord:
    path = Path(path)
    return parse_hamiltonian_text(path.read_text(), str(path))


def format_hamiltonian(word: PauliWord) -> str:
    order = np.argsort(word.orig_index, kind="stable")
    lines = [f"{render(word.row(int(k)))} {float(word.thetas[k])!r}" for k in order]
    return "\n".join(lines) + "\n"


def write_hamiltonian(path, word: PauliWord) -> None:
    Path(path).write_text(format_hamiltonian(word))


def parse_coupling_text(text: str, source: str = "<string>") -> tuple[int, list]:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError(f"{source}: empty coupling file")
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise FormatError(f"{source}:{lineno}: first line must be the qubit count, got {head!r}") from None
    if n < 1:
        raise FormatError(f"{source}:{lineno}: qubit count must be positive")
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        try:
            i, j = (int(v) for v in parts)
        except ValueError:
            raise FormatError(f"{source}:{lineno}: expected 'i j', got {line!r}") from None
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise FormatError(f"{source}:{lineno}: bad edge ({i}, {j}) for {n} qubits")
        edges.append((i, j))
    return n, edges


def parse_coupling(path) -> tuple[int, list]:
    path = Path(path)
    return parse_coupling_text(path.read_text(), str(path))


def format_coupling(n: int, edges: Iterable) -> str:
    return "\n".join([str(n)] + [f"{i} {j}" for i, j in edges]) + "\n"


def lattice_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    """Nearest-neighbour edges of a rows x cols grid; site (r, c) is qubit r*cols + c."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return edges


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def ring_edges(n: int) -> list[tuple[int, int]]:
    return path_edges(n) + ([(n - 1, 0)] if n > 2 else [])


def _string_on(n: int, support: dict) -> str:
    letters = ["I"] * n
    for q, ch in support.items():
        letters[n - 1 - q] = ch
    return "".join(letters)


def generate_heisenberg(rows: int, cols: int, J: float = 1.0, theta: float = 0.1) -> PauliWord:
    """XX, YY and ZZ terms on every lattice edge, one qubit per site."""
    if rows * cols < 2:
        raise ValueError("the lattice needs at least two sites")
    n = rows * cols
    strings = []
    for u, v in lattice_edges(rows, cols):
        for ch in "XYZ":
            strings.append(_string_on(n, {u: ch, v: ch}))
    return PauliWord.from_strings(strings, [J * theta] * len(strings))


def generate_random_word(
    n: int,
    k: int,
    density: float = 0.5,
    seed: Optional[int] = 0,
    angle_range: float = 1.0,
) -> PauliWord:
    """``k`` strings whose letters are non-identity with probability ``density``.

    Identity draws are resampled so every string has weight at least one.
    """
    if not 0.0 < density <= 1.0:
        raise ValueError(f"density must be in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    x = np.zeros((k, n), dtype=np.uint8)
    z = np.zeros((k, n), dtype=np.uint8)
    for r in range(k):
        while True:
            occ = rng.random(n) < density
            if occ.any():
                break
        codes = np.where(occ, rng.integers(1, 4, n), 0)
        x[r] = codes & 1
        z[r] = codes >> 1
    thetas = rng.uniform(-angle_range, angle_range, k)
    return PauliWord(x, z, np.zeros(k, dtype=np.uint8), thetas)
