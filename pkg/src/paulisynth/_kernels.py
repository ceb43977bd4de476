"""Bit-level kernels over symplectic Pauli arrays.

Every kernel has two implementations: a pure-numpy one (column-vectorised) and a
loop version compiled with numba.  The loop versions are selected when numba
imports cleanly and ``PAULISYNTH_NO_JIT`` is unset (or ``0``).  Both operate on
``uint8`` arrays ``x``, ``z`` of shape ``(rows, n)`` and ``sign`` of shape
``(rows,)`` and mutate them in place where noted.

Letter codes used throughout: ``code = x | (z << 1)``, so I=0, X=1, Z=2, Y=3.
"""

from __future__ import annotations

import os

import numpy as np

GATE_H = 0
GATE_S = 1
GATE_SDG = 2
GATE_CX = 3

_DISABLED = os.environ.get("PAULISYNTH_NO_JIT", "0").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by PAULISYNTH_NO_JIT")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised through the env flag in CI
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def conjugate_np(x, z, sign, kind, a, b):
    """Conjugate every row by one Clifford gate, in place."""
    if kind == GATE_CX:
        xc = x[:, a].copy()
        zc = z[:, a].copy()
        xt = x[:, b].copy()
        zt = z[:, b].copy()
        sign ^= xc & zt & (xt ^ zc ^ 1)
        x[:, b] = xt ^ xc
        z[:, a] = zc ^ zt
        return
    xa = x[:, a].copy()
    za = z[:, a].copy()
    if kind == GATE_H:
        sign ^= xa & za
        x[:, a] = za
        z[:, a] = xa
    elif kind == GATE_S:
        sign ^= xa & za
        z[:, a] = za ^ xa
    elif kind == GATE_SDG:
        sign ^= xa & (za ^ 1)
        z[:, a] = za ^ xa
    else:
        raise ValueError(f"unknown gate kind {kind}")


def anticommute_np(x, z):
    """Pairwise anticommutation indicator, ``(K, K)`` uint8."""
    xi = x.astype(np.int64)
    zi = z.astype(np.int64)
    return ((xi @ zi.T + zi @ xi.T) & 1).astype(np.uint8)


def pair_histogram_np(x, z, i, j):
    """Counts of the 16 (letter_i, letter_j) combinations over all rows."""
    ci = x[:, i].astype(np.int64) | (z[:, i].astype(np.int64) << 1)
    cj = x[:, j].astype(np.int64) | (z[:, j].astype(np.int64) << 1)
    return np.bincount(4 * ci + cj, minlength=16).astype(np.int64)


def row_distance_np(occ, dist):
    """``sum_p sum_q occ[p] * dist[p, q] * occ[q]`` for every row of ``occ``."""
    o = occ.astype(np.int64)
    return ((o @ dist) * o).sum(axis=1)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------


@njit(cache=True)
def conjugate_nb(x, z, sign, kind, a, b):
    rows = x.shape[0]
    if kind == 3:
        for r in range(rows):
            xc = x[r, a]
            zc = z[r, a]
            xt = x[r, b]
            zt = z[r, b]
            sign[r] ^= xc & zt & (xt ^ zc ^ 1)
            x[r, b] = xt ^ xc
            z[r, a] = zc ^ zt
    elif kind == 0:
        for r in range(rows):
            xa = x[r, a]
            za = z[r, a]
            sign[r] ^= xa & za
            x[r, a] = za
            z[r, a] = xa
    elif kind == 1:
        for r in range(rows):
            xa = x[r, a]
            za = z[r, a]
            sign[r] ^= xa & za
            z[r, a] = za ^ xa
    elif kind == 2:
        for r in range(rows):
            xa = x[r, a]
            za = z[r, a]
            sign[r] ^= xa & (za ^ 1)
            z[r, a] = za ^ xa
    else:
        raise ValueError("unknown gate kind")


@njit(cache=True)
def anticommute_nb(x, z):
    k, n = x.shape
    out = np.zeros((k, k), dtype=np.uint8)
    for u in range(k):
        for v in range(u + 1, k):
            acc = 0
            for q in range(n):
                acc ^= (x[u, q] & z[v, q]) ^ (z[u, q] & x[v, q])
            out[u, v] = acc
            out[v, u] = acc
    return out


@njit(cache=True)
def pair_histogram_nb(x, z, i, j):
    hist = np.zeros(16, dtype=np.int64)
    for r in range(x.shape[0]):
        ci = x[r, i] | (z[r, i] << 1)
        cj = x[r, j] | (z[r, j] << 1)
        hist[4 * ci + cj] += 1
    return hist


@njit(cache=True)
def row_distance_nb(occ, dist):
    k, n = occ.shape
    out = np.zeros(k, dtype=np.int64)
    for r in range(k):
        acc = 0
        for p in range(n):
            if occ[r, p]:
                for q in range(n):
                    if occ[r, q]:
                        acc += dist[p, q]
        out[r] = acc
    return out


if USE_NUMBA:
    conjugate = conjugate_nb
    anticommute = anticommute_nb
    pair_histogram = pair_histogram_nb
    row_distance = row_distance_nb
else:
    conjugate = conjugate_np
    anticommute = anticommute_np
    pair_histogram = pair_histogram_np
    row_distance = row_distance_np


# ---------------------------------------------------------------------------
# greedy block scoring
#
# For every ordered qubit pair (i, j) drawn from ``support`` and every single-qubit
# pair (Q_i, Q_j) in {I, H, S}^2, score the word after conjugating columns i, j.
# ``score_tab`` / ``rp_tab`` are (9, 16) tables mapping the pre-conjugation letter
# pair code 4*a + b to the post-conjugation (RP - IP) and RP indicators;
# ``valid`` is a (16, 9) mask saying which Q pairs turn the target's letters into
# a reducible pair.  Output arrays are (w, w, 9): benefit and RP count.
# ---------------------------------------------------------------------------


def block_scores_np(x, z, target, support, score_tab, rp_tab, valid):
    codes = (x[:, support].astype(np.int64) | (z[:, support].astype(np.int64) << 1))
    pair = 4 * codes[:, :, None] + codes[:, None, :]
    hist = np.stack([(pair == c).sum(axis=0) for c in range(16)], axis=-1)
    base = score_tab[0]
    benefit = hist @ score_tab.T - (hist @ base)[:, :, None]
    rp = hist @ rp_tab.T
    tpair = pair[target]
    ok = valid[tpair]
    w = support.size
    ok[np.arange(w), np.arange(w), :] = False
    return benefit, rp, ok


@njit(cache=True)
def block_scores_nb(x, z, target, support, score_tab, rp_tab, valid):
    k = x.shape[0]
    w = support.size
    benefit = np.zeros((w, w, 9), dtype=np.int64)
    rp = np.zeros((w, w, 9), dtype=np.int64)
    ok = np.zeros((w, w, 9), dtype=np.bool_)
    hist = np.zeros(16, dtype=np.int64)
    for a in range(w):
        i = support[a]
        for b in range(w):
            if a == b:
                continue
            j = support[b]
            hist[:] = 0
            for r in range(k):
                ci = x[r, i] | (z[r, i] << 1)
                cj = x[r, j] | (z[r, j] << 1)
                hist[4 * ci + cj] += 1
            base = 0
            for c in range(16):
                base += hist[c] * score_tab[0, c]
            tcode = 4 * (x[target, i] | (z[target, i] << 1)) + (x[target, j] | (z[target, j] << 1))
            for q in range(9):
                s = 0
                p = 0
                for c in range(16):
                    s += hist[c] * score_tab[q, c]
                    p += hist[c] * rp_tab[q, c]
                benefit[a, b, q] = s - base
                rp[a, b, q] = p
                ok[a, b, q] = valid[tcode, q]
    return benefit, rp, ok


block_scores = block_scores_nb if USE_NUMBA else block_scores_np
