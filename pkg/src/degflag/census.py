"""Smallness / semismallness census of the resolution R_n -> Fl^a_n.

For every cell ``B`` of the base we need its dimension and the fibre dimension
``f(B)``, the maximum relative dimension over all admissible collections with
diagonal ``B``.  The map is semismall iff ``dim B + 2 f(B) <= M`` for every
``B``, and small iff the inequality is strict whenever ``f(B) > 0``.

Two backends walk the ``2**M`` collections:

* ``"numba"``: an iterative bitmask DFS compiled with numba, releasing the
  GIL so chunks run on a thread pool.  Diagonals are packed ``n`` bits per
  set into one int64, which caps this path at ``n <= 8``.
* ``"python"``: a plain generator walk, used as a cross-check for small ``n``.

Both partition the walk by fixing the first few choices and merge per-chunk
tables with ``max``, so the result does not depend on the worker count.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import (
    BaseCellLabel, RootIndex, _dfs, _g, _h, _range_mask, beta_order, num_roots,
)
from .errors import CapacityError, InternalConsistencyError

SMALL = "small"
SEMISMALL = "semismall"
NOT_SEMISMALL = "not-semismall"

_NUMBA_MAX_N = 8


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("DEGFLAG_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class CensusTable:
    """Per-base-cell data: packed diagonal key -> (base dimension, max fibre dimension)."""

    n: int
    keys: np.ndarray
    base_dim: np.ndarray
    fiber_dim: np.ndarray
    collections: int
    poincare: list = field(default_factory=list)
    chunks: int = 1
    backend: str = ""

    def label(self, idx: int) -> BaseCellLabel:
        key = int(self.keys[idx])
        width = self.n
        masks = tuple((key >> (width * t)) & ((1 << width) - 1) for t in range(self.n - 1))
        return BaseCellLabel(self.n, masks)


@dataclass
class SmallnessReport:
    n: int
    verdict: str
    witnesses: list = field(default_factory=list)
    base_cells: int = 0
    collections: int = 0
    max_fiber_dim: int = 0
    max_excess: int = 0
    backend: str = ""
    chunks: int = 0
    elapsed: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "verdict": self.verdict,
            "dimension": num_roots(self.n),
            "base_cells": self.base_cells,
            "collections": self.collections,
            "max_fiber_dim": self.max_fiber_dim,
            "max_excess": self.max_excess,
            "witnesses": self.witnesses,
        }
        if timing:
            out["backend"] = self.backend
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out


def _pack(n: int, diag) -> int:
    key = 0
    for t, m in enumerate(diag):
        key |= m << (n * t)
    return key


def _chunk_prefix(chunk: int, bits: int) -> tuple[int, ...]:
    return tuple((chunk >> (bits - 1 - k)) & 1 for k in range(bits))


# ---------------------------------------------------------------------------
# python backend


def _python_chunk(n: int, chunk: int, bits: int, hist: list) -> dict[int, tuple[int, int]]:
    slots = beta_order(n)
    table: dict[int, tuple[int, int]] = {}
    for masks in _dfs(n, slots, _chunk_prefix(chunk, bits)):
        g = sum(_g(n, masks, i, j) for i, j in slots)
        hist[g] += 1
        h = sum(_h(n, masks, i, j) for i in range(1, n - 1) for j in range(i + 1, n))
        key = _pack(n, [masks[RootIndex(i, i)] for i in range(1, n)])
        base = g - h
        old = table.get(key)
        if old is None:
            table[key] = (base, h)
        else:
            if old[0] != base:
                raise InternalConsistencyError(
                    f"base cell dimension depends on the completion (n={n}, key={key})")
            if h > old[1]:
                table[key] = (base, h)
    return table


def _merge_python(n: int, tables, collections: int) -> CensusTable:
    merged: dict[int, tuple[int, int]] = {}
    for t in tables:
        for key, (base, f) in t.items():
            old = merged.get(key)
            if old is None:
                merged[key] = (base, f)
            else:
                if old[0] != base:
                    raise InternalConsistencyError("base cell dimension depends on the completion")
                merged[key] = (base, max(f, old[1]))
    keys = np.array(sorted(merged), dtype=object)
    return CensusTable(
        n, keys,
        np.array([merged[k][0] for k in keys], dtype=np.int64),
        np.array([merged[k][1] for k in keys], dtype=np.int64),
        collections,
    )


# ---------------------------------------------------------------------------
# numba backend

_kernel = None


def _get_kernel():
    global _kernel
    if _kernel is not None:
        return _kernel
    from numba import int64, njit
    from numba.typed import Dict

    @njit(nogil=True, cache=True)
    def kernel(n, i_arr, j_arr, lo_idx, up_idx, hl_idx, full_mask, bits, chunks):
        M = i_arr.shape[0]
        table = Dict.empty(key_type=int64, value_type=int64)
        S = np.zeros(M, np.int64)
        lower = np.zeros(M, np.int64)
        c0 = np.zeros(M, np.int64)
        c1 = np.zeros(M, np.int64)
        state = np.zeros(M + 1, np.int64)
        gacc = np.zeros(M + 1, np.int64)
        hacc = np.zeros(M + 1, np.int64)
        hist = np.zeros(M + 1, np.int64)
        conflicts = 0
        leaves = 0
        first_diag = M - n + 1
        for ci in range(chunks.shape[0]):
            chunk = chunks[ci]
            k = 0
            state[0] = 0
            while k >= 0:
                if k == M:
                    leaves += 1
                    hist[gacc[M]] += 1
                    key = 0
                    for t in range(n - 1):
                        key |= S[first_diag + t] << (n * t)
                    h = hacc[M]
                    base = gacc[M] - h
                    if key in table:
                        old = table[key]
                        if (old >> 8) != base:
                            conflicts += 1
                        if h > (old & 255):
                            table[key] = (base << 8) | h
                    else:
                        table[key] = (base << 8) | h
                    k -= 1
                    continue
                st = state[k]
                if st == 0:
                    i = i_arr[k]
                    j = j_arr[k]
                    lw = S[lo_idx[k]] if lo_idx[k] >= 0 else 0
                    if up_idx[k] >= 0:
                        up = S[up_idx[k]] | (1 << j)
                    else:
                        up = full_mask[k]
                    cand = up & ~lw
                    x = cand & -cand
                    lower[k] = lw
                    c0[k] = x
                    c1[k] = cand ^ x
                    if k < bits:
                        if (chunk >> (bits - 1 - k)) & 1:
                            choice = c1[k]
                        else:
                            choice = c0[k]
                        state[k] = 2
                    else:
                        choice = c0[k]
                        state[k] = 1
                elif st == 1:
                    choice = c1[k]
                    state[k] = 2
                else:
                    k -= 1
                    continue
                i = i_arr[k]
                j = j_arr[k]
                s = lower[k] | choice
                S[k] = s
                # g term at (i, j)
                if i == 1:
                    g = 1 if s != (1 << j) else 0
                elif j == n - 1:
                    l = s & ~lower[k]
                    g = 1 if l == (1 << (i - 1)) else 0
                elif (s >> j) & 1 == 0:
                    g = 1
                else:
                    l = 0
                    v = s & ~lower[k]
                    while v > 1:
                        v >>= 1
                        l += 1
                    l += 1
                    m = 0
                    v = S[up_idx[k]] & ~s
                    while v > 1:
                        v >>= 1
                        m += 1
                    m += 1
                    wl = l - j if l - j > 0 else l - j + n
                    wm = m - j if m - j > 0 else m - j + n
                    g = 1 if wl > wm else 0
                # h term at (i-1, j), now that S_{i,j} is known
                h = 0
                if i >= 2:
                    left = S[hl_idx[k]]
                    if (left >> (j - 1)) & 1:
                        sa = S[lo_idx[k]]
                        l = 0
                        v = sa & ~left
                        while v > 1:
                            v >>= 1
                            l += 1
                        l += 1
                        m = 0
                        v = s & ~sa
                        while v > 1:
                            v >>= 1
                            m += 1
                        m += 1
                        wl = l - j if l - j > 0 else l - j + n
                        wm = m - j if m - j > 0 else m - j + n
                        h = 1 if wm < wl else 0
                gacc[k + 1] = gacc[k] + g
                hacc[k + 1] = hacc[k] + h
                k += 1
                state[k] = 0
        keys = np.empty(len(table), np.int64)
        vals = np.empty(len(table), np.int64)
        t = 0
        for key, val in table.items():
            keys[t] = key
            vals[t] = val
            t += 1
        return keys, vals, conflicts, leaves, hist

    _kernel = kernel
    return kernel


def _tables(n: int):
    slots = beta_order(n)
    index = {s: k for k, s in enumerate(slots)}
    M = len(slots)
    i_arr = np.array([s.i for s in slots], np.int64)
    j_arr = np.array([s.j for s in slots], np.int64)
    lo = np.array([index.get(RootIndex(s.i - 1, s.j), -1) for s in slots], np.int64)
    up = np.array([index.get(RootIndex(s.i, s.j + 1), -1) for s in slots], np.int64)
    hl = np.array([index.get(RootIndex(s.i - 1, s.j - 1), -1) for s in slots], np.int64)
    full = np.array([_range_mask(1, s.i) | (1 << (n - 1)) for s in slots], np.int64)
    assert M == num_roots(n)
    return i_arr, j_arr, lo, up, hl, full


def _merge_numba(n: int, parts, collections: int) -> CensusTable:
    keys = np.concatenate([p[0] for p in parts])
    vals = np.concatenate([p[1] for p in parts])
    order = np.argsort(keys, kind="stable")
    keys, vals = keys[order], vals[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    base = vals >> 8
    if np.any(np.minimum.reduceat(base, starts) != np.maximum.reduceat(base, starts)):
        raise InternalConsistencyError("base cell dimension depends on the completion")
    fiber = np.maximum.reduceat(vals & 255, starts)
    return CensusTable(n, keys[starts], base[starts], fiber, collections)


# ---------------------------------------------------------------------------


def census(n: int, parallelism: int | None = None, backend: str = "auto",
           chunk_bits: int | None = None) -> CensusTable:
    """Walk all admissible collections and tabulate every base cell."""
    M = num_roots(n)
    workers = parallelism or default_threads()
    if backend == "auto":
        backend = "numba" if 5 <= n <= _NUMBA_MAX_N else "python"
    if backend == "numba" and n > _NUMBA_MAX_N:
        raise CapacityError(f"bitmask census supports n <= {_NUMBA_MAX_N}")
    if chunk_bits is None:
        chunk_bits = min(M, 8 if backend == "numba" else 4)
    chunk_bits = min(chunk_bits, M)
    chunk_ids = list(range(1 << chunk_bits))
    groups = [chunk_ids[w::workers] for w in range(workers)]
    groups = [g for g in groups if g]

    if backend == "python":
        hists = [[0] * (M + 1) for _ in groups]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(
                lambda gh: [_python_chunk(n, c, chunk_bits, gh[1]) for c in gh[0]],
                zip(groups, hists)))
        out = _merge_python(n, [t for ts in tables for t in ts], 1 << M)
        out.poincare = [sum(col) for col in zip(*hists)]
        out.chunks, out.backend = len(chunk_ids), backend
        return out

    kernel = _get_kernel()
    arrays = _tables(n)

    def run(group):
        return kernel(n, *arrays, chunk_bits, np.array(group, np.int64))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, groups))
    if sum(p[2] for p in parts):
        raise InternalConsistencyError("base cell dimension depends on the completion")
    leaves = sum(int(p[3]) for p in parts)
    if leaves != 1 << M:
        raise InternalConsistencyError(f"walked {leaves} collections, expected {1 << M}")
    out = _merge_numba(n, parts, leaves)
    out.poincare = [int(x) for x in sum(p[4] for p in parts)]
    out.chunks, out.backend = len(chunk_ids), backend
    return out


def smallness_report(n: int, parallelism: int | None = None, backend: str = "auto",
                     chunk_bits: int | None = None, max_witnesses: int = 20) -> SmallnessReport:
    """Classify R_n -> Fl^a_n as small, semismall or not semismall.

    Witnesses are the base cells violating the next-stronger condition, ordered
    by decreasing excess ``dim B + 2 f(B) - M`` and then by packed label.
    """
    t0 = time.perf_counter()
    table = census(n, parallelism, backend, chunk_bits)
    M = num_roots(n)
    excess = table.base_dim + 2 * table.fiber_dim - M
    positive = table.fiber_dim > 0
    if np.any(excess > 0):
        verdict = NOT_SEMISMALL
        bad = np.flatnonzero(excess > 0)
    elif np.any(positive & (excess == 0)):
        verdict = SEMISMALL
        bad = np.flatnonzero(positive & (excess == 0))
    else:
        verdict = SMALL
        bad = np.array([], dtype=np.int64)
    bad = sorted(bad.tolist(), key=lambda k: (-int(excess[k]), int(table.keys[k])))
    witnesses = []
    for k in bad[:max_witnesses]:
        witnesses.append({
            "label": [list(s.elements) for s in table.label(k).sets],
            "base_dim": int(table.base_dim[k]),
            "fiber_dim": int(table.fiber_dim[k]),
            "excess": int(excess[k]),
        })
    with_fiber = excess[positive]
    return SmallnessReport(
        n=n, verdict=verdict, witnesses=witnesses,
        base_cells=len(table.keys), collections=table.collections,
        max_fiber_dim=int(table.fiber_dim.max()),
        max_excess=int(with_fiber.max()) if with_fiber.size else -M,
        backend=table.backend, chunks=table.chunks, elapsed=time.perf_counter() - t0,
    )
