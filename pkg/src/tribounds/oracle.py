"""Brute-force ground truth for small instances.

Everything here uses dense LAPACK eigensolvers on explicitly formed member
matrices, so it shares no code path with the Sturm solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interval_core import SymTri, SymTriInterval

MAX_ENUM_BITS = 24
GRID_BUDGET = 10**7
BATCH = 1 << 14


class OracleCapError(ValueError):
    pass


@dataclass(frozen=True)
class OracleRange:
    k: int
    lo: float
    hi: float
    argmin: SymTri
    argmax: SymTri
    seed: int | None = None


def entry_candidates(m: SymTriInterval) -> list[np.ndarray]:
    """Values each entry takes at the extreme points of the matrix set.

    Diagonal entries use their endpoints.  The spectrum depends on an
    off-diagonal only through its absolute value, so an interval that
    straddles zero also contributes 0.
    """
    out = [np.unique([lo, hi]) for lo, hi in zip(m.a_lo, m.a_hi)]
    for lo, hi in zip(m.b_lo, m.b_hi):
        c = [lo, hi] + ([0.0] if lo < 0 < hi else [])
        out.append(np.unique(c))
    return out


def _dense_batch(n, values):
    """values: (B, 2n-1) with diag first; returns (B, n, n)."""
    B = values.shape[0]
    A = np.zeros((B, n, n))
    idx = np.arange(n)
    A[:, idx, idx] = values[:, :n]
    if n > 1:
        A[:, idx[:-1], idx[1:]] = values[:, n:]
        A[:, idx[1:], idx[:-1]] = values[:, n:]
    return A


def _to_symtri(n, row):
    return SymTri(row[:n], row[n:])


def _scan(n, batches):
    """Track per-index extrema of descending eigenvalues over batches of entry values."""
    lo = np.full(n, np.inf)
    hi = np.full(n, -np.inf)
    lo_arg = [None] * n
    hi_arg = [None] * n
    for vals in batches:
        ev = np.linalg.eigvalsh(_dense_batch(n, vals))[:, ::-1]
        imin = ev.argmin(axis=0)
        imax = ev.argmax(axis=0)
        for k in range(n):
            if ev[imin[k], k] < lo[k]:
                lo[k] = ev[imin[k], k]
                lo_arg[k] = vals[imin[k]].copy()
            if ev[imax[k], k] > hi[k]:
                hi[k] = ev[imax[k], k]
                hi_arg[k] = vals[imax[k]].copy()
    return lo, hi, lo_arg, hi_arg


def _vertex_batches(m: SymTriInterval, max_bits: int):
    cands = entry_candidates(m)
    sizes = np.array([c.size for c in cands], dtype=np.int64)
    total = int(np.prod(sizes))
    if total > 2**max_bits:
        raise OracleCapError(
            f"vertex enumeration needs {total} matrices, above the cap 2^{max_bits}"
        )
    for start in range(0, total, BATCH):
        ids = np.arange(start, min(start + BATCH, total), dtype=np.int64)
        cols = []
        for c, s in zip(cands, sizes):
            cols.append(c[ids % s])
            ids = ids // s
        yield np.column_stack(cols)


def vertex_extrema(m: SymTriInterval, max_bits: int = MAX_ENUM_BITS):
    """Per-index (lo, hi, argmin, argmax) over all vertices; arrays are descending-indexed."""
    n = m.n
    lo, hi, la, ha = _scan(n, _vertex_batches(m, max_bits))
    return lo, hi, [_to_symtri(n, r) for r in la], [_to_symtri(n, r) for r in ha]


def vertex_enumerate(m: SymTriInterval, k: int, tol: float | None = None,
                     max_bits: int = MAX_ENUM_BITS) -> OracleRange:
    """Exact max/min of λ_k over all vertex matrices."""
    if not 1 <= k <= m.n:
        raise ValueError(f"k must lie in 1..{m.n}")
    lo, hi, la, ha = vertex_extrema(m, max_bits)
    return OracleRange(k, float(lo[k - 1]), float(hi[k - 1]), la[k - 1], ha[k - 1])


def _random_batches(m: SymTriInterval, samples: int, rng):
    lo = np.concatenate([m.a_lo, m.b_lo])
    hi = np.concatenate([m.a_hi, m.b_hi])
    left = samples
    while left > 0:
        b = min(BATCH, left)
        yield rng.uniform(lo, hi, size=(b, lo.size))
        left -= b


def _grid_batches(m: SymTriInterval, points_per_entry: int):
    lo = np.concatenate([m.a_lo, m.b_lo])
    hi = np.concatenate([m.a_hi, m.b_hi])
    axes = [np.linspace(a, b, points_per_entry) if a < b else np.array([a]) for a, b in zip(lo, hi)]
    sizes = np.array([x.size for x in axes], dtype=np.int64)
    total = int(np.prod(sizes))
    if total > GRID_BUDGET:
        raise OracleCapError(f"grid of {total} points exceeds budget {GRID_BUDGET}; use random sampling")
    for start in range(0, total, BATCH):
        ids = np.arange(start, min(start + BATCH, total), dtype=np.int64)
        cols = []
        for x, s in zip(axes, sizes):
            cols.append(x[ids % s])
            ids = ids // s
        yield np.column_stack(cols)


def sample_extrema(m: SymTriInterval, samples: int = 10_000, seed: int = 0,
                   points_per_entry: int | None = None):
    """Per-index (lo, hi) over a grid or a seeded uniform sample (an inner approximation)."""
    n = m.n
    if points_per_entry is not None:
        batches = _grid_batches(m, points_per_entry)
    else:
        batches = _random_batches(m, samples, np.random.default_rng(seed))
    lo, hi, la, ha = _scan(n, batches)
    return lo, hi, [_to_symtri(n, r) for r in la], [_to_symtri(n, r) for r in ha]


def grid_sample(m: SymTriInterval, k: int, points_per_entry: int, tol: float | None = None,
                random: bool = False, samples: int = 10_000, seed: int = 0) -> OracleRange:
    """Extrema of λ_k over a uniform grid, or over ``samples`` random members."""
    if not 1 <= k <= m.n:
        raise ValueError(f"k must lie in 1..{m.n}")
    if random:
        lo, hi, la, ha = sample_extrema(m, samples=samples, seed=seed)
    else:
        lo, hi, la, ha = sample_extrema(m, points_per_entry=points_per_entry)
    return OracleRange(k, float(lo[k - 1]), float(hi[k - 1]), la[k - 1], ha[k - 1],
                       seed if random else None)


def is_eigenvalue_bruteforce(m: SymTriInterval, x: float, tol: float,
                             max_bits: int = MAX_ENUM_BITS, samples: int = 2000,
                             seed: int = 0) -> bool:
    """Whether some member has ``x`` as an eigenvalue.

    True if a visited member has an eigenvalue within ``tol`` of ``x``, or
    if the number of eigenvalues below ``x`` differs between two visited
    members (the matrix set is connected, so some member in between has
    ``x`` in its spectrum).
    """
    n = m.n
    counts = set()
    rng = np.random.default_rng(seed)
    for batches in (_vertex_batches(m, max_bits), _random_batches(m, samples, rng)):
        for vals in batches:
            ev = np.linalg.eigvalsh(_dense_batch(n, vals))
            if np.any(np.abs(ev - x) <= tol):
                return True
            counts.update(np.count_nonzero(ev < x, axis=1).tolist())
            if len(counts) > 1:
                return True
    return False


def dense_eigenvalues(T: SymTri) -> np.ndarray:
    return np.linalg.eigvalsh(T.dense())[::-1]
