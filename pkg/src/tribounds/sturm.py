"""Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

Eigenvalues are indexed in descending order throughout the package:
``k = 1`` is the largest.  The leading-minor polynomials are taken as
``chi_j(x) = det(x I - T_j)`` with ``chi_0 = 1``; with this convention
the number of sign agreements between consecutive terms equals the number
of eigenvalues below ``x``, and for positive off-diagonals the sign of
eigenvector entry ``j`` equals the sign of ``chi_{j-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from . import _kernels
from .interval_core import SymTri

EPS = np.finfo(float).eps
# dstebz-style pivot floor, scaled by max(1, max b^2)
PIVMIN_FACTOR = np.finfo(float).tiny / EPS
MAXIT = 200
COLUMN_CHUNK = 256


class ConvergenceError(RuntimeError):
    pass


def default_tol(T) -> float:
    return 1e-12 * max(1.0, T.norm_inf() if isinstance(T, SymTri) else T.scale())


def pivmin(e2: np.ndarray) -> float:
    return PIVMIN_FACTOR * max(1.0, float(e2.max()) if e2.size else 0.0)


def gershgorin(T: SymTri) -> tuple[float, float]:
    r = np.zeros(T.n)
    ab = np.abs(T.off)
    r[:-1] += ab
    r[1:] += ab
    lo = float(np.min(T.diag - r))
    hi = float(np.max(T.diag + r))
    # the Sturm count is backward stable only up to a few ulps of the norm
    pad = 2 * T.n * EPS * max(abs(lo), abs(hi), 1.0) + pivmin(T.off ** 2)
    return lo - pad, hi + pad


def _check_tol(tol):
    if tol is None:
        return None
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return float(tol)


@dataclass(frozen=True)
class SturmEvaluation:
    """Signs of chi_0..chi_n at a point and the eigenvalue count below it."""

    signs: np.ndarray
    count_below: int


@dataclass(frozen=True)
class SignPattern:
    """Entrywise signs (+1, 0, -1) of an eigenvector."""

    s: tuple[int, ...]

    def __len__(self):
        return len(self.s)

    def __iter__(self):
        return iter(self.s)

    def __getitem__(self, i):
        return self.s[i]

    @property
    def has_zero(self) -> bool:
        return 0 in self.s

    def agreements(self) -> np.ndarray:
        """Boolean per off-diagonal entry: consecutive entries share a strict sign."""
        s = np.asarray(self.s)
        return s[:-1] * s[1:] > 0

    def canonical(self) -> SignPattern:
        """Pattern with the first nonzero entry positive."""
        for x in self.s:
            if x:
                return self if x > 0 else SignPattern(tuple(-y for y in self.s))
        return self

    def __str__(self):
        return "".join({1: "+", 0: "0", -1: "-"}[x] for x in self.s)


def sturm_count(T: SymTri, x: float) -> SturmEvaluation:
    """Sturm sequence signs and number of eigenvalues strictly below ``x``.

    A vanishing pivot is nudged to ``-pivmin``; this makes the count at an
    exact eigenvalue behave like the count just above it, which is what
    bisection needs.
    """
    if not math.isfinite(x):
        raise ValueError(f"shift must be finite, got {x}")
    e2 = T.off ** 2
    q = _kernels.sturm_pivots(T.diag, e2, float(x), pivmin(e2))
    # chi_j / chi_{j-1} = -q_j
    flips = np.cumsum(q > 0)
    signs = np.ones(T.n + 1, dtype=np.int8)
    signs[1:] = np.where(flips % 2 == 0, 1, -1)
    return SturmEvaluation(signs, int(np.count_nonzero(q < 0)))


def _bisect(diag_cols, e2_cols, nbelow, lo, hi, tol, pmin):
    nbelow = np.ascontiguousarray(nbelow, dtype=np.int64)
    return _kernels.bisect_columns(diag_cols, e2_cols, nbelow, lo, hi, tol, pmin, MAXIT)


def eigenvalues_by_index(T: SymTri, ks, tol: float | None = None, bracket=None) -> np.ndarray:
    """λ_k(T) for each (1-based, descending) index in ``ks``."""
    tol = _check_tol(tol) or default_tol(T)
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    n = T.n
    if ks.size and (ks.min() < 1 or ks.max() > n):
        raise ValueError(f"eigenvalue index out of range 1..{n}")
    if n == 1:
        return np.full(ks.size, T.diag[0])
    e2 = T.off ** 2
    pmin = pivmin(e2)
    glo, ghi = gershgorin(T)
    out = np.empty(ks.size)
    for start in range(0, ks.size, COLUMN_CHUNK):
        sl = slice(start, min(start + COLUMN_CHUNK, ks.size))
        K = sl.stop - sl.start
        if bracket is None:
            lo, hi = np.full(K, glo), np.full(K, ghi)
        else:
            lo = np.maximum(np.asarray(bracket[0], float)[sl], glo)
            hi = np.minimum(np.asarray(bracket[1], float)[sl], ghi)
        d = np.broadcast_to(T.diag[:, None], (n, K))
        e = np.broadcast_to(e2[:, None], (n - 1, K))
        out[sl] = _bisect(d, e, n - ks[sl], lo, hi, tol, pmin)
    return out


def kth_eigenvalue(T: SymTri, k: int, tol: float | None = None) -> float:
    """The k-th largest eigenvalue of ``T`` to within ``tol``."""
    if not 1 <= k <= T.n:
        raise ValueError(f"k must lie in 1..{T.n}, got {k}")
    return float(eigenvalues_by_index(T, [k], tol)[0])


def all_eigenvalues(T: SymTri, tol: float | None = None) -> np.ndarray:
    """All eigenvalues, descending."""
    return eigenvalues_by_index(T, np.arange(1, T.n + 1), tol)


def selected_eigenvalues(diag, off_lo, off_hi, select, ks, tol, bracket=None) -> np.ndarray:
    """λ_{ks[c]} of the matrix with diagonal ``diag`` and off-diagonal
    ``where(select[c], off_hi, off_lo)``, for every row c of ``select``.

    This is the batched workhorse behind the bounds engine: one bisection
    sweep serves up to ``COLUMN_CHUNK`` different vertex matrices.
    """
    diag = np.asarray(diag, float)
    n = diag.size
    ks = np.asarray(ks, dtype=np.int64)
    if n == 1:
        return np.full(ks.size, diag[0])
    lo2, hi2 = np.asarray(off_lo, float) ** 2, np.asarray(off_hi, float) ** 2
    pmin = pivmin(np.maximum(lo2, hi2))
    T_hi = SymTri(diag, np.maximum(np.abs(off_lo), np.abs(off_hi)))
    glo, ghi = gershgorin(T_hi)
    out = np.empty(ks.size)
    d = np.broadcast_to(diag[:, None], (n, COLUMN_CHUNK))
    for start in range(0, ks.size, COLUMN_CHUNK):
        sl = slice(start, min(start + COLUMN_CHUNK, ks.size))
        K = sl.stop - sl.start
        e = np.where(select[sl].T, hi2[:, None], lo2[:, None])
        if bracket is None:
            lo, hi = np.full(K, glo), np.full(K, ghi)
        else:
            lo = np.maximum(np.asarray(bracket[0], float)[sl], glo)
            hi = np.minimum(np.asarray(bracket[1], float)[sl], ghi)
        out[sl] = _bisect(d[:, :K], e, n - ks[sl], lo, hi, tol, pmin)
    return out


def sign_zero_tol(T: SymTri, tol: float) -> float:
    return T.n * EPS * T.norm_inf() + 2 * tol


def eigenvector_sign_matrix(T: SymTri, lams, tol: float | None = None) -> np.ndarray:
    """Sign patterns for several eigenvalue approximations at once.

    Returns int8 array of shape (len(lams), n).
    """
    tol = _check_tol(tol) or default_tol(T)
    if np.any(T.off <= 0):
        raise ValueError("eigenvector signs need positive off-diagonals")
    lams = np.ascontiguousarray(np.atleast_1d(np.asarray(lams, float)))
    e2 = T.off ** 2
    out = _kernels.twisted_signs_columns(T.diag, e2, lams, pivmin(e2), sign_zero_tol(T, tol))
    return out.T


def eigenvector_signs(T: SymTri, lam: float, tol: float | None = None) -> SignPattern:
    """Sign pattern of the eigenvector belonging to the eigenvalue near ``lam``.

    Taken from a twisted factorization: above the twist index entry j has
    the sign of chi_{j-1}(lam), below it the signs come from the trailing
    minors.  Entries whose governing pivot is numerically zero are reported
    as 0 instead of guessing.
    """
    return SignPattern(tuple(int(x) for x in eigenvector_sign_matrix(T, [lam], tol)[0]))


def eigenvector(T: SymTri, lam: float, restarts: int = 5) -> np.ndarray:
    """Unit eigenvector for the eigenvalue near ``lam`` by inverse iteration.

    Sign is fixed so that the entry of largest magnitude is positive.
    """
    n = T.n
    if n == 1:
        return np.ones(1)
    scale = max(T.norm_inf(), np.finfo(float).tiny)
    target = 1e-8 * scale
    rng = np.random.default_rng(12345)
    ab = np.zeros((3, n))
    ab[0, 1:] = T.off
    ab[2, :-1] = T.off
    dense_residual = None
    for attempt in range(restarts + 1):
        sigma = lam + attempt * (attempt % 2 * 2 - 1) * 64 * EPS * scale
        ab[1] = T.diag - sigma
        x = rng.uniform(0.5, 1.5, n)
        x /= np.linalg.norm(x)
        try:
            for _ in range(3):
                y = solve_banded((1, 1), ab, x, check_finite=False)
                nrm = np.linalg.norm(y)
                if not np.isfinite(nrm) or nrm == 0:
                    raise np.linalg.LinAlgError("degenerate solve")
                x = y / nrm
        except (np.linalg.LinAlgError, ValueError):
            # exactly singular shift; perturb and retry
            ab[1] = T.diag - sigma - 1e3 * EPS * scale
            try:
                y = solve_banded((1, 1), ab, x, check_finite=False)
            except (np.linalg.LinAlgError, ValueError):
                continue
            x = y / np.linalg.norm(y)
        r = _matvec(T, x) - lam * x
        dense_residual = np.linalg.norm(r)
        if dense_residual <= target:
            i = int(np.argmax(np.abs(x)))
            return x if x[i] > 0 else -x
    raise ConvergenceError(
        f"inverse iteration did not converge near {lam!r} (residual {dense_residual!r}); "
        "eigenvalue may be clustered or inaccurate"
    )


def _matvec(T: SymTri, x: np.ndarray) -> np.ndarray:
    y = T.diag * x
    y[:-1] += T.off * x[1:]
    y[1:] += T.off * x[:-1]
    return y


def determinant(T: SymTri) -> float:
    """det(T) by the three-term recurrence (fine for small n)."""
    p_prev, p = 1.0, T.diag[0]
    for j in range(1, T.n):
        p_prev, p = p, T.diag[j] * p - T.off[j - 1] ** 2 * p_prev
    return float(p)
