"""Compiled inner loops for Sturm-sequence evaluation.

All kernels work on the pivot recurrence

    q_1 = a_1 - x,    q_j = (a_j - x) - b_j**2 / q_{j-1},

where ``q_j`` is the ratio of consecutive leading principal minors of
``T - x I``.  Pivots smaller than ``pivmin`` in magnitude are replaced by
``-pivmin`` (the dstebz convention), so the recurrence never divides by zero
and never overflows.

The batched kernels take matrices of shape ``(n, K)``: column ``c`` holds
the diagonal (resp. squared off-diagonal) of the c-th matrix, and the inner
loop runs over columns so that independent recurrences are pipelined.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sturm_pivots(d, e2, x, pivmin):
    n = d.shape[0]
    q = np.empty(n)
    v = d[0] - x
    if abs(v) < pivmin:
        v = -pivmin
    q[0] = v
    for j in range(1, n):
        v = d[j] - x - e2[j - 1] / v
        if abs(v) < pivmin:
            v = -pivmin
        q[j] = v
    return q


@njit(cache=True)
def bisect_columns(d, e2, nbelow, lo, hi, tol, pivmin, maxit):
    """Bisection for one eigenvalue per column.

    Column c converges to the smallest x with more than ``nbelow[c]``
    eigenvalues at or below it, i.e. the (nbelow[c] + 1)-th smallest
    eigenvalue of matrix c.  Iteration stops once every bracket is narrower
    than ``tol`` or after ``maxit`` halvings.
    """
    n, K = d.shape
    lo = lo.copy()
    hi = hi.copy()
    q = np.empty(K)
    mid = np.empty(K)
    cnt = np.empty(K, np.int64)
    for _ in range(maxit):
        width = 0.0
        for c in range(K):
            w = hi[c] - lo[c]
            if w > width:
                width = w
        if width <= tol:
            break
        for c in range(K):
            mid[c] = 0.5 * (lo[c] + hi[c])
            v = d[0, c] - mid[c]
            if abs(v) < pivmin:
                v = -pivmin
            q[c] = v
            cnt[c] = 1 if v < 0.0 else 0
        for j in range(1, n):
            for c in range(K):
                v = d[j, c] - mid[c] - e2[j - 1, c] / q[c]
                if abs(v) < pivmin:
                    v = -pivmin
                q[c] = v
                if v < 0.0:
                    cnt[c] += 1
        for c in range(K):
            if cnt[c] > nbelow[c]:
                hi[c] = mid[c]
            else:
                lo[c] = mid[c]
    return 0.5 * (lo + hi)


@njit(cache=True)
def twisted_signs_columns(d, e2, xs, pivmin, zero_tol):
    """Eigenvector sign patterns from a twisted factorization of T - x I.

    Forward pivots ``q`` run from the top and backward pivots ``p`` from the
    bottom; the twist index r minimises |q_r + p_r - (d_r - x)|.  Above r
    consecutive entries relate through ``q`` and below r through ``p``, so
    every sign is a product of pivot signs taken in the stable direction.
    (Off-diagonals are assumed positive.)  An entry is reported as 0 when
    the pivot that determines it relative to its neighbour towards r is
    within ``zero_tol`` of zero.  Returns int8 of shape (n, K).
    """
    n = d.shape[0]
    K = xs.shape[0]
    out = np.empty((n, K), np.int8)
    q = np.empty(n)
    p = np.empty(n)
    for c in range(K):
        x = xs[c]
        v = d[0] - x
        if abs(v) < pivmin:
            v = -pivmin
        q[0] = v
        for j in range(1, n):
            v = d[j] - x - e2[j - 1] / v
            if abs(v) < pivmin:
                v = -pivmin
            q[j] = v
        v = d[n - 1] - x
        if abs(v) < pivmin:
            v = -pivmin
        p[n - 1] = v
        for j in range(n - 2, -1, -1):
            v = d[j] - x - e2[j] / v
            if abs(v) < pivmin:
                v = -pivmin
            p[j] = v
        r = 0
        best = np.inf
        for j in range(n):
            g = abs(q[j] + p[j] - (d[j] - x))
            if g < best:
                best = g
                r = j
        out[r, c] = 1
        s = 1
        for j in range(r - 1, -1, -1):
            # z_j = -(b_j / q_j) z_{j+1}
            if q[j] > 0.0:
                s = -s
            out[j, c] = s
            if abs(q[j]) <= zero_tol:
                out[j + 1, c] = 0
        s = 1
        for j in range(r + 1, n):
            # z_j = -(b_{j-1} / p_j) z_{j-1}
            if p[j] > 0.0:
                s = -s
            out[j, c] = s
            if abs(p[j]) <= zero_tol:
                out[j - 1, c] = 0
    return out
