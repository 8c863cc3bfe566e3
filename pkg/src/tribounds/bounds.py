"""Endpoints of the eigenvalue intervals of a symmetric tridiagonal interval matrix.

For the upper endpoint of the k-th eigenvalue interval, every diagonal entry
is pushed to its upper end, and each off-diagonal entry goes to its upper
end exactly when the k-th midpoint eigenvector has the same strict sign on
both rows it couples.  Under sign invariancy of the eigenvectors this vertex
attains the maximum; otherwise it still lies inside the eigenvalue set, so
the result is an inner estimate.  Lower endpoints come from the same rule
applied to ``-m``.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .interval_core import (
    Interval,
    NormalizationRecord,
    SymTri,
    SymTriInterval,
    normalize,
    split_blocks,
    widen_down,
    widen_up,
)
from .sturm import (
    SignPattern,
    all_eigenvalues,
    default_tol,
    eigenvalues_by_index,
    eigenvector_sign_matrix,
    selected_eigenvalues,
)


class Status(str, enum.Enum):
    EXACT = "Exact"
    INNER = "InnerEstimate"
    OUTER = "Outer"

    def __str__(self):
        return self.value


_RANK = {Status.EXACT: 0, Status.INNER: 1, Status.OUTER: 2}


def worst(*statuses: Status) -> Status:
    return max(statuses, key=_RANK.__getitem__)


class WitnessList(Sequence):
    """Read-only sequence of witness matrices built on demand.

    The upper-endpoint search produces one vertex per eigenvalue index; storing n dense
    vertices costs O(n^2) memory, so they are materialized only when read.
    """

    def __init__(self, n: int, build: Callable[[int], SymTri | None]):
        self._n = n
        self._build = build

    def __len__(self):
        return self._n

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._n))]
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(i)
        return self._build(i)

    def map(self, f: Callable[[SymTri], SymTri]) -> WitnessList:
        build = self._build
        return WitnessList(self._n, lambda i: None if (w := build(i)) is None else f(w))


def _empty_witnesses(n):
    return WitnessList(n, lambda i: None)


@dataclass
class EigBoundsReport:
    """Eigenvalue intervals, indexed descending (position 0 is λ_1).

    ``upper``/``lower`` are the computed endpoint values and ``upper_err``/
    ``lower_err`` bound their numerical error; :attr:`intervals` widens by
    that error plus a few ulps so the result encloses the exact endpoint
    values of the witness matrices.
    """

    n: int
    upper: np.ndarray
    lower: np.ndarray
    upper_err: np.ndarray
    lower_err: np.ndarray
    upper_witness: Sequence
    lower_witness: Sequence
    status: Status
    notes: list[str] = field(default_factory=list)
    tol: float = 0.0
    upper_selection: np.ndarray | None = None
    verdicts: list = field(default_factory=list)

    @classmethod
    def empty(cls, n: int, tol: float = 0.0) -> EigBoundsReport:
        nan = np.full(n, np.nan)
        return cls(n, nan.copy(), nan.copy(), np.zeros(n), np.zeros(n),
                   _empty_witnesses(n), _empty_witnesses(n), Status.INNER, [], tol)

    @property
    def intervals(self) -> list[Interval]:
        if np.isnan(self.upper).any() or np.isnan(self.lower).any():
            raise ValueError("report has only one endpoint per interval")
        out = []
        for lo, le, hi, he in zip(self.lower, self.lower_err, self.upper, self.upper_err):
            out.append(Interval(widen_down(lo - le), widen_up(hi + he)))
        return out

    def interval(self, k: int) -> Interval:
        return self.intervals[k - 1]

    def raw_intervals(self) -> list[Interval]:
        """Computed endpoint values without widening (an inner estimate)."""
        return [Interval(min(lo, hi), max(lo, hi)) for lo, hi in zip(self.lower, self.upper)]


def _upper_endpoints(m: SymTriInterval, tol: float):
    """Upper endpoints by the midpoint-eigenvector sign rule.

    Returns (values, selection, zero_flags, midpoint eigenvalues); row k of
    ``selection`` marks off-diagonals taken at their upper endpoint for
    λ_{k+1}.
    """
    n = m.n
    ks = np.arange(1, n + 1)
    if n == 1:
        return np.array([m.a_hi[0]]), np.zeros((1, 0), bool), np.zeros(1, bool), np.array([m.midpoint().diag[0]])
    center = m.midpoint()
    mid_eigs = all_eigenvalues(center, tol)
    S = eigenvector_sign_matrix(center, mid_eigs, tol)
    sel = (S[:, :-1].astype(np.int16) * S[:, 1:]) > 0
    zero = (S == 0).any(axis=1)
    # every member is within ||A - Ac||_2 <= ||radius||_inf of the midpoint (Weyl)
    r = m.radius().norm_inf() * (1 + 1e-12) + 4 * tol
    vals = selected_eigenvalues(m.a_hi, m.b_lo, m.b_hi, sel, ks, tol, bracket=(mid_eigs - r, mid_eigs + r))
    return vals, sel, zero, mid_eigs


def _check_block(m: SymTriInterval):
    if not m.is_nonnegative():
        raise ValueError("interval matrix must be normalized (nonnegative); call normalize() first")
    if np.any(m.b_hi <= 0):
        raise ValueError("off-diagonal upper endpoints must be positive; split blocks first")


def _cardinality_notes(sel, zero, n, label):
    notes = []
    bad = [k + 1 for k in range(n) if not zero[k] and sel[k].sum() != n - (k + 1)]
    if bad:
        notes.append(f"{label}: upper-endpoint count differs from n-k for k in {bad[:10]}")
    z = [k + 1 for k in range(n) if zero[k]]
    if z:
        notes.append(f"{label}: numerically zero eigenvector entry for k in {z[:10]}; lower endpoint used")
    return notes, bool(bad or z)


def upper_bounds_sign_invariant(m: SymTriInterval, tol: float | None = None,
                                certified: bool = False) -> EigBoundsReport:
    """Upper endpoints λ̄_1..λ̄_n with their attaining vertices.

    ``certified`` states that sign invariancy has been established; without
    it the status is InnerEstimate.
    """
    _check_block(m)
    tol = tol or default_tol(m)
    n = m.n
    vals, sel, zero, _ = _upper_endpoints(m, tol)
    notes, degraded = _cardinality_notes(sel, zero, n, "upper")
    rep = EigBoundsReport.empty(n, tol)
    rep.upper = vals
    rep.upper_err = np.full(n, 0.0 if n == 1 else 2 * tol)
    rep.upper_witness = WitnessList(n, lambda k: m.vertex(True, sel[k]))
    rep.upper_selection = sel
    rep.status = Status.EXACT if certified and not degraded else Status.INNER
    rep.notes = notes
    return rep


def lower_bounds_sign_invariant(m: SymTriInterval, tol: float | None = None,
                                certified: bool = False) -> EigBoundsReport:
    """Lower endpoints via λ̲_k(m) = -λ̄_{n+1-k}(-m)."""
    _check_block(m)
    tol = tol or default_tol(m)
    n = m.n
    rep = EigBoundsReport.empty(n, tol)
    if n == 1:
        rep.lower = np.array([m.a_lo[0]])
        rep.lower_witness = WitnessList(1, lambda k: m.vertex(False, []))
        rep.status = Status.EXACT if certified else Status.INNER
        return rep
    neg, rec = normalize(-m)
    vals, sel, zero, _ = _upper_endpoints(neg, tol)
    shift = rec.shift
    # index k of m pairs with index n+1-k of -m
    lower = shift - vals[::-1]
    err = np.full(n, 2 * tol)
    if shift:
        err += 2 * np.spacing(np.abs(vals[::-1]) + shift)
    notes, degraded = _cardinality_notes(sel, zero, n, "lower")

    def build(k):
        w = neg.vertex(True, sel[n - 1 - k])
        return -rec.matrix_to_original(w)

    rep.lower = lower
    rep.lower_err = err
    rep.lower_witness = WitnessList(n, build)
    rep.status = Status.EXACT if certified and not degraded else Status.INNER
    rep.notes = notes
    return rep


def combine(upper: EigBoundsReport, lower: EigBoundsReport) -> EigBoundsReport:
    if upper.n != lower.n:
        raise ValueError("dimension mismatch")
    return EigBoundsReport(
        upper.n, upper.upper, lower.lower, upper.upper_err, lower.lower_err,
        upper.upper_witness, lower.lower_witness, worst(upper.status, lower.status),
        upper.notes + lower.notes, max(upper.tol, lower.tol), upper.upper_selection,
    )


def bounds_on_block(m: SymTriInterval, tol: float | None = None, certified: bool = False) -> EigBoundsReport:
    """Both endpoints for a normalized block with positive off-diagonal upper ends."""
    return combine(upper_bounds_sign_invariant(m, tol, certified), lower_bounds_sign_invariant(m, tol, certified))


def merge_blocks(parts: list[tuple[EigBoundsReport, int]], n: int) -> EigBoundsReport:
    """Assemble block reports into a report for the block-diagonal matrix.

    The k-th largest upper endpoint over all blocks is attained by putting
    every block at the witness of its own c-th upper endpoint, where c counts
    that block's upper endpoints at or above the target value; the lower
    endpoints are handled the same way from below.
    """
    if len(parts) == 1:
        return parts[0][0]
    ups = np.concatenate([r.upper for r, _ in parts])
    los = np.concatenate([r.lower for r, _ in parts])
    uerr = np.concatenate([r.upper_err for r, _ in parts])
    lerr = np.concatenate([r.lower_err for r, _ in parts])
    uo = np.argsort(-ups, kind="stable")
    lo_ = np.argsort(-los, kind="stable")
    sizes = [r.n for r, _ in parts]

    def assemble(pick):
        diag, off = [], []
        for b, (r, _) in enumerate(parts):
            w = pick(b, r)
            diag.append(w.diag)
            if b:
                off.append([0.0])
            off.append(w.off)
        return SymTri(np.concatenate(diag), np.concatenate(off))

    def build_upper(k):
        v = ups[uo[k]]

        def pick(b, r):
            c = int(np.count_nonzero(r.upper >= v))
            return r.upper_witness[max(c, 1) - 1]

        return assemble(pick)

    def build_lower(k):
        v = los[lo_[k]]

        def pick(b, r):
            d = int(np.count_nonzero(r.lower <= v))
            return r.lower_witness[r.n - max(d, 1)]

        return assemble(pick)

    notes = []
    for (r, off), size in zip(parts, sizes):
        notes += [f"block rows {off + 1}-{off + size}: {s}" for s in r.notes]
    return EigBoundsReport(
        n, ups[uo], los[lo_], uerr[uo], lerr[lo_],
        WitnessList(n, build_upper), WitnessList(n, build_lower),
        worst(*(r.status for r, _ in parts)), notes, max(r.tol for r, _ in parts),
    )


def denormalize_bounds(bounds: EigBoundsReport, rec: NormalizationRecord) -> EigBoundsReport:
    """Map a report on the normalized matrix back to original coordinates."""
    if bounds.n != rec.n:
        raise ValueError(f"dimension mismatch: report has n={bounds.n}, record has n={rec.n}")
    a = rec.shift
    upper, lower = bounds.upper - a, bounds.lower - a
    uerr, lerr = bounds.upper_err.copy(), bounds.lower_err.copy()
    if a:
        uerr += 2 * np.spacing(np.abs(bounds.upper))
        lerr += 2 * np.spacing(np.abs(bounds.lower))
    notes = list(bounds.notes)
    if rec.any_widened:
        idx = [i + 2 for i, w in enumerate(rec.widened) if w]
        notes.append(
            f"off-diagonal intervals b_{idx} straddle zero and were replaced by [0, max|b|]; "
            "the spectrum depends only on |b|, so the eigenvalue sets are unchanged"
        )
    sel = bounds.upper_selection
    return EigBoundsReport(
        bounds.n, upper, lower, uerr, lerr,
        _map_witnesses(bounds.upper_witness, rec), _map_witnesses(bounds.lower_witness, rec),
        bounds.status, notes, bounds.tol, sel, list(bounds.verdicts),
    )


def _map_witnesses(ws, rec):
    if isinstance(ws, WitnessList):
        return ws.map(rec.matrix_to_original)
    return [None if w is None else rec.matrix_to_original(w) for w in ws]


class ExtremalBounds(NamedTuple):
    upper_first: float   # λ̄_1
    lower_first: float   # λ̲_1
    upper_last: float    # λ̄_n
    lower_last: float    # λ̲_n


def _extremal_with_err(m: SymTriInterval, tol: float | None):
    """Extremal endpoints and error radii; exact (zero error) for 1x1 blocks."""
    tol = tol or default_tol(m)
    babs_lo = np.where(m.b_lo >= 0, m.b_lo, np.where(m.b_hi <= 0, -m.b_hi, 0.0))
    babs_hi = np.maximum(np.abs(m.b_lo), np.abs(m.b_hi))
    cuts = [0] + [i + 1 for i in np.nonzero(babs_hi == 0)[0]] + [m.n]
    vals = {"uf": [], "lf": [], "ul": [], "ll": []}
    for i, j in zip(cuts[:-1], cuts[1:]):
        nb = j - i
        e = 0.0 if nb == 1 else 2 * tol
        sl_off = slice(i, j - 1)

        def eig(diag, off, k):
            return float(eigenvalues_by_index(SymTri(diag[i:j], off[sl_off]), [k], tol)[0])

        vals["uf"].append((eig(m.a_hi, babs_hi, 1), e))
        vals["ll"].append((eig(m.a_lo, babs_hi, nb), e))
        vals["lf"].append((eig(m.a_lo, babs_lo, 1), e))
        vals["ul"].append((eig(m.a_hi, babs_lo, nb), e))
    return (
        max(vals["uf"]),
        max(vals["lf"]),
        min(vals["ul"]),
        min(vals["ll"]),
    )


def extremal_bounds(m: SymTriInterval, tol: float | None = None) -> ExtremalBounds:
    """λ̄_1, λ̲_1, λ̄_n, λ̲_n without any sign-invariancy assumption.

    With off-diagonals taken in absolute value, the largest eigenvalue is
    maximal at the upper vertex and the smallest is minimal at (lower
    diagonal, upper off-diagonal); the other two use the lower off-diagonal
    ends.  Only eigenvalue-preserving reflections are applied, so ``m`` need
    not be normalized.
    """
    uf, lf, ul, ll = _extremal_with_err(m, tol)
    return ExtremalBounds(uf[0], lf[0], ul[0], ll[0])


def cardinality_of_upper_selection(pattern) -> int:
    """Number of off-diagonals taken at the upper end for a sign pattern.

    For the k-th eigenvector this equals n - k.
    """
    s = pattern if isinstance(pattern, SignPattern) else SignPattern(tuple(int(x) for x in pattern))
    if s.has_zero:
        raise ValueError("sign pattern has a zero entry")
    return int(np.count_nonzero(s.agreements()))


class Decision(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"

    def __str__(self):
        return self.value


def _band(v, e):
    if e == 0:
        return v, v
    return widen_down(v - e), widen_up(v + e)


def _greater(v, e, c, strict=True) -> Decision:
    lo, hi = _band(v, e)
    if (lo > c) if strict else (lo >= c):
        return Decision.YES
    if (hi <= c) if strict else (hi < c):
        return Decision.NO
    return Decision.UNDECIDED


def _less(v, e, c) -> Decision:
    lo, hi = _band(v, e)
    if hi < c:
        return Decision.YES
    if lo >= c:
        return Decision.NO
    return Decision.UNDECIDED


def _both(x: Decision, y: Decision) -> Decision:
    if Decision.NO in (x, y):
        return Decision.NO
    if x is Decision.YES and y is Decision.YES:
        return Decision.YES
    return Decision.UNDECIDED


@dataclass(frozen=True)
class PropertyReport:
    positive_definite: Decision
    positive_semidefinite: Decision
    schur_stable: Decision
    hurwitz_stable: Decision
    max_spectral_radius: Interval
    largest_upper: float
    smallest_lower: float


def property_checks(m: SymTriInterval, tol: float | None = None) -> PropertyReport:
    """Definiteness, stability and maximal spectral radius over the whole interval matrix.

    Each answer needs only λ̄_1 and λ̲_n.  A comparison that falls inside
    the numerical error band is reported as undecided.
    """
    (uf, ue), _, _, (ll, le) = _extremal_with_err(m, tol)
    pd = _greater(ll, le, 0.0)
    psd = _greater(ll, le, 0.0, strict=False)
    schur = _both(_greater(ll, le, -1.0), _less(uf, ue, 1.0))
    hurwitz = _less(uf, ue, 0.0)
    ufl, ufh = _band(uf, ue)
    lll, llh = _band(ll, le)
    rad = Interval(max(ufl, -llh), max(ufh, -lll))
    return PropertyReport(pd, psd, schur, hurwitz, rad, uf, ll)
