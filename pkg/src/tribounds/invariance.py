"""Deciding sign invariancy of eigenvectors, and certifying exactness via gaps.

An eigenvector of a member matrix can only change sign pattern through an
entry passing zero.  With positive off-diagonals, a zero at row i means the
two submatrices obtained by deleting row and column i share an eigenvalue;
more zeros split the matrix into more pieces that must all share it.  The
checks below look for such a common value, either by proving that none can
exist (outer estimates of the pieces are disjoint) or by exhibiting one
(inner estimates of the pieces intersect).
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numpy as np

from .bounds import (
    EigBoundsReport,
    Status,
    bounds_on_block,
    extremal_bounds,
)
from .interval_core import (
    Interval,
    SymTriInterval,
    interval_list_intersection,
    normalize,
    split_blocks,
)
from .sturm import all_eigenvalues, default_tol, kth_eigenvalue

log = logging.getLogger(__name__)

MAX_FULL_N = 30
MAX_WEYL_N = 256


@dataclass(frozen=True)
class IndexSet:
    """Candidate zero positions of an eigenvector (1-based rows)."""

    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(i) for i in self.members)
        if any(b <= a for a, b in zip(m, m[1:])):
            raise ValueError(f"index set must be strictly increasing: {m}")
        object.__setattr__(self, "members", m)

    def is_admissible(self, n: int) -> bool:
        m = self.members
        return (
            all(2 <= i <= n - 1 for i in m)
            and all(b - a >= 2 for a, b in zip(m, m[1:]))
        )

    def pieces(self, n: int) -> list[tuple[int, int]]:
        """Row ranges (1-based, inclusive) left after deleting the members."""
        bounds = [0, *self.members, n + 1]
        return [(a + 1, b - 1) for a, b in zip(bounds[:-1], bounds[1:])]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def admissible_index_sets(n: int) -> Iterator[IndexSet]:
    """All nonempty subsets of {2..n-1} without two consecutive members.

    Yielded in lexicographic order.
    """
    if n < 1:
        raise ValueError("n must be positive")

    def rec(prefix, start):
        for i in range(start, n):
            cur = prefix + (i,)
            yield IndexSet(cur)
            yield from rec(cur, i + 2)

    yield from rec((), 2)


def count_admissible(n: int) -> int:
    """Number of admissible index sets, the empty set included."""
    # no-two-adjacent subsets of an (n-2)-element path
    a, b = 1, 2  # sizes 0 and 1
    m = max(n - 2, 0)
    for _ in range(m):
        a, b = b, a + b
    return a


class _Union:
    """Finite union of closed intervals."""

    def __init__(self, intervals):
        self.intervals = sorted(intervals, key=lambda x: x.lo)

    def merged(self) -> list[Interval]:
        out = []
        for x in self.intervals:
            if out and x.lo <= out[-1].hi:
                out[-1] = out[-1].hull(x)
            else:
                out.append(x)
        return out

    def disjoint_from(self, other: _Union) -> bool:
        return not interval_list_intersection(self.merged(), other.merged())

    def distance(self, x: float) -> float:
        d = math.inf
        for iv in self.intervals:
            if iv.lo <= x <= iv.hi:
                return 0.0
            d = min(d, iv.lo - x if x < iv.lo else x - iv.hi)
        return d

    def __contains__(self, x):
        return self.distance(x) == 0.0


@dataclass(frozen=True)
class OuterEstimate:
    """Per-index enclosures of the eigenvalue sets; their union encloses the spectrum."""

    intervals: list[Interval]

    def union(self) -> list[Interval]:
        return _Union(self.intervals).merged()

    def __contains__(self, x) -> bool:
        return any(x in iv for iv in self.intervals)

    def disjoint_from(self, other: OuterEstimate) -> bool:
        return _Union(self.intervals).disjoint_from(_Union(other.intervals))


def outer_estimate(m: SymTriInterval, tol: float | None = None) -> OuterEstimate:
    """Midpoint eigenvalues widened by the spectral radius of the radius matrix.

    For any member ``A``, ``|λ_k(A) - λ_k(Ac)| <= ||A - Ac||_2 <= ρ(Δ)``.
    """
    tol = tol or default_tol(m)
    lam = all_eigenvalues(m.midpoint(), tol)
    delta = m.radius()
    rho = kth_eigenvalue(delta, 1, tol) if delta.n > 1 else float(delta.diag[0])
    r = rho + 4 * tol if delta.n > 1 else rho
    out = [Interval(x - r, x + r).outward() for x in lam]
    return OuterEstimate(out)


class InvarianceStatus(str, enum.Enum):
    INVARIANT = "Invariant"
    NOT_INVARIANT = "NotInvariant"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class InvarianceVerdict:
    status: InvarianceStatus
    witness: tuple[IndexSet, float] | None = None
    certificate: dict | None = None
    note: str = ""
    method: str = ""

    def __post_init__(self):
        if self.status is InvarianceStatus.NOT_INVARIANT and self.witness is None:
            raise ValueError("NotInvariant verdict needs a witness")


def _gershgorin_discs(m: SymTriInterval) -> list[Interval]:
    bmax = np.maximum(np.abs(m.b_lo), np.abs(m.b_hi))
    r = np.zeros(m.n)
    r[:-1] += bmax
    r[1:] += bmax
    return [Interval(lo, hi).outward() for lo, hi in zip(m.a_lo - r, m.a_hi + r)]


def _gershgorin_certificate(m: SymTriInterval):
    """Disjointness of the discs of rows at distance >= 2.

    For a split at row i, the eigenvalues of either piece lie in the union of
    that piece's discs, and rows on opposite sides are at least two apart.
    """
    discs = _gershgorin_discs(m)
    order = sorted(range(m.n), key=lambda j: discs[j].lo)
    active: list[int] = []
    for j in order:
        active = [a for a in active if discs[a].hi >= discs[j].lo]
        for a in active:
            if abs(a - j) >= 2:
                return None
        active.append(j)
    return {"method": "gershgorin", "discs": discs}


def _weyl_certificate(m: SymTriInterval, tol):
    splits = []
    for i in range(2, m.n):
        left = outer_estimate(m.sub(0, i - 1), tol)
        right = outer_estimate(m.sub(i, m.n), tol)
        if not left.disjoint_from(right):
            return None
        splits.append((i, left, right))
    return {"method": "weyl", "splits": splits}


def recheck_certificate(cert: dict) -> bool:
    """Re-verify the disjointness conditions stored in a fast-path certificate."""
    if cert["method"] == "weyl":
        return all(left.disjoint_from(right) for _, left, right in cert["splits"])
    discs = cert["discs"]
    n = len(discs)
    return all(
        not discs[j].intersects(discs[l]) for j in range(n) for l in range(j + 2, n)
    )


def _inner_union(m: SymTriInterval, tol) -> list[Interval]:
    rep = bounds_on_block(m, tol)
    return rep.raw_intervals()


def _full_path(m: SymTriInterval, tol):
    n = m.n
    band = 2 * tol
    cache: dict[tuple[int, int], list[Interval]] = {}

    def piece(s, e):
        key = (s, e)
        if key not in cache:
            cache[key] = _inner_union(m.sub(s - 1, e), tol)
        return cache[key]

    ambiguous = []

    def rec(s, chosen, exact, loose):
        # finishing here closes the last piece s..n
        if chosen:
            p = piece(s, n)
            ex = interval_list_intersection(exact, p)
            if ex:
                return IndexSet(chosen), ex[0].mid
            lo = interval_list_intersection(loose, [x.inflate(band) for x in p])
            if lo:
                ambiguous.append(IndexSet(chosen))
        for z in range(s + 1, n):
            p = piece(s, z - 1)
            ex = p if exact is None else interval_list_intersection(exact, p)
            pl = [x.inflate(band) for x in p]
            lo = pl if loose is None else interval_list_intersection(loose, pl)
            if not lo:
                continue
            hit = rec(z + 1, chosen + (z,), ex, lo)
            if hit:
                return hit
        return None

    hit = rec(1, (), None, None)
    return hit, ambiguous


def check_sign_invariance(m: SymTriInterval, tol: float | None = None, full: bool = True,
                          max_full_n: int = MAX_FULL_N) -> InvarianceVerdict:
    """Three-valued sign-invariancy verdict.

    The fast path tries to separate the spectra of the two pieces around
    every interior row, first with Gershgorin discs and then with the
    midpoint/radius outer estimate.  If that fails and ``full`` is set, all
    admissible zero sets are searched for a common inner-estimate eigenvalue
    of their pieces.  Requires strictly positive off-diagonal lower ends.
    """
    if not m.is_nonnegative():
        m, _ = normalize(m)
    tol = tol or default_tol(m)
    if np.any(m.b_lo <= 0):
        return InvarianceVerdict(
            InvarianceStatus.UNKNOWN,
            note="an off-diagonal interval reaches zero; the zero-entry criterion needs b_lo > 0",
        )
    cert = _gershgorin_certificate(m)
    if cert is None and m.n <= MAX_WEYL_N:
        cert = _weyl_certificate(m, tol)
    if cert is not None:
        return InvarianceVerdict(InvarianceStatus.INVARIANT, certificate=cert, method="fast")
    if not full:
        return InvarianceVerdict(InvarianceStatus.UNKNOWN, note="fast path inconclusive", method="fast")
    if m.n > max_full_n:
        return InvarianceVerdict(
            InvarianceStatus.UNKNOWN,
            note=f"fast path inconclusive and n={m.n} exceeds the enumeration limit {max_full_n}",
            method="full",
        )
    hit, ambiguous = _full_path(m, tol)
    if hit:
        return InvarianceVerdict(InvarianceStatus.NOT_INVARIANT, witness=hit, method="full")
    if ambiguous:
        return InvarianceVerdict(
            InvarianceStatus.UNKNOWN,
            note=f"pieces overlap only within the tolerance band for {ambiguous[0]}",
            method="full",
        )
    return InvarianceVerdict(
        InvarianceStatus.INVARIANT,
        note="no admissible zero set has a common inner-estimate eigenvalue",
        method="full",
    )


class Membership(str, enum.Enum):
    IS_EIGENVALUE = "IsEigenvalue"
    NOT_EIGENVALUE = "NotEigenvalue"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def _down(x):
    return float(np.nextafter(x, -np.inf))


def _up(x):
    return float(np.nextafter(x, np.inf))


def _pivot(a_lo, a_hi, x, b2_lo, b2_hi, q):
    """Outward-rounded range of a - x - b^2/q for q not containing zero."""
    lo, hi = _down(a_lo - x), _up(a_hi - x)
    if b2_hi == 0:
        return lo, hi
    qlo, qhi = q
    cands = (b2_lo / qlo, b2_lo / qhi, b2_hi / qlo, b2_hi / qhi)
    return _down(lo - _up(max(cands))), _up(hi - _down(min(cands)))


def _excludes_zero(q):
    return q[0] > 0 or q[1] < 0


def prove_not_eigenvalue(m: SymTriInterval, x: float) -> bool:
    """Interval Sturm proof that no member of ``m`` has eigenvalue ``x``.

    Evaluates the pivot recurrence from the top and from the bottom with
    interval operands.  Each step brings in entries not used before and is
    monotone in them, so the intervals are exact ranges up to outward
    rounding.  If for some twist row r all top pivots above r, all bottom
    pivots below r and the twisted pivot at r exclude zero, then
    det(A - xI) has constant nonzero sign over the whole matrix set.
    """
    n = m.n
    babs_lo = np.where(m.b_lo >= 0, m.b_lo, np.where(m.b_hi <= 0, -m.b_hi, 0.0))
    babs_hi = np.maximum(np.abs(m.b_lo), np.abs(m.b_hi))
    b2 = [(_down(lo * lo), _up(hi * hi)) for lo, hi in zip(babs_lo, babs_hi)]
    top = [None] * n
    q = None
    for j in range(n):
        if j == 0:
            q = (_down(m.a_lo[0] - x), _up(m.a_hi[0] - x))
        else:
            q = _pivot(m.a_lo[j], m.a_hi[j], x, *b2[j - 1], top[j - 1])
        top[j] = q
        if not _excludes_zero(q):
            break
    bot = [None] * n
    for j in range(n - 1, -1, -1):
        if j == n - 1:
            q = (_down(m.a_lo[j] - x), _up(m.a_hi[j] - x))
        else:
            q = _pivot(m.a_lo[j], m.a_hi[j], x, *b2[j], bot[j + 1])
        bot[j] = q
        if not _excludes_zero(q):
            break
    for r in range(n):
        if r > 0 and (top[r - 1] is None or not _excludes_zero(top[r - 1])):
            break
        if r < n - 1 and (bot[r + 1] is None or not _excludes_zero(bot[r + 1])):
            continue
        lo, hi = _down(m.a_lo[r] - x), _up(m.a_hi[r] - x)
        for side, b in ((top[r - 1] if r > 0 else None, b2[r - 1] if r > 0 else None),
                        (bot[r + 1] if r < n - 1 else None, b2[r] if r < n - 1 else None)):
            if side is None or b[1] == 0:
                continue
            cands = (b[0] / side[0], b[0] / side[1], b[1] / side[0], b[1] / side[1])
            lo, hi = _down(lo - _up(max(cands))), _up(hi - _down(min(cands)))
        if _excludes_zero((lo, hi)):
            return True
    return False


def inner_estimate(m: SymTriInterval, tol: float | None = None) -> list[Interval]:
    """Unwidened intervals known to lie inside the eigenvalue sets (any order)."""
    tol = tol or default_tol(m)
    mn, rec = normalize(m)
    out = []
    for block, _ in split_blocks(mn):
        for iv in bounds_on_block(block, tol).raw_intervals():
            out.append(Interval(iv.lo - rec.shift, iv.hi - rec.shift))
    return out


def membership_test(m: SymTriInterval, x: float, tol: float | None = None,
                    inner: list[Interval] | None = None) -> Membership:
    """Is ``x`` an eigenvalue of at least one member of ``m``?

    NotEigenvalue is only returned with a proof (outer estimate or interval
    Sturm evaluation) and when ``x`` is more than ``2*tol`` away from every
    inner-estimate interval, so the two definite answers can never occur
    within ``2*tol`` of each other.
    """
    tol = tol or default_tol(m)
    if inner is None:
        inner = inner_estimate(m, tol)
    d = _Union(inner).distance(x)
    if d == 0.0:
        return Membership.IS_EIGENVALUE
    if d > 2 * tol:
        if x not in outer_estimate(m, tol) or prove_not_eigenvalue(m, x):
            return Membership.NOT_EIGENVALUE
    return Membership.UNKNOWN


def disjoint_refinement(m: SymTriInterval, inner: EigBoundsReport, eps: float,
                        tol: float | None = None) -> EigBoundsReport:
    """Upgrade an inner estimate to exact when the eigenvalue sets are separated.

    If the inner intervals are pairwise disjoint and, for every interior
    index, the points ``eps`` beyond both ends are provably not eigenvalues
    of any member, each eigenvalue set cannot extend further than ``eps``
    past its inner interval, and the extreme sets are exact anyway.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    tol = tol or inner.tol or default_tol(m)
    if inner.status is Status.EXACT:
        return inner
    n = inner.n
    ivs = inner.intervals
    for k in range(n - 1):
        if not ivs[k + 1].hi < ivs[k].lo:
            return replace(inner, notes=inner.notes + [
                f"refinement skipped: inner intervals {k + 1} and {k + 2} are not disjoint"])
    ext = extremal_bounds(m, tol)
    if not (abs(ext.upper_first - inner.upper[0]) <= 4 * tol
            and abs(ext.lower_last - inner.lower[-1]) <= 4 * tol
            and abs(ext.lower_first - inner.lower[0]) <= 4 * tol
            and abs(ext.upper_last - inner.upper[-1]) <= 4 * tol):
        return replace(inner, notes=inner.notes + ["refinement skipped: extreme intervals disagree with extremal bounds"])
    raw = inner.raw_intervals()
    for k in range(1, n - 1):
        for probe in (inner.lower[k] - eps, inner.upper[k] + eps):
            verdict = membership_test(m, probe, tol, inner=raw)
            if verdict is not Membership.NOT_EIGENVALUE:
                return replace(inner, notes=inner.notes + [
                    f"refinement failed: probe {probe!r} for k={k + 1} is {verdict}"])
    # interior sets are pinned only to within eps of the inner values
    uerr = inner.upper_err.copy()
    lerr = inner.lower_err.copy()
    uerr[1:n - 1] += eps
    lerr[1:n - 1] += eps
    return replace(inner, status=Status.EXACT, upper_err=uerr, lower_err=lerr, notes=inner.notes + [
        f"exact up to eps={eps:g}: all interior gap probes are non-eigenvalues"])
