"""End-to-end eigenvalue bounds: normalize, split, certify, compute, map back."""

from __future__ import annotations

from .bounds import EigBoundsReport, Status, bounds_on_block, denormalize_bounds, merge_blocks
from .interval_core import SymTriInterval, normalize, split_blocks
from .invariance import (
    InvarianceStatus,
    check_sign_invariance,
    disjoint_refinement,
)
from .sturm import default_tol


def default_eps(m: SymTriInterval) -> float:
    return 1e-6 * max(1.0, m.scale())


def eigenvalue_bounds(m: SymTriInterval, tol: float | None = None, *, refine: bool = False,
                      eps: float | None = None, full_check: bool = False) -> EigBoundsReport:
    """Eigenvalue intervals of ``m`` with witnesses and an exactness status.

    Sign invariancy is checked per diagonal block with the fast path (and
    the exhaustive search too if ``full_check``).  Certified blocks give
    exact endpoints; the rest are inner estimates, which ``refine`` tries to
    upgrade through gap probes at distance ``eps``.
    """
    tol = tol or default_tol(m)
    mn, rec = normalize(m)
    parts = []
    verdicts = []
    for block, offset in split_blocks(mn):
        if block.n == 1:
            verdict = None
            certified = True
        else:
            verdict = check_sign_invariance(block, tol, full=full_check)
            certified = verdict.status is InvarianceStatus.INVARIANT
        verdicts.append((offset, block.n, verdict))
        rep = bounds_on_block(block, tol, certified)
        if block.is_point():
            # every vertex is the block itself, so the values are exact whatever the signs
            rep.status = Status.EXACT
            rep.notes = []
        parts.append((rep, offset))
    report = denormalize_bounds(merge_blocks(parts, m.n), rec)
    report.verdicts = verdicts
    if refine and report.status is not Status.EXACT:
        report = disjoint_refinement(m, report, eps or default_eps(m), tol)
    return report
