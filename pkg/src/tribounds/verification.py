"""Oracle cross-checks for a single instance (backs the ``verify`` command)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import oracle
from .bounds import Status, extremal_bounds
from .interval_core import SymTriInterval, normalize
from .invariance import (
    InvarianceStatus,
    Membership,
    check_sign_invariance,
    inner_estimate,
    membership_test,
    outer_estimate,
)
from .pipeline import eigenvalue_bounds
from .sturm import default_tol


@dataclass
class Check:
    name: str
    passed: bool | None  # None means skipped
    detail: str = ""

    def line(self) -> str:
        tag = {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]
        return f"{tag} {self.name}" + (f": {self.detail}" if self.detail else "")


def run_checks(m: SymTriInterval, tol: float | None = None, seed: int = 0,
               max_bits: int = oracle.MAX_ENUM_BITS, samples: int = 2000) -> list[Check]:
    tol = tol or default_tol(m)
    atol = 1e-9 * max(1.0, m.scale())
    rep = eigenvalue_bounds(m, tol)
    n = m.n
    checks = []

    errs = []
    for k in range(n):
        for side, ws, vals in (("upper", rep.upper_witness, rep.upper), ("lower", rep.lower_witness, rep.lower)):
            w = ws[k]
            if not m.contains(w):
                errs.append(f"{side} witness {k + 1} is not a member")
                continue
            ev = oracle.dense_eigenvalues(w)[k]
            if abs(ev - vals[k]) > atol:
                errs.append(f"{side} k={k + 1}: witness has {ev!r}, report {vals[k]!r}")
    checks.append(Check("witnesses reproduce endpoints", not errs, "; ".join(errs[:3])))

    try:
        vlo, vhi, _, _ = oracle.vertex_extrema(m, max_bits)
    except oracle.OracleCapError as e:
        vlo = vhi = None
        checks.append(Check("vertex oracle", None, str(e)))

    ext = extremal_bounds(m, tol)
    if vlo is not None:
        d = max(abs(ext.upper_first - vhi[0]), abs(ext.lower_last - vlo[-1]),
                abs(ext.lower_first - vlo[0]), abs(ext.upper_last - vhi[-1]))
        checks.append(Check("extremal bounds match vertex extrema", d <= atol, f"max deviation {d:.3g}"))
        if rep.status is Status.EXACT:
            d = max(np.max(np.abs(rep.upper - vhi)), np.max(np.abs(rep.lower - vlo)))
            checks.append(Check("exact endpoints match vertex extrema", d <= atol, f"max deviation {d:.3g}"))
        else:
            ok = bool(np.all(rep.upper <= vhi + atol) and np.all(rep.lower >= vlo - atol))
            checks.append(Check("inner estimate within vertex range", ok))

    slo, shi, _, _ = oracle.sample_extrema(m, samples=samples, seed=seed)
    if rep.status is Status.EXACT:
        ok = bool(np.all(shi <= rep.upper + atol) and np.all(slo >= rep.lower - atol))
        checks.append(Check(f"{samples} random members inside intervals", ok))
    else:
        checks.append(Check(f"{samples} random members inside intervals", None, "status is not Exact"))

    outer = outer_estimate(m, tol)
    pts = np.concatenate([slo, shi] + ([vlo, vhi] if vlo is not None else []))
    ok = all(p in outer for p in pts)
    checks.append(Check("outer estimate encloses sampled eigenvalues", ok))

    sel = rep.upper_selection
    if sel is not None and not any("zero" in s or "count" in s for s in rep.notes):
        bad = [k + 1 for k in range(n) if sel[k].sum() != n - k - 1]
        checks.append(Check("upper-endpoint count equals n-k", not bad, f"k={bad}" if bad else ""))
    else:
        checks.append(Check("upper-endpoint count equals n-k", None, "not a single zero-free block"))

    mn, _ = normalize(m)
    if n <= 30 and np.all(mn.b_lo > 0):
        v = check_sign_invariance(mn, tol, full=True)
        if v.status is InvarianceStatus.INVARIANT and vlo is not None:
            inner = eigenvalue_bounds(m, tol, full_check=True)
            d = max(np.max(np.abs(inner.upper - vhi)), np.max(np.abs(inner.lower - vlo)))
            checks.append(Check("invariant verdict agrees with vertex oracle", d <= atol, f"max deviation {d:.3g}"))
        else:
            checks.append(Check("invariant verdict agrees with vertex oracle", None, f"verdict {v.status}"))

    if vlo is not None:
        inner = inner_estimate(m, tol)
        probes = sorted(set(np.concatenate([vlo - 1e-3 * max(1, m.scale()), vhi + 1e-3 * max(1, m.scale()),
                                            0.5 * (vlo + vhi)]).tolist()))
        bad = []
        decided = 0
        for x in probes:
            r = membership_test(m, x, tol, inner=inner)
            if r is Membership.UNKNOWN:
                continue
            decided += 1
            truth = oracle.is_eigenvalue_bruteforce(m, x, tol, max_bits, samples=200, seed=seed)
            if truth != (r is Membership.IS_EIGENVALUE):
                bad.append(f"{x!r}: test says {r}, brute force says {truth}")
        checks.append(Check("membership test agrees with brute force", not bad,
                            "; ".join(bad[:3]) or f"{decided}/{len(probes)} probes decided"))
    return checks
