"""Command-line front end: ``tribounds <command> <file> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal

import numpy as np

from . import __version__, oracle
from .bounds import EigBoundsReport, extremal_bounds, property_checks
from .interval_core import SymTri, SymTriInterval
from .invariance import InvarianceStatus, InvarianceVerdict, check_sign_invariance
from .pipeline import eigenvalue_bounds
from .problem import ProblemError, load_problem
from .sturm import default_tol
from .verification import run_checks

JSON_WITNESS_MAX_N = 64
TEXT_WITNESS_MAX_N = 12
TEXT_INTERVAL_MAX_N = 200
PLACES = Decimal("0.0001")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def fmt_lo(x: float) -> str:
    return str(Decimal(x).quantize(PLACES, rounding=ROUND_FLOOR))


def fmt_hi(x: float) -> str:
    return str(Decimal(x).quantize(PLACES, rounding=ROUND_CEILING))


def fmt_num(x: float) -> str:
    return f"{x:g}"


def sides(w: SymTri, m: SymTriInterval) -> str:
    """Endpoint code per entry: U upper end, L lower end, M elsewhere; '|' separates diag from off."""
    def code(v, lo, hi):
        c = np.where(v == hi, ord("U"), np.where(v == lo, ord("L"), ord("M")))
        return c.astype(np.uint8).tobytes().decode("ascii")

    return f"{code(w.diag, m.a_lo, m.a_hi)}|{code(w.off, m.b_lo, m.b_hi)}"


def _witness_json(w, m, k, with_values):
    if w is None:
        return {"k": k, "sides": None}
    out = {"k": k, "sides": sides(w, m)}
    if with_values:
        out["a"] = w.diag.tolist()
        out["b"] = w.off.tolist()
    return out


def _verdict_json(v: InvarianceVerdict | None, offset=0, size=1):
    d = {"rows": [offset + 1, offset + size]}
    if v is None:
        d.update(status=str(InvarianceStatus.INVARIANT), method="trivial", note="1x1 block", witness=None)
        return d
    d.update(status=str(v.status), method=v.method or (v.certificate or {}).get("method", ""), note=v.note)
    if v.certificate:
        d["method"] = f"{v.method}/{v.certificate['method']}" if v.method else v.certificate["method"]
    if v.witness:
        iset, val = v.witness
        d["witness"] = {"zeros": [offset + i for i in iset.members], "value": val}
    else:
        d["witness"] = None
    return d


def _verdict_text(v: InvarianceVerdict | None, offset=0, size=1) -> str:
    d = _verdict_json(v, offset, size)
    s = f"rows {d['rows'][0]}-{d['rows'][1]}: {d['status']} ({d['method']})"
    if d["witness"]:
        s += f", zero set {{{', '.join(map(str, d['witness']['zeros']))}}} common eigenvalue {d['witness']['value']:.10g}"
    if d["note"]:
        s += f"; {d['note']}"
    return s


def _timings(args, t0):
    return None if args.deterministic else {"total_s": time.perf_counter() - t0}


def _emit(args, doc, lines):
    if args.json:
        print(json.dumps(doc, indent=2, allow_nan=False))
    else:
        for line in lines:
            print(line)
        if doc.get("timings"):
            print(f"time: {doc['timings']['total_s'] * 1e3:.1f} ms")


def bounds_doc(m: SymTriInterval, rep: EigBoundsReport) -> dict:
    ivs = rep.intervals
    wv = m.n <= JSON_WITNESS_MAX_N
    return {
        "status": str(rep.status),
        "intervals": [{"k": k + 1, "lo": iv.lo, "hi": iv.hi} for k, iv in enumerate(ivs)],
        "witnesses": {
            "upper": [_witness_json(rep.upper_witness[k], m, k + 1, wv) for k in range(m.n)],
            "lower": [_witness_json(rep.lower_witness[k], m, k + 1, wv) for k in range(m.n)],
        },
        "verdict": {
            "blocks": [_verdict_json(v, off, size) for off, size, v in rep.verdicts],
            "notes": list(rep.notes),
        },
    }


def cmd_bounds(args, m, name):
    t0 = time.perf_counter()
    rep = eigenvalue_bounds(m, args.tol, refine=args.refine or args.eps is not None,
                            eps=args.eps, full_check=args.full_check)
    doc = bounds_doc(m, rep)
    doc["timings"] = _timings(args, t0)
    lines = [f"{name}: n = {m.n}", f"status: {rep.status}"]
    lines += ["invariance: " + _verdict_text(v, off, size) for off, size, v in rep.verdicts[:20]]
    if len(rep.verdicts) > 20:
        lines.append(f"invariance: ... {len(rep.verdicts) - 20} more blocks")
    lines += [f"note: {s}" for s in rep.notes]
    ivs = rep.intervals
    shown = ivs if m.n <= TEXT_INTERVAL_MAX_N else ivs[:10] + ivs[-10:]
    idx = list(range(1, m.n + 1)) if m.n <= TEXT_INTERVAL_MAX_N else list(range(1, 11)) + list(range(m.n - 9, m.n + 1))
    lines.append("   k  interval")
    for k, iv in zip(idx, shown):
        if m.n > TEXT_INTERVAL_MAX_N and k == m.n - 9:
            lines.append("   ...")
        lines.append(f"{k:4d}  [{fmt_lo(iv.lo)}, {fmt_hi(iv.hi)}]")
    if m.n <= TEXT_WITNESS_MAX_N:
        for label, ws in (("upper", rep.upper_witness), ("lower", rep.lower_witness)):
            lines.append(f"{label} witnesses:")
            for k, w in enumerate(ws, start=1):
                lines.append(f"{k:4d}  {sides(w, m)}  a=[{', '.join(map(fmt_num, w.diag))}]"
                             f"  b=[{', '.join(map(fmt_num, w.off))}]")
    else:
        lines.append("witnesses omitted for n > %d; use --json" % TEXT_WITNESS_MAX_N)
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_extremal(args, m, name):
    t0 = time.perf_counter()
    e = extremal_bounds(m, args.tol)
    doc = {"extremal": e._asdict(), "timings": _timings(args, t0)}
    lines = [f"{name}: n = {m.n}",
             f"largest eigenvalue  in [{fmt_lo(e.lower_first)}, {fmt_hi(e.upper_first)}]",
             f"smallest eigenvalue in [{fmt_lo(e.lower_last)}, {fmt_hi(e.upper_last)}]"]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_check_invariance(args, m, name):
    t0 = time.perf_counter()
    v = check_sign_invariance(m, args.tol, full=True)
    doc = {"verdict": _verdict_json(v, 0, m.n), "timings": _timings(args, t0)}
    _emit(args, doc, [f"{name}: n = {m.n}", _verdict_text(v, 0, m.n)])
    if args.strict and v.status is InvarianceStatus.UNKNOWN:
        return EXIT_FAIL
    return EXIT_OK


def cmd_properties(args, m, name):
    t0 = time.perf_counter()
    p = property_checks(m, args.tol)
    rad = p.max_spectral_radius
    doc = {
        "properties": {
            "positive_definite": str(p.positive_definite),
            "positive_semidefinite": str(p.positive_semidefinite),
            "schur_stable": str(p.schur_stable),
            "hurwitz_stable": str(p.hurwitz_stable),
            "max_spectral_radius": [rad.lo, rad.hi],
            "largest_upper": p.largest_upper,
            "smallest_lower": p.smallest_lower,
        },
        "timings": _timings(args, t0),
    }
    lines = [f"{name}: n = {m.n}"]
    lines += [f"{k}: {v}" for k, v in doc["properties"].items() if isinstance(v, str)]
    lines.append(f"max spectral radius in [{fmt_lo(rad.lo)}, {fmt_hi(rad.hi)}]")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_verify(args, m, name):
    t0 = time.perf_counter()
    checks = run_checks(m, args.tol, seed=args.seed, max_bits=args.max_enum)
    failed = any(c.passed is False for c in checks)
    doc = {
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "passed": not failed,
        "timings": _timings(args, t0),
    }
    _emit(args, doc, [f"{name}: n = {m.n}"] + [c.line() for c in checks])
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "bounds": (cmd_bounds, "eigenvalue intervals with witnesses and status"),
    "extremal": (cmd_extremal, "bounds on the largest and smallest eigenvalue only"),
    "check-invariance": (cmd_check_invariance, "sign-invariancy verdict with witness or certificate"),
    "properties": (cmd_properties, "definiteness, stability and spectral radius decisions"),
    "verify": (cmd_verify, "compare against brute-force oracles, one line per check"),
}


def _positive(s):
    v = float(s)
    if not np.isfinite(v) or v <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="problem file (JSON, or CSV with --csv or a .csv suffix)")
    common.add_argument("--tol", type=_positive, default=None,
                        help="bisection tolerance (default 1e-12 times the matrix scale)")
    common.add_argument("--eps", type=_positive, default=None,
                        help="gap probe distance for refinement (implies --refine)")
    common.add_argument("--refine", action="store_true", help="try to upgrade inner estimates to exact")
    common.add_argument("--full-check", action="store_true",
                        help="run the exhaustive invariance search when the fast path is inconclusive")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--csv", action="store_true", help="read the input as CSV")
    common.add_argument("--seed", type=int, default=0, help="seed for random sampling in verify")
    common.add_argument("--max-enum", type=int, default=oracle.MAX_ENUM_BITS,
                        help="vertex enumeration cap, as a power of two")
    common.add_argument("--deterministic", action="store_true", help="omit timings so output is reproducible")
    common.add_argument("--strict", action="store_true", help="exit 1 on an Unknown invariance verdict")

    p = argparse.ArgumentParser(prog="tribounds", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd, (_, help_) in COMMANDS.items():
        sub.add_parser(cmd, parents=[common], help=help_, description=help_)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        prob = load_problem(args.file, as_csv=True if args.csv else None)
        m = prob.matrix()
    except ProblemError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    tol = args.tol or default_tol(m)
    args.tol = tol
    return COMMANDS[args.command][0](args, m, prob.name)


if __name__ == "__main__":
    sys.exit(main())
