"""Reading interval matrices from JSON or CSV problem files."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .interval_core import SymTriInterval


class ProblemError(ValueError):
    """Input file problem; ``str()`` is ``path:line: message``."""

    def __init__(self, path, line, message):
        self.path, self.line, self.message = str(path), line, message
        super().__init__(f"{path}:{line}: {message}")


@dataclass
class ProblemFile:
    n: int
    a: list[tuple[float, float]]
    b: list[tuple[float, float]]
    name: str = ""
    comment: str = ""
    meta: dict = field(default_factory=dict)

    def matrix(self) -> SymTriInterval:
        return SymTriInterval(self.a, self.b)

    def to_json(self) -> str:
        doc = {"name": self.name, "comment": self.comment, "n": self.n,
               "a": [list(p) for p in self.a], "b": [list(p) for p in self.b]}
        if not self.name:
            del doc["name"]
        if not self.comment:
            del doc["comment"]
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_matrix(cls, m: SymTriInterval, name="", comment="") -> ProblemFile:
        return cls(m.n, list(zip(m.a_lo.tolist(), m.a_hi.tolist())),
                   list(zip(m.b_lo.tolist(), m.b_hi.tolist())), name, comment)


def _element_lines(text: str, key: str) -> list[int]:
    """Line number of each element of the top-level array ``key``.

    A small scanner over the raw text; returns [] if the key is not found.
    """
    depth = 0
    i = 0
    line = 1
    n = len(text)
    target = None
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
        elif ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            s = text[i + 1:j]
            i = j
            if depth == 1 and s == key:
                target = True
        elif ch in "[{":
            depth += 1
            if target and ch == "[" and depth == 2:
                return _scan_elements(text, i + 1, line)
        elif ch in "]}":
            depth -= 1
        elif ch == ",":
            if depth == 1:
                target = None
        i += 1
    return []


def _scan_elements(text, i, line):
    lines = []
    depth = 0
    expecting = True
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
        elif ch.isspace():
            pass
        elif ch == "]" and depth == 0:
            break
        else:
            if expecting and depth == 0:
                lines.append(line)
                expecting = False
            if ch in "[{":
                depth += 1
            elif ch in "]}":
                depth -= 1
            elif ch == "," and depth == 0:
                expecting = True
        i += 1
    return lines


def _pair(x, path, line, where):
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise ProblemError(path, line, f"{where} must be a [lo, hi] pair, got {x!r}")
    lo, hi = x
    for v in (lo, hi):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ProblemError(path, line, f"{where} endpoints must be numbers, got {v!r}")
        if not math.isfinite(v):
            raise ProblemError(path, line, f"{where} endpoints must be finite")
    if lo > hi:
        raise ProblemError(path, line, f"{where} is empty: lo={lo} > hi={hi}")
    return float(lo), float(hi)


def parse_json(text: str, path="<input>") -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(path, e.lineno, f"invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ProblemError(path, 1, "top level must be an object")
    for key in ("a", "b"):
        if key not in doc:
            raise ProblemError(path, 1, f"missing key {key!r}")
        if not isinstance(doc[key], list):
            raise ProblemError(path, 1, f"{key!r} must be an array of [lo, hi] pairs")
    a_lines = _element_lines(text, "a")
    b_lines = _element_lines(text, "b")
    a = [_pair(x, path, a_lines[i] if i < len(a_lines) else 1, f"a[{i + 1}]")
         for i, x in enumerate(doc["a"])]
    b = [_pair(x, path, b_lines[i] if i < len(b_lines) else 1, f"b[{i + 2}]")
         for i, x in enumerate(doc["b"])]
    n = doc.get("n", len(a))
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ProblemError(path, 1, f"n must be a positive integer, got {n!r}")
    if len(a) != n:
        raise ProblemError(path, a_lines[-1] if a_lines else 1, f"expected {n} diagonal intervals, got {len(a)}")
    if len(b) != n - 1:
        raise ProblemError(path, b_lines[-1] if b_lines else 1,
                           f"expected {n - 1} off-diagonal intervals, got {len(b)}")
    extra = {k: v for k, v in doc.items() if k not in ("n", "a", "b", "name", "comment")}
    return ProblemFile(n, a, b, str(doc.get("name", "")), str(doc.get("comment", "")), extra)


def parse_csv(text: str, path="<input>") -> ProblemFile:
    """Rows ``a_lo,a_hi,b_lo,b_hi``; the last row has no b columns.

    Row i carries b_{i+1}, the coupling between rows i and i+1.  A leading
    non-numeric header row and blank lines are skipped.
    """
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        while cells and cells[-1] == "":
            cells.pop()
        if not cells or cells[0].startswith("#"):
            continue
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            if not rows:
                continue  # header
            raise ProblemError(path, lineno, f"non-numeric value in {row!r}") from None
        rows.append((lineno, vals))
    if not rows:
        raise ProblemError(path, 1, "no data rows")
    a, b = [], []
    for i, (lineno, vals) in enumerate(rows):
        last = i == len(rows) - 1
        want = 2 if last else 4
        if len(vals) != want:
            raise ProblemError(path, lineno, f"expected {want} columns, got {len(vals)}")
        a.append(_pair(vals[:2], path, lineno, f"a[{i + 1}]"))
        if not last:
            b.append(_pair(vals[2:], path, lineno, f"b[{i + 2}]"))
    return ProblemFile(len(a), a, b, Path(str(path)).stem)


def load_problem(path, as_csv: bool | None = None) -> ProblemFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ProblemError(path, 0, f"cannot read file: {e.strerror}") from None
    if as_csv is None:
        as_csv = p.suffix.lower() == ".csv"
    prob = parse_csv(text, path) if as_csv else parse_json(text, path)
    if not prob.name:
        prob.name = p.stem
    return prob
