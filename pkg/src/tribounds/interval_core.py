"""Interval and tridiagonal matrix types, normalization and block splitting."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

ULPS_OUTWARD = 4


def widen_down(x: float, ulps: int = ULPS_OUTWARD) -> float:
    for _ in range(ulps):
        x = np.nextafter(x, -np.inf)
    return float(x)


def widen_up(x: float, ulps: int = ULPS_OUTWARD) -> float:
    for _ in range(ulps):
        x = np.nextafter(x, np.inf)
    return float(x)


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @property
    def mid(self) -> float:
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def rad(self) -> float:
        return 0.5 * self.hi - 0.5 * self.lo

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> Interval:
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other) -> Interval:
        if isinstance(other, Interval):
            return self + (-other)
        return Interval(self.lo - other, self.hi - other)

    def intersects(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def inflate(self, r: float) -> Interval:
        return Interval(self.lo - r, self.hi + r)

    def outward(self, ulps: int = ULPS_OUTWARD) -> Interval:
        return Interval(widen_down(self.lo, ulps), widen_up(self.hi, ulps))

    def abs_range(self) -> Interval:
        """Range of ``|x|`` over the interval."""
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


@dataclass(frozen=True, eq=False)
class SymTri:
    """Real symmetric tridiagonal matrix.

    ``diag`` holds a_1..a_n and ``off`` holds b_2..b_n, so ``off[j]`` couples
    rows j and j+1 (0-based).
    """

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).reshape(-1)
        o = np.array(self.off, dtype=float).reshape(-1)
        if d.size < 1:
            raise ValueError("matrix order must be at least 1")
        if o.size != d.size - 1:
            raise ValueError(f"need {d.size - 1} off-diagonal entries, got {o.size}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(o))):
            raise ValueError("matrix entries must be finite")
        d.setflags(write=False)
        o.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "off", o)

    @property
    def n(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def norm_inf(self) -> float:
        r = np.abs(self.diag).copy()
        r[:-1] += np.abs(self.off)
        r[1:] += np.abs(self.off)
        return float(r.max())

    def __neg__(self) -> SymTri:
        return SymTri(-self.diag, -self.off)

    def shifted(self, shift: float) -> SymTri:
        return SymTri(self.diag + shift, self.off)

    def sub(self, i: int, j: int) -> SymTri:
        """Principal submatrix on rows i..j-1 (0-based, half-open)."""
        return SymTri(self.diag[i:j], self.off[i:j - 1])

    def __eq__(self, other):
        if not isinstance(other, SymTri):
            return NotImplemented
        return np.array_equal(self.diag, other.diag) and np.array_equal(self.off, other.off)

    def __repr__(self):
        return f"SymTri(diag={self.diag.tolist()}, off={self.off.tolist()})"


def _as_bounds(items, name):
    out = []
    for x in items:
        if isinstance(x, Interval):
            out.append((x.lo, x.hi))
        else:
            lo, hi = x
            out.append((float(lo), float(hi)))
    arr = np.array(out, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} endpoints must be finite")
    bad = np.nonzero(arr[:, 0] > arr[:, 1])[0]
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"{name}[{i}] is empty: lo={arr[i, 0]} > hi={arr[i, 1]}")
    return arr


class SymTriInterval:
    """Symmetric tridiagonal interval matrix.

    Stored as four endpoint arrays; ``diag`` and ``off`` expose them as
    sequences of :class:`Interval`.
    """

    def __init__(self, diag, off):
        d = _as_bounds(diag, "diag")
        o = _as_bounds(off, "off")
        if d.shape[0] < 1:
            raise ValueError("matrix order must be at least 1")
        if o.shape[0] != d.shape[0] - 1:
            raise ValueError(f"need {d.shape[0] - 1} off-diagonal intervals, got {o.shape[0]}")
        self.a_lo = d[:, 0].copy()
        self.a_hi = d[:, 1].copy()
        self.b_lo = o[:, 0].copy()
        self.b_hi = o[:, 1].copy()
        for arr in (self.a_lo, self.a_hi, self.b_lo, self.b_hi):
            arr.setflags(write=False)

    @classmethod
    def from_arrays(cls, a_lo, a_hi, b_lo, b_hi) -> SymTriInterval:
        a = np.column_stack([np.asarray(a_lo, float), np.asarray(a_hi, float)])
        b = np.column_stack([np.asarray(b_lo, float).reshape(-1), np.asarray(b_hi, float).reshape(-1)])
        return cls(a, b)

    @classmethod
    def from_point(cls, T: SymTri) -> SymTriInterval:
        return cls.from_arrays(T.diag, T.diag, T.off, T.off)

    @classmethod
    def from_center_radius(cls, a_mid, a_rad, b_mid, b_rad) -> SymTriInterval:
        a_mid, a_rad = np.asarray(a_mid, float), np.asarray(a_rad, float)
        b_mid, b_rad = np.asarray(b_mid, float), np.asarray(b_rad, float)
        return cls.from_arrays(a_mid - a_rad, a_mid + a_rad, b_mid - b_rad, b_mid + b_rad)

    @property
    def n(self) -> int:
        return self.a_lo.size

    @property
    def diag(self) -> list[Interval]:
        return [Interval(lo, hi) for lo, hi in zip(self.a_lo, self.a_hi)]

    @property
    def off(self) -> list[Interval]:
        return [Interval(lo, hi) for lo, hi in zip(self.b_lo, self.b_hi)]

    def midpoint(self) -> SymTri:
        return SymTri(0.5 * self.a_lo + 0.5 * self.a_hi, 0.5 * self.b_lo + 0.5 * self.b_hi)

    def radius(self) -> SymTri:
        """Entrywise radius matrix (nonnegative)."""
        return SymTri(0.5 * self.a_hi - 0.5 * self.a_lo, 0.5 * self.b_hi - 0.5 * self.b_lo)

    def lower(self) -> SymTri:
        return SymTri(self.a_lo, self.b_lo)

    def upper(self) -> SymTri:
        return SymTri(self.a_hi, self.b_hi)

    def vertex(self, diag_hi, off_hi) -> SymTri:
        """Vertex matrix; boolean selectors pick the upper endpoint where true."""
        diag_hi = np.broadcast_to(np.asarray(diag_hi, bool), (self.n,))
        off_hi = np.broadcast_to(np.asarray(off_hi, bool), (self.n - 1,))
        return SymTri(np.where(diag_hi, self.a_hi, self.a_lo), np.where(off_hi, self.b_hi, self.b_lo))

    def contains(self, T: SymTri) -> bool:
        return (
            T.n == self.n
            and bool(np.all((self.a_lo <= T.diag) & (T.diag <= self.a_hi)))
            and bool(np.all((self.b_lo <= T.off) & (T.off <= self.b_hi)))
        )

    def is_point(self) -> bool:
        return bool(np.array_equal(self.a_lo, self.a_hi) and np.array_equal(self.b_lo, self.b_hi))

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.a_lo >= 0) and np.all(self.b_lo >= 0))

    def __neg__(self) -> SymTriInterval:
        return SymTriInterval.from_arrays(-self.a_hi, -self.a_lo, -self.b_hi, -self.b_lo)

    def shifted(self, shift: float) -> SymTriInterval:
        return SymTriInterval.from_arrays(self.a_lo + shift, self.a_hi + shift, self.b_lo, self.b_hi)

    def sub(self, i: int, j: int) -> SymTriInterval:
        """Principal interval submatrix on rows i..j-1 (0-based, half-open)."""
        if not 0 <= i < j <= self.n:
            raise IndexError(f"bad submatrix range [{i}, {j}) for order {self.n}")
        return SymTriInterval.from_arrays(
            self.a_lo[i:j], self.a_hi[i:j], self.b_lo[i:j - 1], self.b_hi[i:j - 1]
        )

    def scale(self) -> float:
        """Infinity norm bound over all member matrices."""
        r = np.maximum(np.abs(self.a_lo), np.abs(self.a_hi))
        ob = np.maximum(np.abs(self.b_lo), np.abs(self.b_hi))
        r = r.copy()
        r[:-1] += ob
        r[1:] += ob
        return float(r.max())

    def __eq__(self, other):
        if not isinstance(other, SymTriInterval):
            return NotImplemented
        return all(
            np.array_equal(x, y)
            for x, y in zip(
                (self.a_lo, self.a_hi, self.b_lo, self.b_hi),
                (other.a_lo, other.a_hi, other.b_lo, other.b_hi),
            )
        )

    def __repr__(self):
        d = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(self.a_lo, self.a_hi))
        o = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(self.b_lo, self.b_hi))
        return f"SymTriInterval(diag=({d}), off=({o}))"


@dataclass(frozen=True)
class NormalizationRecord:
    """What :func:`normalize` did, so results can be mapped back."""

    shift: float
    flip: tuple[bool, ...]
    widened: tuple[bool, ...]
    original: SymTriInterval = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.flip) + 1

    @cached_property
    def _flip_mask(self) -> np.ndarray:
        return np.array(self.flip, dtype=bool)

    @cached_property
    def _widened_mask(self) -> np.ndarray:
        return np.array(self.widened, dtype=bool)

    @property
    def any_widened(self) -> bool:
        return any(self.widened)

    def matrix_to_original(self, T: SymTri) -> SymTri:
        """Map a member of the normalized matrix back to a member of the original.

        The result has the same spectrum.  Endpoint values are mapped to the
        corresponding original endpoints exactly, so vertices stay vertices
        (apart from the zero of a widened entry, which is interior).
        """
        m = self.original
        norm_lo = m.a_lo + self.shift
        norm_hi = m.a_hi + self.shift
        diag = np.where(
            T.diag == norm_hi, m.a_hi, np.where(T.diag == norm_lo, m.a_lo, T.diag - self.shift)
        )
        v = np.asarray(T.off, dtype=float)
        # widened entries hold |b|; pick the sign that lands inside the original interval
        off = np.where(self._widened_mask, np.where(v <= m.b_hi, v, -v), np.where(self._flip_mask, -v, v))
        return SymTri(diag, off)


def normalize(m: SymTriInterval) -> tuple[SymTriInterval, NormalizationRecord]:
    """Shift and reflect ``m`` into a nonnegative interval matrix.

    The diagonal is shifted by ``max(0, -min a_lo)``.  Off-diagonal intervals
    that are entirely nonpositive are reflected; intervals straddling zero
    become ``[0, max(-lo, hi)]``.  Eigenvalues depend on the off-diagonal
    entries only through their absolute values, so the eigenvalue sets of
    the result are those of ``m`` shifted by the recorded amount.
    """
    shift = max(0.0, float(np.max(-m.a_lo)))
    flip = m.b_hi <= 0
    flip &= ~(m.b_lo >= 0)  # [0, 0] is left alone
    widened = (m.b_lo < 0) & (m.b_hi > 0)
    b_lo = np.where(flip, -m.b_hi, np.where(widened, 0.0, m.b_lo))
    b_hi = np.where(flip, -m.b_lo, np.where(widened, np.maximum(-m.b_lo, m.b_hi), m.b_hi))
    out = SymTriInterval.from_arrays(m.a_lo + shift, m.a_hi + shift, b_lo, b_hi)
    rec = NormalizationRecord(shift, tuple(bool(x) for x in flip), tuple(bool(x) for x in widened), m)
    return out, rec


def split_blocks(m: SymTriInterval) -> list[tuple[SymTriInterval, int]]:
    """Split at every off-diagonal with upper endpoint zero.

    Returns ``(block, offset)`` pairs, where ``offset`` is the 0-based row
    of the block's first row in ``m``.
    """
    cuts = [0] + [i + 1 for i in np.nonzero(m.b_hi <= 0)[0]] + [m.n]
    return [(m.sub(i, j), i) for i, j in zip(cuts[:-1], cuts[1:])]


def interval_list_intersection(a: Sequence[Interval], b: Sequence[Interval]) -> list[Interval]:
    """Intersection of two finite unions of closed intervals."""
    a = sorted(a, key=lambda x: x.lo)
    b = sorted(b, key=lambda x: x.lo)
    out = []
    for x in a:
        for y in b:
            if y.lo > x.hi:
                break
            lo, hi = max(x.lo, y.lo), min(x.hi, y.hi)
            if lo <= hi:
                out.append(Interval(lo, hi))
    return out
