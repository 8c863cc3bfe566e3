import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tribounds import Interval, SymTri, SymTriInterval, normalize, split_blocks
from tribounds.interval_core import interval_list_intersection, widen_down, widen_up


def test_interval_basics():
    x = Interval(1, 3)
    assert x.mid == 2 and x.rad == 1 and x.width == 2
    assert 1 in x and 3 in x and 3.5 not in x
    assert -x == Interval(-3, -1)
    assert x + Interval(1, 2) == Interval(2, 5)
    assert x - 1 == Interval(0, 2)
    assert x.hull(Interval(5, 6)) == Interval(1, 6)
    assert Interval(-2, 1).abs_range() == Interval(0, 2)
    assert Interval(-3, -1).abs_range() == Interval(1, 3)


@pytest.mark.parametrize("lo,hi", [(2, 1), (np.nan, 1), (0, np.inf)])
def test_interval_rejects_bad_endpoints(lo, hi):
    with pytest.raises(ValueError):
        Interval(lo, hi)


def test_outward_strictly_widens():
    x = Interval(0.1, 0.3).outward()
    assert x.lo < 0.1 and x.hi > 0.3
    assert widen_down(1.0) < 1.0 < widen_up(1.0)


def test_symtri_validation_and_dense():
    T = SymTri([1, 2, 3], [4, 5])
    D = T.dense()
    assert np.array_equal(D, D.T)
    assert D[0, 1] == 4 and D[2, 1] == 5
    with pytest.raises(ValueError):
        SymTri([1, 2], [1, 2])
    with pytest.raises(ValueError):
        SymTri([1, np.nan], [1])


def test_symtri_interval_validation():
    with pytest.raises(ValueError):
        SymTriInterval([(1, 0)], [])
    with pytest.raises(ValueError):
        SymTriInterval([(0, 1), (0, 1)], [])
    with pytest.raises(ValueError):
        SymTriInterval([], [])


def test_midpoint_radius_vertex(example):
    c = example.midpoint()
    assert np.array_equal(c.diag, [3000, 5000, 7000, 9000])
    assert np.array_equal(c.off, [-2000, -3000, -4000])
    assert np.array_equal(example.radius().off, [15, 20, 25])
    v = example.vertex(True, [True, False, True])
    assert np.array_equal(v.off, [-1985, -3020, -3975])
    assert example.contains(v) and example.contains(c)
    assert not example.contains(SymTri(c.diag, [0, 0, 0]))


def test_normalize_example(example):
    mn, rec = normalize(example)
    assert rec.shift == 0 and all(rec.flip) and not rec.any_widened
    assert np.array_equal(mn.b_lo, [1985, 2980, 3975])
    assert np.array_equal(mn.b_hi, [2015, 3020, 4025])
    w = mn.vertex(True, [True, False, True])
    back = rec.matrix_to_original(w)
    assert np.array_equal(back.off, [-2015, -2980, -4025])
    assert example.contains(back)


def test_normalize_shift_and_widen():
    m = SymTriInterval([(-3, -1), (2, 4)], [(-1, 2)])
    mn, rec = normalize(m)
    assert rec.shift == 3
    assert mn.is_nonnegative()
    assert (mn.b_lo[0], mn.b_hi[0]) == (0, 2)
    assert rec.widened == (True,)
    for v in (0.0, 0.5, 2.0):
        w = rec.matrix_to_original(SymTri([0, 5], [v]))
        assert m.contains(w)
        assert abs(w.off[0]) == v


def test_split_blocks():
    m = SymTriInterval([(1, 1)] * 5, [(1, 2), (0, 0), (1, 1), (0, 0)])
    blocks = split_blocks(m)
    assert [(b.n, off) for b, off in blocks] == [(2, 0), (2, 2), (1, 4)]


def test_interval_list_intersection():
    a = [Interval(0, 2), Interval(5, 7)]
    b = [Interval(1, 6)]
    assert interval_list_intersection(a, b) == [Interval(1, 2), Interval(5, 6)]
    assert interval_list_intersection(a, [Interval(3, 4)]) == []


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(finite, finite, finite, finite), min_size=1, max_size=8))
def test_normalize_preserves_spectrum_of_members(rows):
    n = len(rows)
    a = [tuple(sorted(r[:2])) for r in rows]
    b = [tuple(sorted(r[2:])) for r in rows[: n - 1]]
    m = SymTriInterval(a, b)
    mn, rec = normalize(m)
    assert mn.is_nonnegative()
    # every normalized vertex maps to a member with the shifted spectrum
    w = mn.vertex(True, np.ones(n - 1, bool))
    back = rec.matrix_to_original(w)
    assert m.contains(back)
    ev_n = np.linalg.eigvalsh(w.dense())
    ev_o = np.linalg.eigvalsh(back.dense())
    assert np.allclose(ev_n - rec.shift, ev_o, atol=1e-9 * max(1, m.scale()))
