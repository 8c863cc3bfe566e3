import numpy as np
import pytest

from tribounds import (
    Decision,
    Status,
    SymTri,
    SymTriInterval,
    cardinality_of_upper_selection,
    eigenvalue_bounds,
    extremal_bounds,
    lower_bounds_sign_invariant,
    normalize,
    property_checks,
    upper_bounds_sign_invariant,
)
from tribounds import oracle
from tribounds.bounds import bounds_on_block, merge_blocks

from conftest import general_instance, separated_instance

EXPECTED = [
    (12560.837715176, 12720.227272355),
    (7002.282789193, 7126.828298931),
    (3337.078457125, 3443.312734543),
    (842.925096921, 967.108236973),
]


def test_example_intervals(example):
    rep = eigenvalue_bounds(example)
    assert rep.status is Status.EXACT
    for iv, (lo, hi) in zip(rep.intervals, EXPECTED):
        assert iv.lo <= lo + 1e-8 and iv.hi >= hi - 1e-8
        assert abs(iv.lo - lo) < 1e-6 and abs(iv.hi - hi) < 1e-6


def test_example_normalized_witnesses(example):
    mn, _ = normalize(example)
    rep = upper_bounds_sign_invariant(mn, certified=True)
    hi_a = [3025, 5035, 7045, 9055]
    assert rep.upper_witness[0] == SymTri(hi_a, [2015, 3020, 4025])
    assert rep.upper_witness[1] == SymTri(hi_a, [2015, 3020, 3975])
    assert rep.upper_witness[2] == SymTri(hi_a, [2015, 2980, 3975])
    assert rep.upper_witness[3] == SymTri(hi_a, [1985, 2980, 3975])
    assert [int(r.sum()) for r in rep.upper_selection] == [3, 2, 1, 0]


def test_witnesses_reproduce_values_in_original_coordinates(example):
    rep = eigenvalue_bounds(example)
    for k in range(4):
        for ws, vals in ((rep.upper_witness, rep.upper), (rep.lower_witness, rep.lower)):
            assert example.contains(ws[k])
            assert abs(oracle.dense_eigenvalues(ws[k])[k] - vals[k]) < 1e-8


def test_requires_normalized_input(example):
    with pytest.raises(ValueError):
        upper_bounds_sign_invariant(example)
    with pytest.raises(ValueError):
        lower_bounds_sign_invariant(SymTriInterval([(1, 2), (1, 2)], [(0, 0)]))


def test_uncertified_is_inner_estimate(example):
    mn, _ = normalize(example)
    assert bounds_on_block(mn).status is Status.INNER
    assert bounds_on_block(mn, certified=True).status is Status.EXACT


def test_one_by_one():
    m = SymTriInterval([(-2, 3)], [])
    rep = eigenvalue_bounds(m)
    assert rep.status is Status.EXACT
    assert rep.lower[0] == -2 and rep.upper[0] == 3
    assert rep.intervals[0].lo <= -2 and rep.intervals[0].hi >= 3


def test_block_merge_matches_oracle():
    rng = np.random.default_rng(5)
    for _ in range(15):
        n = int(rng.integers(3, 7))
        a_mid = rng.uniform(-5, 5, n)
        b_mid = rng.uniform(0.5, 2, n - 1)
        b_rad = rng.uniform(0, 0.3, n - 1)
        cut = int(rng.integers(0, n - 1))
        b_mid[cut], b_rad[cut] = 0, 0
        m = SymTriInterval.from_center_radius(a_mid, rng.uniform(0, 0.3, n), b_mid, b_rad)
        rep = eigenvalue_bounds(m, full_check=True)
        lo, hi, _, _ = oracle.vertex_extrema(m)
        if rep.status is Status.EXACT:
            assert np.allclose(rep.upper, hi, atol=1e-9) and np.allclose(rep.lower, lo, atol=1e-9)
        for k in range(n):
            assert m.contains(rep.upper_witness[k]) and m.contains(rep.lower_witness[k])
            assert abs(oracle.dense_eigenvalues(rep.upper_witness[k])[k] - rep.upper[k]) < 1e-9
            assert abs(oracle.dense_eigenvalues(rep.lower_witness[k])[k] - rep.lower[k]) < 1e-9


def test_merge_blocks_single_passthrough(example):
    mn, _ = normalize(example)
    r = bounds_on_block(mn, certified=True)
    assert merge_blocks([(r, 0)], 4) is r


def test_straddling_offdiagonal_gives_member_witnesses():
    m = SymTriInterval([(0, 0.5), (10, 10.5), (20, 20.5)], [(-1, 0.5), (0.2, 0.4)])
    rep = eigenvalue_bounds(m, full_check=True)
    # normalized coupling [0, 1] reaches zero, so invariancy cannot be certified
    assert rep.status is Status.INNER
    assert rep.verdicts[0][2].status.value == "Unknown"
    lo, hi, _, _ = oracle.vertex_extrema(m)
    assert np.all(rep.upper <= hi + 1e-9) and np.all(rep.lower >= lo - 1e-9)
    for k in range(3):
        assert m.contains(rep.upper_witness[k]) and m.contains(rep.lower_witness[k])
        assert abs(oracle.dense_eigenvalues(rep.upper_witness[k])[k] - rep.upper[k]) < 1e-9


def test_extremal_matches_oracle_on_general_instances():
    rng = np.random.default_rng(6)
    for _ in range(30):
        m = general_instance(rng, int(rng.integers(1, 6)))
        e = extremal_bounds(m)
        lo, hi, _, _ = oracle.vertex_extrema(m)
        assert abs(e.upper_first - hi[0]) < 1e-9 and abs(e.lower_last - lo[-1]) < 1e-9
        assert abs(e.lower_first - lo[0]) < 1e-9 and abs(e.upper_last - hi[-1]) < 1e-9


def test_extremal_point_matrix():
    T = SymTriInterval([(1, 1), (2, 2), (3, 3)], [(0.5, 0.5), (0.1, 0.1)])
    e = extremal_bounds(T)
    assert e.upper_first == e.lower_first and e.upper_last == e.lower_last


def test_cardinality_of_upper_selection():
    assert cardinality_of_upper_selection([1, 1, -1, 1]) == 1
    assert cardinality_of_upper_selection([1, 1, 1, 1]) == 3
    with pytest.raises(ValueError):
        cardinality_of_upper_selection([1, 0, 1])


def test_cardinality_law_on_separated_instances():
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        m = separated_instance(rng, n)
        rep = upper_bounds_sign_invariant(normalize(m)[0], certified=True)
        assert [int(r.sum()) for r in rep.upper_selection] == [n - k for k in range(1, n + 1)]


def test_property_checks_example(example):
    p = property_checks(example)
    assert p.positive_definite is Decision.YES
    assert p.positive_semidefinite is Decision.YES
    assert p.hurwitz_stable is Decision.NO
    assert p.schur_stable is Decision.NO
    assert abs(p.max_spectral_radius.hi - 12720.227272355) < 1e-6


def test_property_checks_boundaries():
    ident = SymTriInterval([(1, 1), (1, 1)], [(0, 0)])
    p = property_checks(ident)
    assert p.positive_definite is Decision.YES
    assert p.schur_stable is Decision.NO  # spectral radius exactly 1
    assert p.hurwitz_stable is Decision.NO
    stable = SymTriInterval([(-0.5, -0.2), (-0.6, -0.3)], [(0.1, 0.2)])
    p = property_checks(stable)
    assert p.hurwitz_stable is Decision.YES and p.schur_stable is Decision.YES
    assert p.positive_definite is Decision.NO
    psd = SymTriInterval([(0, 0), (0, 1)], [(0, 0)])
    p = property_checks(psd)
    assert p.positive_semidefinite is Decision.YES and p.positive_definite is Decision.NO


def test_property_rigor_near_zero():
    # smallest eigenvalue is a tiny positive number that bisection cannot resolve
    d = 1e-14
    m = SymTriInterval([(1, 1), (1 + d, 1 + d)], [(1, 1)])
    p = property_checks(m)
    assert p.positive_definite in (Decision.YES, Decision.UNDECIDED)
