import math

import pytest

from kummerlab.bounds import (
    T0,
    UNIVERSAL_M,
    CurveArithInputs,
    GrowthTower,
    a_ell,
    b_ell,
    c_total,
    detect_growth_parameter,
    petsche_bounds,
    pgl2_exponent,
    t0_set,
    tilde_n_bound,
    universal_m,
)
from kummerlab.errors import HypothesisError
from kummerlab.matgroups import MatGroup, gl2_order
from kummerlab.modulegen import principal_congruence_kernel


def test_t0():
    assert t0_set() == [2, 3, 5, 7, 11, 13, 17, 37]


def test_pgl2_exponent_small():
    assert pgl2_exponent(2) == 6  # PGL2(F2) = S3
    assert pgl2_exponent(3) == 12
    assert pgl2_exponent(5) == 60


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_pgl2_exponent_matches_torus_formula(p):
    # orders in PGL2(F_p) divide p, p-1 or p+1 and all occur
    assert pgl2_exponent(p) == math.lcm(p, p - 1, p + 1)


def test_universal_m_divisibility():
    m = universal_m()
    assert m == UNIVERSAL_M
    for p in T0:
        assert m % pgl2_exponent(p) == 0
    small = 1
    for p in T0:
        small = math.lcm(small, pgl2_exponent(p))
    assert small == m  # minimality: it IS the lcm


def test_a_ell():
    assert a_ell(1, 0, 3) == 4
    assert a_ell(1, 0, 3, cm_delta=2) == 8  # v_3(8) = 0
    assert a_ell(2, 1, 5) == 10
    assert a_ell(1, 0, 2, cm_delta=2) == 8 + 2 * 3  # v_2(8) = 3
    with pytest.raises(ValueError):
        a_ell(-1, 0, 3)


def test_b_ell():
    assert b_ell(1, 1, 5) == 2
    assert b_ell(1, 2, 2) == 5
    assert b_ell(3, 6, 3) == 9


def test_tilde_n_bound():
    assert tilde_n_bound(1, 1, 5) == 1
    assert tilde_n_bound(1, 12, 2) == 3
    assert tilde_n_bound(2, 12, 3) == 3


def test_c_total():
    assert c_total([]) == (1, {})
    assert c_total([(2, 4, 2)]) == (64, {2: 6})
    c, fac = c_total([(2, 4, 2), (3, 8, 2)])
    assert c == 64 * 3 ** 10 and fac == {2: 6, 3: 10}


def test_petsche_bounds():
    base = CurveArithInputs(height_alpha=1.0, degree_K=1, szpiro_sigma=1.0,
                            log_norm_disc=1.0)
    inner = 104613
    b_val = 1.0 / (1e15 * math.log(inner) ** 2)
    # height exactly B: d_max = 0
    d0 = petsche_bounds(
        CurveArithInputs(b_val, 1, 1.0, 1.0), 5)[1]
    assert d0 == 0
    # height l^2 * B: d_max = 1
    d1 = petsche_bounds(
        CurveArithInputs(25 * b_val, 1, 1.0, 1.0), 5)[1]
    assert d1 == 1
    h, _ = petsche_bounds(base, 2)
    floored = math.floor(134861 * math.log(104613))
    expect = 0
    x = floored
    while x % 2 == 0:
        x //= 2
        expect += 1
    assert h == expect
    with pytest.raises(ValueError):
        CurveArithInputs(0.0, 1, 1.0, 1.0)


def _kernel_tower(ell, n0, top):
    return GrowthTower.from_groups(
        [principal_congruence_kernel(ell, min(j, n0), j) if j >= 1 else None
         for j in range(1, top + 1)])


def test_growth_detection_planted_kernel():
    for ell, n0 in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]:
        top = n0 + 2
        tower = _kernel_tower(ell, n0, top)
        res = detect_growth_parameter(tower, 4)
        expected = max(n0, 2) if ell == 2 else n0
        assert res.n_min == expected, (ell, n0)
        assert res.certified_level == top


def test_growth_detection_orders_backed():
    # full GL2 towers: orders by the product formula, ratios l^4 from level 1
    for ell in (3, 5):
        tower = GrowthTower.from_orders(
            ell, [gl2_order(ell ** j) for j in range(1, 5)])
        res = detect_growth_parameter(tower, 4)
        assert res.n_min == 1


def test_growth_detection_cartan_orders():
    # split Cartan mod 5^j: orders 16 * 25^(j-1), ratios 25 = 5^2
    tower = GrowthTower.from_orders(5, [16 * 25 ** j for j in range(4)])
    res = detect_growth_parameter(tower, 2)
    assert res.n_min == 1


def test_growth_detection_errors():
    with pytest.raises(HypothesisError):
        detect_growth_parameter(GrowthTower.from_orders(3, [48]), 4)
    # top not stabilised
    with pytest.raises(HypothesisError):
        detect_growth_parameter(
            GrowthTower.from_orders(3, [48, 48 * 81, 48 * 81 * 3]), 4)
    # non-surjective tower of groups
    from kummerlab.matgroups import gl2_group
    bad = MatGroup(9, [(1, 0, 0, 1)])
    with pytest.raises(HypothesisError):
        GrowthTower.from_groups([gl2_group(3), bad])


def test_growth_monotone_under_truncation():
    tower = _kernel_tower(3, 2, 4)
    full = detect_growth_parameter(tower, 4)
    truncated = GrowthTower(3, tower.levels[:3])
    res = detect_growth_parameter(truncated, 4)
    assert res.n_min >= full.n_min or res.n_min == full.n_min
    # cutting below the stabilisation point makes certification fail
    with pytest.raises(HypothesisError):
        detect_growth_parameter(GrowthTower(3, tower.levels[:2]), 4)


def test_maximal_growth_consequences_kernel_towers():
    from kummerlab.bounds import maximal_growth_consequences
    for ell, n0 in [(3, 1), (2, 2), (5, 1)]:
        tower = _kernel_tower(ell, n0, n0 + 2)
        res = detect_growth_parameter(tower, 4)
        cons = maximal_growth_consequences(tower, res)
        assert cons.scalar_present
        assert cons.kernel_shapes_ok
        assert cons.all_matrices_ok


def test_maximal_growth_consequences_full_gl2_mod8():
    from kummerlab.bounds import maximal_growth_consequences
    from kummerlab.matgroups import gl2_group
    tower = GrowthTower.from_groups([gl2_group(2), gl2_group(4), gl2_group(8)])
    res = detect_growth_parameter(tower, 4)
    assert res.n_min == 2  # floored at 2 for ell = 2
    cons = maximal_growth_consequences(tower, res)
    assert cons.scalar_present and cons.kernel_shapes_ok and cons.all_matrices_ok


def test_maximal_growth_consequences_cartan_tower():
    from kummerlab.bounds import maximal_growth_consequences
    from kummerlab.matgroups import CartanData, cartan
    groups = [cartan(CartanData(0, 2, 5, k)) for k in (1, 2, 3)]
    tower = GrowthTower.from_groups(groups)
    res = detect_growth_parameter(tower, 2)
    assert res.n_min == 1
    cons = maximal_growth_consequences(tower, res)
    assert cons.scalar_present and cons.kernel_shapes_ok
