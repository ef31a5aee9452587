import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.errors import GroupTooLargeError, NonInvertibleError
from kummerlab.matgroups import (
    CartanData,
    MatGroup,
    abelian_invariants_from_orders,
    abelianisation,
    all_subgroups,
    cartan,
    cartan_contains,
    cartan_normaliser,
    close_group,
    contains_nontrivial_homothety,
    d_subgroup,
    derived_subgroup,
    gl2_group,
    gl2_order,
    group_exponent,
    is_normal_in,
    kernel_of_reduction,
    mat_det,
    mat_inv,
    mat_mul,
    mat_order,
    matrix_algebra,
    nonsplit_cartan_modp,
    normaliser_bruteforce,
    power_subgroup,
    reduce_level,
    scalars_in,
    sl2_group,
    sl2_order,
    smallest_nonresidue,
)


def test_mat_basics():
    n = 5
    m = (2, 1, 4, 3)
    assert mat_mul((1, 0, 0, 1), m, n) == m
    assert mat_det((2, 0, 0, 3), 5) == 1
    assert mat_inv((1, 1, 0, 1), 9) == (1, 8, 0, 1)
    with pytest.raises(NonInvertibleError):
        mat_inv((2, 0, 0, 3), 6)


@settings(max_examples=50, deadline=None)
@given(st.tuples(*[st.integers(0, 8)] * 4), st.tuples(*[st.integers(0, 8)] * 4))
def test_det_multiplicative_mod9(x, y):
    assert mat_det(mat_mul(x, y, 9), 9) == mat_det(x, 9) * mat_det(y, 9) % 9


def test_close_group_examples():
    assert close_group([(1, 0, 0, 1)], 5).order == 1
    assert close_group([(1, 1, 0, 1)], 5).order == 5
    g = close_group([(1, 1, 0, 1), (1, 0, 1, 1)], 5)
    assert g.order == 120  # SL2(F5), the classical generation fact
    assert g == sl2_group(5)


def test_close_group_errors():
    with pytest.raises(NonInvertibleError):
        close_group([(2, 0, 0, 1)], 4)
    with pytest.raises(GroupTooLargeError):
        close_group([(1, 1, 0, 1), (1, 0, 1, 1)], 5, cap=50)


def test_close_group_idempotent():
    g = close_group([(1, 1, 0, 1), (2, 0, 0, 1)], 5)
    again = close_group(g.elements, 5)
    assert again.elements == g.elements


@pytest.mark.parametrize("n", range(2, 9))
def test_gl2_order_formula_vs_enumeration(n):
    count = sum(
        1
        for a in range(n) for b in range(n) for c in range(n) for d in range(n)
        if gcd((a * d - b * c) % n, n) == 1
    )
    assert gl2_order(n) == count


def test_sl2_order():
    assert sl2_order(5) == 120
    assert sl2_order(25) == 15000
    assert sl2_group(7).order == 336


def test_lagrange_invariant():
    rng = random.Random(5)
    n = 8
    total = gl2_order(n)
    for _ in range(10):
        gens = []
        while len(gens) < 2:
            m = tuple(rng.randrange(n) for _ in range(4))
            if gcd(mat_det(m, n), n) == 1:
                gens.append(m)
        h = close_group(gens, n)
        assert total % h.order == 0


# --- Cartan subgroups ------------------------------------------------------

def test_cartan_orders_split_nonsplit():
    assert cartan(CartanData(0, 1, 5, 1)).order == 16  # (l-1)^2
    assert cartan(CartanData(0, 2, 5, 1)).order == 24  # l^2-1
    assert cartan(CartanData(0, 1, 5, 2)).order == 400


@pytest.mark.parametrize("ell,delta", [(3, 1), (3, 2), (5, 2), (7, 1), (7, 3)])
@pytest.mark.parametrize("k", [1, 2])
def test_cartan_abelian_and_normaliser_index(ell, delta, k):
    data = CartanData(0, delta, ell, k)
    C = cartan(data)
    assert C.is_abelian()
    N = cartan_normaliser(C, data)
    assert N.order == 2 * C.order
    assert all(c in N for c in C.elements)


def test_cartan_gamma_validation():
    with pytest.raises(ValueError):
        CartanData(1, 1, 5, 1)
    CartanData(1, 1, 2, 2)  # gamma=1 allowed at ell=2


def test_cartan_normaliser_vs_bruteforce():
    amb = gl2_group(5)
    for delta in (1, 2):
        data = CartanData(0, delta, 5, 1)
        C = cartan(data)
        N = cartan_normaliser(C, data)
        brute = normaliser_bruteforce(C, amb)
        assert brute == N


def test_cartan_contains_matches_enumeration():
    data = CartanData(0, 2, 3, 2)
    C = cartan(data)
    for a in range(9):
        for b in range(9):
            m = (a, b, (a + b) % 9, (2 * a + 1) % 9)
            assert cartan_contains(data, m) == (m in C)
    for m in C.elements:
        assert cartan_contains(data, m)


def test_nonsplit_cartan_and_dsubgroup():
    C = nonsplit_cartan_modp(5, 2)
    assert C.order == 24
    scal = scalars_in(C)
    assert scal.order == 4  # all of F5^x
    D = d_subgroup(5, 2)
    assert D.order == 16
    N = cartan_normaliser(C, CartanData(0, 2, 5, 1))
    assert N.order == 48 and N.order // D.order == 3
    assert all(d in N for d in D.elements)
    with pytest.raises(ValueError):
        d_subgroup(7)  # 7 = 1 mod 3
    with pytest.raises(ValueError):
        nonsplit_cartan_modp(5, 4)  # 4 is a square


def test_smallest_nonresidue():
    assert smallest_nonresidue(5) == 2
    assert smallest_nonresidue(7) == 3


def test_scalars_and_homothety():
    g3 = gl2_group(3)
    assert scalars_in(g3).order == 2
    s = sl2_group(3)
    assert scalars_in(s).order == 2
    assert contains_nontrivial_homothety(s, 3) == 2
    triv = MatGroup(5, [(1, 0, 0, 1)])
    assert contains_nontrivial_homothety(triv, 5) is None


# --- derived subgroup, abelianisation, exponent ----------------------------

def _naive_derived(G):
    n = G.modulus
    comms = set()
    for g in G.elements:
        gi = mat_inv(g, n)
        for h in G.elements:
            hi = mat_inv(h, n)
            comms.add(mat_mul(mat_mul(g, h, n), mat_mul(gi, hi, n), n))
    return close_group(sorted(comms), n)


def test_derived_subgroup_oracle_gl2f3():
    g = gl2_group(3)
    assert derived_subgroup(g) == _naive_derived(g)
    assert derived_subgroup(g) == sl2_group(3)


def test_derived_subgroup_gl2f5():
    assert derived_subgroup(gl2_group(5)) == sl2_group(5)


def test_derived_trivial_for_abelian():
    C = cartan(CartanData(0, 2, 5, 1))
    assert derived_subgroup(C).order == 1


def test_abelianisation():
    assert abelianisation(gl2_group(5)) == [4]  # det: GL2(F5)^ab = F5^x
    assert abelianisation(sl2_group(3)) == [3]
    C = cartan(CartanData(0, 1, 5, 1))  # abelian of order 16 = (Z/4)^2
    assert abelianisation(C) == [4, 4]


def test_abelian_invariants_from_orders():
    # Z/4 x Z/2: orders are 1,2 (x3), 4 (x4)
    orders = [1, 2, 2, 2, 4, 4, 4, 4]
    assert abelian_invariants_from_orders(orders) == [2, 4]
    assert abelian_invariants_from_orders([1]) == []
    # Z/6: orders 1,2,3,3,6,6
    assert abelian_invariants_from_orders([1, 2, 3, 3, 6, 6]) == [6]


def test_group_exponent():
    assert group_exponent(gl2_group(2)) == 6  # GL2(F2) = S3
    assert group_exponent(close_group([(1, 1, 0, 1)], 5)) == 5


def test_mat_order():
    assert mat_order((1, 1, 0, 1), 5) == 5
    assert mat_order((1, 1, 0, 1), 9) == 9


# --- power subgroups -------------------------------------------------------

def test_power_subgroup():
    h = gl2_group(3)
    assert power_subgroup(h, 1) == h
    scal4 = MatGroup(4, [(1, 0, 0, 1), (3, 0, 0, 3)])
    assert power_subgroup(scal4, 2).order == 1
    s7 = sl2_group(7)
    sq = power_subgroup(s7, 2)
    assert sq == s7  # SL2(F7) is generated by its squares


def test_power_subgroup_normal():
    h = gl2_group(3)
    sub = power_subgroup(h, 4)
    assert is_normal_in(sub, h)


# --- algebra span, level maps ----------------------------------------------

def test_matrix_algebra():
    triv = MatGroup(9, [(1, 0, 0, 1)])
    alg = matrix_algebra(triv)
    assert alg.rows == ((1, 0, 0, 1),)
    full = matrix_algebra(gl2_group(3))
    assert full.order() == 3 ** 4
    diag = MatGroup(3, [(u, 0, 0, v) for u in (1, 2) for v in (1, 2)])
    adiag = matrix_algebra(diag)
    assert adiag.rows == ((1, 0, 0, 0), (0, 0, 0, 1))
    # split Cartan in (gamma, delta) shape spans {(a,b;b,a)}
    aC = matrix_algebra(cartan(CartanData(0, 1, 3, 1)))
    assert aC.order() == 81 // 9  # rank 2 out of 4
    assert aC.contains((0, 1, 1, 0)) and not aC.contains((0, 1, 0, 0))


def test_reduce_level_and_kernel():
    g9 = close_group([(1, 1, 0, 1), (1, 0, 1, 1), (2, 0, 0, 1)], 9)
    assert g9.order == gl2_order(9)
    r = reduce_level(g9, 3)
    assert r == gl2_group(3)
    ker = kernel_of_reduction(g9, 3)
    assert ker.order == 3 ** 4
    assert reduce_level(g9, 9) == g9


def test_all_subgroups_s3():
    subs = all_subgroups(gl2_group(2))
    assert len(subs) == 6  # S3: 1, three Z/2, Z/3, S3
    orders = sorted(h.order for h in subs)
    assert orders == [1, 2, 2, 2, 3, 6]


def test_normaliser_bruteforce_nonsplit():
    for p in (5, 7):
        N = cartan_normaliser(nonsplit_cartan_modp(p),
                              CartanData(0, smallest_nonresidue(p), p, 1))
        amb = gl2_group(p)
        assert normaliser_bruteforce(N, amb) == N


def test_generating_set_roundtrip():
    g = cartan(CartanData(0, 2, 5, 2))
    gens = g.generating_set()
    assert close_group(gens, 25) == g
    assert len(gens) <= 4


def test_power_subgroup_stable_under_ambient_conjugation():
    # conjugation by anything normalising H stabilises H(M)
    amb = gl2_group(3)
    h = sl2_group(3)  # normal in GL2(F3)
    sq = power_subgroup(h, 2)
    n = 3
    for g in amb.elements:
        gi = mat_inv(g, n)
        assert all(mat_mul(mat_mul(g, x, n), gi, n) in sq
                   for x in sq.generating_set())


def test_matrix_algebra_is_multiplicatively_closed():
    rng = random.Random(88)
    for _ in range(8):
        gens = []
        while len(gens) < 2:
            m = tuple(rng.randrange(9) for _ in range(4))
            if gcd(mat_det(m, 9), 3) == 1:
                gens.append(m)
        h = close_group(gens, 9, cap=5000)
        alg = matrix_algebra(h)
        elems = list(alg.elements())
        for x in elems[:40]:
            for y in elems[:40]:
                prod = mat_mul(x, y, 9)
                assert alg.contains(prod)
