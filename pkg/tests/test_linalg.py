import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.linalg import (
    HowellModule,
    coords_in_hnf,
    hnf_rows,
    howell,
    howell_contains,
    invariant_factors_from_diagonal,
    kernel_mod,
    module_invariants,
    module_order,
    quotient_structure,
    smith_diagonal,
    vp,
)


def span_bruteforce(rows, m, mod):
    """Additive closure (independent oracle for the Howell machinery)."""
    seen = {(0,) * m}
    frontier = [(0,) * m]
    rows = [tuple(x % mod for x in r) for r in rows]
    while frontier:
        new = []
        for v in frontier:
            for r in rows:
                w = tuple((a + b) % mod for a, b in zip(v, r))
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    return seen


CASES = [
    (2, 3, 2),  # mod 8, width 2
    (3, 2, 2),  # mod 9
    (2, 2, 3),  # mod 4, width 3
    (5, 1, 2),
    (3, 1, 4),
]


@pytest.mark.parametrize("p,k,m", CASES)
def test_howell_span_matches_bruteforce(p, k, m):
    rng = random.Random(12345 + p * 100 + k * 10 + m)
    mod = p ** k
    for _ in range(25):
        rows = [tuple(rng.randrange(mod) for _ in range(m))
                for _ in range(rng.randrange(1, 4))]
        basis = howell(rows, m, p, k)
        expected = span_bruteforce(rows, m, mod)
        got = span_bruteforce(basis, m, mod) if basis else {(0,) * m}
        assert got == expected
        for v in expected:
            assert howell_contains(v, basis, m, p, k)
        outside = [v for v in _all_vectors(m, mod) if v not in expected]
        for v in outside[:20]:
            assert not howell_contains(v, basis, m, p, k)


def _all_vectors(m, mod):
    if m == 1:
        return [(x,) for x in range(mod)]
    inner = _all_vectors(m - 1, mod)
    return [(x,) + t for x in range(mod) for t in inner]


@pytest.mark.parametrize("p,k,m", CASES)
def test_howell_is_canonical(p, k, m):
    rng = random.Random(999 + p + k + m)
    mod = p ** k
    for _ in range(20):
        rows = [tuple(rng.randrange(mod) for _ in range(m))
                for _ in range(rng.randrange(1, 4))]
        basis = howell(rows, m, p, k)
        # same module, different generating set: shuffled, scaled by units,
        # with random in-span sums appended
        alt = [tuple((a + b) % mod for a, b in zip(rows[0], rows[-1]))]
        alt += [tuple(x * u % mod for x in r)
                for r, u in zip(rows, [1 + p * rng.randrange(k), 1, 1])
                if gcd(u, p) == 1]
        alt += list(rows)
        rng.shuffle(alt)
        assert howell(alt, m, p, k) == basis


def test_howell_order_formula():
    rng = random.Random(7)
    for p, k, m in CASES:
        mod = p ** k
        for _ in range(10):
            rows = [tuple(rng.randrange(mod) for _ in range(m))
                    for _ in range(rng.randrange(1, 3))]
            mod_span = span_bruteforce(rows, m, mod)
            hm = HowellModule.span(rows, m, p, k)
            assert hm.order() == len(mod_span)
            prod = 1
            for f in hm.invariants():
                prod *= f
            assert prod == len(mod_span)


def test_smith_diagonal_basic():
    diag, _ = smith_diagonal([[2, 4], [6, 8]], 2)
    assert invariant_factors_from_diagonal(diag) == [2, 4]
    diag, _ = smith_diagonal([[1, 0], [0, 1]], 2)
    assert invariant_factors_from_diagonal(diag) == []


def test_invariant_factor_redistribution():
    assert invariant_factors_from_diagonal([6, 4]) == [2, 12]
    assert invariant_factors_from_diagonal([2, 3]) == [6]
    assert invariant_factors_from_diagonal([1, 1]) == []


@pytest.mark.parametrize("p,k,m", CASES)
def test_kernel_mod_bruteforce(p, k, m):
    rng = random.Random(2024 + p * k * m)
    mod = p ** k
    for _ in range(15):
        nrows = rng.randrange(1, 3)
        rows = [tuple(rng.randrange(mod) for _ in range(m)) for _ in range(nrows)]
        ker = kernel_mod(rows, m, p, k)
        expected = {
            v for v in _all_vectors(m, mod)
            if all(sum(a * b for a, b in zip(r, v)) % mod == 0 for r in rows)
        }
        got = span_bruteforce(ker, m, mod) if ker else {(0,) * m}
        assert got == expected


def test_quotient_structure_small():
    # (Z/9)^2 / <(3,0),(0,3)> = (Z/3)^2
    assert quotient_structure(
        [(1, 0), (0, 1)], [(3, 0), (0, 3)], 2, 3, 2) == [3, 3]
    # (Z/9)^2 / itself is trivial
    assert quotient_structure([(1, 0), (0, 1)], [(1, 0), (0, 1)], 2, 3, 2) == []
    # <(3,0)> mod 9 as a group is Z/3
    assert module_invariants([(3, 0)], 2, 3, 2) == [3]
    assert module_order([(3, 0)], 2, 3, 2) == 3
    # full (Z/8)^2
    assert module_invariants([(1, 0), (0, 1)], 2, 2, 3) == [8, 8]


def test_quotient_structure_against_counting():
    rng = random.Random(31)
    p, k, m = 3, 2, 2
    mod = p ** k
    for _ in range(20):
        top = [tuple(rng.randrange(mod) for _ in range(m)) for _ in range(2)]
        sub = [tuple(3 * x % mod for x in r) for r in top]
        t = span_bruteforce(top, m, mod)
        s = span_bruteforce(sub, m, mod)
        factors = quotient_structure(top, sub, m, p, k)
        prod = 1
        for f in factors:
            prod *= f
        assert prod == len(t) // len(s)


def test_hnf_and_coords():
    basis = hnf_rows([[2, 1], [0, 3], [10, 0]], 2)
    assert len(basis) == 2
    for vec, mult in [((2, 1), None), ((4, 2), None), ((0, 3), None)]:
        coords = coords_in_hnf(list(vec), basis, 2)
        rebuilt = [0, 0]
        for c, row in zip(coords, basis):
            rebuilt = [a + c * b for a, b in zip(rebuilt, row)]
        assert tuple(rebuilt) == vec
    with pytest.raises(ArithmeticError):
        coords_in_hnf([1, 0], hnf_rows([[2, 0], [0, 2]], 2), 2)


def test_howell_module_helpers():
    full = HowellModule.full(2, 3, 2)
    zero = HowellModule.zero(2, 3, 2)
    assert full.order() == 81 and zero.order() == 1
    assert zero.is_subset_of(full)
    three = full.scale(3)
    assert three.order() == 9
    assert three.is_subset_of(full) and not full.is_subset_of(three)
    assert three.reduce(1).order() == 1  # 3*(Z/9)^2 dies mod 3
    assert full.add(three) == full
    assert len(full.elements()) == 81


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_howell_idempotent_mod9(a, b, c, d):
    basis = howell([(a, b), (c, d)], 2, 3, 2)
    assert howell(basis, 2, 3, 2) == basis


def test_vp():
    assert vp(18, 3) == 2
    assert vp(5, 3) == 0
    with pytest.raises(ValueError):
        vp(0, 3)


def test_quotient_structure_randomized_vs_group_quotient():
    rng = random.Random(404)
    for p, k, m in [(2, 2, 2), (3, 2, 2), (2, 3, 2), (5, 1, 3)]:
        mod = p ** k
        for _ in range(12):
            top = [tuple(rng.randrange(mod) for _ in range(m))
                   for _ in range(rng.randrange(1, 3))]
            bottom = []
            for _ in range(rng.randrange(0, 3)):
                combo = [0] * m
                for r in top:
                    c = rng.randrange(mod)
                    combo = [(x + c * y) % mod for x, y in zip(combo, r)]
                bottom.append(tuple(combo))
            t_span = span_bruteforce(top, m, mod)
            b_span = span_bruteforce(bottom, m, mod) if bottom else {(0,) * m}
            factors = quotient_structure(top, bottom, m, p, k)
            prod = 1
            for f in factors:
                prod *= f
            assert prod == len(t_span) // len(b_span)
            # exponent: least e with e*x in bottom span for every x in top span
            exp = 1
            for x in t_span:
                e = 1
                while tuple(e * c % mod for c in x) not in b_span:
                    e += 1
                exp = e * exp // gcd(e, exp)
            from math import lcm as _lcm
            want = _lcm(*factors) if factors else 1
            assert exp == want
