"""Effective-constant calculators and growth-parameter detection.

All formulas are pure integer/real arithmetic; the only enumeration here is
the exponent of PGL2(F_p) for the fixed prime set, which is frozen as a
regression constant and re-derivable by full enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from .errors import HypothesisError, ModulusMismatchError
from .linalg import vp
from .matgroups import MatGroup, mat_mul, reduce_level

T0 = (2, 3, 5, 7, 11, 13, 17, 37)

#: lcm of exp PGL2(F_p) over p in T0; re-derived by universal_m(recompute=True)
UNIVERSAL_M = 8613324720

REAL_SLACK = 1e-12


def t0_set():
    return list(T0)


@lru_cache(maxsize=None)
def pgl2_exponent(p: int) -> int:
    """exp PGL2(F_p) by enumeration of projective classes."""
    exponent = 1
    for rep in _pgl2_classes(p):
        order = 1
        x = rep
        while not _is_scalar(x, p):
            x = mat_mul(x, rep, p)
            order += 1
        exponent = lcm(exponent, order)
    return exponent


def _is_scalar(m, p):
    return m[1] == 0 and m[2] == 0 and m[0] == m[3]


def _pgl2_classes(p: int):
    """One representative per projective class: first nonzero entry is 1."""
    for b in range(p):
        for c in range(p):
            for d in range(p):
                if (d - b * c) % p:
                    yield (1, b, c, d)
    # a = 0 forces b != 0 (else det = 0); normalise b to 1, then c != 0
    for c in range(1, p):
        for d in range(p):
            yield (0, 1, c, d)


def universal_m(recompute: bool = False) -> int:
    """lcm of exp PGL2(F_p) over the fixed prime set.

    With recompute=True the value is re-derived by full enumeration and
    checked against the frozen regression constant.
    """
    if recompute:
        m = 1
        for p in T0:
            m = lcm(m, pgl2_exponent(p))
        if m != UNIVERSAL_M:
            raise AssertionError(f"enumerated M = {m} != frozen {UNIVERSAL_M}")
        return m
    return UNIVERSAL_M


# ---------------------------------------------------------------------------
# Exponent formulas
# ---------------------------------------------------------------------------

def a_ell(n_ell: int, d: int, ell: int, cm_delta: int | None = None) -> int:
    """Exponent bound for the l-adic failure: 4n + 2d without CM,
    8n + 2 v_l(4 delta) + 2d with CM parameters (gamma, delta)."""
    if n_ell < 0 or d < 0:
        raise ValueError("inputs must be non-negative")
    if cm_delta is None:
        return 4 * n_ell + 2 * d
    if cm_delta == 0:
        raise ValueError("delta must be nonzero")
    return 8 * n_ell + 2 * vp(4 * cm_delta, ell) + 2 * d


def b_ell(n_ell: int, degree_tilde: int, ell: int) -> int:
    """Exponent bound for the adelic failure: 2n + 3 v_l(deg)."""
    if n_ell < 0 or degree_tilde < 1:
        raise ValueError("bad inputs")
    v = vp(degree_tilde, ell) if degree_tilde % ell == 0 else 0
    return 2 * n_ell + 3 * v


def tilde_n_bound(n_ell: int, degree_tilde: int, ell: int) -> int:
    """Growth parameter over the extended field: n + v_l(degree)."""
    v = vp(degree_tilde, ell) if degree_tilde % ell == 0 else 0
    return n_ell + v


def c_total(per_prime):
    """(C, factorization) with C = prod l^(a_l + b_l); omitted primes
    contribute exponent 0.  The factored form is always returned alongside
    the integer so the caller never loses it to overflow formatting."""
    factors = {}
    for ell, a, b in per_prime:
        factors[ell] = factors.get(ell, 0) + a + b
    c = 1
    for ell, e in sorted(factors.items()):
        c *= ell ** e
    return c, dict(sorted(factors.items()))


# ---------------------------------------------------------------------------
# Petsche-style height bounds
# ---------------------------------------------------------------------------

PETSCHE_C1 = 134861
PETSCHE_C2 = 104613


@dataclass(frozen=True)
class CurveArithInputs:
    height_alpha: float      # canonical height of the point
    degree_K: int            # [K:Q]
    szpiro_sigma: float      # Szpiro ratio (>= 1)
    log_norm_disc: float     # log |N_{K/Q}(Delta)|
    degree_tilde: int = 1    # [K~:K]

    def __post_init__(self):
        if (self.height_alpha <= 0 or self.degree_K < 1
                or self.szpiro_sigma < 1 or self.log_norm_disc <= 0
                or self.degree_tilde < 1):
            raise ValueError("inputs must be positive (sigma >= 1)")


def petsche_bounds(inputs: CurveArithInputs, ell: int):
    """(h_max, d_max): torsion-shift and divisibility bounds.

    h_max = v_l(floor(c1 [K:Q] sigma^2 log(c2 [K:Q] sigma^2)));
    d_max = max(0, floor(log(h(alpha)/B) / (2 log l))) with
    B = log|N(Delta)| / (10^15 [K:Q]^3 sigma^6 log^2(c2 [K:Q] sigma^2)).
    Floors are taken with outward slack so floating error cannot shrink a
    valid bound.
    """
    K = inputs.degree_K
    sig = inputs.szpiro_sigma
    inner = PETSCHE_C2 * K * sig * sig
    if inner <= 1:
        raise ValueError("log argument must exceed 1")
    x = PETSCHE_C1 * K * sig * sig * math.log(inner)
    floored = math.floor(x + REAL_SLACK)
    h_max = vp(floored, ell) if floored % ell == 0 else 0
    denom = 1e15 * K ** 3 * sig ** 6 * math.log(inner) ** 2
    b_floor = inputs.log_norm_disc / denom
    ratio = inputs.height_alpha / b_floor
    if ratio <= 0:
        raise ValueError("non-positive height ratio")
    d_max = math.floor(math.log(ratio) / (2 * math.log(ell)) + REAL_SLACK)
    return h_max, max(0, d_max)


# ---------------------------------------------------------------------------
# Growth-parameter detection on towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TowerLevel:
    k: int          # level exponent: the group lives mod l^k
    order: int
    group: MatGroup | None = None


@dataclass(frozen=True)
class GrowthTower:
    ell: int
    levels: tuple  # TowerLevel, k = 1..top consecutively

    @classmethod
    def from_groups(cls, groups) -> "GrowthTower":
        """Build from enumerated groups at levels l, l^2, ...; checks that
        each reduction is surjective onto the previous layer."""
        if not groups:
            raise ValueError("empty tower")
        from .residues import Modulus
        m0 = Modulus.of(groups[0].modulus)
        if not m0.is_prime_power():
            raise ModulusMismatchError("tower needs prime-power levels")
        ell = m0.factorization[0][0]
        levels = []
        for i, g in enumerate(groups):
            k = i + 1
            if g.modulus != ell ** k:
                raise ModulusMismatchError(
                    f"level {i} has modulus {g.modulus}, expected {ell ** k}")
            if i > 0 and reduce_level(g, ell ** i) != groups[i - 1]:
                raise HypothesisError(
                    f"reduction from level {k} is not onto level {i}")
            levels.append(TowerLevel(k, g.order, g))
        return cls(ell, tuple(levels))

    @classmethod
    def from_orders(cls, ell: int, orders) -> "GrowthTower":
        """Order-backed tower for groups too large to enumerate; the caller
        asserts surjectivity of the reduction maps."""
        return cls(ell, tuple(TowerLevel(i + 1, o) for i, o in enumerate(orders)))


@dataclass(frozen=True)
class GrowthResult:
    ell: int
    delta_growth: int
    n_min: int
    certified_level: int


@dataclass(frozen=True)
class GrowthConsequences:
    scalar_present: bool     # (1 + l^n_min) Id in every level >= n_min
    kernel_shapes_ok: bool   # each step kernel is Id + l^j T with #T = l^delta
    all_matrices_ok: bool    # delta = 4 only: Id + l^n_min * g present for all g


def maximal_growth_consequences(tower: GrowthTower,
                                result: GrowthResult) -> GrowthConsequences:
    """Check the structural consequences of maximal growth on an enumerated
    tower: the scalar (1+l^n) Id lives at every level at or above the
    detected parameter, step kernels are translates Id + l^j T of a tangent
    space of size l^delta, and (for delta = 4, where the tangent space is
    all of Mat2) every matrix Id + l^n g appears."""
    from .matgroups import kernel_of_reduction, mat_mod
    ell = tower.ell
    n = result.n_min
    groups = [lv.group for lv in tower.levels]
    if any(g is None for g in groups):
        raise HypothesisError("consequence checks need enumerated groups")
    scalar_ok = True
    kernel_ok = True
    allmat_ok = True
    step = ell ** n
    for j in range(n, len(groups) + 1):
        g = groups[j - 1]
        mod = ell ** j
        if mat_mod(((1 + step), 0, 0, (1 + step)), mod) not in g:
            scalar_ok = False
        if j > n:
            ker = kernel_of_reduction(g, ell ** (j - 1))
            if ker.order != ell ** result.delta_growth:
                kernel_ok = False
            low = ell ** (j - 1)
            if any(any((x - y) % low for x, y in zip(m, g.identity))
                   for m in ker.elements):
                kernel_ok = False
        if result.delta_growth == 4:
            r = ell ** (j - n)
            for a in range(r):
                for b in range(r):
                    for c in range(r):
                        for d in range(r):
                            m = ((1 + step * a) % mod, step * b % mod,
                                 step * c % mod, (1 + step * d) % mod)
                            if m not in g:
                                allmat_ok = False
    return GrowthConsequences(scalar_ok, kernel_ok, allmat_ok)


def detect_growth_parameter(tower: GrowthTower, delta_growth: int) -> GrowthResult:
    """Smallest n with #H(l^(j+1)) / #H(l^j) = l^delta for all j from n to
    the top of the tower (floored at 2 for l = 2).

    Raises if the tower is too short or its top has not reached maximal
    growth, since a finite tower can then certify nothing.
    """
    if delta_growth not in (2, 4):
        raise ValueError("delta must be 2 (CM) or 4 (non-CM)")
    levels = tower.levels
    if len(levels) < 2:
        raise HypothesisError("tower too short to certify growth")
    target = tower.ell ** delta_growth
    ratios = []
    for lo, hi in zip(levels, levels[1:]):
        if hi.order % lo.order:
            raise HypothesisError("non-multiplicative tower orders")
        ratios.append(hi.order // lo.order)
    if ratios[-1] != target:
        raise HypothesisError(
            f"top ratio {ratios[-1]} != {target}: tower has not stabilised")
    n = len(ratios)  # ratios[j] compares levels j+1 and j+2
    while n >= 1 and ratios[n - 1] == target:
        n -= 1
    n_min = n + 1
    if tower.ell == 2:
        n_min = max(n_min, 2)
    return GrowthResult(tower.ell, delta_growth, n_min, levels[-1].k)
