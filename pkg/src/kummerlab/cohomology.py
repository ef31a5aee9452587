"""First cohomology H^1(G, M) for matrix groups acting on (Z/l^j)^2.

Cocycles are solved for on generator values: a cocycle is determined by its
values on a generating set, and the condition phi(x*g) = phi(x) + x*phi(g),
imposed for every enumerated element x and every generator g, is equivalent
to the full cocycle identity.  This keeps the linear system at width
2 * #generators while needing no presentation of the group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .errors import CohomologyCapError, HypothesisError, ModulusMismatchError
from .linalg import (
    HowellAccumulator,
    HowellModule,
    howell,
    howell_contains,
    kernel_mod,
    quotient_structure,
    vp,
)
from .matgroups import (
    MatGroup,
    is_normal_in,
    mat_inv,
    mat_mod,
    mat_mul,
    mat_order,
    mat_vec,
    scalars_in,
)

DEFAULT_COHOMOLOGY_CAP = 10_000


@dataclass(frozen=True)
class GModule:
    """The module (Z/p^level)^2 with the natural action of matrices
    (reduced entrywise) on column vectors."""

    p: int
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")

    @property
    def modulus(self) -> int:
        return self.p ** self.level


@dataclass(frozen=True)
class CohomologyResult:
    invariant_factors: tuple
    order: int
    exponent: int

    @classmethod
    def from_factors(cls, factors) -> "CohomologyResult":
        factors = tuple(factors)
        order = 1
        for f in factors:
            order *= f
        return cls(factors, order, lcm(*factors) if factors else 1)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def __str__(self):
        if self.is_trivial:
            return "0"
        return " x ".join(f"Z/{f}" for f in self.invariant_factors)


def _check_module(G: MatGroup, M: GModule):
    p, k = G.prime_power()
    if p != M.p or M.level > k:
        raise ModulusMismatchError(
            f"module level {M.p}^{M.level} incompatible with group mod {G.modulus}")
    return p, k


def _cocycle_spaces(G: MatGroup, M: GModule, cap: int, trivial_action=False):
    """(Z1 basis, B1 generators, value table L, generators, width).

    L maps each group element x to a 2 x width matrix with phi(x) = L[x] @ u
    for u the stacked generator values of the cocycle phi.
    """
    if G.order > cap:
        raise CohomologyCapError(f"group order {G.order} exceeds cap {cap}")
    if trivial_action:
        p = M.p  # composite group modulus allowed: values only, no action
    else:
        p, _ = _check_module(G, M)
    j = M.level
    mod = M.modulus
    n = G.modulus
    gens = list(G.generating_set())
    width = 2 * len(gens)
    ident = G.identity
    zero_rows = ((0,) * width, (0,) * width)
    L = {ident: zero_rows}
    queue = [ident]
    acc = HowellAccumulator(width, p, j) if width else None
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        Lx = L[x]
        if trivial_action:
            a, b, c, d = 1, 0, 0, 1
        else:
            a, b, c, d = mat_mod(x, mod)
        for i, g in enumerate(gens):
            w = mat_mul(x, g, n)
            col = 2 * i
            row0 = list(Lx[0])
            row1 = list(Lx[1])
            row0[col] = (row0[col] + a) % mod
            row0[col + 1] = (row0[col + 1] + b) % mod
            row1[col] = (row1[col] + c) % mod
            row1[col + 1] = (row1[col + 1] + d) % mod
            cand = (tuple(row0), tuple(row1))
            prev = L.get(w)
            if prev is None:
                L[w] = cand
                queue.append(w)
            elif prev != cand:
                acc.insert(tuple((u - v) % mod for u, v in zip(cand[0], prev[0])))
                acc.insert(tuple((u - v) % mod for u, v in zip(cand[1], prev[1])))
    assert len(L) == G.order
    if width == 0:
        return (), (), L, gens, 0
    z1 = kernel_mod(acc.rows(), width, p, j)
    b1 = []
    if not trivial_action:
        for v in ((1, 0), (0, 1)):
            row = []
            for g in gens:
                gv = mat_vec(mat_mod(g, mod), v, mod)
                row.extend(((gv[0] - v[0]) % mod, (gv[1] - v[1]) % mod))
            b1.append(tuple(row))
        for b in b1:
            assert howell_contains(b, z1, width, p, j), "coboundary outside Z1"
    return z1, tuple(b1), L, gens, width


def h1(G: MatGroup, M: GModule, cap: int = DEFAULT_COHOMOLOGY_CAP) -> CohomologyResult:
    """Invariant factors of H^1(G, M) = Z^1 / B^1."""
    z1, b1, _, _, width = _cocycle_spaces(G, M, cap)
    if width == 0:
        return CohomologyResult.from_factors(())
    factors = quotient_structure(z1, b1, width, M.p, M.level)
    result = CohomologyResult.from_factors(factors)
    # restriction-corestriction sanity: the exponent kills nothing new
    assert G.order % result.exponent == 0, "H^1 exponent must divide #G"
    return result


def h1_cyclic_oracle(sigma, modulus: int, M: GModule) -> CohomologyResult:
    """H^1(<sigma>, M) = ker(N_sigma) / im(sigma - 1), the independent
    cyclic-group formula used to cross-check h1."""
    d = mat_order(sigma, modulus)
    mod = M.modulus
    sb = mat_mod(sigma, mod)
    x = (1, 0, 0, 1)
    norm = (0, 0, 0, 0)
    for _ in range(d):
        norm = tuple((u + v) % mod for u, v in zip(norm, x))
        x = mat_mul(x, sb, mod)
    ker = kernel_mod([(norm[0], norm[1]), (norm[2], norm[3])], 2, M.p, M.level)
    im = [tuple((a - b) % mod for a, b in zip(mat_vec(sb, v, mod), v))
          for v in ((1, 0), (0, 1))]
    factors = quotient_structure(ker, im, 2, M.p, M.level)
    return CohomologyResult.from_factors(factors)


def fixed_points(G: MatGroup, M: GModule) -> HowellModule:
    """{m in M : g m = m for all g}, as the kernel of the stacked (g - Id)."""
    _check_module(G, M)
    mod = M.modulus
    rows = []
    for g in G.generating_set():
        a, b, c, d = mat_mod(g, mod)
        rows.append(((a - 1) % mod, b))
        rows.append((c, (d - 1) % mod))
    if not rows:
        return HowellModule.full(2, M.p, M.level)
    return HowellModule(M.p, M.level, 2,
                        kernel_mod(rows, 2, M.p, M.level))


@dataclass(frozen=True)
class SahReport:
    scalar: int
    annihilator_valuation: int
    cohomology: CohomologyResult
    holds: bool


def sah_annihilator_check(G: MatGroup, M: GModule,
                          cap: int = DEFAULT_COHOMOLOGY_CAP) -> SahReport:
    """Verify (lambda - 1) H^1(G, M) = 0 for a scalar lambda Id in G.

    Picks the scalar minimising v_p(lambda - 1) and checks the scaled Z^1
    basis lands in B^1 (plus the equivalent exponent divisibility).
    """
    mod = M.modulus
    best = None
    for s in scalars_in(G).elements:
        if s[0] % G.modulus == 1:
            continue
        lam = s[0] % mod
        v = vp((lam - 1) % mod, M.p) if (lam - 1) % mod else M.level
        if best is None or v < best[1]:
            best = (lam, v)
    if best is None:
        raise HypothesisError("G contains no scalar different from the identity")
    lam, v = best
    z1, b1, _, _, width = _cocycle_spaces(G, M, cap)
    if width == 0:
        return SahReport(lam, v, CohomologyResult.from_factors(()), True)
    bspan = howell(list(b1), width, M.p, M.level)
    scaled_ok = all(
        howell_contains(tuple((lam - 1) * x % mod for x in z), bspan,
                        width, M.p, M.level)
        for z in z1
    )
    result = CohomologyResult.from_factors(
        quotient_structure(z1, b1, width, M.p, M.level))
    exp_ok = result.exponent == 1 or vp(result.exponent, M.p) <= v
    return SahReport(lam, v, result, scaled_ok and exp_ok)


@dataclass(frozen=True)
class HomInvariantReport:
    hom_group: CohomologyResult
    invariants: CohomologyResult
    invariant_module_rows: tuple


def hom_invariants(J: MatGroup, ambient: MatGroup, M: GModule,
                   cap: int = DEFAULT_COHOMOLOGY_CAP) -> HomInvariantReport:
    """Hom(J, M) and its subgroup invariant under the conjugation-twisted
    action (h psi)(x) = h * psi(h^-1 x h) of the ambient group.

    J must be normal in the ambient group; the action on M goes through
    entrywise reduction of h.
    """
    if J.modulus != ambient.modulus:
        raise ModulusMismatchError("J and ambient live over different moduli")
    if not is_normal_in(J, ambient):
        raise HypothesisError("J is not normal in the ambient group")
    p, j = M.p, M.level
    n = ambient.modulus
    kp = 0
    nn = n
    while nn % p == 0:
        nn //= p
        kp += 1
    if j > kp:
        raise ModulusMismatchError(
            f"module level p^{j} exceeds the p-part of the modulus {n}")
    mod = M.modulus
    # Hom(J, M) = cocycles for the trivial action
    phi, _, L, gens, width = _cocycle_spaces(J, M, cap, trivial_action=True)
    hom_factors = quotient_structure(phi, [], width, p, j) if width else []
    if width == 0 or not phi:
        empty = CohomologyResult.from_factors(())
        return HomInvariantReport(CohomologyResult.from_factors(hom_factors),
                                  empty, ())
    constraint_rows = []
    for h in ambient.generating_set():
        hbar = mat_mod(h, mod)
        hinv = mat_inv(h, n)
        t_rows = []
        for g in gens:
            conj = mat_mul(mat_mul(hinv, g, n), h, n)
            Lc = L.get(conj)
            if Lc is None:
                raise HypothesisError("conjugate of a generator left J")
            a, b, c, d = hbar
            r0 = tuple((a * u + b * v) % mod for u, v in zip(Lc[0], Lc[1]))
            r1 = tuple((c * u + d * v) % mod for u, v in zip(Lc[0], Lc[1]))
            t_rows.extend((r0, r1))
        for idx in range(width):
            row = list(t_rows[idx])
            row[idx] = (row[idx] - 1) % mod
            constraint_rows.append(tuple(row))
    fixed = kernel_mod(constraint_rows, width, p, j)
    # intersection of span(phi) and span(fixed) via the left-kernel trick
    stacked = list(phi) + [tuple(-x % mod for x in w) for w in fixed]
    R = len(stacked)
    transposed = [tuple(stacked[r][c] for r in range(R)) for c in range(width)]
    relations = kernel_mod(transposed, R, p, j)
    inter = []
    for z in relations:
        vec = [0] * width
        for r in range(len(phi)):
            for c in range(width):
                vec[c] = (vec[c] + z[r] * phi[r][c]) % mod
        if any(vec):
            inter.append(tuple(vec))
    inter_rows = howell(inter, width, p, j)
    inv_factors = quotient_structure(inter_rows, [], width, p, j)
    return HomInvariantReport(
        CohomologyResult.from_factors(hom_factors),
        CohomologyResult.from_factors(inv_factors),
        inter_rows,
    )
