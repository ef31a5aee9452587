"""Submodules of (Z/l^k)^2 under matrix-algebra action.

Provides module generation A*v, commutator modules [V,H], lattice
containment tests, and the three-case lattice-containment verifier for
algebra-generated modules (identity-kernel, irreducible, and normaliser-of-
Cartan hypotheses).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HypothesisError, ModulusMismatchError
from .linalg import HowellAccumulator, HowellModule, vp
from .matgroups import (
    CartanData,
    MatGroup,
    cartan_contains,
    cartan_matrix,
    matrix_algebra,
    mat_vec,
    normaliser_contains,
    reduce_level,
)


def submodule_span(vecs, p: int, k: int) -> HowellModule:
    return HowellModule.span(vecs, 2, p, k)


def vector_valuation(v, p: int, k: int) -> int:
    """min valuation of the entries; k for the zero vector."""
    vals = [vp(x % p ** k, p) for x in v if x % p ** k]
    return min(vals) if vals else k


def matrix_valuation(m, p: int, k: int) -> int:
    """Valuation of a matrix: the minimum over its four entries."""
    return vector_valuation(m, p, k)


def module_generated(algebra: HowellModule, v, p: int, k: int) -> HowellModule:
    """The module A*v spanned by the action of an algebra on a vector."""
    if algebra.m != 4 or (algebra.p, algebra.k) != (p, k):
        raise ModulusMismatchError("algebra and vector level mismatch")
    n = p ** k
    gens = [mat_vec(row, v, n) for row in algebra.rows]
    return submodule_span(gens, p, k)


def commutator_module(V: HowellModule, H: MatGroup) -> HowellModule:
    """Span of {g w - w : g in H, w in V}; the basis of V suffices since
    w -> g w - w is additive in w."""
    p, k = H.prime_power()
    if (V.p, V.k, V.m) != (p, k, 2):
        raise ModulusMismatchError("module and group level mismatch")
    n = p ** k
    acc = HowellAccumulator(2, p, k)
    for g in H.elements:
        for w in V.rows:
            gw = mat_vec(g, w, n)
            acc.insert(((gw[0] - w[0]) % n, (gw[1] - w[1]) % n))
        if acc.is_full():
            break
    return acc.module()


def contains_scaled_lattice(V: HowellModule, e: int) -> bool:
    """Does V contain l^e * (Z/l^k)^2?"""
    if e > V.k:
        raise ValueError("scale exceeds precision")
    s = V.p ** e
    return V.contains((s, 0)) and V.contains((0, s))


def min_vector_valuation(V: HowellModule) -> int:
    if not V.rows:
        return V.k
    return min(vector_valuation(r, V.p, V.k) for r in V.rows)


def minimal_contained_scale(V: HowellModule) -> int:
    """Least e with l^e * (Z/l^k)^2 contained in V (e = k always works)."""
    for e in range(V.k + 1):
        if contains_scaled_lattice(V, e):
            return e
    raise AssertionError("unreachable: e = k is the zero lattice")


def irreducible_mod_ell(H: MatGroup) -> bool:
    """True iff the mod-l reduction of H stabilises no line of F_l^2."""
    ell, _ = H.prime_power()
    Hbar = reduce_level(H, ell)
    gens = Hbar.generating_set()
    lines = [(1, t) for t in range(ell)] + [(0, 1)]
    for w in lines:
        if all((lambda gw: (gw[0] * w[1] - gw[1] * w[0]) % ell == 0)(mat_vec(g, w, ell))
               for g in gens):
            return False
    return True


def principal_congruence_kernel(ell: int, n: int, k: int) -> MatGroup:
    """{M in GL2(Z/l^k) : M = Id mod l^n}, enumerated directly.

    Generated by the four matrices Id + l^n E_ij.
    """
    if not 1 <= n <= k:
        raise ValueError("need 1 <= n <= k")
    mod = ell ** k
    step = ell ** n
    r = ell ** (k - n)
    elems = [
        ((1 + step * a) % mod, step * b % mod, step * c % mod, (1 + step * d) % mod)
        for a in range(r) for b in range(r) for c in range(r) for d in range(r)
    ]
    gens = [(1 + step, 0, 0, 1), (1, step, 0, 1), (1, 0, step, 1), (1, 0, 0, 1 + step)]
    g = MatGroup(mod, elems, generators=[tuple(x % mod for x in m) for m in gens])
    assert g.order == ell ** (4 * (k - n))
    return g


def cartan_one_units(data: CartanData, n: int):
    """Elements of the Cartan subgroup congruent to Id mod l^n (level >= n)."""
    if not 1 <= n <= data.level:
        raise ValueError("need 1 <= n <= level")
    step = data.ell ** n
    r = data.ell ** (data.level - n)
    return [cartan_matrix(data, 1 + step * s, step * t)
            for s in range(r) for t in range(r)]


@dataclass(frozen=True)
class GroupTheoryReport:
    case: int
    ell: int
    k: int
    claimed_exponent: int
    contained: bool
    minimal_exponent: int
    module: HowellModule

    @property
    def passed(self) -> bool:
        return self.contained


def verify_grouptheory_prop(H: MatGroup, v, case: int, *, n: int | None = None,
                            d: int = 0, cartan_data: CartanData | None = None,
                            ) -> GroupTheoryReport:
    """Check the lattice-containment statement for A*v in one of three cases.

    case 1: H contains the full congruence kernel mod l^n; claim e = d + n.
    case 2: H irreducible mod l; claim e = d.
    case 3: H inside the normaliser of a Cartan (gamma, delta), not inside
            the Cartan, containing its 1-units at level n; claim
            e = 3n + d + v_l(4 delta).

    Hypothesis violations raise HypothesisError; a false containment is
    reported, not raised.
    """
    ell, k = H.prime_power()
    if vector_valuation(v, ell, k) > d:
        raise HypothesisError(f"vector {v} has valuation > d = {d}")

    if case == 1:
        if n is None or n < 1:
            raise HypothesisError("case 1 needs a level n >= 1")
        ident = H.identity
        step = ell ** min(n, k)
        count = sum(
            1 for m in H.elements
            if all((x - y) % step == 0 for x, y in zip(m, ident))
        )
        if count != ell ** (4 * max(0, k - n)):
            raise HypothesisError(
                f"H does not contain the full congruence kernel mod {ell}^{n}")
        claimed = d + n
    elif case == 2:
        if not irreducible_mod_ell(H):
            raise HypothesisError("H is reducible mod l")
        claimed = d
    elif case == 3:
        if cartan_data is None or n is None or n < 1:
            raise HypothesisError("case 3 needs Cartan parameters and n >= 1")
        if cartan_data.ell != ell or cartan_data.level != k:
            raise HypothesisError("Cartan parameters live at the wrong level")
        if cartan_data.delta % ell ** k == 0:
            raise HypothesisError("delta must be nonzero")
        if not all(normaliser_contains(cartan_data, h) for h in H.elements):
            raise HypothesisError("H is not contained in the Cartan normaliser")
        if all(cartan_contains(cartan_data, h) for h in H.elements):
            raise HypothesisError("H is contained in the Cartan itself")
        missing = [u for u in cartan_one_units(cartan_data, n) if u not in H]
        if missing:
            raise HypothesisError(
                f"H misses {len(missing)} Cartan 1-units at level {n}")
        claimed = 3 * n + d + vp(4 * cartan_data.delta, ell)
    else:
        raise ValueError("case must be 1, 2 or 3")

    if claimed > k:
        raise HypothesisError(
            f"claimed exponent {claimed} exceeds precision k = {k}")

    V = module_generated(matrix_algebra(H), v, ell, k)
    contained = contains_scaled_lattice(V, claimed)
    return GroupTheoryReport(case, ell, k, claimed, contained,
                             minimal_contained_scale(V), V)
