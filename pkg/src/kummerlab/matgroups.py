"""2x2 matrix arithmetic over Z/NZ and enumerated matrix groups.

Matrices are row-major 4-tuples (a, b, c, d) of integers reduced mod N.
Groups are always fully enumerated element sets with a configurable cap;
element ordering is lexicographic on the entry tuples, which makes every
derived object deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import sympy

from .errors import (
    GroupTooLargeError,
    ModulusMismatchError,
    NonInvertibleError,
    OverflowGuardError,
)
from .linalg import HowellAccumulator, HowellModule
from .residues import Modulus

Mat = tuple  # (a, b, c, d)

DEFAULT_GROUP_CAP = 2_000_000

IDENTITY: Mat = (1, 0, 0, 1)


def mat_mod(m: Mat, n: int) -> Mat:
    return (m[0] % n, m[1] % n, m[2] % n, m[3] % n)


def mat_mul(x: Mat, y: Mat, n: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n,
            (c * e + d * g) % n, (c * f + d * h) % n)


def mat_det(m: Mat, n: int) -> int:
    return (m[0] * m[3] - m[1] * m[2]) % n


def mat_is_invertible(m: Mat, n: int) -> bool:
    return gcd(mat_det(m, n), n) == 1


def mat_inv(m: Mat, n: int) -> Mat:
    det = mat_det(m, n)
    if gcd(det, n) != 1:
        raise NonInvertibleError(f"matrix {m} has determinant {det} mod {n}")
    di = pow(det, -1, n)
    a, b, c, d = m
    return (d * di % n, -b * di % n, -c * di % n, a * di % n)


def mat_pow(m: Mat, e: int, n: int) -> Mat:
    if e < 0:
        return mat_pow(mat_inv(m, n), -e, n)
    result = mat_mod(IDENTITY, n)
    base = mat_mod(m, n)
    while e:
        if e & 1:
            result = mat_mul(result, base, n)
        base = mat_mul(base, base, n)
        e >>= 1
    return result


def mat_vec(m: Mat, v, n: int):
    a, b, c, d = m
    return ((a * v[0] + b * v[1]) % n, (c * v[0] + d * v[1]) % n)


def mat_order(m: Mat, n: int, cap: int = 10 ** 7) -> int:
    ident = mat_mod(IDENTITY, n)
    x = mat_mod(m, n)
    k = 1
    while x != ident:
        x = mat_mul(x, m, n)
        k += 1
        if k > cap:
            raise GroupTooLargeError("element order exceeds cap")
    return k


class MatGroup:
    """An enumerated subgroup of GL2(Z/NZ)."""

    def __init__(self, modulus: int, elements, generators=None):
        self.modulus = modulus
        self.elements = tuple(sorted(elements))
        self._eset = frozenset(self.elements)
        self._generators = tuple(generators) if generators is not None else None
        self._small_gens = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self):
        return self._generators if self._generators is not None else self.generating_set()

    def __contains__(self, m: Mat) -> bool:
        return mat_mod(m, self.modulus) in self._eset

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatGroup)
                and self.modulus == other.modulus and self._eset == other._eset)

    def __hash__(self):
        return hash((self.modulus, self._eset))

    def __repr__(self):
        return f"MatGroup(mod {self.modulus}, order {self.order})"

    @property
    def identity(self) -> Mat:
        return mat_mod(IDENTITY, self.modulus)

    def generating_set(self):
        """A small generating set (greedy over the canonical order)."""
        if self._small_gens is None:
            n = self.modulus
            gens: list = []
            pool = self._generators if self._generators is not None else self.elements
            closed = {self.identity}
            for g in pool:
                g = mat_mod(g, n)
                if g in closed:
                    continue
                gens.append(g)
                closed = _bfs_closure(gens, n, cap=self.order + 1)
                if len(closed) == self.order:
                    break
            self._small_gens = tuple(gens)
        return self._small_gens

    def is_abelian(self) -> bool:
        gens = self.generating_set()
        n = self.modulus
        return all(mat_mul(g, h, n) == mat_mul(h, g, n)
                   for i, g in enumerate(gens) for h in gens[i + 1:])

    def prime_power(self):
        mod = Modulus.of(self.modulus)
        if not mod.is_prime_power():
            raise ModulusMismatchError("operation requires a prime-power modulus")
        return mod.factorization[0]


def _bfs_closure(gens, n, cap):
    elems = {mat_mod(IDENTITY, n)}
    frontier = list(elems)
    while frontier:
        new = []
        for a, b, c, d in frontier:
            for e, f, g, h in gens:
                w = ((a * e + b * g) % n, (a * f + b * h) % n,
                     (c * e + d * g) % n, (c * f + d * h) % n)
                if w not in elems:
                    if len(elems) >= cap:
                        raise GroupTooLargeError(f"closure exceeded cap {cap}")
                    elems.add(w)
                    new.append(w)
        frontier = new
    return elems


def close_group(generators, modulus: int, cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    """Breadth-first closure of the generated subgroup of GL2(Z/NZ)."""
    gens = []
    for g in generators:
        g = mat_mod(tuple(g), modulus)
        if not mat_is_invertible(g, modulus):
            raise NonInvertibleError(f"generator {g} is not invertible mod {modulus}")
        if g not in gens:
            gens.append(g)
    elems = _bfs_closure(gens, modulus, cap)
    return MatGroup(modulus, elems, generators=gens)


def gl2_order(modulus: int) -> int:
    """#GL2(Z/NZ) by the standard product formula."""
    order = 1
    for p, e in Modulus.of(modulus).factorization:
        order *= p ** (4 * (e - 1)) * (p * p - 1) * (p * p - p)
    return order


def sl2_order(modulus: int) -> int:
    order = 1
    for p, e in Modulus.of(modulus).factorization:
        order *= p ** (3 * (e - 1)) * p * (p * p - 1)
    return order


def gl2_group(modulus: int, cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    """All of GL2(Z/NZ), enumerated directly."""
    expected = gl2_order(modulus)
    if expected > cap:
        raise GroupTooLargeError(f"GL2(Z/{modulus}) has {expected} > cap elements")
    n = modulus
    elems = [
        (a, b, c, d)
        for a in range(n) for b in range(n) for c in range(n) for d in range(n)
        if gcd((a * d - b * c) % n, n) == 1
    ]
    assert len(elems) == expected
    return MatGroup(n, elems)


def sl2_group(modulus: int, cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    """SL2(Z/NZ) as the closure of the two elementary matrices."""
    g = close_group([(1, 1, 0, 1), (1, 0, 1, 1)], modulus, cap)
    assert g.order == sl2_order(modulus)
    return g


# ---------------------------------------------------------------------------
# Cartan subgroups and relatives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CartanData:
    """Parameters (gamma, delta) of a Cartan subgroup at level ell^level.

    The group consists of the matrices (x, delta*y; y, x+gamma*y) whose
    pseudo-determinant x*(x+gamma*y) - delta*y^2 is a unit; gamma is 0
    unless ell = 2, where it may be 1.
    """

    gamma: int
    delta: int
    ell: int
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if self.gamma not in (0, 1):
            raise ValueError("gamma must be 0 or 1")
        if self.gamma == 1 and self.ell != 2:
            raise ValueError("gamma = 1 is only allowed at ell = 2")
        if not sympy.isprime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.ell ** self.level > 2 ** 63:
            raise OverflowGuardError("level exceeds the 2^63 modulus cap")

    @property
    def modulus(self) -> int:
        return self.ell ** self.level


def cartan_matrix(data: CartanData, x: int, y: int) -> Mat:
    n = data.modulus
    return (x % n, data.delta * y % n, y % n, (x + data.gamma * y) % n)


def cartan_contains(data: CartanData, m: Mat) -> bool:
    """O(1) membership test straight from the defining shape."""
    n = data.modulus
    a, b, c, d = mat_mod(m, n)
    return (b == data.delta * c % n and d == (a + data.gamma * c) % n
            and mat_is_invertible((a, b, c, d), n))


def cartan(data: CartanData) -> MatGroup:
    n = data.modulus
    ell = data.ell
    if n * n > 25_000_000:
        raise GroupTooLargeError(
            f"Cartan enumeration at level {ell}^{data.level} is too large")
    elems = []
    for x in range(n):
        for y in range(n):
            if (x * (x + data.gamma * y) - data.delta * y * y) % ell:
                elems.append(cartan_matrix(data, x, y))
    return MatGroup(n, elems)


def cartan_reflection(data: CartanData) -> Mat:
    return mat_mod((1, data.gamma, 0, -1), data.modulus)


def cartan_normaliser(C: MatGroup, data: CartanData) -> MatGroup:
    """N = C  u  (1 gamma; 0 -1) C, of index 2 over C."""
    n = data.modulus
    w = cartan_reflection(data)
    elems = set(C.elements)
    elems.update(mat_mul(w, c, n) for c in C.elements)
    N = MatGroup(n, elems)
    assert N.order == 2 * C.order
    return N


def normaliser_contains(data: CartanData, m: Mat) -> bool:
    if cartan_contains(data, m):
        return True
    w = cartan_reflection(data)
    return cartan_contains(data, mat_mul(w, m, data.modulus))


def smallest_nonresidue(p: int) -> int:
    for e in range(2, p):
        if pow(e, (p - 1) // 2, p) == p - 1:
            return e
    raise ValueError(f"no quadratic non-residue mod {p}")


def nonsplit_cartan_modp(p: int, eps: int | None = None) -> MatGroup:
    """C_ns(p): matrices (a, b*eps; b, a), (a, b) != (0, 0), eps a non-residue."""
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    if eps is None:
        eps = smallest_nonresidue(p)
    if pow(eps, (p - 1) // 2, p) != p - 1:
        raise ValueError(f"{eps} is a quadratic residue mod {p}")
    elems = [(a, b * eps % p, b, a)
             for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    assert all(mat_is_invertible(m, p) for m in elems)
    g = MatGroup(p, elems)
    assert g.order == p * p - 1
    return g


def d_subgroup(p: int, eps: int | None = None) -> MatGroup:
    """The index-3 subgroup D(p) of N_ns(p): cubes of C_ns(p) and their
    reflections by diag(1, -1).  Only defined for p = 2 mod 3."""
    if p % 3 != 2:
        raise ValueError("D(p) requires p = 2 mod 3")
    C = nonsplit_cartan_modp(p, eps)
    cubes = {mat_pow(c, 3, p) for c in C.elements}
    refl = (1, 0, 0, p - 1)
    elems = set(cubes) | {mat_mul(refl, c, p) for c in cubes}
    D = MatGroup(p, elems)
    assert D.order == 2 * (p * p - 1) // 3
    return D


# ---------------------------------------------------------------------------
# Scalars, derived subgroup, exponents, powers
# ---------------------------------------------------------------------------

def scalars_in(H: MatGroup) -> MatGroup:
    n = H.modulus
    elems = [m for m in H.elements if m[1] == 0 and m[2] == 0 and m[0] == m[3]]
    return MatGroup(n, elems)


def contains_nontrivial_homothety(H: MatGroup, ell: int):
    """Some scalar lambda*Id in H with lambda != 1 mod ell, if one exists."""
    for m in scalars_in(H).elements:
        if m[0] % ell != 1:
            return m[0]
    return None


def normal_closure(seeds, ambient_gens, modulus: int,
                   cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    """Smallest subgroup containing the seeds that is normalised by the
    group generated by ambient_gens."""
    n = modulus
    gens = list(dict.fromkeys(mat_mod(tuple(s), n) for s in seeds))
    conj = [(mat_mod(tuple(g), n), mat_inv(g, n)) for g in ambient_gens]
    while True:
        elems = _bfs_closure(gens, n, cap)
        fresh = []
        for g, gi in conj:
            for h in gens:
                w = mat_mul(mat_mul(g, h, n), gi, n)
                if w not in elems:
                    fresh.append(w)
        if not fresh:
            return MatGroup(n, elems, generators=gens)
        gens.extend(dict.fromkeys(fresh))


def derived_subgroup(H: MatGroup, cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    """G' as the normal closure of the commutators of a generating set."""
    n = H.modulus
    gens = H.generating_set()
    comms = set()
    for g in gens:
        gi = mat_inv(g, n)
        for h in gens:
            hi = mat_inv(h, n)
            comms.add(mat_mul(mat_mul(g, h, n), mat_mul(gi, hi, n), n))
    comms.discard(H.identity)
    if not comms:
        return MatGroup(n, [H.identity], generators=())
    return normal_closure(sorted(comms), gens, n, cap)


def abelian_invariants_from_orders(orders):
    """Invariant factors of a finite abelian group given all element orders.

    Uses the torsion counts #{a : ord(a) | q^j} = q^(s_j); the number of
    cyclic q-factors with exponent >= j is s_j - s_(j-1).
    """
    orders = list(orders)
    primes = set()
    for d in orders:
        x, q = d, 2
        while q * q <= x:
            if x % q == 0:
                primes.add(q)
                while x % q == 0:
                    x //= q
            q += 1
        if x > 1:
            primes.add(x)
    exps_by_prime = {}
    for q in sorted(primes):
        s = [0]
        j = 1
        while True:
            tors = sum(1 for d in orders if q ** j % d == 0)
            sj = 0
            t = tors
            while t > 1:
                t //= q
                sj += 1
            if q ** sj != tors:
                raise AssertionError("torsion count is not a prime power")
            s.append(sj)
            if sj == s[-2]:
                break
            j += 1
        counts = [s[i] - s[i - 1] for i in range(1, len(s))]  # c_j, j = 1..
        exps = []
        for j in range(len(counts), 0, -1):
            exact = counts[j - 1] - (counts[j] if j < len(counts) else 0)
            exps.extend([j] * exact)
        exps_by_prime[q] = sorted(exps, reverse=True)
    depth = max((len(v) for v in exps_by_prime.values()), default=0)
    factors = []
    for i in range(depth):
        f = 1
        for q, exps in exps_by_prime.items():
            if i < len(exps):
                f *= q ** exps[i]
        factors.append(f)
    return sorted(factors)


def _coset_quotient(elements, subgroup_set, mul):
    """Canonical coset representatives and the induced multiplication."""
    rep = {}
    reps = []
    for x in elements:
        if x in rep:
            continue
        coset = sorted(mul(x, h) for h in subgroup_set)
        r = coset[0]
        reps.append(r)
        for y in coset:
            rep[y] = r
    return rep, sorted(reps)


def abelianisation(H: MatGroup) -> list:
    """Invariant factors of H/H'."""
    n = H.modulus
    der = derived_subgroup(H)
    _, reps = _coset_quotient(H.elements, der._eset,
                              lambda x, y: mat_mul(x, y, n))
    orders = []
    for r in reps:  # order of the coset r*H' = least k with r^k in H'
        x = r
        k = 1
        while x not in der._eset:
            x = mat_mul(x, r, n)
            k += 1
        orders.append(k)
    return abelian_invariants_from_orders(orders)


def group_exponent(H: MatGroup) -> int:
    n = H.modulus
    e = 1
    for m in H.elements:
        e = lcm(e, mat_order(m, n))
    return e


def power_subgroup(H: MatGroup, M: int, cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    """The subgroup generated by the M-th powers of all elements of H."""
    n = H.modulus
    powers = sorted({mat_pow(m, M, n) for m in H.elements})
    return close_group(powers, n, cap)


# ---------------------------------------------------------------------------
# Algebra span, level changes
# ---------------------------------------------------------------------------

def matrix_algebra(H: MatGroup) -> HowellModule:
    """The span of the (multiplicatively closed) element set of H inside
    Mat2(Z/l^k) viewed as (Z/l^k)^4, in Howell form."""
    p, k = H.prime_power()
    acc = HowellAccumulator(4, p, k)
    for m in H.elements:
        if acc.insert(m) and acc.is_full():
            break
    return acc.module()


def reduce_level(H: MatGroup, d: int) -> MatGroup:
    """Entrywise reduction of H modulo d (for d | N): the image group."""
    if H.modulus % d != 0:
        raise ModulusMismatchError(f"{d} does not divide {H.modulus}")
    elems = {mat_mod(m, d) for m in H.elements}
    gens = None
    if H._generators is not None:
        gens = tuple(dict.fromkeys(mat_mod(g, d) for g in H._generators))
    return MatGroup(d, elems, generators=gens)


def kernel_of_reduction(H: MatGroup, d: int) -> MatGroup:
    if H.modulus % d != 0:
        raise ModulusMismatchError(f"{d} does not divide {H.modulus}")
    ident = mat_mod(IDENTITY, d)
    elems = [m for m in H.elements if mat_mod(m, d) == ident]
    return MatGroup(H.modulus, elems)


def is_normal_in(sub: MatGroup, sup: MatGroup) -> bool:
    n = sup.modulus
    for g in sup.generating_set():
        gi = mat_inv(g, n)
        for h in sub.generating_set():
            if mat_mul(mat_mul(g, h, n), gi, n) not in sub:
                return False
    return True


def normaliser_bruteforce(H: MatGroup, ambient: MatGroup) -> MatGroup:
    """{g in ambient : g H g^-1 = H} by conjugating a generating set."""
    n = ambient.modulus
    gens = H.generating_set()
    elems = []
    for g in ambient.elements:
        gi = mat_inv(g, n)
        if all(mat_mul(mat_mul(g, h, n), gi, n) in H for h in gens):
            elems.append(g)
    return MatGroup(n, elems)


def all_subgroups(G: MatGroup, cap: int = 10 ** 5):
    """Every subgroup of a small enumerated group (lattice BFS)."""
    n = G.modulus
    trivial = MatGroup(n, [G.identity], generators=())
    seen = {trivial._eset}
    out = [trivial]
    queue = [trivial]
    while queue:
        H = queue.pop()
        base = list(H.generating_set())
        for g in G.elements:
            if g in H._eset:
                continue
            K = close_group(base + [g], n, cap=cap)
            if K._eset not in seen:
                seen.add(K._eset)
                out.append(K)
                queue.append(K)
    return out
