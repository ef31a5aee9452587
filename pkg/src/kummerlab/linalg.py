"""Exact linear algebra over Z/p^k and Z.

Everything here works with plain Python integers: rows are tuples, matrices
are lists of rows.  Over the local ring Z/p^k every nonzero element factors
as unit * p^v, which makes the Howell normal form (the canonical echelon
form for modules over Z/nZ) particularly simple: pivots are powers of p,
entries above a pivot are reduced modulo the pivot, and for every row with
pivot p^v the "annihilated tail" p^(k-v) * row is itself reduced into the
basis.  Two generating sets span the same submodule iff they have the same
Howell form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined; handle separately")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def unit_part(x: int, p: int, mod: int) -> int:
    """Unit u with x = u * p^vp(x) modulo mod (a power of p)."""
    return (x // p ** vp(x, p)) % mod


# ---------------------------------------------------------------------------
# Howell form over Z/p^k
# ---------------------------------------------------------------------------

def howell(rows, m: int, p: int, k: int):
    """Canonical Howell basis of the submodule of (Z/p^k)^m spanned by rows.

    Returns a tuple of row tuples, sorted by pivot column; each pivot is a
    pure power of p and all entries above a pivot are reduced modulo it.
    """
    mod = p ** k
    basis: list = [None] * m
    work = [tuple(x % mod for x in r) for r in rows]
    work = [r for r in work if any(r)]

    while work:
        r = list(work.pop())
        j = 0
        while j < m:
            if r[j] == 0:
                j += 1
                continue
            v = vp(r[j], p)
            b = basis[j]
            if b is None or v < vp(b[j], p):
                u_inv = pow(unit_part(r[j], p, mod), -1, mod)
                r = [x * u_inv % mod for x in r]  # pivot becomes p^v
                basis[j] = r
                if v > 0:
                    ann = p ** (k - v)
                    work.append(tuple(x * ann % mod for x in r))
                if b is not None:
                    work.append(tuple(b))
                r = None
                break
            q = r[j] // b[j]  # exact since p^vp(b[j]) divides r[j]
            r = [(x - q * y) % mod for x, y in zip(r, b)]
        if r is not None and any(r):
            raise AssertionError("howell reduction failed to terminate row")

    # reduce entries above each pivot modulo the pivot value
    cols = [j for j in range(m) if basis[j] is not None]
    for j in cols:
        piv = basis[j][j]
        for i in cols:
            if i < j:
                q = basis[i][j] // piv
                if q:
                    basis[i] = [(x - q * y) % mod
                                for x, y in zip(basis[i], basis[j])]
    return tuple(tuple(basis[j]) for j in cols)


def howell_reduce_vector(vec, basis, m: int, p: int, k: int):
    """Residue of vec after greedy reduction against a Howell basis."""
    mod = p ** k
    r = [x % mod for x in vec]
    pivots = {next(j for j in range(m) if b[j]): b for b in basis}
    for j in range(m):
        if r[j] == 0 or j not in pivots:
            continue
        b = pivots[j]
        if vp(r[j], p) >= vp(b[j], p):
            q = r[j] // b[j]
            r = [(x - q * y) % mod for x, y in zip(r, b)]
    return tuple(r)


def howell_contains(vec, basis, m: int, p: int, k: int) -> bool:
    return not any(howell_reduce_vector(vec, basis, m, p, k))


# ---------------------------------------------------------------------------
# Smith and Hermite forms over Z (small dense matrices)
# ---------------------------------------------------------------------------

def smith_diagonal(rows, m: int):
    """Diagonalise an integer matrix by unimodular row/column operations.

    Returns (diag, V) where V is the accumulated m x m column-operation
    matrix, i.e. A_original @ V has the diagonal entries diag (not
    necessarily a divisibility chain; use invariant_factors for that).
    """
    A = [list(r) for r in rows]
    r = len(A)
    V = [[int(i == j) for j in range(m)] for i in range(m)]
    t = 0
    while t < min(r, m):
        pos, best = None, None
        for i in range(t, r):
            for j in range(t, m):
                a = abs(A[i][j])
                if a and (best is None or a < best):
                    best, pos = a, (i, j)
        if pos is None:
            break
        i0, j0 = pos
        A[t], A[i0] = A[i0], A[t]
        if j0 != t:
            for row in A:
                row[t], row[j0] = row[j0], row[t]
            for row in V:
                row[t], row[j0] = row[j0], row[t]
        while True:
            # clear column t with row operations
            for i in range(r):
                if i != t and A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:  # remainder strictly smaller: swap pivot
                        A[t], A[i] = A[i], A[t]
            if any(A[i][t] for i in range(r) if i != t):
                continue
            # clear row t with column operations (mirrored into V)
            dirty = False
            for j in range(m):
                if j != t and A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        for row in V:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty and not any(A[t][j] for j in range(m) if j != t):
                break
        t += 1
    diag = [abs(A[i][i]) for i in range(min(r, m))]
    return diag, V


def invariant_factors_from_diagonal(diag):
    """Sort a diagonal into a divisibility chain by redistributing primes."""
    nonzero = [d for d in diag if d not in (0, 1)]
    if not nonzero:
        return []
    primes = set()
    for d in nonzero:
        x, q = d, 2
        while q * q <= x:
            if x % q == 0:
                primes.add(q)
                while x % q == 0:
                    x //= q
            q += 1
        if x > 1:
            primes.add(x)
    slots = max(len(nonzero), 1)
    exps = {q: sorted((vp(d, q) if d % q == 0 else 0) for d in nonzero) for q in primes}
    factors = []
    for i in range(slots):
        f = 1
        for q in primes:
            f *= q ** exps[q][i]
        if f > 1:
            factors.append(f)
    return factors


def hnf_rows(rows, m: int):
    """Row-style Hermite normal form (pivots positive, reduced above)."""
    pending = [list(r) for r in rows if any(r)]
    basis = []
    for j in range(m):
        hitting = [r for r in pending if r[j]]
        pending = [r for r in pending if not r[j]]
        while len(hitting) > 1:
            hitting.sort(key=lambda r: abs(r[j]))
            a = hitting[0]
            rest = []
            for r in hitting[1:]:
                q = r[j] // a[j]
                r = [x - q * y for x, y in zip(r, a)]
                if r[j]:
                    rest.append(r)
                elif any(r):
                    pending.append(r)
            hitting = [a] + rest
        if hitting:
            piv = hitting[0]
            if piv[j] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
    # reduce entries above pivots
    pivcols = [next(j for j in range(m) if r[j]) for r in basis]
    for idx in range(len(basis)):
        for later in range(idx + 1, len(basis)):
            j = pivcols[later]
            q = basis[idx][j] // basis[later][j]
            if q:
                basis[idx] = [x - q * y for x, y in zip(basis[idx], basis[later])]
    return basis


def coords_in_hnf(vec, basis, m: int):
    """Coordinates of vec in an upper-triangular full-rank HNF basis."""
    if len(basis) != m:
        raise ArithmeticError("basis is not full rank")
    r = list(vec)
    coords = []
    for i in range(m):
        piv = basis[i][i]
        if r[i] % piv:
            raise ArithmeticError("vector not in lattice")
        q = r[i] // piv
        coords.append(q)
        r = [x - q * y for x, y in zip(r, basis[i])]
    if any(r):
        raise ArithmeticError("vector not in lattice")
    return coords


# ---------------------------------------------------------------------------
# Derived operations over Z/p^k
# ---------------------------------------------------------------------------

def kernel_mod(rows, m: int, p: int, k: int):
    """Howell basis of {x in (Z/p^k)^m : R x = 0} for the given constraint rows."""
    mod = p ** k
    red = howell(rows, m, p, k)
    if not red:
        return howell([tuple(int(i == j) for j in range(m)) for i in range(m)], m, p, k)
    diag, V = smith_diagonal([list(r) for r in red], m)
    gens = []
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        scale = mod // gcd(d, mod)  # d = 0 gives scale 1: free coordinate
        if scale == mod:  # d is a unit: coordinate forced to zero
            continue
        col = tuple(V[row][i] * scale % mod for row in range(m))
        if any(col):
            gens.append(col)
    return howell(gens, m, p, k)


def quotient_structure(top_rows, bottom_rows, m: int, p: int, k: int):
    """Invariant factors (>1) of (span(top) + p^k Z^m) / (span(bottom) + p^k Z^m).

    The spans are taken inside (Z/p^k)^m via integer lifts; the bottom
    module must be contained in the top one.
    """
    mod = p ** k
    scal = [[mod * int(i == j) for j in range(m)] for i in range(m)]
    top = [list(int(x) for x in r) for r in top_rows] + scal
    bottom = [list(int(x) for x in r) for r in bottom_rows] + scal
    basis = hnf_rows(top, m)
    coords = [coords_in_hnf(b, basis, m) for b in bottom]
    diag, _ = smith_diagonal(coords, m)
    factors = invariant_factors_from_diagonal(diag)
    for f in factors:
        if p ** vp(f, p) != f:
            raise AssertionError("quotient is not a p-group")
    return factors


def module_invariants(rows, m: int, p: int, k: int):
    """Invariant factors of the subgroup of (Z/p^k)^m generated by rows."""
    return quotient_structure(rows, [], m, p, k)


def module_order(rows, m: int, p: int, k: int) -> int:
    order = 1
    for f in module_invariants(rows, m, p, k):
        order *= f
    return order


class HowellAccumulator:
    """Incrementally Howell-reduce a stream of vectors over (Z/p^k)^m.

    Keeps at most one basis row per pivot column; insert() reports whether
    the span grew, which lets long scans stop as soon as the span saturates.
    """

    def __init__(self, m: int, p: int, k: int):
        self.m, self.p, self.k = m, p, k
        self.mod = p ** k
        self._basis: list = [None] * m

    def insert(self, vec) -> bool:
        mod, p, k, m = self.mod, self.p, self.k, self.m
        grew = False
        work = [tuple(x % mod for x in vec)]
        while work:
            r = list(work.pop())
            j = 0
            while j < m:
                if r[j] == 0:
                    j += 1
                    continue
                v = vp(r[j], p)
                b = self._basis[j]
                if b is None or v < vp(b[j], p):
                    u_inv = pow(unit_part(r[j], p, mod), -1, mod)
                    r = [x * u_inv % mod for x in r]
                    self._basis[j] = r
                    grew = True
                    if v > 0:
                        ann = p ** (k - v)
                        work.append(tuple(x * ann % mod for x in r))
                    if b is not None:
                        work.append(tuple(b))
                    r = None
                    break
                q = r[j] // b[j]
                r = [(x - q * y) % mod for x, y in zip(r, b)]
        return grew

    def is_full(self) -> bool:
        # pivots are normalised to pure powers of p, so full means all pivots 1
        return all(b is not None and b[j] == 1 for j, b in enumerate(self._basis))

    def rows(self):
        return [tuple(b) for b in self._basis if b is not None]

    def module(self) -> "HowellModule":
        # re-run the canonical pass (above-pivot reduction) via howell()
        return HowellModule(self.p, self.k, self.m,
                            howell(self.rows(), self.m, self.p, self.k))


@dataclass(frozen=True)
class HowellModule:
    """A submodule of (Z/p^k)^m held in canonical Howell form."""

    p: int
    k: int
    m: int
    rows: tuple

    @classmethod
    def span(cls, gens, m: int, p: int, k: int) -> "HowellModule":
        return cls(p, k, m, howell(gens, m, p, k))

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    def contains(self, vec) -> bool:
        return howell_contains(vec, self.rows, self.m, self.p, self.k)

    def order(self) -> int:
        n = 1
        for r in self.rows:
            j = next(i for i in range(self.m) if r[i])
            n *= self.p ** (self.k - vp(r[j], self.p))
        return n

    def invariants(self):
        return module_invariants(self.rows, self.m, self.p, self.k)

    def exponent(self) -> int:
        inv = self.invariants()
        return lcm(*inv) if inv else 1

    def add(self, other: "HowellModule") -> "HowellModule":
        assert (self.p, self.k, self.m) == (other.p, other.k, other.m)
        return HowellModule.span(list(self.rows) + list(other.rows), self.m, self.p, self.k)

    def is_subset_of(self, other: "HowellModule") -> bool:
        return all(other.contains(r) for r in self.rows)

    def reduce(self, k_new: int) -> "HowellModule":
        """Image of the module under reduction (Z/p^k)^m -> (Z/p^k')^m."""
        if k_new > self.k:
            raise ValueError("cannot increase precision")
        return HowellModule.span(self.rows, self.m, self.p, k_new)

    def scale(self, c: int) -> "HowellModule":
        return HowellModule.span([tuple(c * x for x in r) for r in self.rows],
                                 self.m, self.p, self.k)

    def elements(self):
        """Enumerate all elements (use only at desk scale)."""
        mod = self.modulus
        seen = {(0,) * self.m}
        frontier = [(0,) * self.m]
        while frontier:
            new = []
            for v in frontier:
                for r in self.rows:
                    w = tuple((a + b) % mod for a, b in zip(v, r))
                    if w not in seen:
                        seen.add(w)
                        new.append(w)
            frontier = new
        return seen

    @classmethod
    def zero(cls, m: int, p: int, k: int) -> "HowellModule":
        return cls(p, k, m, ())

    @classmethod
    def full(cls, m: int, p: int, k: int) -> "HowellModule":
        return cls.span([tuple(int(i == j) for j in range(m)) for i in range(m)], m, p, k)
