"""Exact arithmetic over Z/NZ and finite-precision p-adic utilities.

Valuations of residues mod l^k are capped at k (the residue 0 has
valuation exactly k, meaning "at least k"); all series are evaluated with
exact integer bookkeeping, never floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import sympy

from .errors import ConvergenceDomainError, ModulusMismatchError, OverflowGuardError
from .linalg import vp

MODULUS_CAP = 2 ** 63


@dataclass(frozen=True)
class Modulus:
    """A positive integer together with its prime-power factorisation."""

    value: int
    factorization: tuple  # ((prime, exponent), ...) sorted by prime

    @classmethod
    def of(cls, value: int) -> "Modulus":
        if value <= 0:
            raise ValueError("modulus must be positive")
        if value > MODULUS_CAP:
            raise OverflowGuardError(f"modulus {value} exceeds 2^63")
        fac = tuple(sorted(sympy.factorint(value).items()))
        return cls(value, fac)

    def prime_powers(self):
        return tuple(p ** e for p, e in self.factorization)

    def is_prime_power(self) -> bool:
        return len(self.factorization) == 1

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: Modulus

    @classmethod
    def of(cls, value: int, modulus) -> "Residue":
        mod = modulus if isinstance(modulus, Modulus) else Modulus.of(modulus)
        return cls(value % mod.value, mod)

    def lift(self) -> int:
        return self.value


def vl(x: int, ell: int, k: int) -> int:
    """l-adic valuation of x mod l^k; returns k for x = 0 (the 'full' marker)."""
    x %= ell ** k
    if x == 0:
        return k
    return vp(x, ell)


def residue_valuation(x: Residue) -> int:
    """Valuation of a Residue whose modulus is a prime power."""
    if not x.modulus.is_prime_power():
        raise ModulusMismatchError("valuation needs a prime-power modulus")
    (ell, k), = x.modulus.factorization
    return vl(x.value, ell, k)


def teichmuller(a: int, ell: int, k: int) -> int:
    """The unique x mod l^k with x^l = x and x = a mod l (a a unit).

    Computed by iterating x -> x^l, which gains one digit of stability per
    step and reaches the fixpoint after at most k iterations.
    """
    if a % ell == 0:
        raise ConvergenceDomainError("Teichmuller lift needs a unit mod l")
    mod = ell ** k
    x = a % mod
    for _ in range(k + 1):
        y = pow(x, ell, mod)
        if y == x:
            return x
        x = y
    raise AssertionError("Teichmuller iteration did not stabilise")


def _check_log_domain(x: int, p: int, k: int):
    if p == 2:
        if x % 4 != 1:
            raise ConvergenceDomainError("2-adic log needs x = 1 mod 4")
    elif x % p != 1:
        raise ConvergenceDomainError("p-adic log needs x = 1 mod p")


def padic_log(x: int, p: int, k: int) -> int:
    """Truncated p-adic logarithm, exact mod p^k.

    log(1+a) = sum (-1)^(i+1) a^i / i; a term with i*v_p(a) - v_p(i) >= k
    vanishes mod p^k, so only finitely many terms are summed.  Each term is
    evaluated by exact integer division of a^i by the p-part of i.
    """
    mod = p ** k
    x %= mod
    _check_log_domain(x, p, k)
    a = (x - 1) % mod
    if a == 0:
        return 0
    v = vp(a, p)
    total = 0
    i = 1
    while True:
        # v_p(term_i) >= i*v - floor(log_p i), and that bound is non-decreasing
        lg = 0
        t = i
        while t >= p:
            t //= p
            lg += 1
        if i * v - lg >= k:
            break
        e = vp(i, p) if i % p == 0 else 0
        if i * v - e < k:
            num = pow(a, i, mod * p ** e)
            term = (num // p ** e) * pow(i // p ** e, -1, mod) % mod
            total = (total + term if i % 2 else total - term) % mod
        i += 1
    return total % mod


def padic_exp(y: int, p: int, k: int) -> int:
    """Truncated p-adic exponential, exact mod p^k.

    Requires v_p(y) >= 1 (>= 2 for p = 2) so that v_p(y^i / i!) grows.
    """
    mod = p ** k
    y %= mod
    if y == 0:
        return 1
    v = vp(y, p)
    if v < (2 if p == 2 else 1):
        raise ConvergenceDomainError("p-adic exp needs v_p(y) >= 1 (2 if p=2)")
    total = 1
    i = 1
    fact_val = 0  # v_p(i!)
    while True:
        # stop once the lower bound i*v - (i-1)/(p-1) <= v_p(term_i) reaches k
        if i * (v * (p - 1) - 1) >= k * (p - 1) - 1:
            break
        fact_val += vp(i, p) if i % p == 0 else 0
        if i * v - fact_val < k:
            num = pow(y, i, mod * p ** fact_val)
            unit = 1
            for j in range(2, i + 1):
                while j % p == 0:
                    j //= p
                unit = unit * j % mod
            term = (num // p ** fact_val) * pow(unit, -1, mod) % mod
            total = (total + term) % mod
        i += 1
    return total % mod


def mth_root_in_unit_group(y: int, m_exp: int, n: int, p: int, k: int) -> int:
    """x in U_n with x^M = y mod p^k, for y in U_(n + v_p(M)).

    Realised as exp(log(y) / M), with the division exact on the (divisible)
    logarithm: Z_p-units congruent to 1 mod p^(n+v_p(M)) are M-th powers of
    units congruent to 1 mod p^n.
    """
    mod = p ** k
    y %= mod
    if n < (2 if p == 2 else 1):
        raise ConvergenceDomainError("level n too small for this prime")
    v = vp(m_exp, p) if m_exp % p == 0 else 0
    if (y - 1) % p ** min(k, n + v) != 0:
        raise ConvergenceDomainError(
            f"y must be 1 mod p^{n + v} to admit an M-th root in U_{n}")
    if y == 1:
        return 1
    ly = padic_log(y, p, k)
    if ly % p ** v != 0:
        raise ConvergenceDomainError("logarithm not divisible by the p-part of M")
    u = m_exp // p ** v
    quotient = (ly // p ** v) * pow(u, -1, mod) % mod
    x = padic_exp(quotient, p, k)
    if pow(x, m_exp, mod) != y:
        raise AssertionError("root extraction failed verification")
    return x


def crt_split(x: int, modulus: Modulus):
    """Residues of x modulo each prime-power factor of the modulus."""
    x %= modulus.value
    return [(p ** e, x % p ** e) for p, e in modulus.factorization]


def crt_join(parts) -> tuple[int, int]:
    """(value, modulus) combining pairwise-coprime (prime_power, residue) parts."""
    n = 1
    x = 0
    for q, r in parts:
        if gcd(n, q) != 1:
            raise ModulusMismatchError("crt_join needs pairwise coprime moduli")
        # x' = x mod n, r mod q
        inv = pow(n % q, -1, q) if q > 1 else 0
        x = x + n * ((r - x) * inv % q)
        n *= q
    return x % n, n
