"""Small integer helpers used across the package."""

from __future__ import annotations

from fractions import Fraction

from sympy import factorint, isprime

from .errors import EvenPrime, NotPrime


def require_prime(ell: int) -> int:
    if not isinstance(ell, int) or ell < 2 or not isprime(ell):
        raise NotPrime(f"{ell} is not prime")
    return ell


def require_odd_prime(p: int) -> int:
    require_prime(p)
    if p == 2:
        raise EvenPrime("p must be an odd prime")
    return p


def ordp(x: int | Fraction, p: int) -> int | float:
    """p-adic valuation of a nonzero rational; ``inf`` for zero."""
    if x == 0:
        return float("inf")
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def strip(x: int, p: int) -> tuple[int, int]:
    """Write a nonzero integer as ``p**k * t`` with ``p`` not dividing ``t``."""
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def prime_factors(n: int) -> list[int]:
    return sorted(factorint(abs(n)))


def factorization(n: int) -> list[tuple[int, int]]:
    return sorted(factorint(n).items())


def is_square_int(n: int) -> bool:
    if n < 0:
        return False
    from math import isqrt

    r = isqrt(n)
    return r * r == n


def legendre(x: int, p: int) -> int:
    """Legendre symbol for an odd prime ``p`` via Euler's criterion."""
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def least_nonresidue(p: int) -> int:
    e = 2
    while legendre(e, p) != -1:
        e += 1
    return e


def unit_group_generator(p: int, k: int) -> int:
    """Least generator of the cyclic group (Z/p^k)^* for odd ``p``."""
    mod = p**k
    phi = p ** (k - 1) * (p - 1)
    qs = prime_factors(phi)
    g = 2
    while True:
        if g % p and all(pow(g, phi // q, mod) != 1 for q in qs):
            return g
        g += 1
