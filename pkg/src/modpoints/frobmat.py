"""Integral Frobenius matrices and their Borel membership mod p^(n+1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import factorint

from .arith import require_odd_prime, strip
from .errors import BadPrime, NonIntegralEntry, NonNegativeDiscriminant
from .pgl import P1Point, p1_enumerate


@dataclass(frozen=True)
class FrobeniusData:
    a: int
    q: int
    u: int
    b: int
    delta: int


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def mod(self, m: int) -> "IntMatrix2":
        return IntMatrix2(self.a % m, self.b % m, self.c % m, self.d % m)


def fundamental_part(D: int) -> tuple[int, int]:
    """Split a negative discriminant as ``D = u * b**2`` with ``u`` fundamental."""
    if D >= 0:
        raise NonNegativeDiscriminant(f"{D} is not negative")
    u, b = -1, 1
    for ell, e in factorint(-D).items():
        u *= ell ** (e % 2)
        b *= ell ** (e // 2)
    if u % 4 != 1:
        # squarefree part is 2 or 3 mod 4: the field discriminant is 4u
        if b % 2:
            raise NonNegativeDiscriminant(f"{D} is not a discriminant")
        u, b = 4 * u, b // 2
    return u, b


def disc_decomposition(a: int, q: int) -> FrobeniusData:
    D = a * a - 4 * q
    if D >= 0:
        raise NonNegativeDiscriminant(f"a^2 - 4q = {D} is not negative")
    u, b = fundamental_part(D)
    assert u * b * b == D
    return FrobeniusData(a, q, u, b, u % 4)


def frobenius_matrix(a: int, q: int) -> IntMatrix2:
    fd = disc_decomposition(a, q)
    b, u, dl = fd.b, fd.u, fd.delta
    nums = [(a + b * dl, 2), (b * (u - dl), 4), (a - b * dl, 2)]
    if any(n % d for n, d in nums):
        raise NonIntegralEntry(f"(a, q) = ({a}, {q}) gives a non-integral matrix")
    M = IntMatrix2((a + b * dl) // 2, b, b * (u - dl) // 4, (a - b * dl) // 2)
    if M.trace != a or M.det != q:
        raise NonIntegralEntry("trace/determinant mismatch")
    return M


def _act(M: IntMatrix2, pt: P1Point) -> P1Point:
    return P1Point.normalize(M.a * pt.x + M.b * pt.y, M.c * pt.x + M.d * pt.y, pt.p, pt.n)


def borel_fixed_point(M: IntMatrix2, p: int, n: int) -> P1Point | None:
    """First point of P^1(Z/p^(n+1)) fixed by ``M``, or None.

    A fixed point exists exactly when ``M`` lies in a Borel subgroup.
    """
    require_odd_prime(p)
    if M.det % p == 0:
        raise BadPrime(f"{p} divides det(M) = {M.det}")
    N = p ** (n + 1)
    a, b, c, d = (x % N for x in (M.a, M.b, M.c, M.d))
    # (t : 1) is fixed iff ct + d is a unit and at + b = t (ct + d)
    t = np.arange(N, dtype=np.int64)
    lam = (c * t + d) % N
    hit = np.flatnonzero((lam % p != 0) & ((a * t + b - t * lam) % N == 0))
    if hit.size:
        return P1Point(int(hit[0]), 1, p, n)
    # (1 : ps) is fixed iff a + b ps is a unit and c + d ps = ps (a + b ps)
    y = p * np.arange(p**n, dtype=np.int64)
    lam = (a + b * y) % N
    hit = np.flatnonzero((lam % p != 0) & ((c + d * y - y * lam) % N == 0))
    if hit.size:
        return P1Point(1, int(y[hit[0]]), p, n)
    return None


def borel_fixed_point_naive(M: IntMatrix2, p: int, n: int) -> P1Point | None:
    """Same as :func:`borel_fixed_point`, acting on each point in turn."""
    require_odd_prime(p)
    if M.det % p == 0:
        raise BadPrime(f"{p} divides det(M) = {M.det}")
    for pt in p1_enumerate(p, n):
        if _act(M, pt) == pt:
            return pt
    return None


def conjugacy_form(M: IntMatrix2, p: int, n: int, fd: FrobeniusData | None = None) -> IntMatrix2:
    """Normal form of ``M`` mod p^(n+1) used to decide Borel membership.

    Coprime case: the companion matrix [[0, 1], [-q, a]]. When p^j exactly
    divides b: [[a/2, p^j], [p^j t^2 u/4, a/2]] with b = p^j t.
    """
    require_odd_prime(p)
    if M.det % p == 0:
        raise BadPrime(f"{p} divides det(M) = {M.det}")
    mod = p ** (n + 1)
    a, q = M.trace, M.det
    if fd is None:
        fd = disc_decomposition(a, q)
    j, t = strip(fd.b, p)
    if j == 0:
        return IntMatrix2(0, 1, -q, a).mod(mod)
    half = pow(2, -1, mod)
    quarter = pow(4, -1, mod)
    pj = p**j
    return IntMatrix2(a * half, pj, pj * t * t * fd.u * quarter, a * half).mod(mod)


def find_conjugator(M: IntMatrix2, F: IntMatrix2, mod: int, limit: int = 40) -> IntMatrix2 | None:
    """Exhaustive search for X in GL2(Z/mod) with X M = F X (so X M X^-1 = F)."""
    if mod > limit:
        raise ValueError(f"modulus {mod} too large for exhaustive search")
    r = np.arange(mod, dtype=np.int64)
    x, y, z, w = (g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij"))
    m = M.mod(mod)
    f = F.mod(mod)
    # X = [[x, y], [z, w]]
    ok = ((x * m.a + y * m.c) - (f.a * x + f.b * z)) % mod == 0
    ok &= ((x * m.b + y * m.d) - (f.a * y + f.b * w)) % mod == 0
    ok &= ((z * m.a + w * m.c) - (f.c * x + f.d * z)) % mod == 0
    ok &= ((z * m.b + w * m.d) - (f.c * y + f.d * w)) % mod == 0
    det = (x * w - y * z) % mod
    p_factors = list(factorint(mod))
    for ell in p_factors:
        ok &= det % ell != 0
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return None
    i = idx[0]
    return IntMatrix2(int(x[i]), int(y[i]), int(z[i]), int(w[i]))


@dataclass
class LemmaSweep:
    checked: int
    identity_failures: list[tuple]
    implication_failures: list[tuple]
    converse_failures: list[tuple]


def sweep_lemma_square(lmax: int = 50, pmax: int = 30, levels=(0, 1, 2)) -> LemmaSweep:
    """Trace/det identities, square => fixed point, and the level-0 converse.

    Runs over primes ell < lmax, every a with a^2 < 4 ell, odd primes
    p < pmax other than ell. "Square" includes zero.
    """
    from sympy import primerange

    from .hecke import square_class

    out = LemmaSweep(0, [], [], [])
    for ell in primerange(2, lmax):
        for a in range(-(2 * ell), 2 * ell + 1):
            if a * a >= 4 * ell:
                continue
            M = frobenius_matrix(a, ell)
            if M.trace != a or M.det != ell:
                out.identity_failures.append((a, ell))
            for p in primerange(3, pmax):
                if p == ell:
                    continue
                out.checked += 1
                sq = square_class(a * a - 4 * ell, p).is_square
                for n in levels:
                    pt = borel_fixed_point(M, p, n)
                    if sq and pt is None:
                        out.implication_failures.append((a, ell, p, n))
                    if n == 0 and pt is not None and not sq:
                        out.converse_failures.append((a, ell, p))
    return out
