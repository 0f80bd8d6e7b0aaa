"""Traces of Frobenius, newform coefficients and trace-power identities."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import legendre, require_odd_prime, require_prime
from .curves import CurveModel, Kind, invariants, local_data
from .errors import EqualPrimes


class SquareClass(enum.Enum):
    ZERO = "Zero"
    RESIDUE = "Residue"
    NONRESIDUE = "NonResidue"

    @property
    def is_square(self) -> bool:
        # zero counts as a square
        return self is not SquareClass.NONRESIDUE


def square_class(x: int, p: int) -> SquareClass:
    require_odd_prime(p)
    s = legendre(x, p)
    if s == 0:
        return SquareClass.ZERO
    return SquareClass.RESIDUE if s == 1 else SquareClass.NONRESIDUE


@lru_cache(maxsize=None)
def _count_affine(ainvs: tuple, ell: int) -> int:
    a1, a2, a3, a4, a6 = ainvs
    if ell == 2:
        return sum(
            (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
            for x in range(2)
            for y in range(2)
        )
    b2, b4, b6, _ = (
        a1 * a1 + 4 * a2,
        2 * a4 + a1 * a3,
        a3 * a3 + 4 * a6,
        None,
    )
    chi = _char_table(ell)
    xs = np.arange(ell, dtype=np.int64)
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    v = np.full(ell, 4, dtype=np.int64)
    for c in (b2 % ell, (2 * b4) % ell, b6 % ell):
        v = (v * xs + c) % ell
    return int(ell + chi[v].sum())


@lru_cache(maxsize=64)
def _char_table(ell: int) -> np.ndarray:
    chi = -np.ones(ell, dtype=np.int64)
    chi[0] = 0
    ys = np.arange(1, (ell - 1) // 2 + 1, dtype=np.int64)
    chi[(ys * ys) % ell] = 1
    return chi


@lru_cache(maxsize=None)
def _a_ell_cached(ainvs: tuple, ell: int) -> int:
    model = CurveModel(*ainvs)
    ld = local_data(model, ell)
    if ld.kind.is_good:
        return ell - _count_affine(ainvs, ell)
    if ld.kind is Kind.SPLIT_MULTIPLICATIVE:
        return 1
    if ld.kind is Kind.NONSPLIT_MULTIPLICATIVE:
        return -1
    return 0


def a_ell(model: CurveModel, ell: int) -> int:
    """Trace of Frobenius at ``ell``; ``+1/-1/0`` at split/non-split/additive primes.

    At good primes this is ``ell + 1 - #E(F_ell)`` from a direct point count.
    """
    require_prime(ell)
    return _a_ell_cached(model.ainvs, ell)


def count_points(model: CurveModel, ell: int) -> int:
    """#E(F_ell) including the point at infinity (good ``ell`` only)."""
    require_prime(ell)
    return _count_affine(model.ainvs, ell) + 1


def a_coefficients(model: CurveModel, N: int) -> list[int]:
    """Coefficients a_1..a_N of the newform attached to ``model``.

    Returned list is 1-indexed: ``result[n]`` is a_n and ``result[0]`` is 0.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    disc = invariants(model).disc
    a = [0] * (N + 1)
    a[1] = 1
    spf = list(range(N + 1))
    for i in range(2, int(N**0.5) + 1):
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
    for n in range(2, N + 1):
        ell = spf[n]
        m, k = n, 0
        while m % ell == 0:
            m //= ell
            k += 1
        if m > 1:
            a[n] = a[m] * a[n // m]
            continue
        # n is a prime power ell^k
        if k == 1:
            a[n] = a_ell(model, ell)
        elif disc % ell == 0:
            a[n] = a[ell] * a[n // ell]
        else:
            a[n] = a[ell] * a[n // ell] - ell * a[n // ell // ell]
    return a


@dataclass
class TracePowerSequence:
    a: int
    ell: int
    values: list[int] = field(default_factory=list)


def trace_powers(a: int, ell: int, nmax: int) -> TracePowerSequence:
    t = [2, a]
    for _ in range(2, nmax + 1):
        t.append(a * t[-1] - ell * t[-2])
    return TracePowerSequence(a, ell, t[: nmax + 1])


def trace_power(a: int, ell: int, n: int) -> int:
    """t_n = alpha^n + beta^n for the roots of x^2 - a x + ell."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return trace_powers(a, ell, n).values[n]


@dataclass
class IdentityReport:
    ok: bool
    checked: int
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_trace_identities(a: int, ell: int, nmax: int) -> IdentityReport:
    """Check the doubling, odd-index and 2-adic factorisations of t_n^2 - 4 ell^n.

    (i)   t_{2n} = t_n^2 - 2 ell^n                                  1 <= n <= nmax
    (ii)  t_{2n+1}^2 - 4 ell^{2n+1}
              = (t_1^2 - 4 ell) ((1-2n) ell^n + sum_j ell^{n-j} t_j^2)^2   0 <= n <= nmax
    (iii) t_n^2 - 4 ell^n = (t_m^2 - 4 ell^m) (prod_j t_{2^j m})^2      n = 2^r m <= nmax
    """
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    t = trace_powers(a, ell, 2 * nmax + 1).values
    checked = 0
    for n in range(1, nmax + 1):
        checked += 1
        if t[2 * n] != t[n] ** 2 - 2 * ell**n:
            return IdentityReport(False, checked, ("doubling", n))
    for n in range(0, nmax + 1):
        checked += 1
        s = (1 - 2 * n) * ell**n + sum(ell ** (n - j) * t[j] ** 2 for j in range(1, n + 1))
        if t[2 * n + 1] ** 2 - 4 * ell ** (2 * n + 1) != (t[1] ** 2 - 4 * ell) * s * s:
            return IdentityReport(False, checked, ("odd", n))
    for n in range(1, nmax + 1):
        m, r = n, 0
        while m % 2 == 0:
            m //= 2
            r += 1
        pr = 1
        for j in range(r):
            pr *= t[2**j * m]
        checked += 1
        if t[n] ** 2 - 4 * ell**n != (t[m] ** 2 - 4 * ell**m) * pr * pr:
            return IdentityReport(False, checked, ("two-adic", n))
    return IdentityReport(True, checked)


@dataclass
class EquivalenceReport:
    holds: bool
    base_class: SquareClass
    counterexample: int | None = None
    classes: list[SquareClass] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds


def verify_square_equivalence(
    a: int, ell: int, p: int, nmax: int, *, forward_only: bool = False
) -> EquivalenceReport:
    """Compare the square class of t_1^2 - 4 ell with that of t_n^2 - 4 ell^n mod p.

    With ``forward_only`` only "base is square => level n is square" is
    required; otherwise both directions must hold for every n <= nmax.
    """
    require_prime(ell)
    require_odd_prime(p)
    if ell == p:
        raise EqualPrimes("ell and p must differ")
    t = trace_powers(a, ell, nmax).values
    base = square_class(t[1] ** 2 - 4 * ell, p)
    classes = []
    for n in range(1, nmax + 1):
        cls = square_class(t[n] ** 2 - 4 * ell**n, p)
        classes.append(cls)
        bad = base.is_square and not cls.is_square
        if not forward_only:
            bad = bad or (cls.is_square and not base.is_square)
        if bad:
            return EquivalenceReport(False, base, n, classes)
    return EquivalenceReport(True, base, None, classes)


def hasse_traces(ell: int) -> range:
    """All integers a with a^2 <= 4 ell."""
    from math import isqrt

    r = isqrt(4 * ell)
    return range(-r, r + 1)


def sweep_trace_identities(lmax: int = 200, nmax: int = 10) -> list[tuple[int, int, tuple]]:
    """Counterexamples (a, ell, where) over primes ell < lmax and |a| <= 2 sqrt(ell)."""
    from sympy import primerange

    bad = []
    for ell in primerange(2, lmax):
        for a in hasse_traces(ell):
            rep = verify_trace_identities(a, ell, nmax)
            if not rep.ok:
                bad.append((a, ell, rep.counterexample))
    return bad


def sweep_square_equivalence(
    bound: int = 50, nmax: int = 6, *, forward_only: bool = False
) -> list[tuple[int, int, int, int]]:
    """Counterexamples (a, ell, p, n) over distinct primes ell, p < bound, p odd."""
    from sympy import primerange

    bad = []
    for ell in primerange(2, bound):
        for p in primerange(3, bound):
            if p == ell:
                continue
            for a in hasse_traces(ell):
                rep = verify_square_equivalence(a, ell, p, nmax, forward_only=forward_only)
                if not rep.holds:
                    bad.append((a, ell, p, rep.counterexample))
    return bad
