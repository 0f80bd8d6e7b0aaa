"""Weierstrass invariants and Tate's algorithm over the rationals.

Models are expected to be globally minimal. Nothing here minimizes a model;
a non-minimal input is rejected with :class:`NonMinimalModel`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .arith import legendre, ordp, prime_factors, require_prime
from .errors import NonMinimalModel, SingularModel


class Kind(enum.Enum):
    GOOD_ORDINARY = "GoodOrdinary"
    GOOD_SUPERSINGULAR = "GoodSupersingular"
    SPLIT_MULTIPLICATIVE = "SplitMultiplicative"
    NONSPLIT_MULTIPLICATIVE = "NonSplitMultiplicative"
    ADDITIVE = "Additive"
    GOOD = "Good"  # local data alone does not know a_p mod p

    @property
    def is_good(self) -> bool:
        return self in (Kind.GOOD, Kind.GOOD_ORDINARY, Kind.GOOD_SUPERSINGULAR)

    @property
    def is_multiplicative(self) -> bool:
        return self in (Kind.SPLIT_MULTIPLICATIVE, Kind.NONSPLIT_MULTIPLICATIVE)


@dataclass(frozen=True)
class Kodaira:
    """Kodaira symbol as (family, index); index is only used by I_n and I_n^*."""

    family: str
    index: int = 0

    def __str__(self) -> str:
        if self.family == "I":
            return f"I{self.index}"
        if self.family == "I*":
            return f"I{self.index}*"
        return self.family


@dataclass(frozen=True)
class CurveModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @classmethod
    def from_list(cls, ainvs) -> "CurveModel":
        return cls(*(int(a) for a in ainvs))

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


@dataclass(frozen=True)
class Invariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    j: Fraction


@dataclass(frozen=True)
class LocalData:
    prime: int
    kodaira: Kodaira
    f: int
    c: int
    kind: Kind
    ord_disc: int
    anomalous: bool = False


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _disc(b2, b4, b6, b8):
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def invariants(model: CurveModel) -> Invariants:
    """b- and c-invariants, discriminant and j-invariant of ``model``."""
    b2, b4, b6, b8 = _b_invariants(*model.ainvs)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = _disc(b2, b4, b6, b8)
    if disc == 0:
        raise SingularModel(f"model {model} has zero discriminant")
    # the second formulary path must agree with the first
    assert 1728 * disc == c4**3 - c6**2
    return Invariants(b2, b4, b6, b8, c4, c6, disc, Fraction(c4**3, disc))


def _rst(a, r, s, t):
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _nroots(coeffs, p) -> int:
    """Number of roots in F_p of the polynomial with ``coeffs`` (high degree first)."""
    count = 0
    for x in range(p):
        v = 0
        for c in coeffs:
            v = (v * x + c) % p
        count += v == 0
    return count


def _quad_has_root(a, b, c, p) -> bool:
    """Whether a*T^2 + b*T + c has a root mod p (a is a unit mod p)."""
    if p == 2:
        return _nroots((a, b, c), 2) > 0
    return legendre(b * b - 4 * a * c, p) >= 0


def _require_minimal_at(inv: Invariants, ell: int) -> None:
    # decisive only for ell >= 5; at 2 and 3 Tate's algorithm itself decides
    if ell >= 5 and ordp(inv.c4, ell) >= 4 and ordp(inv.disc, ell) >= 12:
        raise NonMinimalModel(f"model is not minimal at {ell}")


def is_globally_minimal(model: CurveModel) -> bool:
    try:
        for ell in prime_factors(invariants(model).disc):
            local_data(model, ell)
    except NonMinimalModel:
        return False
    return True


def local_data(model: CurveModel, ell: int) -> LocalData:
    """Kodaira symbol, conductor exponent and Tamagawa number at ``ell``.

    Follows the usual formulation of Tate's algorithm (Cohen, Algorithm
    7.5.1) without the rescaling loop. For ``ell > 3`` the split test on
    multiplicative fibres uses the residue class of ``-c6``; for 2 and 3 it
    checks whether the tangent slopes at the node are rational.
    """
    p = require_prime(ell)
    inv = invariants(model)
    _require_minimal_at(inv, p)
    vd = ordp(inv.disc, p)
    if vd == 0:
        return LocalData(p, Kodaira("I", 0), 0, 1, Kind.GOOD, 0)

    def div(x, k=1):
        return x % p**k == 0

    a = model.ainvs
    a1, a2, a3, a4, a6 = a
    b2, b4, b6, b8 = inv.b2, inv.b4, inv.b6, inv.b8

    # move the singular point of the reduction to (0, 0)
    if p == 2:
        if div(b2):
            r = a4 % 2
            t = (r * (1 + a2 + a4) + a6) % 2
        else:
            r = a3 % 2
            t = (r + a4) % 2
    elif p == 3:
        r = (-b6) % 3 if div(b2) else (-b2 * b4) % 3
        t = (a1 * r + a3) % 3
    else:
        if div(inv.c4):
            r = (-b2 * pow(12, -1, p)) % p
        else:
            r = (-(inv.c6 + b2 * inv.c4) * pow(12 * inv.c4, -1, p)) % p
        t = (-(a1 * r + a3) * pow(2, -1, p)) % p
    a = _rst(a, r, 0, t)
    a1, a2, a3, a4, a6 = a
    b2, b4, b6, b8 = _b_invariants(*a)

    if not div(inv.c4):
        if p > 3:
            split = legendre(-inv.c6, p) == 1
        else:
            split = _quad_has_root(1, a1, -a2, p)
        if split:
            return LocalData(p, Kodaira("I", vd), 1, vd, Kind.SPLIT_MULTIPLICATIVE, vd)
        c = 2 if vd % 2 == 0 else 1
        return LocalData(p, Kodaira("I", vd), 1, c, Kind.NONSPLIT_MULTIPLICATIVE, vd)

    def additive(sym, f, c):
        return LocalData(p, sym, f, c, Kind.ADDITIVE, vd)

    if not div(a6, 2):
        return additive(Kodaira("II"), vd, 1)
    if not div(b8, 3):
        return additive(Kodaira("III"), vd - 1, 2)
    if not div(b6, 3):
        c = 3 if _quad_has_root(1, a3 // p, -(a6 // p**2), p) else 1
        return additive(Kodaira("IV"), vd - 2, c)

    # now arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
    if p == 2:
        s = a2 % 2
        t = 2 * ((a6 // 4) % 2)
    else:
        # deliberately unreduced: a3 + 2t must vanish mod p^2
        h = (p + 1) // 2
        s = -a1 * h
        t = -a3 * h
    a = _rst(a, 0, s, t)
    a1, a2, a3, a4, a6 = a

    b, c, d = a2 // p, a4 // p**2, a6 // p**3
    w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
    x = 3 * c - b * b
    if not div(w):
        return additive(Kodaira("I*", 0), vd - 4, 1 + _nroots((1, b, c, d), p))

    if not div(x):
        # double root: translate it to T = 0, then peel off powers of p
        if p == 2:
            r = c
        elif p == 3:
            r = b * c
        else:
            r = (b * c - 9 * d) * pow(2 * x, -1, p)
        a = _rst(a, p * (r % p), 0, 0)
        m, mx, my = 1, p * p, p * p
        while True:
            a1, a2, a3, a4, a6 = a
            xa2, xa3, xa4, xa6 = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
            if not div(xa3 * xa3 + 4 * xa6):
                cp = 4 if _quad_has_root(1, xa3, -xa6, p) else 2
                break
            t = my * ((xa6 if p == 2 else -xa3 * pow(2, -1, p)) % p)
            a = _rst(a, 0, 0, t)
            my *= p
            m += 1
            a1, a2, a3, a4, a6 = a
            xa2, xa3, xa4, xa6 = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
            if not div(xa4 * xa4 - 4 * xa2 * xa6):
                cp = 4 if _quad_has_root(xa2, xa4, xa6, p) else 2
                break
            if p == 2:
                r = mx * ((xa6 * xa2) % 2)
            else:
                r = mx * ((-xa4 * pow(2 * xa2, -1, p)) % p)
            a = _rst(a, r, 0, 0)
            mx *= p
            m += 1
        return additive(Kodaira("I*", m), vd - m - 4, cp)

    # triple root: move it to T = 0
    r = -d if p == 3 else -b * pow(3, -1, p)
    a = _rst(a, p * (r % p), 0, 0)
    a1, a2, a3, a4, a6 = a
    x3, x6 = a3 // p**2, a6 // p**4
    if not div(x3 * x3 + 4 * x6):
        cp = 3 if _quad_has_root(1, x3, -x6, p) else 1
        return additive(Kodaira("IV*"), vd - 6, cp)
    t = p * p * ((x6 if p == 2 else -x3 * pow(2, -1, p)) % p)
    a = _rst(a, 0, 0, t)
    a1, a2, a3, a4, a6 = a
    if not div(a4, 4):
        return additive(Kodaira("III*"), vd - 7, 2)
    if not div(a6, 6):
        return additive(Kodaira("II*"), vd - 8, 1)
    raise NonMinimalModel(f"model {model} is not minimal at {p}")


def bad_primes(model: CurveModel) -> list[int]:
    return prime_factors(invariants(model).disc)


def conductor(model: CurveModel) -> int:
    return prod(ell ** local_data(model, ell).f for ell in bad_primes(model))


def reduction_class(model: CurveModel, p: int) -> LocalData:
    """Local data at ``p`` refined by ordinary/supersingular and anomaly.

    For good reduction the refinement reads ``a_p`` mod ``p``: ordinary iff
    ``a_p`` is nonzero mod ``p``, anomalous iff ``a_p`` is 1 mod ``p``.
    """
    from .hecke import a_ell

    ld = local_data(model, p)
    if not ld.kind.is_good:
        return ld
    ap = a_ell(model, p)
    kind = Kind.GOOD_SUPERSINGULAR if ap % p == 0 else Kind.GOOD_ORDINARY
    return LocalData(p, ld.kodaira, ld.f, ld.c, kind, ld.ord_disc, anomalous=(ap - 1) % p == 0)
