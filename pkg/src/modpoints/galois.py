"""One-sided certification of surjective mod-p images, and isogeny checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from sympy import divisors, primerange

from .arith import legendre, require_odd_prime
from .curves import CurveModel, conductor, invariants
from .errors import EmptyDegreeList
from .hecke import a_ell


class Status(enum.Enum):
    SURJECTIVE = "Surjective"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Witness:
    ell: int
    a_ell: int
    tag: str  # "nonsplit", "split" or "exceptional"


@dataclass(frozen=True)
class SurjectivityVerdict:
    status: Status
    witnesses: tuple[Witness, ...] = field(default_factory=tuple)
    bound: int = 0

    @property
    def surjective(self) -> bool:
        return self.status is Status.SURJECTIVE


def _classify(a: int, ell: int, p: int) -> set[str]:
    tags = set()
    if a % p == 0:
        return tags
    d = legendre(a * a - 4 * ell, p)
    if d == -1:
        tags.add("nonsplit")
    elif d == 1:
        tags.add("split")
    u = a * a * pow(ell, -1, p) % p
    if u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % p:
        tags.add("exceptional")
    return tags


def surjectivity(model: CurveModel, p: int, Lmax: int = 1000) -> SurjectivityVerdict:
    """Certify that the mod-``p`` image is all of GL2(F_p), or abstain.

    Three Frobenius classes are looked for among good ``ell <= Lmax``:
    a non-square discriminant with nonzero trace (kills Borel and the split
    Cartan normaliser), a nonzero square discriminant with nonzero trace
    (kills the non-split Cartan normaliser), and a projective ratio
    ``a^2/ell`` outside {0, 1, 2, 4} and the roots of ``u^2 - 3u + 1``
    (kills the exceptional images). The smallest ``ell`` of each class is
    recorded. For ``p = 3`` the third class cannot occur, so the answer is
    always Inconclusive.
    """
    require_odd_prime(p)
    if Lmax < 10:
        raise ValueError("Lmax must be at least 10")
    return _surjectivity(model.ainvs, p, Lmax)


@lru_cache(maxsize=None)
def _surjectivity(ainvs: tuple, p: int, Lmax: int) -> SurjectivityVerdict:
    model = CurveModel(*ainvs)
    N = conductor(model)
    found: dict[str, Witness] = {}
    for ell in primerange(2, Lmax + 1):
        if (p * N) % ell == 0:
            continue
        a = a_ell(model, ell)
        for tag in _classify(a, ell, p):
            found.setdefault(tag, Witness(ell, a, tag))
        if len(found) == 3:
            break
    ws = tuple(sorted(found.values(), key=lambda w: (w.tag, w.ell)))
    status = Status.SURJECTIVE if len(found) == 3 else Status.INCONCLUSIVE
    return SurjectivityVerdict(status, ws, Lmax)


def has_two_isogeny(model: CurveModel) -> bool:
    """Rational 2-torsion, i.e. a rational root of 4x^3 + b2 x^2 + 2 b4 x + b6."""
    inv = invariants(model)
    # substitute x = X/4 and clear denominators: X^3 + b2 X^2 + 8 b4 X + 16 b6
    coeffs = [1, inv.b2, 8 * inv.b4, 16 * inv.b6]
    return _has_integer_root(coeffs)


def _has_integer_root(coeffs: list[int]) -> bool:
    # monic integer cubic: rational roots are integers dividing the constant term
    const = coeffs[-1]
    if const == 0:
        return True
    for d in divisors(abs(const)):
        for x in (d, -d):
            v = 0
            for c in coeffs:
                v = v * x + c
            if v == 0:
                return True
    return False


def isogeny_coprimality(degrees: list[int], N_E: int) -> bool:
    if not degrees:
        raise EmptyDegreeList("isogeny degree list is empty")
    return all(gcd(d, N_E) == 1 for d in degrees)
