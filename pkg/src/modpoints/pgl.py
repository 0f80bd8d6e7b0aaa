"""The projective line over Z/p^(n+1), PGL2 of that ring, and its permutation lattices."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import factorint

from .arith import least_nonresidue, require_odd_prime, unit_group_generator
from .errors import InfeasibleSize, LevelMismatch

ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class P1Point:
    """Canonical point (t : 1) or (1 : p s) of P^1(Z/p^(n+1))."""

    x: int
    y: int
    p: int
    n: int

    @property
    def modulus(self) -> int:
        return self.p ** (self.n + 1)

    @classmethod
    def normalize(cls, x: int, y: int, p: int, n: int) -> "P1Point":
        N = p ** (n + 1)
        x, y = x % N, y % N
        if y % p:
            return cls(x * pow(y, -1, N) % N, 1, p, n)
        if x % p:
            return cls(1, y * pow(x, -1, N) % N, p, n)
        raise ValueError(f"({x} : {y}) is not a point of P^1 mod {N}")

    def index(self) -> int:
        """Position in :func:`p1_enumerate` order."""
        N = self.modulus
        return self.x if self.y == 1 else N + self.y // self.p

    def __str__(self) -> str:
        return f"({self.x}:{self.y})"


@lru_cache(maxsize=None)
def _p1_points(p: int, n: int) -> tuple[P1Point, ...]:
    N = p ** (n + 1)
    pts = [P1Point(t, 1, p, n) for t in range(N)]
    pts += [P1Point(1, p * s, p, n) for s in range(p**n)]
    return tuple(pts)


def p1_enumerate(p: int, n: int) -> list[P1Point]:
    """All p^(n+1) + p^n points; the (t : 1) first, then the (1 : p s)."""
    require_odd_prime(p)
    if n < 0:
        raise ValueError("level must be non-negative")
    return list(_p1_points(p, n))


def p1_size(p: int, n: int) -> int:
    return p ** (n + 1) + p**n


def fiber_map(pt: P1Point) -> P1Point:
    """Reduce a level-(n+1) point to level n."""
    if pt.n < 1:
        raise LevelMismatch("level-0 points have no lower level")
    return P1Point.normalize(pt.x, pt.y, pt.p, pt.n - 1)


@dataclass(frozen=True)
class PglElement:
    """A class in PGL2(Z/p^(n+1)), scaled so its first unit entry is 1."""

    a: int
    b: int
    c: int
    d: int
    p: int
    n: int

    @property
    def modulus(self) -> int:
        return self.p ** (self.n + 1)

    @classmethod
    def make(cls, a: int, b: int, c: int, d: int, p: int, n: int) -> "PglElement":
        N = p ** (n + 1)
        if (a * d - b * c) % p == 0:
            raise ValueError("determinant is not a unit")
        entries = [a % N, b % N, c % N, d % N]
        lead = next(e for e in entries if e % p)
        inv = pow(lead, -1, N)
        return cls(*(e * inv % N for e in entries), p, n)

    @classmethod
    def identity(cls, p: int, n: int) -> "PglElement":
        return cls(1, 0, 0, 1, p, n)

    def _check(self, other) -> None:
        if (self.p, self.n) != (other.p, other.n):
            raise LevelMismatch(f"level ({self.p},{self.n}) vs ({other.p},{other.n})")

    def __mul__(self, other: "PglElement") -> "PglElement":
        self._check(other)
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return PglElement.make(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.p, self.n)

    def inverse(self) -> "PglElement":
        return PglElement.make(self.d, -self.b, -self.c, self.a, self.p, self.n)

    def __pow__(self, k: int) -> "PglElement":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = PglElement.identity(self.p, self.n), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def order(self) -> int:
        # the exponent of PGL2(Z/p^(n+1)) divides p^n * p * (p^2 - 1)
        exponent = self.p ** (self.n + 1) * (self.p**2 - 1)
        m = exponent
        for q in factorint(exponent):
            while m % q == 0 and (self ** (m // q)).is_identity():
                m //= q
        return m

    def act(self, pt: P1Point) -> P1Point:
        if (self.p, self.n) != (pt.p, pt.n):
            raise LevelMismatch("point and element live at different levels")
        return P1Point.normalize(self.a * pt.x + self.b * pt.y, self.c * pt.x + self.d * pt.y, self.p, self.n)

    def reduce(self, n: int) -> "PglElement":
        if n > self.n or n < 0:
            raise LevelMismatch(f"cannot reduce level {self.n} to {n}")
        return PglElement.make(self.a, self.b, self.c, self.d, self.p, n)

    def permutation(self) -> np.ndarray:
        """``perm[i]`` is the index of g applied to the i-th point."""
        return np.array([self.act(pt).index() for pt in _p1_points(self.p, self.n)], dtype=np.int64)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def group_order(p: int, n: int) -> int:
    return p ** (3 * n + 1) * (p * p - 1)


def enumerate_group(p: int, n: int) -> set[PglElement]:
    """Every element of PGL2(Z/p^(n+1)), by normalizing all unit-determinant matrices."""
    require_odd_prime(p)
    N = p ** (n + 1)
    if N**4 > ENUMERATION_LIMIT:
        raise InfeasibleSize(f"{N**4} matrices exceed the enumeration limit")
    out = set()
    for a, b, c, d in product(range(N), repeat=4):
        if (a * d - b * c) % p:
            out.add(PglElement.make(a, b, c, d, p, n))
    return out


def closure(gens: list[PglElement], limit: int = ENUMERATION_LIMIT) -> set[PglElement]:
    """The subgroup generated by ``gens``, by breadth-first multiplication."""
    if not gens:
        raise ValueError("need at least one generator")
    seen = {PglElement.identity(gens[0].p, gens[0].n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > limit:
            raise InfeasibleSize("subgroup exceeds the enumeration limit")
        frontier = nxt
    return seen


def standard_generators(p: int, n: int) -> list[PglElement]:
    """Generators of the whole group: a diagonal unit generator, T and S."""
    g = unit_group_generator(p, n + 1)
    return [
        PglElement.make(g, 0, 0, 1, p, n),
        PglElement.make(1, 1, 0, 1, p, n),
        PglElement.make(0, 1, -1, 0, p, n),
    ]


class SubgroupKind(enum.Enum):
    FULL = "Full"
    BOREL = "Borel"
    NONSPLIT_CARTAN = "NonSplitCartan"
    SYLOW_P_OF_BOREL = "SylowPOfBorel"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class Subgroup:
    kind: SubgroupKind
    generators: tuple[PglElement, ...]
    order: int
    p: int
    n: int

    def elements(self) -> set[PglElement]:
        return closure(list(self.generators))

    @property
    def is_cyclic_by_construction(self) -> bool:
        return len(self.generators) == 1


@lru_cache(maxsize=None)
def cartan_generator(p: int, n: int) -> PglElement:
    """Least [[x, eps], [1, x]] (x scanned upward) of order p^(n+1) + p^n.

    eps is the least quadratic non-residue, so x + sqrt(eps) runs over the
    unramified quadratic extension.
    """
    eps = least_nonresidue(p)
    target = p ** (n + 1) + p**n
    for x in range(p ** (n + 1)):
        g = PglElement.make(x, eps, 1, x, p, n)
        if g.order() == target:
            return g
    raise AssertionError("no generator of the non-split Cartan found")


def full_group(p: int, n: int) -> Subgroup:
    return Subgroup(SubgroupKind.FULL, tuple(standard_generators(p, n)), group_order(p, n), p, n)


def borel(p: int, n: int) -> Subgroup:
    g = unit_group_generator(p, n + 1)
    gens = (PglElement.make(g, 0, 0, 1, p, n), PglElement.make(1, 1, 0, 1, p, n))
    return Subgroup(SubgroupKind.BOREL, gens, p ** (2 * n + 1) * (p - 1), p, n)


def nonsplit_cartan(p: int, n: int) -> Subgroup:
    return Subgroup(SubgroupKind.NONSPLIT_CARTAN, (cartan_generator(p, n),), p ** (n + 1) + p**n, p, n)


def sylow_of_borel(p: int, n: int) -> Subgroup:
    gens = [PglElement.make(1, 1, 0, 1, p, n)]
    if n >= 1:
        gens.insert(0, PglElement.make(1 + p, 0, 0, 1, p, n))
    return Subgroup(SubgroupKind.SYLOW_P_OF_BOREL, tuple(gens), p ** (2 * n + 1), p, n)


def subgroups(p: int, n: int) -> tuple[Subgroup, Subgroup, Subgroup]:
    """Borel (stabilizer of (1:0)), non-split Cartan and the Sylow-p of the Borel."""
    require_odd_prime(p)
    return borel(p, n), nonsplit_cartan(p, n), sylow_of_borel(p, n)


class LatticeKind(enum.Enum):
    FULL = "Full"
    SUM_ZERO = "SumZero"


@dataclass
class GLattice:
    """A lattice with the action of a subgroup given on its generators.

    ``modulus`` is None for coefficients in Z, otherwise p^m.
    """

    kind: LatticeKind
    p: int
    n: int
    rank: int
    labels: list[str]
    actions: list[np.ndarray]
    group: Subgroup
    modulus: int | None = None
    perms: list[np.ndarray] = field(default_factory=list)

    def reduce(self, modulus: int) -> "GLattice":
        return GLattice(
            self.kind,
            self.p,
            self.n,
            self.rank,
            self.labels,
            [a % modulus for a in self.actions],
            self.group,
            modulus,
            self.perms,
        )


def permutation_matrix(perm: np.ndarray) -> np.ndarray:
    """Matrix with e_i mapped to e_perm[i] (one 1 per column)."""
    k = len(perm)
    m = np.zeros((k, k), dtype=np.int64)
    m[perm, np.arange(k)] = 1
    return m


def sum_zero_matrix(perm: np.ndarray) -> np.ndarray:
    """Action on the basis e_i - e_last, i < last."""
    k = len(perm) - 1
    m = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        if perm[i] != k:
            m[perm[i], i] += 1
        if perm[k] != k:
            m[perm[k], i] -= 1
    return m


def lattice(
    p: int,
    n: int,
    which: LatticeKind | str,
    group: Subgroup,
    modulus: int | None = None,
) -> GLattice:
    """T_(n) (``Full``) or T_n (``SumZero``) with the action of ``group``'s generators."""
    require_odd_prime(p)
    which = LatticeKind(which) if isinstance(which, str) else which
    if (group.p, group.n) != (p, n):
        raise LevelMismatch("subgroup lives at a different level")
    pts = _p1_points(p, n)
    perms = [g.permutation() for g in group.generators]
    if which is LatticeKind.FULL:
        labels = [str(pt) for pt in pts]
        mats = [permutation_matrix(pr) for pr in perms]
    else:
        last = str(pts[-1])
        labels = [f"{pt}-{last}" for pt in pts[:-1]]
        mats = [sum_zero_matrix(pr) for pr in perms]
    lat = GLattice(which, p, n, len(labels), labels, mats, group, None, perms)
    return lat.reduce(modulus) if modulus else lat


def decomposition_dims(p: int, n: int) -> list[int]:
    """Dimensions of the pieces W_-1, W_0, ..., W_n of the rational permutation module.

    W_-1 is the constants, W_0 the sum-zero functions pulled back from level 0,
    and W_i (i >= 1) the functions pulled back from level i whose averages
    over every fibre of the reduction to level i-1 vanish. Each dimension is
    the kernel dimension of the corresponding averaging map.
    """
    from .linalg import rank_q

    require_odd_prime(p)
    dims = [1]
    # level 0: the averaging map to a point
    dims.append(p1_size(p, 0) - rank_q([[1] * p1_size(p, 0)]))
    for i in range(1, n + 1):
        lower = _p1_points(p, i - 1)
        pos = {pt: k for k, pt in enumerate(lower)}
        rows = [[0] * len(_p1_points(p, i)) for _ in lower]
        for col, pt in enumerate(_p1_points(p, i)):
            rows[pos[fiber_map(pt)]][col] = 1
        dims.append(p1_size(p, i) - rank_q(rows))
    return dims
