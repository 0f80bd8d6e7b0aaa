import random

import numpy as np
import pytest

from modpoints.cohom import fixed_rank
from modpoints.errors import LevelMismatch
from modpoints.pgl import (
    LatticeKind,
    P1Point,
    PglElement,
    borel,
    closure,
    decomposition_dims,
    enumerate_group,
    fiber_map,
    full_group,
    group_order,
    lattice,
    nonsplit_cartan,
    p1_enumerate,
    subgroups,
    sylow_of_borel,
)

LEVELS = [(3, 0), (3, 1), (5, 0)]


@pytest.mark.parametrize("p,n,count", [(3, 0, 4), (3, 1, 12), (5, 1, 30), (3, 2, 36)])
def test_p1_counts(p, n, count):
    pts = p1_enumerate(p, n)
    assert len(pts) == len(set(pts)) == count
    assert [pt.index() for pt in pts] == list(range(count))


@pytest.mark.parametrize("p,n", LEVELS)
def test_group_orders_by_enumeration(p, n):
    G = enumerate_group(p, n)
    assert len(G) == group_order(p, n) == p ** (3 * n + 1) * (p * p - 1)
    assert len(closure(list(full_group(p, n).generators))) == len(G)
    B, A, S = subgroups(p, n)
    for H in (B, A, S):
        assert len(H.elements()) == H.order
    assert B.order == p ** (2 * n + 1) * (p - 1)
    assert A.order == p ** (n + 1) + p**n
    assert S.order == p ** (2 * n + 1)
    one_zero = P1Point(1, 0, p, n)
    stab = {g for g in G if g.act(one_zero) == one_zero}
    assert stab == B.elements()
    assert S.elements() <= B.elements()


def test_small_examples():
    assert borel(3, 0).order == 6 and nonsplit_cartan(3, 0).order == 4
    assert borel(5, 0).order == 20 and nonsplit_cartan(5, 0).order == 6
    A = nonsplit_cartan(3, 1)
    assert A.order == 12 and A.generators[0].order() == 12
    assert sylow_of_borel(3, 1).order == 27


def test_element_basics():
    e = PglElement.identity(3, 1)
    assert e.order() == 1
    T = PglElement.make(1, 1, 0, 1, 3, 0)
    assert T.order() == 3 and PglElement.make(1, 1, 0, 1, 3, 1).order() == 9
    S = PglElement.make(0, 1, -1, 0, 3, 0)
    assert S.act(P1Point(1, 0, 3, 0)) == P1Point(0, 1, 3, 0)
    g = PglElement.make(2, 4, 6, 5, 3, 1)
    assert PglElement.make(g.a, g.b, g.c, g.d, 3, 1) == g
    assert g * g.inverse() == PglElement.identity(3, 1)
    # scalars are trivial
    assert PglElement.make(2, 0, 0, 2, 5, 1).is_identity()
    with pytest.raises(LevelMismatch):
        g * PglElement.identity(3, 0)
    with pytest.raises(LevelMismatch):
        g.act(P1Point(0, 1, 3, 0))


@pytest.mark.parametrize("p,n", LEVELS)
def test_actions_are_bijections(p, n):
    for g in full_group(p, n).generators:
        perm = g.permutation()
        assert sorted(perm.tolist()) == list(range(len(perm)))


@pytest.mark.parametrize("p,n", [(3, 0), (3, 1), (5, 0), (5, 1)])
def test_cartan_simply_transitive(p, n):
    g = nonsplit_cartan(p, n).generators[0]
    perm = g.permutation()
    # a single cycle through every point
    seen, i = [], 0
    while True:
        seen.append(i)
        i = int(perm[i])
        if i == 0:
            break
    assert len(seen) == len(perm)


@pytest.mark.parametrize("p,n", [(3, 0), (3, 1), (5, 0), (5, 1)])
def test_sum_zero_has_no_cartan_invariants(p, n):
    A = nonsplit_cartan(p, n)
    assert fixed_rank(lattice(p, n, LatticeKind.SUM_ZERO, A)) == 0
    assert fixed_rank(lattice(p, n, LatticeKind.FULL, A)) == 1


def test_fibers():
    for p in (3, 5):
        fibers = {}
        for pt in p1_enumerate(p, 1):
            fibers.setdefault(fiber_map(pt), []).append(pt)
        assert set(fibers) == set(p1_enumerate(p, 0))
        assert all(len(v) == p for v in fibers.values())
    assert fiber_map(P1Point(1, 0, 3, 1)) == P1Point(1, 0, 3, 0)
    with pytest.raises(LevelMismatch):
        fiber_map(P1Point(1, 0, 3, 0))


def test_fiber_equivariance():
    rng = random.Random(7)
    p, n = 3, 2
    N = p ** (n + 1)
    pts = p1_enumerate(p, n)
    for _ in range(100):
        while True:
            a, b, c, d = (rng.randrange(N) for _ in range(4))
            if (a * d - b * c) % p:
                break
        g = PglElement.make(a, b, c, d, p, n)
        x = rng.choice(pts)
        assert g.reduce(n - 1).act(fiber_map(x)) == fiber_map(g.act(x))


def test_lattices():
    G = full_group(3, 0)
    full = lattice(3, 0, "Full", G)
    assert full.rank == 4
    for m in full.actions:
        assert set(np.unique(m)) <= {0, 1} and (m.sum(axis=0) == 1).all()
    assert lattice(3, 1, "SumZero", full_group(3, 1)).rank == 11
    red = lattice(3, 1, "SumZero", full_group(3, 1), modulus=9)
    assert red.modulus == 9 and all((m >= 0).all() and (m < 9).all() for m in red.actions)
    # action matrices are invertible and compose like the group
    g, h = G.generators[0], G.generators[1]
    gh = lattice(3, 0, "Full", type(G)(G.kind, (g * h,), 0, 3, 0)).actions[0]
    assert (full.actions[0] @ full.actions[1] == gh).all()


@pytest.mark.parametrize("p,n,dims", [(3, 0, [1, 3]), (3, 1, [1, 3, 8]), (5, 1, [1, 5, 24]), (3, 2, [1, 3, 8, 24])])
def test_decomposition_dims(p, n, dims):
    got = decomposition_dims(p, n)
    assert got == dims
    assert sum(got) == p ** (n + 1) + p**n
