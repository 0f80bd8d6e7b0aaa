import itertools
import random

import numpy as np
import pytest

from modpoints.errors import InfeasibleSize
from modpoints.pgl import LatticeKind, borel, full_group
from modpoints.reptheory import (
    ModpModule,
    Span,
    all_submodules,
    cyclic_submodules,
    fixed_vectors_mod_p,
    intersection_dim,
    is_stable,
    orbit_representatives,
    permutation_module,
    socle_classes,
    spin,
    steinberg_basis,
    verify_not0,
    verify_rigidity,
)


@pytest.mark.parametrize("p,n", [(3, 0), (3, 1), (5, 0)])
def test_steinberg(p, n):
    basis = steinberg_basis(p, n)
    assert len(basis) == p
    M = permutation_module(p, n)
    assert Span.of(p, M.dim, basis).dim == p
    assert is_stable(M, basis)
    ones = np.ones(M.dim, dtype=np.int64)
    if n == 0:
        assert Span.of(p, M.dim, basis).reduce(ones).any()
    # each vector is constant on fibres over level 0 and sums to zero there
    for v in basis:
        assert int(v.sum()) % p == 0


def test_steinberg_contains_borel_indicator():
    # the indicator of the points not reducing to (1:0), minus its mean
    p, n = 3, 1
    M = permutation_module(p, n)
    basis = steinberg_basis(p, n)
    fixed = Span.of(p, M.dim, fixed_vectors_mod_p(borel(p, n)))
    W = Span.of(p, M.dim, basis)
    assert intersection_dim(W, fixed) == 1


def test_fixed_vectors():
    assert len(fixed_vectors_mod_p(borel(3, 0))) == 2
    G = full_group(3, 1)
    fx = fixed_vectors_mod_p(G)
    assert len(fx) == 1 and len(set(fx[0].tolist())) == 1


def brute_cyclic(M):
    keys = set()
    for v in itertools.product(range(M.p), repeat=M.dim):
        if any(v):
            keys.add(spin(M, np.array(v)).key())
    return keys


@pytest.mark.parametrize("p,n,which", [(3, 0, "Full"), (5, 0, "Full"), (3, 0, "SumZero"), (5, 0, "SumZero")])
def test_orbit_reduction_matches_every_vector(p, n, which):
    M = permutation_module(p, n, which)
    census = cyclic_submodules(M)
    assert set(census.submodules) == brute_cyclic(M)


def test_orbit_reduction_sampled_at_level_one():
    M = permutation_module(3, 1)
    census = cyclic_submodules(M)
    rng = random.Random(3)
    for _ in range(400):
        v = np.array([rng.randrange(3) for _ in range(M.dim)])
        if v.any():
            assert spin(M, v).key() in census.submodules


def test_spin_independent_of_generator_order():
    M = permutation_module(3, 1)
    R = ModpModule(M.p, M.dim, M.actions[::-1], M.label)
    rng = random.Random(5)
    for _ in range(50):
        v = np.array([rng.randrange(3) for _ in range(M.dim)])
        assert spin(M, v).key() == spin(R, v).key()


def test_orbit_counts_small():
    # 80 nonzero vectors of F_3^4 under S_4 and scalars: weight patterns
    reps = orbit_representatives(permutation_module(3, 0))
    assert len(reps) == 8


@pytest.mark.parametrize("p,n", [(3, 0), (5, 0), (3, 1)])
def test_socle(p, n):
    classes = socle_classes(p, n)
    tags = {c.tag for c in classes}
    assert tags <= {"trivial", "Steinberg"}
    st = [c for c in classes if c.tag == "Steinberg"]
    assert st and all(c.dim == p for c in st)
    if n == 0:
        assert [(c.tag, c.dim, c.multiplicity) for c in classes] == [("trivial", 1, 1), ("Steinberg", p, 1)]


@pytest.mark.parametrize("p,n", [(3, 0), (5, 0), (3, 1)])
def test_not0_and_rigidity(p, n):
    assert verify_not0(p, n).passed
    v = verify_rigidity(p, n)
    assert v.passed and v.details["submodules"] >= 1


def test_submodule_lattice_closed():
    census = cyclic_submodules(permutation_module(3, 1, LatticeKind.SUM_ZERO))
    subs = all_submodules(census)
    spans = list(subs.values())
    for a in spans:
        for b in spans:
            s = Span.of(3, a.d, a.rows + b.rows)
            assert s.key() in subs


def test_budget():
    with pytest.raises(InfeasibleSize):
        verify_not0(5, 1)
    with pytest.raises(InfeasibleSize):
        socle_classes(7, 1)
