import itertools
from math import gcd, prod

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from modpoints.linalg import (
    hnf_rows,
    identity,
    kernel_mod,
    kernel_z,
    local_smith,
    matmul,
    rank_q,
    smith,
    solve_in_basis,
)


def matrices(max_rows=6, max_cols=6, lo=-12, hi=12):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_smith_transforms(A):
    sf = smith(A, want_u=True)
    assert matmul(matmul(sf.U, A), sf.V) == sf.D
    assert matmul(sf.V, sf.Vinv) == identity(len(A[0]))
    d = sf.diagonal
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert abs(Matrix(sf.U).det()) == 1 and abs(Matrix(sf.V).det()) == 1
    off = [sf.D[i][j] for i in range(len(A)) for j in range(len(A[0])) if i != j]
    assert not any(off)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_matches_sympy(A):
    ref = [int(x) for x in sympy_factors(Matrix(A), domain=ZZ) if x != 0]
    assert smith(A).diagonal == ref
    assert rank_q(A) == Matrix(A).rank() == len(ref)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_saturated(A):
    K = kernel_z(A)
    n = len(A[0])
    k = len(K[0]) if K and K[0] else 0
    assert k == n - rank_q(A)
    if k:
        assert not any(x for row in matmul(A, K) for x in row)
        # a saturated basis has gcd of maximal minors 1
        assert smith([list(r) for r in zip(*K)]).diagonal == [1] * k


@settings(max_examples=100, deadline=None)
@given(matrices(4, 3, -5, 5), st.sampled_from([(2, 2), (3, 1), (3, 2), (5, 1)]))
def test_local_smith_counts_kernel(A, pm):
    p, m = pm
    N = p**m
    n = len(A[0])
    brute = sum(
        1
        for x in itertools.product(range(N), repeat=n)
        if all(sum(a * b for a, b in zip(r, x)) % N == 0 for r in A)
    )
    ls = local_smith(A, p, m)
    assert ls.kernel_order() == brute
    d = smith(A).diagonal
    assert brute == prod(gcd(x, N) for x in d) * N ** (n - len(d))
    for g in kernel_mod(A, p, m).kernel_generators():
        assert all(sum(a * b for a, b in zip(r, g)) % N == 0 for r in A)


def test_solve_in_basis():
    K = [[1, 0], [1, 2], [0, 1]]
    assert solve_in_basis(K, [3, 7, 2]) == [3, 2]


def test_hnf_is_canonical():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    B = [[a + b for a, b in zip(A[0], A[1])], A[1], A[2]]
    assert hnf_rows(A) == hnf_rows(B)
    H = hnf_rows(A)
    assert abs(Matrix(A).det()) == prod(H[i][i] for i in range(3))
