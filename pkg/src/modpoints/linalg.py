"""Exact integer linear algebra: Smith forms over Z and over Z/p^m.

Matrices are lists of rows of Python ints (numpy arrays are accepted and
converted), so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Matrix = list[list[int]]


def as_rows(A) -> Matrix:
    if isinstance(A, np.ndarray):
        return [[int(x) for x in row] for row in A.tolist()]
    return [[int(x) for x in row] for row in A]


def identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def vstack(mats: list[Matrix]) -> Matrix:
    return [row for m in mats for row in m]


@dataclass
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal, d_1 | d_2 | ... ; ``Vinv`` is V^-1."""

    U: Matrix | None
    D: Matrix
    V: Matrix
    Vinv: Matrix
    diagonal: list[int]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith(A, want_u: bool = False) -> SmithForm:
    A = as_rows(A)
    m = len(A)
    ncols = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U = identity(m) if want_u else None
    V = identity(ncols)
    Vinv = identity(ncols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        if q:
            D[dst] = [x - q * y for x, y in zip(D[dst], D[src])]
            if U is not None:
                U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        # col_dst -= q * col_src, so Vinv: row_src += q * row_dst
        if q:
            for M in (D, V):
                for row in M:
                    row[dst] -= q * row[src]
            Vinv[src] = [x + q * y for x, y in zip(Vinv[src], Vinv[dst])]

    t = 0
    diag = []
    while t < min(m, ncols):
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, D[i][t] // piv)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if D[t][j]:
                    add_col(t, j, D[t][j] // piv)
                    if D[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t into the pivot
                cands = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                cands += [(abs(D[t][j]), t, j) for j in range(t, ncols) if D[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: fold an offending row into row t and retry
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, ncols) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(D[t][t])
        t += 1
    return SmithForm(U, D, V, Vinv, diag)


def invariant_factors(A) -> list[int]:
    return smith(A).diagonal


def kernel_z(A, ncols: int | None = None) -> Matrix:
    """Saturated basis of the integer kernel, as columns of the returned matrix.

    The returned matrix has one row per coordinate and one column per
    basis vector.
    """
    A = as_rows(A)
    if not A:
        k = ncols or 0
        return identity(k)
    sf = smith(A)
    r = sf.rank
    return [row[r:] for row in sf.V]


def columns(M: Matrix) -> list[list[int]]:
    return [list(c) for c in zip(*M)] if M and M[0] else []


def rank_q(A) -> int:
    """Rank over the rationals by fraction-exact Gaussian elimination."""
    rows = [[Fraction(x) for x in row] for row in as_rows(A)]
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def solve_in_basis(K: Matrix, v: list[int]) -> list[int]:
    """Integer coordinates c with K c = v, for K of full column rank.

    Raises ValueError if v is not in the integer span of K's columns.
    """
    sf = smith(K, want_u=True)
    Uv = [sum(a * b for a, b in zip(row, v)) for row in sf.U]
    r = sf.rank
    if any(Uv[r:]):
        raise ValueError("vector outside the rational span")
    y = []
    for d, x in zip(sf.diagonal, Uv):
        if x % d:
            raise ValueError("vector outside the integer span")
        y.append(x // d)
    ncols = len(K[0])
    if r < ncols:
        raise ValueError("basis is not of full column rank")
    return [sum(a * b for a, b in zip(row, y)) for row in sf.V]


def hnf_rows(A) -> Matrix:
    """Row-style Hermite normal form (nonzero rows only, positive pivots)."""
    M = [row[:] for row in as_rows(A)]
    if not M:
        return []
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(M)) if M[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[i0] = M[i0], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [x - q * y for x, y in zip(M[i], M[r])]
                    if M[i][c]:
                        done = False
            if done:
                break
        if r < len(M) and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-x for x in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                M[i] = [x - q * y for x, y in zip(M[i], M[r])]
            r += 1
            if r == len(M):
                break
    return [row for row in M if any(row)]


# --- local Smith form over Z/p^m -------------------------------------------


def _val(x: int, p: int, m: int) -> int:
    x %= p**m
    if x == 0:
        return m
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


@dataclass
class LocalSmith:
    """Elimination over the chain ring Z/p^m: ``U A V = diag(p^k_1, ...)`` mod p^m."""

    p: int
    m: int
    exponents: list[int]  # k_i < m for each nonzero pivot
    V: Matrix
    ncols: int

    def kernel_order(self) -> int:
        free = self.ncols - len(self.exponents)
        return self.p ** (sum(self.exponents) + self.m * free)

    def kernel_generators(self) -> list[list[int]]:
        """Generators of the kernel of ``A`` acting on (Z/p^m)^ncols."""
        N = self.p**self.m
        cols = columns(self.V)
        gens = []
        for i, k in enumerate(self.exponents):
            if k:
                gens.append([(self.p ** (self.m - k) * x) % N for x in cols[i]])
        for i in range(len(self.exponents), self.ncols):
            gens.append([x % N for x in cols[i]])
        return gens


def local_smith(A, p: int, m: int) -> LocalSmith:
    """Diagonalize A over Z/p^m, pivoting on an entry of least valuation.

    Every element of Z/p^m is a unit times a power of p, so the least
    valuation pivot divides everything left in the submatrix and one
    sweep per pivot suffices.
    """
    N = p**m
    D = [[x % N for x in row] for row in as_rows(A)]
    rows = len(D)
    ncols = len(D[0]) if rows else 0
    V = identity(ncols)
    exps = []
    t = 0
    while t < min(rows, ncols):
        best = None
        for i in range(t, rows):
            for j in range(t, ncols):
                if D[i][j]:
                    v = _val(D[i][j], p, m)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best and best[0] == 0:
                break
        if best is None:
            break
        k, i, j = best
        D[t], D[i] = D[i], D[t]
        for M in (D, V):
            for row in M:
                row[t], row[j] = row[j], row[t]
        # scale the pivot to exactly p^k by a unit on its column
        unit = D[t][t] // p**k
        uinv = pow(unit, -1, N)
        for M in (D, V):
            for row in M:
                row[t] = row[t] * uinv % N
        pk = p**k
        for i in range(t + 1, rows):
            if D[i][t]:
                q = D[i][t] // pk
                D[i] = [(x - q * y) % N for x, y in zip(D[i], D[t])]
        for j in range(t + 1, ncols):
            if D[t][j]:
                q = D[t][j] // pk
                for M in (D, V):
                    for row in M:
                        row[j] = (row[j] - q * row[t]) % N
        exps.append(k)
        t += 1
    return LocalSmith(p, m, exps, V, ncols)


def kernel_mod(A, p: int, m: int, ncols: int | None = None) -> LocalSmith:
    A = as_rows(A)
    if not A:
        return LocalSmith(p, m, [], identity(ncols or 0), ncols or 0)
    return local_smith(A, p, m)
