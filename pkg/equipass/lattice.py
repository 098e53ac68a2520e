# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Exact integer linear algebra on lists of Python integers.

Lattices are held as lists of row vectors. All operations are exact;
nothing here touches floating point.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

from sympy import Matrix


def xgcd(a, b):
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0.

    >>> xgcd(12, 18)
    (-1, 1, 6)
    >>> xgcd(0, -5)
    (0, -1, 5)
    """
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def hermite_form(rows, width=None):
    """Reduce rows to Hermite normal form by unimodular row operations.

    Only the first width columns are used to choose pivots; any
    further columns are carried along (this is how kernels are
    extracted). Pivots are positive and the entries above a pivot lie
    in [0, pivot). Returns (rows, rank) where the first rank rows hold
    the pivots and the remaining rows are zero on the first width
    columns.

    >>> hermite_form([[2, 4], [3, 6], [0, 1]])
    ([[1, 0], [0, 1], [0, 0]], 2)
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, 0
    if width is None:
        width = len(rows[0])
    rank = 0
    for col in range(width):
        for r in range(rank + 1, len(rows)):
            b = rows[r][col]
            if b == 0:
                continue
            a = rows[rank][col]
            if a == 0:
                rows[rank], rows[r] = rows[r], rows[rank]
                continue
            x, y, g = xgcd(a, b)
            top, bottom = rows[rank], rows[r]
            rows[rank] = [x * s + y * t for s, t in zip(top, bottom)]
            rows[r] = [(a // g) * t - (b // g) * s
                       for s, t in zip(top, bottom)]
        pivot = rows[rank][col] if rank < len(rows) else 0
        if pivot == 0:
            continue
        if pivot < 0:
            rows[rank] = [-v for v in rows[rank]]
            pivot = -pivot
        for r in range(rank):
            q = rows[r][col] // pivot
            if q:
                rows[r] = [s - q * t for s, t in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rows, rank


def canonical_basis(vectors, dimension):
    """Return the canonical (Hermite) basis of the span of vectors.

    >>> canonical_basis([[4, -2], [6, -3]], 2)
    [[2, -1]]
    """
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    for v in vectors:
        if len(v) != dimension:
            raise ValueError(len(v))
    rows, rank = hermite_form(vectors)
    return rows[:rank]


def kernel_basis(matrix, ncols):
    """Return a canonical basis of {x in Z^ncols : matrix x = 0}.

    >>> kernel_basis([[1, -1, 0]], 3)
    [[1, 1, 0], [0, 0, 1]]
    """
    # Row-reduce [A^T | I]; rows whose A^T part vanishes span the kernel.
    nrows = len(matrix)
    augmented = []
    for j in range(ncols):
        left = [matrix[i][j] for i in range(nrows)]
        right = [1 if k == j else 0 for k in range(ncols)]
        augmented.append(left + right)
    if nrows == 0:
        return canonical_basis(augmented, ncols)
    reduced, rank = hermite_form(augmented, width=nrows)
    return canonical_basis([row[nrows:] for row in reduced[rank:]], ncols)


def contains(basis, vector):
    """Return True if vector lies in the lattice with Hermite basis basis.

    >>> contains([[2, -1]], [4, -2]), contains([[2, -1]], [1, 0])
    (True, False)
    """
    vec = list(vector)
    for row in basis:
        col = next(i for i, v in enumerate(row) if v)
        if any(vec[:col]):
            return False
        q, rem = divmod(vec[col], row[col])
        if rem:
            return False
        vec = [s - q * t for s, t in zip(vec, row)]
    return not any(vec)


def lattice_contains(big, small):
    """Return True if every vector of small lies in the lattice big."""
    return all(contains(big, v) for v in small)


def solve_upper(matrix, rhs):
    """Solve an upper triangular system exactly over the rationals.

    >>> solve_upper([[2, 1], [0, 1]], [1, 0])
    [Fraction(1, 2), Fraction(0, 1)]
    """
    n = len(rhs)
    sol = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rhs[i])
        for j in range(i + 1, n):
            if matrix[i][j]:
                acc -= matrix[i][j] * sol[j]
        sol[i] = acc / matrix[i][i]
    return sol


def determinantal_divisors(rows):
    """Return the invariant factors of an integer matrix.

    The k-th determinantal divisor is the gcd of all k x k minors; the
    invariant factors are their successive quotients (the diagonal of
    the Smith normal form).

    >>> determinantal_divisors([[2, 0], [0, 2], [1, 1]])
    [1, 2]
    """
    mat = Matrix(rows)
    nrows, ncols = mat.shape
    previous = 1
    factors = []
    for k in range(1, min(nrows, ncols) + 1):
        divisor = 0
        for rsel in combinations(range(nrows), k):
            for csel in combinations(range(ncols), k):
                divisor = gcd(divisor, int(mat.extract(list(rsel),
                                                       list(csel)).det()))
        if divisor == 0:
            break
        factors.append(divisor // previous)
        previous = divisor
    return factors
