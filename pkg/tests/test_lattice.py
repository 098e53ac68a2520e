# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A testsuite for the lattice module."""

import unittest
from fractions import Fraction

from equipass import lattice


class TestHermite(unittest.TestCase):
    """Tests for Hermite normal form."""

    def test_xgcd(self):
        """Bezout coefficients."""
        for a, b in [(12, 18), (-7, 3), (0, 5), (5, 0), (0, 0)]:
            x, y, g = lattice.xgcd(a, b)
            self.assertEqual(x * a + y * b, g)
            self.assertGreaterEqual(g, 0)

    def test_canonical(self):
        """Different spanning sets give the same canonical basis."""
        first = lattice.canonical_basis([[2, 0], [0, 3]], 2)
        second = lattice.canonical_basis([[2, 3], [4, 3], [0, 6]], 2)
        self.assertEqual(first, second)
        self.assertEqual(first, [[2, 0], [0, 3]])

    def test_reduced_above_pivot(self):
        """Entries above a pivot lie in [0, pivot)."""
        rows = lattice.canonical_basis([[1, 5, 7], [0, 3, -4], [0, 0, 2]], 3)
        self.assertIn(rows[0][1], range(3))
        self.assertTrue(0 <= rows[0][2] < 2 and 0 <= rows[1][2] < 2)

    def test_zero(self):
        """Only zero vectors span the zero lattice."""
        self.assertEqual(lattice.canonical_basis([[0, 0]], 2), [])

    def test_width(self):
        """Vectors of the wrong width are rejected."""
        with self.assertRaises(ValueError):
            lattice.canonical_basis([[1, 0], [1]], 2)


class TestKernel(unittest.TestCase):
    """Tests for integer kernels."""

    def test_kernel(self):
        """The kernel is annihilated by the matrix."""
        matrix = [[2, 1, -1, 0], [0, 3, 0, -3]]
        basis = lattice.kernel_basis(matrix, 4)
        self.assertEqual(len(basis), 2)
        for vec in basis:
            for row in matrix:
                self.assertEqual(sum(a * b for a, b in zip(row, vec)), 0)

    def test_saturated(self):
        """The kernel is saturated: 2x = 2y has kernel spanned by (1, 1)."""
        self.assertEqual(lattice.kernel_basis([[2, -2]], 2), [[1, 1]])

    def test_no_constraints(self):
        """Without constraints the kernel is everything."""
        self.assertEqual(lattice.kernel_basis([], 2), [[1, 0], [0, 1]])


class TestContainment(unittest.TestCase):
    """Tests for lattice membership."""

    def test_contains(self):
        """Membership in 2Z x 3Z."""
        basis = [[2, 0], [0, 3]]
        self.assertTrue(lattice.contains(basis, [4, -3]))
        self.assertFalse(lattice.contains(basis, [1, 3]))
        self.assertTrue(lattice.lattice_contains(basis, [[2, 3], [0, 6]]))
        self.assertFalse(lattice.lattice_contains([[2, 0], [0, 6]], basis))


class TestSolve(unittest.TestCase):
    """Tests for exact triangular solves and Smith invariants."""

    def test_solve_upper(self):
        """Exact rational solution."""
        sol = lattice.solve_upper([[4, 2, 1], [0, 2, 1], [0, 0, 1]],
                                  [0, 0, 8])
        self.assertEqual(sol, [Fraction(0), Fraction(-4), Fraction(8)])

    def test_divisors(self):
        """Invariant factors of a few matrices."""
        self.assertEqual(lattice.determinantal_divisors([[2, 0], [0, 2]]),
                         [2, 2])
        self.assertEqual(lattice.determinantal_divisors([[1, 1], [-1, 1]]),
                         [1, 2])
        self.assertEqual(lattice.determinantal_divisors([[6]]), [6])
