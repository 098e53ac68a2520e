# Copyright (C) 2022 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A testsuite for the Context class."""

import math
import unittest

from equipass import problems
from equipass.context import Context
from equipass.loops import constant_loop
from equipass.minimax import CriticalCandidate


def candidate(value, orbit, converged=True):
    """Return a stub candidate at a constant loop."""
    cand = CriticalCandidate(constant_loop([0.0], 2, 2 * math.pi), value,
                             1e-9, 1e-12, converged)
    cand.orbit_id = orbit
    return cand


class TestContextMethods(unittest.TestCase):
    """Tests for Context methods."""

    def setUp(self):
        """Test harness setup."""
        self.context = Context()

    def test_defaults(self):
        """The default context is the catalog pendulum."""
        self.assertEqual(self.context.problem.name, 'pendulum')
        self.assertEqual(self.context.problem.modes, 16)
        self.assertEqual(self.context.settings.pathpoints, 40)
        self.assertEqual(self.context.perturbation, 0.0)
        self.assertEqual(self.context.candidates, [])

    def test_problem(self):
        """A given problem is kept."""
        ctx = Context(problems.free(modes=2))
        self.assertEqual(ctx.problem.name, 'free')

    def test_converged(self):
        """Test the converged() method."""
        self.context.candidates = [candidate(-1, 0), candidate(0, 1, False)]
        self.assertEqual(len(self.context.converged()), 1)

    def test_orbits(self):
        """Test the orbits() method."""
        self.context.candidates = [candidate(-1, 0), candidate(-1, 0),
                                   candidate(0, 1)]
        self.assertEqual(self.context.orbits(), 2)

    def test_spread(self):
        """Test the spread() method."""
        self.assertEqual(self.context.spread(), 0.0)
        self.context.candidates = [candidate(-4, 0), candidate(0.5, 1)]
        self.assertEqual(self.context.spread(), 4.5)


class TestContextStr(unittest.TestCase):
    """Tests for the string form of a Context."""

    def test_empty(self):
        """No candidates yet."""
        string = str(Context())
        self.assertIn('Problem: pendulum', string)
        self.assertIn('Period:', string)
        self.assertTrue(string.endswith('No critical candidates'))

    def test_verbose(self):
        """Verbose output includes the solver settings."""
        ctx = Context()
        ctx.verbose = True
        self.assertIn('Path points: 40', str(ctx))

    def test_candidates(self):
        """Candidates are listed with their orbits."""
        ctx = Context()
        ctx.candidates = [candidate(-4, 0), candidate(0, 1)]
        string = str(ctx)
        self.assertIn('Candidates: 2 in 2 orbits, 2 converged', string)
        self.assertIn('orbit 1', string)
        self.assertTrue(string.endswith('Value spread: 4'))
