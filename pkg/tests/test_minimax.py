# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A testsuite for the minimax module."""

# Some protected members are accessed to facilitate testing.
# pylint: disable=protected-access

import copy
import math
import unittest
from unittest import mock

import numpy as np

from equipass import (configfile, deformation, functional, loops, minimax,
                      problems)
from equipass.context import Context
from equipass.types import PreconditionError

TWO_PI = 2 * math.pi


def pendulum_config(p, pathpoints=12):
    """Return a mountain-pass setup between the minima at pi and 3 pi."""
    base = loops.constant_loop([math.pi], p.modes, p.period)
    far = loops.constant_loop([3 * math.pi], p.modes, p.period)
    return minimax.MountainPassConfig(base, far, None, 1.0,
                                      pathpoints=pathpoints, rim_samples=8)


class TestSettings(unittest.TestCase):
    """Tests for SolverSettings."""

    def test_defaults(self):
        """Defaults come from the [solver] section."""
        settings = minimax.SolverSettings()
        self.assertEqual(settings.pathpoints, 40)
        self.assertIsNone(settings.delta)
        self.assertEqual(settings.seed, 1)

    def test_override(self):
        """Key=value text overrides the defaults."""
        cfg = configfile.read_keyvalue('delta = 0.25\nseed = 9\n', 'solver')
        settings = minimax.SolverSettings(cfg['solver'])
        self.assertEqual(settings.delta, 0.25)
        self.assertEqual(settings.seed, 9)

    def test_bad(self):
        """Too few path points are refused."""
        cfg = configfile.read_keyvalue('pathpoints = 1\n', 'solver')
        with self.assertRaises(ValueError):
            minimax.SolverSettings(cfg['solver'])


class TestLocalSolvers(unittest.TestCase):
    """Tests for descent and Newton polishing."""

    def setUp(self):
        """Use a small pendulum."""
        self.p = problems.pendulum(modes=3)

    def test_descend(self):
        """Descent from near the saddle reaches a minimum."""
        rng = np.random.default_rng(3)
        start = loops.random_loop(rng, 1, 3, TWO_PI, scale=1e-2)
        q = minimax.descend(self.p, start, 500, 1e-8)
        cand = minimax.make_candidate(self.p, q, 1e-6, 'minimum')
        self.assertTrue(cand.converged)
        self.assertAlmostEqual(cand.value, -4 * math.pi, places=6)
        self.assertAlmostEqual(cand.loop.mean[0], math.pi, places=3)

    def test_polish_saddle(self):
        """Newton converges to the saddle at 0, which descent avoids."""
        coeffs = np.zeros((7, 1))
        coeffs[0, 0] = 0.05
        coeffs[2, 0] = 0.01
        q = minimax.polish(self.p, loops.LoopState(coeffs, TWO_PI))
        self.assertLess(functional.gradient_norm(self.p, q), 1e-10)
        self.assertAlmostEqual(functional.evaluate(self.p, q), 0.0, places=9)

    def test_candidate_normalized(self):
        """Candidates are moved into the box S."""
        q = loops.constant_loop([5 * math.pi], 3, TWO_PI)
        cand = minimax.make_candidate(self.p, q, 1e-6)
        self.assertAlmostEqual(cand.loop.mean[0], math.pi)
        self.assertLess(cand.residual, 1e-12)


class TestGeometry(unittest.TestCase):
    """Tests for the mountain-pass geometry check."""

    def test_pendulum(self):
        """The pendulum minima are separated by a rim."""
        p = problems.pendulum(modes=3)
        report = minimax.geometry_check(p, pendulum_config(p))
        self.assertTrue(report.passed)
        self.assertGreater(report.rim_min, report.level)
        self.assertIn('PASS', str(report))

    def test_free(self):
        """The convex toy has no geometry."""
        p = problems.free(modes=2)
        base = loops.zero_loop(1, 2, TWO_PI)
        far = loops.constant_loop([TWO_PI], 2, TWO_PI)
        cfg = minimax.MountainPassConfig(base, far, None, 1.0, rim_samples=4)
        report = minimax.geometry_check(p, cfg)
        self.assertFalse(report.passed)
        with self.assertRaises(PreconditionError):
            minimax.mountain_pass(p, cfg)

    def test_far_inside(self):
        """A far point inside the rim is a violation."""
        p = problems.pendulum(modes=3)
        cfg = pendulum_config(p)
        cfg.rim_radius = 100.0
        report = minimax.geometry_check(p, cfg)
        self.assertFalse(report.passed)
        self.assertTrue(any('inside' in v for v in report.violations))

    def test_directions(self):
        """Rim directions have unit H1 norm."""
        p = problems.coupled(modes=2)
        rng = np.random.default_rng(0)
        directions = minimax.rim_directions(p, 2, rng, 5)
        self.assertEqual(len(directions), 12 + 5)
        for direction in directions:
            self.assertAlmostEqual(direction.h1_norm(), 1.0)


class TestPaths(unittest.TestCase):
    """Tests for path construction."""

    def test_initial_path(self):
        """The straight path joins base and far."""
        p = problems.pendulum(modes=2)
        cfg = pendulum_config(p, pathpoints=8)
        path = minimax.initial_path(cfg)
        self.assertEqual(len(path), 9)
        np.testing.assert_array_equal(path[0].coeffs, cfg.base.coeffs)
        np.testing.assert_allclose(path[-1].coeffs, cfg.far.coeffs)

    def test_perturbed(self):
        """Perturbation moves only the interior points."""
        p = problems.pendulum(modes=2)
        cfg = pendulum_config(p, pathpoints=8)
        cfg.perturbation = 0.1
        path = minimax.initial_path(cfg, np.random.default_rng(1))
        straight = minimax.initial_path(pendulum_config(p, pathpoints=8))
        np.testing.assert_array_equal(path[0].coeffs, straight[0].coeffs)
        self.assertAlmostEqual((path[4] - straight[4]).h1_norm(), 0.1)

    def test_reparametrize(self):
        """Equal H1 spacing with fixed endpoints."""
        p = problems.pendulum(modes=2)
        base = loops.constant_loop([0.0], 2, TWO_PI)
        points = [base + loops.constant_loop([x], 2, TWO_PI)
                  for x in (0.0, 0.1, 0.5, 3.0)]
        path = minimax._reparametrize(points)
        means = [q.mean[0] for q in path]
        np.testing.assert_allclose(means, [0.0, 1.0, 2.0, 3.0])
        self.assertEqual(len(path), 4)
        self.assertEqual(p.dimension, path[0].dimension)


class TestMountainPass(unittest.TestCase):
    """Tests for the mountain-pass search."""

    def test_pendulum(self):
        """The pass between pi and 3 pi is the saddle at 2 pi."""
        p = problems.pendulum(modes=3)
        cand = minimax.mountain_pass(p, pendulum_config(p, pathpoints=10))
        self.assertTrue(cand.converged)
        self.assertAlmostEqual(cand.value, 0.0, places=8)
        self.assertEqual(cand.kind, 'mountain-pass')

    def test_perturbed(self):
        """A perturbed initial path still finds a critical point."""
        p = problems.pendulum(modes=3)
        cfg = pendulum_config(p, pathpoints=10)
        cfg.perturbation = 0.05
        cand = minimax.mountain_pass(p, cfg, np.random.default_rng(4))
        self.assertLess(cand.gradient_norm, 1e-6)
        self.assertGreater(cand.value, -4 * math.pi + 1)

    def test_odd_pathpoints(self):
        """The pass is found when no path point starts on the saddle."""
        p = problems.pendulum(modes=3)
        for pathpoints in (7, 41):
            cand = minimax.mountain_pass(p, pendulum_config(p, pathpoints))
            self.assertTrue(cand.converged)
            self.assertAlmostEqual(cand.value, 0.0, places=8)

    def test_coupled(self):
        """The coupled pass from (pi, pi) is the saddle at level -5 pi."""
        p = problems.coupled(modes=2)
        base = loops.constant_loop([math.pi, math.pi], 2, p.period)
        far = loops.constant_loop([3 * math.pi, math.pi], 2, p.period)
        cfg = minimax.MountainPassConfig(base, far, None, 1.0, pathpoints=7,
                                         rim_samples=8)
        cand = minimax.mountain_pass(p, cfg)
        self.assertTrue(cand.converged)
        self.assertAlmostEqual(cand.value, -5 * math.pi, places=6)
        self.assertLess(cand.gradient_norm, 1e-6)

    def test_exhausted(self):
        """Running out of sweeps leaves the candidate unconverged."""
        p = problems.pendulum(modes=3)
        cfg = pendulum_config(p, pathpoints=7)
        cfg.sweeps = 1
        with self.assertLogs(level='WARNING'):
            cand = minimax.mountain_pass(p, cfg)
        self.assertFalse(cand.converged)

    def test_path_deformed(self):
        """Each sweep moves the path with the deformation flow."""
        p = problems.pendulum(modes=3)
        with mock.patch.object(minimax, 'deformation_flow',
                               wraps=deformation.deformation_flow) as flow:
            minimax.mountain_pass(p, pendulum_config(p, pathpoints=7))
        self.assertTrue(flow.called)
        dp = flow.call_args.args[2]
        self.assertTrue(dp.saturated)


class TestClassify(unittest.TestCase):
    """Tests for orbit classification."""

    def test_group_images(self):
        """q and gq always share an orbit."""
        p = problems.coupled(modes=2)
        rng = np.random.default_rng(6)
        for _ in range(100):
            q = loops.random_loop(rng, 2, 2, TWO_PI, mean_scale=5.0)
            moved = functional.apply_word(p, functional.random_word(p, rng),
                                          q)
            cands = [minimax.CriticalCandidate(x, 0.0, 0.0, 0.0)
                     for x in (q, moved)]
            minimax.classify_orbits(p, cands, 1e-6)
            self.assertEqual(cands[0].orbit_id, cands[1].orbit_id)

    def test_distinct(self):
        """The pendulum equilibria stay apart at tol 1e-2."""
        p = problems.pendulum(modes=2)
        cands = [minimax.CriticalCandidate(
            loops.constant_loop([x], 2, TWO_PI), 0.0, 0.0, 0.0)
                 for x in (math.pi, 0.0, 3 * math.pi)]
        minimax.classify_orbits(p, cands, 1e-2)
        self.assertEqual([c.orbit_id for c in cands], [0, 1, 0])

    def test_empty(self):
        """Nothing to classify."""
        p = problems.pendulum(modes=2)
        self.assertEqual(minimax.classify_orbits(p, [], 1e-6), [])


class TestRun(unittest.TestCase):
    """Multiplicity on the pendulum at K = 16 with 40 path points."""

    @classmethod
    def setUpClass(cls):
        """Run the solver once."""
        cls.context = Context()
        minimax.run(cls.context)

    def test_checks(self):
        """Geometry, invariance and the neighbourhood check pass."""
        self.assertTrue(self.context.geometry.passed)
        self.assertTrue(self.context.invariance.passed)
        self.assertTrue(self.context.neighborhood.passed)

    def test_candidates(self):
        """A minimum and a mountain-pass point in different orbits."""
        cands = self.context.candidates
        self.assertGreaterEqual(len(cands), 2)
        self.assertEqual(self.context.orbits(), len(cands))
        for cand in cands:
            self.assertLessEqual(cand.gradient_norm, 1e-6)
            self.assertLessEqual(cand.residual, 1e-5)
        minimum, passage = cands[0], cands[1]
        self.assertEqual(minimum.kind, 'minimum')
        self.assertGreaterEqual(passage.value - minimum.value, 1.0)

    def test_deterministic(self):
        """The same seed gives the same values."""
        again = minimax.run(Context())
        for first, second in zip(self.context.candidates, again.candidates):
            self.assertAlmostEqual(first.value, second.value, places=8)

    def test_perturbed_same_orbit(self):
        """A slightly perturbed initial path ends in the same orbit."""
        context = Context()
        context.perturbation = 1e-3
        minimax.run(context)
        passages = [copy.copy(self.context.candidates[1]),
                    context.candidates[1]]
        minimax.classify_orbits(self.context.problem, passages,
                                self.context.settings.orbit_tol)
        self.assertEqual(passages[0].orbit_id, passages[1].orbit_id)
