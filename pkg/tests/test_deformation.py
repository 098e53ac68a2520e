# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A testsuite for the deformation module."""

import math
import unittest

import numpy as np

from equipass import deformation, functional, loops, problems
from equipass.functional import evaluate

TWO_PI = 2 * math.pi


class TestCutoff(unittest.TestCase):
    """Tests for the cutoff function."""

    def setUp(self):
        """Use a small pendulum."""
        self.p = problems.pendulum(modes=2)

    def test_params(self):
        """epsilon and delta must be positive."""
        with self.assertRaises(ValueError):
            deformation.DeformationParams(0.0, 0.0, 1.0)
        with self.assertRaises(ValueError):
            deformation.DeformationParams(0.0, 1.0, -1.0)
        dp = deformation.DeformationParams(0.0, 0.5, 2.0)
        self.assertEqual(dp.gradient_bound, 2.0)
        self.assertEqual(dp.steps, 32)

    def test_strip(self):
        """chi is 1 inside the strip and 0 outside twice its width."""
        q = loops.constant_loop([math.pi], 2, TWO_PI)
        value = evaluate(self.p, q)
        inside = deformation.DeformationParams(value, 0.1, 1.0)
        self.assertEqual(deformation.cutoff(self.p, q, inside), 1.0)
        outside = deformation.DeformationParams(value + 0.3, 0.1, 1.0)
        self.assertEqual(deformation.cutoff(self.p, q, outside), 0.0)
        between = deformation.DeformationParams(value + 0.15, 0.1, 1.0)
        self.assertAlmostEqual(deformation.cutoff(self.p, q, between), 0.5)

    def test_region(self):
        """Far from the box S the cutoff vanishes unless saturated."""
        q = loops.constant_loop([10 * TWO_PI], 2, TWO_PI)
        value = evaluate(self.p, q)
        dp = deformation.DeformationParams(value, 0.1, 1.0)
        self.assertGreater(deformation.region_distance(self.p, q), 2.0)
        self.assertEqual(deformation.cutoff(self.p, q, dp), 0.0)
        dp.saturated = True
        self.assertEqual(deformation.cutoff(self.p, q, dp), 1.0)


class TestFlow(unittest.TestCase):
    """Properties of the deformation flow on random starts."""

    def setUp(self):
        """Use the forced pendulum with a position-dependent mass."""
        self.p = problems.pendulum(mu=0.2, forcing='cos1', modes=4)
        self.rng = np.random.default_rng(21)

    def start(self):
        """Return a random start near the region S."""
        return loops.random_loop(self.rng, 1, 4, TWO_PI, scale=0.5,
                                 mean_scale=math.pi)

    def test_time_zero(self):
        """eta(q, 0) = q exactly."""
        for _ in range(50):
            q = self.start()
            dp = deformation.DeformationParams(evaluate(self.p, q), 1.0, 0.3,
                                               saturated=True)
            eta = deformation.deformation_flow(self.p, q, dp, t=0.0)
            np.testing.assert_array_equal(eta.coeffs, q.coeffs)

    def test_outside_strip(self):
        """eta(q, 1) = q exactly when phi(q) is outside the wide strip."""
        for _ in range(50):
            q = self.start()
            dp = deformation.DeformationParams(evaluate(self.p, q) + 3.0, 1.0,
                                               0.3, saturated=True)
            eta = deformation.deformation_flow(self.p, q, dp)
            np.testing.assert_array_equal(eta.coeffs, q.coeffs)

    def test_displacement_and_monotone(self):
        """|eta(q, 1) - q| <= delta and phi never increases."""
        delta = 0.3
        for _ in range(50):
            q = self.start()
            value = evaluate(self.p, q)
            dp = deformation.DeformationParams(value, 1.0, delta,
                                               saturated=True)
            history = []
            eta = deformation.deformation_flow(self.p, q, dp, history=history)
            self.assertLessEqual((eta - q).h1_norm(), delta * (1 + 1e-6))
            values = [value] + history
            for before, after in zip(values, values[1:]):
                self.assertLessEqual(after, before)
            self.assertAlmostEqual(evaluate(self.p, eta), values[-1])

    def test_descends(self):
        """Inside the strip the flow lowers phi by about delta * |grad|."""
        q = self.start()
        value = evaluate(self.p, q)
        dp = deformation.DeformationParams(value, 1.0, 0.1, saturated=True)
        eta = deformation.deformation_flow(self.p, q, dp)
        self.assertLess(evaluate(self.p, eta), value)

    def test_bad_time(self):
        """t must lie in [0, 1]."""
        q = self.start()
        dp = deformation.DeformationParams(0.0, 1.0, 0.3)
        with self.assertRaises(ValueError):
            deformation.deformation_flow(self.p, q, dp, t=1.5)

    def test_equivariant(self):
        """The saturated flow commutes with the symmetry group."""
        p = problems.coupled(modes=3)
        rng = np.random.default_rng(8)
        for _ in range(10):
            q = loops.random_loop(rng, 2, 3, TWO_PI, scale=0.5,
                                  mean_scale=math.pi)
            dp = deformation.DeformationParams(evaluate(p, q), 1.0, 0.5,
                                               saturated=True)
            eta = deformation.deformation_flow(p, q, dp)
            for g in functional.group_generators(p):
                moved = deformation.deformation_flow(
                    p, functional.apply_group(p, g, q), dp)
                diff = moved - functional.apply_group(p, g, eta)
                self.assertLess(diff.h1_norm(), 1e-8)

    def test_gradient_bound(self):
        """Critical points in the strip violate the gradient bound."""
        p = problems.pendulum(modes=2)
        top = loops.constant_loop([math.pi], 2, TWO_PI)
        dp = deformation.DeformationParams(evaluate(p, top), 0.1, 1.0)
        with self.assertLogs(level='WARNING'):
            weak = deformation.check_gradient_bound(p, [top], dp)
        self.assertEqual(len(weak), 1)


class TestNeighborhood(unittest.TestCase):
    """Tests for the deformation that fixes a neighbourhood of K_c."""

    def setUp(self):
        """Pendulum with the saddle at 0 as the only candidate."""
        self.p = problems.pendulum(modes=2)
        self.saddle = loops.constant_loop([0.0], 2, TWO_PI)
        self.dp = deformation.DeformationParams(0.0, 0.5, 0.5, saturated=True)

    def test_inside(self):
        """Within the radius of the orbit the flow is the identity."""
        deform = deformation.NeighborhoodDeformation(self.p, [self.saddle],
                                                     0.5, self.dp)
        coeffs = np.zeros((5, 1))
        coeffs[0, 0] = TWO_PI + 0.05
        coeffs[1, 0] = 0.01
        q = loops.LoopState(coeffs, TWO_PI)
        self.assertLess(deform.distance(q), 0.5)
        np.testing.assert_array_equal(deform(q).coeffs, q.coeffs)

    def test_empty(self):
        """Without candidates it is the plain flow."""
        deform = deformation.NeighborhoodDeformation(self.p, [], 0.5, self.dp)
        q = loops.constant_loop([0.2], 2, TWO_PI)
        plain = deformation.deformation_flow(self.p, q, self.dp)
        np.testing.assert_array_equal(deform(q).coeffs, plain.coeffs)

    def test_verify(self):
        """Samples far from the saddle end below c - eps."""
        deform = deformation.NeighborhoodDeformation(self.p, [self.saddle],
                                                     0.2, self.dp)
        samples = [loops.constant_loop([x], 2, TWO_PI)
                   for x in np.linspace(0.0, TWO_PI, 25)]
        report = deform.verify(samples)
        self.assertTrue(report.passed)
        self.assertGreater(report.checked, 0)
        self.assertIn('failures=0', str(report))

    def test_radius(self):
        """The radius must be positive."""
        with self.assertRaises(ValueError):
            deformation.NeighborhoodDeformation(self.p, [], 0.0, self.dp)
