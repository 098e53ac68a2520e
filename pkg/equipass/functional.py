# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""The periodic Lagrangian functional and its discretization.

    phi(q) = int_0^T0 [ 1/2 <L(t,q) q', q'> - W(t,q) + <f(t), q> ] dt

is evaluated by the trapezoidal rule on the nodes of the loop's
Discretization. The gradient is the H1 Riesz representative of the
exact derivative of the discrete functional.

Problem callbacks are vectorised over nodes: given times of shape (M,)
and positions of shape (M, n) they return

    kinetic            (M, n, n)     L(t, q)
    kinetic_jacobian   (M, n, n, n)  [j, i] = dL/dq_i at node j
    potential          (M,)          W(t, q)
    potential_gradient (M, n)        W_q(t, q)
    forcing(t)         (M, n)        f(t)
"""

import logging

import numpy as np

from equipass.loops import LoopState, random_loop
from equipass.types import EvaluationError

# Relative tolerance of the sampled invariant checks.
SYMMETRY_TOL = 1e-12
PERIODIC_TOL = 1e-9
MEAN_TOL = 1e-10
INVARIANCE_TOL = 1e-10


class PeriodicProblem:
    """A T0-periodic Lagrangian problem on R^n with lattice periods T_i."""

    # pylint: disable=too-many-instance-attributes
    # pylint: disable=too-many-arguments
    def __init__(self, name, period, periods, kinetic, kinetic_jacobian,
                 potential, potential_gradient, forcing, alpha,
                 symmetry=None, modes=16):
        """Construct a problem and validate it on a sample grid.

        symmetry is a CrystalGroup of rank n (or None).
        """
        self.name = name
        self.period = float(period)
        self.periods = np.array(periods, dtype=float).reshape(-1)
        self.dimension = len(self.periods)
        self.kinetic = kinetic
        self.kinetic_jacobian = kinetic_jacobian
        self.potential = potential
        self.potential_gradient = potential_gradient
        self.forcing = forcing
        self.alpha = float(alpha)
        self.symmetry = symmetry
        self.modes = int(modes)
        self.validate()

    def validate(self, samples=7):
        """Check the problem invariants at deterministic sample points."""
        if self.period <= 0 or (self.periods <= 0).any():
            msg = 'periods must be positive'
            raise ValueError(msg)
        if self.alpha <= 0:
            msg = 'ellipticity constant must be positive'
            raise ValueError(msg)
        if self.modes < 0:
            raise ValueError(self.modes)
        rng = np.random.default_rng(0)
        times = rng.uniform(0, self.period, samples)
        points = rng.uniform(-1, 1, (samples, self.dimension)) * self.periods
        kin = self.kinetic(times, points)
        scale = max(1.0, float(np.abs(kin).max()))
        if np.abs(kin - kin.transpose(0, 2, 1)).max() > SYMMETRY_TOL * scale:
            msg = f'{self.name}: L(t,q) is not symmetric'
            raise ValueError(msg)
        lowest = np.linalg.eigvalsh(kin).min()
        if lowest < self.alpha * (1 - SYMMETRY_TOL):
            msg = f'{self.name}: L(t,q) not elliptic with alpha={self.alpha}' \
                f' (smallest eigenvalue {lowest})'
            raise ValueError(msg)
        pot = self.potential(times, points)
        shifts = [(self.period, np.zeros(self.dimension))]
        shifts += [(0.0, self.periods[i] * np.eye(self.dimension)[i])
                   for i in range(self.dimension)]
        for dt, dq in shifts:
            kin2 = self.kinetic(times + dt, points + dq)
            pot2 = self.potential(times + dt, points + dq)
            pscale = max(1.0, float(np.abs(pot).max()))
            if np.abs(kin2 - kin).max() > PERIODIC_TOL * scale or \
                    np.abs(pot2 - pot).max() > PERIODIC_TOL * pscale:
                msg = f'{self.name}: L or W not periodic under ' \
                    f'(t, q) -> (t + {dt}, q + {dq.tolist()})'
                raise ValueError(msg)
        grid = np.arange(256) * self.period / 256
        force = self.forcing(grid)
        if np.abs(force.mean(axis=0)).max() > \
                MEAN_TOL * max(float(np.abs(force).max()), 1e-300):
            msg = f'{self.name}: forcing f does not have zero mean'
            raise ValueError(msg)
        if self.symmetry is not None:
            self._validate_symmetry()

    def _validate_symmetry(self):
        """Check that beta(h) preserves the period lattice."""
        if self.symmetry.rank != self.dimension:
            msg = f'{self.name}: symmetry of rank {self.symmetry.rank} ' \
                f'on R^{self.dimension}'
            raise ValueError(msg)
        scale = np.diag(self.periods)
        unscale = np.diag(1 / self.periods)
        for h in range(self.symmetry.point_group.order):
            conj = unscale @ self.symmetry.beta(h) @ scale
            if np.abs(conj - np.round(conj)).max() > SYMMETRY_TOL:
                msg = f'{self.name}: beta({h}) does not preserve the ' \
                    'period lattice'
                raise ValueError(msg)

    def __str__(self):
        """Return a one-line description."""
        sym = self.symmetry.name if self.symmetry is not None else 'none'
        return f'{self.name}: n={self.dimension} T0={self.period:g} ' \
            f'periods={self.periods.tolist()} K={self.modes} symmetry={sym}'


def _check_finite(array, what, times):
    """Raise EvaluationError at the first node with a non-finite value."""
    array = np.asarray(array)
    bad = ~np.isfinite(array.reshape(len(times), -1)).all(axis=1)
    if bad.any():
        raise EvaluationError(what, float(times[np.argmax(bad)]))


def _check_loop(p, q):
    if q.dimension != p.dimension or not np.isclose(q.period, p.period):
        msg = f'loop (n={q.dimension}, T0={q.period}) does not fit {p.name}'
        raise ValueError(msg)


def _node_terms(p, q):
    """Return times, positions, velocities and callback values at nodes."""
    _check_loop(p, q)
    times = q.disc.times
    pos, vel = q.values(), q.velocities()
    kin = p.kinetic(times, pos)
    _check_finite(kin, 'kinetic matrix L', times)
    pot = p.potential(times, pos)
    _check_finite(pot, 'potential W', times)
    force = p.forcing(times)
    _check_finite(force, 'forcing f', times)
    return times, pos, vel, kin, pot, force


def evaluate(p, q):
    """Return phi(q) by trapezoidal quadrature."""
    _, pos, vel, kin, pot, force = _node_terms(p, q)
    kinetic = 0.5 * np.einsum('ja,jab,jb->j', vel, kin, vel)
    integrand = kinetic - pot + np.einsum('ja,ja->j', force, pos)
    return float(q.disc.weight * integrand.sum())


def dual(p, q):
    """Return the coefficient derivative d phi / dX, shape (2K+1, n)."""
    times, pos, vel, kin, _, force = _node_terms(p, q)
    jac = p.kinetic_jacobian(times, pos)
    _check_finite(jac, 'kinetic jacobian dL/dq', times)
    grad_w = p.potential_gradient(times, pos)
    _check_finite(grad_w, 'potential gradient W_q', times)
    momentum = np.einsum('jab,jb->ja', kin, vel)
    source = 0.5 * np.einsum('ja,jiab,jb->ji', vel, jac, vel) - grad_w + force
    disc = q.disc
    return disc.weight * (disc.derivative.T @ momentum +
                          disc.synthesis.T @ source)


def gradient(p, q):
    """Return the H1 gradient of phi at q as a loop."""
    return LoopState(dual(p, q) / q.disc.gram[:, None], q.period)


def gradient_norm(p, q):
    """Return the H1 norm of the gradient."""
    return gradient(p, q).h1_norm()


def _require_symmetry(p):
    if p.symmetry is None:
        msg = f'{p.name} declares no symmetry'
        raise ValueError(msg)


def apply_group(p, g, q):
    """Apply (m, h): q -> T*m + beta(h) q (coefficientwise)."""
    _require_symmetry(p)
    coeffs = q.coeffs @ g.linear.T
    coeffs[0] += p.periods * np.asarray(g.translation)
    return LoopState(coeffs, q.period)


def linear_part(p, g, q):
    """Apply only beta(h); this is how the group acts on gradients."""
    _require_symmetry(p)
    return LoopState(q.coeffs @ g.linear.T, q.period)


def apply_word(p, word, q):
    """Apply the elements of word right to left."""
    for g in reversed(word):
        q = apply_group(p, g, q)
    return q


def group_generators(p):
    """Return the unit translations and point generators, with inverses."""
    _require_symmetry(p)
    crystal = p.symmetry
    gens = []
    for i in range(p.dimension):
        unit = np.eye(p.dimension, dtype=np.int64)[i]
        gens += [crystal.element(unit), crystal.element(-unit)]
    group = crystal.point_group
    zero = np.zeros(p.dimension, dtype=np.int64)
    for gen in group.generators:
        idx = group.index[gen]
        gens += [crystal.element(zero, idx),
                 crystal.element(zero, int(group.inverses[idx]))]
    return gens


def random_word(p, rng, length=3):
    """Return a random word of 1..length generators."""
    gens = group_generators(p)
    size = int(rng.integers(1, length + 1))
    return [gens[int(i)] for i in rng.integers(0, len(gens), size)]


class InvarianceReport:
    """Largest observed |phi(gq) - phi(q)| over random samples."""

    # pylint: disable=too-few-public-methods
    def __init__(self, samples, max_error, max_ratio):
        """Record the sample count and the worst errors."""
        self.samples = samples
        self.max_error = max_error
        self.max_ratio = max_ratio
        self.passed = max_ratio <= INVARIANCE_TOL

    def __str__(self):
        """Return the report line."""
        verdict = 'PASS' if self.passed else 'FAIL'
        return f'invariance samples={self.samples} ' \
            f'max_error={self.max_error:.3e} {verdict}'


def invariance_check(p, samples, rng=None, modes=None):
    """Compare phi(gq) with phi(q) for random loops and words."""
    _require_symmetry(p)
    if rng is None:
        rng = np.random.default_rng(1)
    modes = p.modes if modes is None else modes
    max_error = max_ratio = 0.0
    for _ in range(samples):
        q = random_loop(rng, p.dimension, modes, p.period,
                        scale=0.5, mean_scale=float(p.periods.max()))
        word = random_word(p, rng)
        value = evaluate(p, q)
        error = abs(evaluate(p, apply_word(p, word, q)) - value)
        max_error = max(max_error, error)
        max_ratio = max(max_ratio, error / (1 + abs(value)))
    report = InvarianceReport(samples, max_error, max_ratio)
    logging.info('%s: %s', p.name, report)
    return report


def normalize_to_region(p, q):
    """Translate q so that every mean coordinate lies in [0, T_i).

    Returns the translated loop and the integer translation applied.
    """
    inside = (q.mean >= 0) & (q.mean < p.periods)
    shift = np.where(inside, 0.0, -np.floor(q.mean / p.periods))
    shift = shift.astype(np.int64)
    mean = q.mean + shift * p.periods
    # rounding can land exactly on T_i
    over = mean >= p.periods
    shift[over] -= 1
    mean = np.where(over, np.maximum(mean - p.periods, 0.0),
                    np.maximum(mean, 0.0))
    coeffs = q.coeffs.copy()
    coeffs[0] = np.where(inside, q.mean, mean)
    return LoopState(coeffs, q.period), tuple(int(s) for s in shift)


def spectral_derivative(values, period):
    """Differentiate periodic node samples along axis 0 via the FFT."""
    nodes = values.shape[0]
    freq = np.fft.rfft(values, axis=0)
    omegas = 2 * np.pi * np.arange(freq.shape[0]) / period
    if nodes % 2 == 0:
        omegas[-1] = 0.0
    return np.fft.irfft(1j * omegas[:, None] * freq, n=nodes, axis=0)


def ode_residual(p, q):
    """Return the normalised sup-norm Euler-Lagrange residual.

    d/dt (L q') - 1/2 <dL/dq q', q'> + W_q - f, divided by
    1 + sup |f| + sup |W_q|.
    """
    times, pos, vel, kin, _, force = _node_terms(p, q)
    jac = p.kinetic_jacobian(times, pos)
    _check_finite(jac, 'kinetic jacobian dL/dq', times)
    grad_w = p.potential_gradient(times, pos)
    _check_finite(grad_w, 'potential gradient W_q', times)
    momentum = np.einsum('jab,jb->ja', kin, vel)
    residual = spectral_derivative(momentum, q.period) \
        - 0.5 * np.einsum('ja,jiab,jb->ji', vel, jac, vel) + grad_w - force
    sup = np.linalg.norm(residual, axis=1).max()
    scale = 1 + np.linalg.norm(force, axis=1).max() + \
        np.linalg.norm(grad_w, axis=1).max()
    return float(sup / scale)


def orbit_distance(p, q1, q2):
    """Return min over h in P of |beta(h) q1 - q2| modulo the lattice.

    The mean difference is wrapped to the nearest lattice translate.
    """
    _check_loop(p, q1)
    _check_loop(p, q2)
    if p.symmetry is None:
        linears = [np.eye(p.dimension)]
    else:
        linears = p.symmetry.rep
    gram = q1.disc.gram[:, None]
    best = np.inf
    for linear in linears:
        diff = q1.coeffs @ linear.T - q2.coeffs
        diff[0] -= p.periods * np.round(diff[0] / p.periods)
        best = min(best, float(np.sqrt(np.sum(gram * diff * diff))))
    return best
