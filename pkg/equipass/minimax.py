# Copyright (C) 2012, 2013, 2014 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Mountain-pass search and classification of critical orbits."""

import logging
import math

import numpy as np

from equipass import configfile
from equipass.deformation import (DeformationParams, NeighborhoodDeformation,
                                  deformation_flow)
from equipass.functional import (apply_group, dual, evaluate, gradient,
                                 invariance_check, normalize_to_region,
                                 ode_residual, orbit_distance)
from equipass.loops import LoopState, random_loop
from equipass.types import FlowError, PreconditionError

# Armijo sufficient-decrease constant for descent steps.
ARMIJO = 1e-4
# Smallest backtracking step before a descent gives up.
MIN_STEP = 1e-14
# Newton iterations stop below this gradient norm.
NEWTON_TOL = 1e-12
# Halvings of the climbing step before the smallest one is taken.
CLIMB_HALVINGS = 6


def _optional_float(section, option):
    value = section.get(option, '').strip()
    return float(value) if value else None


class SolverSettings:
    """Solver options from the [solver] section of a config."""

    # pylint: disable=too-many-instance-attributes
    # pylint: disable=too-few-public-methods
    def __init__(self, section=None):
        """Read settings from a config section (default: [solver])."""
        if section is None:
            section = configfile.config['solver']
        self.pathpoints = section.getint('pathpoints')
        self.sweeps = section.getint('sweeps')
        self.gtol = section.getfloat('gtol')
        self.flow_step = section.getfloat('flow_step')
        self.rim_radius = section.getfloat('rim_radius')
        self.rim_samples = section.getint('rim_samples')
        self.rim_level = _optional_float(section, 'rim_level')
        self.delta = _optional_float(section, 'delta')
        self.epsilon = _optional_float(section, 'epsilon')
        self.descent_iterations = section.getint('descent_iterations')
        self.newton_iterations = section.getint('newton_iterations')
        self.invariance_samples = section.getint('invariance_samples')
        self.orbit_tol = section.getfloat('orbit_tol')
        self.seed = section.getint('seed')
        if self.pathpoints < 2:
            msg = f'pathpoints={self.pathpoints} must be at least 2'
            raise ValueError(msg)
        if not self.rim_radius > 0 or not self.gtol > 0:
            msg = 'rim_radius and gtol must be positive'
            raise ValueError(msg)


class MountainPassConfig:
    """Base point, far point, rim level and radius, path and sweep limits."""

    # pylint: disable=too-many-instance-attributes
    # pylint: disable=too-few-public-methods
    # pylint: disable=too-many-arguments
    def __init__(self, base, far, rim_level, rim_radius, pathpoints=40,
                 sweeps=200, gtol=1e-6, flow_step=0.5, rim_samples=32,
                 perturbation=0.0, epsilon=None, flow_steps=4):
        """Construct a configuration; rim_level None means max(phi).

        Each sweep deforms the path with DeformationParams at the
        current maximum, strip half-width epsilon (default
        0.01 (1 + |max|)) and delta = flow_step, integrated in
        flow_steps steps.
        """
        self.base = base
        self.far = far
        self.rim_level = rim_level
        self.rim_radius = rim_radius
        self.pathpoints = pathpoints
        self.sweeps = sweeps
        self.gtol = gtol
        self.flow_step = flow_step
        self.rim_samples = rim_samples
        self.perturbation = perturbation
        self.epsilon = epsilon
        self.flow_steps = flow_steps


class CriticalCandidate:
    """A (nearly) critical loop with its diagnostics."""

    # pylint: disable=too-few-public-methods
    # pylint: disable=too-many-arguments
    def __init__(self, loop, value, gradient_norm, residual, converged=True,
                 kind='critical'):
        """Record a candidate; the orbit id is set by classify_orbits."""
        self.loop = loop
        self.value = value
        self.gradient_norm = gradient_norm
        self.residual = residual
        self.converged = converged
        self.kind = kind
        self.orbit_id = None

    def __repr__(self):
        """Return the candidate summary."""
        return f'CriticalCandidate({self.kind}, value={self.value:.10g}, ' \
            f'gnorm={self.gradient_norm:.3e}, orbit={self.orbit_id})'


def make_candidate(p, q, gtol, kind='critical'):
    """Normalize q into S and measure it (gtol is relative to 1 + |phi|)."""
    q, _ = normalize_to_region(p, q)
    gnorm = gradient(p, q).h1_norm()
    value = evaluate(p, q)
    return CriticalCandidate(q, value, gnorm, ode_residual(p, q),
                             gnorm <= gtol * (1 + abs(value)), kind)


def _backtrack(p, q, grad, gnorm, value, step):
    """Armijo backtracking along -grad; returns (loop, value, step)."""
    while step >= MIN_STEP:
        trial = q - grad * step
        trial_value = evaluate(p, trial)
        if trial_value <= value - ARMIJO * step * gnorm ** 2:
            return trial, trial_value, step
        step /= 2
    return q, value, 0.0


def descend(p, q, iterations=500, gtol=1e-6):
    """Plain H1 gradient descent with backtracking."""
    value = evaluate(p, q)
    step = 1.0
    for i in range(iterations):
        grad = gradient(p, q)
        gnorm = grad.h1_norm()
        if gnorm <= gtol:
            logging.debug('descent converged after %d iterations', i)
            break
        q, value, step = _backtrack(p, q, grad, gnorm, value,
                                    min(2 * step, 1.0))
        if step == 0:
            logging.debug('descent stalled at gnorm %.3e', gnorm)
            break
    return q


def _hessian(p, q, scale=1e-6):
    """Central finite-difference Jacobian of the coefficient derivative."""
    flat = q.coeffs.ravel()
    size = flat.size
    step = scale * (1 + float(np.abs(flat).max()))
    jac = np.empty((size, size))
    for j in range(size):
        delta = np.zeros(size)
        delta[j] = step
        plus = dual(p, LoopState((flat + delta).reshape(q.coeffs.shape),
                                 q.period))
        minus = dual(p, LoopState((flat - delta).reshape(q.coeffs.shape),
                                  q.period))
        jac[:, j] = (plus - minus).ravel() / (2 * step)
    return 0.5 * (jac + jac.T)


def polish(p, q, iterations=50, gtol=NEWTON_TOL):
    """Newton iteration on the discrete gradient.

    Descent is repelled by saddle points; Newton converges to minima
    and saddles alike. Steps are backtracked on the gradient norm.
    """
    gnorm = gradient(p, q).h1_norm()
    for _ in range(iterations):
        if gnorm <= gtol:
            break
        rhs = -dual(p, q).ravel()
        move = np.linalg.lstsq(_hessian(p, q), rhs, rcond=None)[0]
        move = LoopState(move.reshape(q.coeffs.shape), q.period)
        alpha = 1.0
        while alpha >= 1e-4:
            trial = q + move * alpha
            trial_norm = gradient(p, trial).h1_norm()
            if trial_norm < gnorm:
                break
            alpha /= 2
        else:
            logging.debug('Newton stalled at gnorm %.3e', gnorm)
            break
        q, gnorm = trial, trial_norm
    return q


class GeometryReport:
    """Sampled rim minimum against the rim level."""

    # pylint: disable=too-few-public-methods
    def __init__(self, level, rim_min, margin, violations):
        """Record the check; it passes when rim_min > level + margin."""
        self.level = level
        self.rim_min = rim_min
        self.margin = margin
        self.violations = violations
        self.passed = rim_min > level + margin and not violations

    def __str__(self):
        """Return the report line."""
        verdict = 'PASS' if self.passed else 'FAIL'
        text = f'geometry level={self.level:.10g} ' \
            f'rim_min={self.rim_min:.10g} {verdict}'
        for violation in self.violations:
            text += f'\n  {violation}'
        return text


def rim_directions(p, modes, rng, samples):
    """Return unit-H1 directions: mean axes, first modes, random ones."""
    shape = (2 * modes + 1, p.dimension)
    directions = []
    rows = [0] if modes == 0 else [0, 1, modes + 1]
    for row in rows:
        for i in range(p.dimension):
            for sign in (1.0, -1.0):
                coeffs = np.zeros(shape)
                coeffs[row, i] = sign
                directions.append(coeffs)
    for _ in range(samples):
        directions.append(random_loop(rng, p.dimension, modes,
                                      p.period).coeffs)
    loops = [LoopState(d, p.period) for d in directions]
    return [d * (1 / d.h1_norm()) for d in loops]


def geometry_check(p, cfg, rng=None):
    """Sample phi on the sphere of radius r about the base point."""
    if rng is None:
        rng = np.random.default_rng(1)
    base_value = evaluate(p, cfg.base)
    far_value = evaluate(p, cfg.far)
    level = cfg.rim_level
    if level is None:
        level = max(base_value, far_value)
    violations = []
    if base_value > level:
        violations.append(f'phi(base) = {base_value:.10g} above level')
    if far_value > level:
        violations.append(f'phi(e) = {far_value:.10g} above level')
    if (cfg.far - cfg.base).h1_norm() <= cfg.rim_radius:
        violations.append('e lies inside the rim')
    rim_min = math.inf
    for direction in rim_directions(p, cfg.base.modes, rng, cfg.rim_samples):
        rim_min = min(rim_min,
                      evaluate(p, cfg.base + direction * cfg.rim_radius))
    margin = 1e-8 * (1 + abs(level))
    report = GeometryReport(level, rim_min, margin, violations)
    logging.info('%s: %s', p.name, report)
    return report


def _reparametrize(path):
    """Redistribute the interior points uniformly in H1 arclength."""
    gram = np.sqrt(path[0].disc.gram)[:, None]
    stack = np.array([q.coeffs for q in path])
    lengths = [0.0]
    for a, b in zip(stack[:-1], stack[1:]):
        lengths.append(lengths[-1] + float(np.linalg.norm(gram * (b - a))))
    lengths = np.array(lengths)
    if lengths[-1] == 0:
        return path
    targets = np.linspace(0, lengths[-1], len(path))
    flat = stack.reshape(len(path), -1)
    moved = np.empty_like(flat)
    for j in range(flat.shape[1]):
        moved[:, j] = np.interp(targets, lengths, flat[:, j])
    moved[0], moved[-1] = flat[0], flat[-1]
    shape = path[0].coeffs.shape
    return [LoopState(row.reshape(shape), path[0].period) for row in moved]


def initial_path(cfg, rng=None):
    """Return the straight path from base to far, optionally perturbed."""
    count = cfg.pathpoints
    path = [cfg.base * (1 - i / count) + cfg.far * (i / count)
            for i in range(count + 1)]
    if cfg.perturbation and rng is not None:
        base = cfg.base
        for i in range(1, count):
            noise = random_loop(rng, base.dimension, base.modes, base.period)
            path[i] = path[i] + noise * (cfg.perturbation / noise.h1_norm())
    return path


def _climb(p, path, top, step):
    """Move path[top] up along the path tangent and down across it.

    The step is halved until the gradient norm decreases; when no
    halving succeeds the smallest trial step is taken.
    """
    q = path[top]
    grad = gradient(p, q)
    gnorm = grad.h1_norm()
    tangent = path[top + 1] - path[top - 1]
    length = tangent.h1_norm()
    if length > 0:
        tangent = tangent * (1 / length)
        force = tangent * (2 * grad.h1_inner(tangent)) - grad
    else:
        force = -grad
    trial = q
    for _ in range(CLIMB_HALVINGS + 1):
        trial = q + force * step
        if gradient(p, trial).h1_norm() < gnorm:
            break
        step /= 2
    return trial


def _deform_path(p, path, top, dp, sweep):
    """Flow every interior point except path[top] by eta(., 1)."""
    for i in range(1, len(path) - 1):
        if i == top:
            continue
        try:
            path[i] = deformation_flow(p, path[i], dp)
        except FlowError as exc:
            logging.debug('sweep %d: point %d kept: %s', sweep, i, exc)


def mountain_pass(p, cfg, rng=None, report=None):
    """Return the polished maximum of a min-max path from base to far.

    Each sweep lowers the path with the saturated deformation flow at
    the current maximum c, moves the highest interior point by a
    climbing step and re-equidistributes both halves of the path
    around it. Running out of sweeps marks the candidate unconverged.
    """
    if report is None:
        report = geometry_check(p, cfg, rng)
    if not report.passed:
        msg = f'{p.name}: no mountain-pass geometry ({report})'
        raise PreconditionError(msg)
    path = initial_path(cfg, rng)
    values = [evaluate(p, q) for q in path]
    top, gnorm = 1, math.inf
    exhausted = True
    for sweep in range(cfg.sweeps):
        top = 1 + int(np.argmax(values[1:-1]))
        level = values[top]
        gnorm = gradient(p, path[top]).h1_norm()
        if logging.getLogger().isEnabledFor(logging.DEBUG):
            logging.debug('sweep %d: max %.10g at %d, gnorm %.3e', sweep,
                          level, top, gnorm)
        if gnorm <= cfg.gtol * (1 + abs(level)):
            exhausted = False
            break
        epsilon = cfg.epsilon
        if epsilon is None:
            epsilon = 0.01 * (1 + abs(level))
        dp = DeformationParams(level, epsilon, cfg.flow_step,
                               saturated=True, steps=cfg.flow_steps)
        _deform_path(p, path, top, dp, sweep)
        path[top] = _climb(p, path, top, cfg.flow_step)
        path = _reparametrize(path[:top + 1])[:-1] + \
            _reparametrize(path[top:])
        values = [evaluate(p, q) for q in path]
    if exhausted:
        top = 1 + int(np.argmax(values[1:-1]))
        gnorm = gradient(p, path[top]).h1_norm()
        logging.warning('%s: %d sweeps exhausted at gnorm %.3e', p.name,
                        cfg.sweeps, gnorm)
    best = polish(p, path[top])
    candidate = make_candidate(p, best, cfg.gtol, 'mountain-pass')
    if exhausted:
        candidate.converged = False
    logging.info('mountain pass: %s', candidate)
    return candidate


def classify_orbits(p, candidates, tol):
    """Assign orbit ids (in discovery order) by orbit distance.

    Candidates closer than tol * (1 + |q2|) share an orbit; the
    relation is closed transitively.
    """
    parent = list(range(len(candidates)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, first in enumerate(candidates):
        for j in range(i + 1, len(candidates)):
            second = candidates[j]
            dist = orbit_distance(p, first.loop, second.loop)
            if dist <= tol * (1 + second.loop.h1_norm()):
                root_i, root_j = find(i), find(j)
                if root_i != root_j:
                    parent[max(root_i, root_j)] = min(root_i, root_j)
    ids = {}
    for i, cand in enumerate(candidates):
        cand.orbit_id = ids.setdefault(find(i), len(ids))
    return candidates


def neighborhood_deformation(p, candidates, radius, dp):
    """Return the deformation that fixes the radius-neighbourhood of G.K_c."""
    return NeighborhoodDeformation(p, [c.loop for c in candidates], radius,
                                   dp)


def default_delta(p):
    """Return a tenth of the smallest spatial period."""
    return float(p.periods.min()) / 10


def run(context):
    """Search for critical orbits of context.problem.

    Fills in context.geometry, context.invariance, context.candidates
    and context.neighborhood; stops early when a check fails.
    """
    p = context.problem
    settings = context.settings
    rng = np.random.default_rng(settings.seed)
    start = random_loop(rng, p.dimension, p.modes, p.period, scale=1e-2)
    base = polish(p, descend(p, start, settings.descent_iterations,
                             settings.gtol),
                  settings.newton_iterations)
    minimum = make_candidate(p, base, settings.gtol, 'minimum')
    base = minimum.loop
    unit = np.zeros(p.dimension, dtype=np.int64)
    unit[0] = 1
    far = apply_group(p, p.symmetry.element(unit), base)
    cfg = MountainPassConfig(base, far, settings.rim_level,
                             settings.rim_radius, settings.pathpoints,
                             settings.sweeps, settings.gtol,
                             settings.flow_step, settings.rim_samples,
                             context.perturbation, settings.epsilon)
    context.geometry = geometry_check(p, cfg, rng)
    if not context.geometry.passed:
        return context
    context.invariance = invariance_check(p, settings.invariance_samples, rng)
    if not context.invariance.passed:
        return context
    passage = mountain_pass(p, cfg, rng, context.geometry)
    context.candidates = classify_orbits(p, [minimum, passage],
                                         settings.orbit_tol)
    delta = settings.delta if settings.delta is not None else default_delta(p)
    epsilon = settings.epsilon
    if epsilon is None:
        epsilon = 0.01 * (1 + abs(passage.value))
    dp = DeformationParams(passage.value, epsilon, delta, saturated=True)
    samples = _reparametrize(initial_path(cfg))
    deform = neighborhood_deformation(p, [passage], delta, dp)
    context.neighborhood = deform.verify(samples)
    return context
