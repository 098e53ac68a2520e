# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""The quantitative deformation flow.

The flow integrates w' = -chi(w) grad phi(w) / |grad phi(w)| over
[0, delta * t], where the cutoff chi is 1 on
phi^-1[c - eps, c + eps] intersected with the delta-neighbourhood of
the region S and 0 outside phi^-1[c - 2 eps, c + 2 eps] intersected
with the 2 delta-neighbourhood, piecewise linear in between. The
field has norm at most 1, so no point moves further than delta * t.
"""

import logging
import math

import numpy as np

from equipass import configfile
from equipass.functional import evaluate, gradient, orbit_distance
from equipass.types import FlowError

# Relative size of a decrease that cannot be resolved in floating point.
ROUNDING = 64 * np.finfo(float).eps


def clamp(x):
    """Clamp to [0, 1].

    >>> clamp(-0.5), clamp(0.25), clamp(3)
    (0.0, 0.25, 1.0)
    """
    return float(min(1.0, max(0.0, x)))


class DeformationParams:
    """Level c, strip half-width epsilon and region inflation delta."""

    # pylint: disable=too-few-public-methods
    # pylint: disable=too-many-arguments
    def __init__(self, level, epsilon, delta, saturated=False, steps=None,
                 step_floor=None):
        """Construct flow parameters.

        saturated selects the distance to G.S (which is the whole
        space) instead of the distance to the box S. Only the saturated
        flow commutes with the group; the box cutoff is not invariant
        under lattice translations.
        """
        if not epsilon > 0 or not delta > 0:
            msg = f'epsilon={epsilon} and delta={delta} must be positive'
            raise ValueError(msg)
        self.level = float(level)
        self.epsilon = float(epsilon)
        self.delta = float(delta)
        self.saturated = saturated
        if steps is None:
            steps = configfile.getint('deformation', 'steps')
        if step_floor is None:
            step_floor = configfile.getfloat('deformation', 'step-floor')
        if steps < 1:
            raise ValueError(steps)
        self.steps = steps
        self.step_floor = step_floor

    @property
    def gradient_bound(self):
        """Return 8 epsilon / delta."""
        return 8 * self.epsilon / self.delta

    def __repr__(self):
        """Return the parameters."""
        return f'DeformationParams(c={self.level}, eps={self.epsilon}, ' \
            f'delta={self.delta}, saturated={self.saturated})'


def region_distance(p, q, saturated=False):
    """Return the H1 distance from q to S (0 for the saturated region).

    S only constrains the mean, so this is sqrt(T0) times the distance
    of the mean to the box [0, T_1] x ... x [0, T_n].
    """
    if saturated:
        return 0.0
    excess = q.mean - np.clip(q.mean, 0, p.periods)
    return math.sqrt(q.period) * float(np.linalg.norm(excess))


def cutoff(p, q, dp, value=None):
    """Return chi(q) in [0, 1]."""
    if value is None:
        value = evaluate(p, q)
    strip = clamp((2 * dp.epsilon - abs(value - dp.level)) / dp.epsilon)
    if strip == 0:
        return 0.0
    dist = region_distance(p, q, dp.saturated)
    return strip * clamp((2 * dp.delta - dist) / dp.delta)


class _Field:
    """The cutoff descent field, with an optional extra weight."""

    # pylint: disable=too-few-public-methods
    def __init__(self, p, dp, extra=None):
        self.p = p
        self.dp = dp
        self.extra = extra
        self.warned = False

    def weight(self, q, value=None):
        chi = cutoff(self.p, q, self.dp, value)
        if chi and self.extra is not None:
            chi *= self.extra(q)
        return chi

    def __call__(self, q):
        chi = self.weight(q)
        if chi == 0:
            return q * 0.0, 0.0, 0.0
        grad = gradient(self.p, q)
        norm = grad.h1_norm()
        if norm == 0:
            return q * 0.0, chi, 0.0
        if norm < self.dp.gradient_bound and not self.warned:
            logging.debug('gradient norm %.3e below 8 eps / delta = %.3e',
                            norm, self.dp.gradient_bound)
            self.warned = True
        return grad * (-chi / norm), chi, norm


def _rk4(field, q, step):
    """One classical Runge-Kutta step; returns (new loop, chi, |grad|)."""
    k1, chi, norm = field(q)
    k2, _, _ = field(q + k1 * (step / 2))
    k3, _, _ = field(q + k2 * (step / 2))
    k4, _, _ = field(q + k3 * step)
    incr = (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6)
    return q + incr, chi, norm


def deformation_flow(p, q, dp, t=1.0, extra=None, history=None):
    """Return eta(q, t), integrating the cutoff field over [0, delta t].

    Steps that increase phi are rejected and the step halved; a step
    below step_floor * delta raises FlowError. If history is a list,
    the value after every accepted step is appended to it.
    """
    if not 0 <= t <= 1:
        msg = f'flow time {t} outside [0, 1]'
        raise ValueError(msg)
    field = _Field(p, dp, extra)
    value = evaluate(p, q)
    if t == 0 or field.weight(q, value) == 0:
        return q.copy()
    horizon = dp.delta * t
    step = horizon / dp.steps
    floor = dp.step_floor * dp.delta
    elapsed = 0.0
    current = q.copy()
    while elapsed < horizon * (1 - 1e-12):
        step = min(step, horizon - elapsed)
        trial, chi, norm = _rk4(field, current, step)
        if chi * norm * step <= ROUNDING * (1 + abs(value)):
            # stationary to working precision
            break
        trial_value = evaluate(p, trial)
        if trial_value > value:
            step /= 2
            if step < floor:
                msg = f'deformation step {step:.3e} below floor at ' \
                    f'value {value!r}'
                raise FlowError(msg)
            continue
        current, value = trial, trial_value
        elapsed += step
        if history is not None:
            history.append(value)
    if logging.getLogger().isEnabledFor(logging.DEBUG):
        logging.debug('flow from %.6g to %.6g, displacement %.3e',
                      evaluate(p, q), value, (current - q).h1_norm())
    return current


def check_gradient_bound(p, samples, dp):
    """Return the samples in the strip whose gradient is below 8 eps/delta."""
    weak = []
    for q in samples:
        if cutoff(p, q, dp) > 0 and \
                gradient(p, q).h1_norm() < dp.gradient_bound:
            weak.append(q)
    if weak:
        logging.warning('%d of %d samples violate the gradient bound %.3e',
                        len(weak), len(samples), dp.gradient_bound)
    return weak


class NeighborhoodReport:
    """Outcome of NeighborhoodDeformation.verify."""

    # pylint: disable=too-few-public-methods
    def __init__(self, checked, failures, worst):
        """Record the number of checked samples and failures."""
        self.checked = checked
        self.failures = failures
        self.worst = worst
        self.passed = failures == 0

    def __str__(self):
        """Return the report line."""
        return f'neighborhood checked={self.checked} ' \
            f'failures={self.failures} worst={self.worst:.6g}'


class NeighborhoodDeformation:
    """Deformation that also vanishes on the orbits of given critical loops.

    The cutoff is multiplied by clamp((d - radius) / radius), where d is
    the orbit distance to the nearest candidate, so the flow is the
    identity within the radius of G.K_c.
    """

    def __init__(self, p, candidates, radius, dp):
        """Construct the deformation around candidates (loops)."""
        if not radius > 0:
            msg = f'neighbourhood radius {radius} must be positive'
            raise ValueError(msg)
        self.p = p
        self.candidates = list(candidates)
        self.radius = radius
        self.dp = dp

    def distance(self, q):
        """Return the orbit distance from q to the nearest candidate."""
        if not self.candidates:
            return math.inf
        return min(orbit_distance(self.p, q, c) for c in self.candidates)

    def weight(self, q):
        """Return the extra cutoff factor at q."""
        return clamp((self.distance(q) - self.radius) / self.radius)

    def __call__(self, q, t=1.0):
        """Return eta(q, t)."""
        extra = self.weight if self.candidates else None
        return deformation_flow(self.p, q, self.dp, t, extra=extra)

    def verify(self, samples):
        """Check phi(eta(q, 1)) <= c - eps for samples outside U.

        Only samples in phi^(c + eps) at orbit distance at least
        2 radius + delta are checked; along their flow lines the extra
        factor stays 1.
        """
        dp = self.dp
        checked = failures = 0
        worst = -math.inf
        for q in samples:
            if self.distance(q) < 2 * self.radius + dp.delta or \
                    evaluate(self.p, q) > dp.level + dp.epsilon:
                continue
            end = evaluate(self.p, self(q))
            checked += 1
            worst = max(worst, end)
            if end > dp.level - dp.epsilon:
                failures += 1
        report = NeighborhoodReport(checked, failures, worst)
        logging.info('%s', report)
        return report
