# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Truncated Fourier representation of T0-periodic loops in R^n.

A loop with K modes is stored as a (2K+1, n) coefficient array X:
row 0 is the mean a_0, rows 1..K the cosine vectors a_k and rows
K+1..2K the sine vectors b_k, so that

    q(t) = a_0 + sum_k a_k cos(w_k t) + b_k sin(w_k t),  w_k = 2 pi k / T0.

The H1 inner product is diagonal in these coordinates with weights T0
for the mean and (T0/2)(1 + w_k^2) for each oscillatory row.
"""

import math
import re
from functools import lru_cache

import numpy as np

from equipass import sources
from equipass.types import InputError

_header_re = re.compile(r'^loop\s+n=(\d+)\s+K=(\d+)(?:\s+T0=(\S+))?$')


class Discretization:
    """Quadrature nodes and synthesis matrices for a given (T0, K)."""

    # pylint: disable=too-few-public-methods
    def __init__(self, period, modes):
        """Build M = max(64, 4K+1) uniform nodes over one period."""
        if period <= 0:
            raise ValueError(period)
        if modes < 0:
            raise ValueError(modes)
        self.period = period
        self.modes = modes
        self.nodes = max(64, 4 * modes + 1)
        self.times = np.arange(self.nodes) * period / self.nodes
        self.weight = period / self.nodes
        self.omegas = 2 * np.pi * np.arange(1, modes + 1) / period
        phase = np.outer(self.times, self.omegas)
        cos, sin = np.cos(phase), np.sin(phase)
        ones = np.ones((self.nodes, 1))
        # q = C X and q' = D X at the nodes
        self.synthesis = np.hstack([ones, cos, sin])
        self.derivative = np.hstack([np.zeros((self.nodes, 1)),
                                     -sin * self.omegas, cos * self.omegas])
        osc = 0.5 * period * (1 + self.omegas ** 2)
        self.gram = np.concatenate([[period], osc, osc])


@lru_cache(maxsize=32)
def discretization(period, modes):
    """Return the shared Discretization for (period, modes)."""
    return Discretization(period, modes)


class LoopState:
    """A T0-periodic loop given by its Fourier coefficients."""

    def __init__(self, coeffs, period):
        """Construct a loop from a (2K+1, n) coefficient array."""
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim != 2 or coeffs.shape[0] % 2 != 1:
            msg = f'coefficient array of shape {coeffs.shape}'
            raise ValueError(msg)
        if not np.isfinite(coeffs).all():
            msg = 'non-finite loop coefficients'
            raise ValueError(msg)
        self.coeffs = coeffs
        self.period = float(period)

    @property
    def dimension(self):
        """Return n."""
        return self.coeffs.shape[1]

    @property
    def modes(self):
        """Return K."""
        return self.coeffs.shape[0] // 2

    @property
    def mean(self):
        """Return a_0 (a view)."""
        return self.coeffs[0]

    @property
    def cos(self):
        """Return the cosine rows (a view)."""
        return self.coeffs[1:self.modes + 1]

    @property
    def sin(self):
        """Return the sine rows (a view)."""
        return self.coeffs[self.modes + 1:]

    @property
    def disc(self):
        """Return the discretization matching this loop."""
        return discretization(self.period, self.modes)

    def _check(self, other):
        if other.coeffs.shape != self.coeffs.shape or \
                not math.isclose(other.period, self.period):
            msg = 'loops of different shape or period'
            raise ValueError(msg)

    def __add__(self, other):
        """Add two loops."""
        self._check(other)
        return LoopState(self.coeffs + other.coeffs, self.period)

    def __sub__(self, other):
        """Subtract two loops."""
        self._check(other)
        return LoopState(self.coeffs - other.coeffs, self.period)

    def __mul__(self, scalar):
        """Scale a loop."""
        return LoopState(float(scalar) * self.coeffs, self.period)

    __rmul__ = __mul__

    def __neg__(self):
        """Negate a loop."""
        return LoopState(-self.coeffs, self.period)

    def copy(self):
        """Return an independent copy."""
        return LoopState(self.coeffs.copy(), self.period)

    def h1_inner(self, other):
        """Return the H1 inner product with another loop.

        >>> q = LoopState([[1.0]], 2.0)
        >>> q.h1_inner(q)
        2.0
        """
        self._check(other)
        return float(np.sum(self.disc.gram[:, None] * self.coeffs *
                            other.coeffs))

    def h1_norm(self):
        """Return the H1 norm sqrt(int |q'|^2 + int |q|^2)."""
        return math.sqrt(self.h1_inner(self))

    def values(self):
        """Return q at the quadrature nodes, shape (M, n)."""
        return self.disc.synthesis @ self.coeffs

    def velocities(self):
        """Return q' at the quadrature nodes, shape (M, n)."""
        return self.disc.derivative @ self.coeffs

    def sample(self, times):
        """Evaluate q at arbitrary times, shape (len(times), n)."""
        times = np.asarray(times, dtype=float)
        phase = np.outer(times, self.disc.omegas)
        basis = np.hstack([np.ones((len(times), 1)), np.cos(phase),
                           np.sin(phase)])
        return basis @ self.coeffs

    def __repr__(self):
        """Return a short description."""
        return f'LoopState(n={self.dimension}, K={self.modes}, ' \
            f'mean={self.mean.tolist()})'


def constant_loop(values, modes, period):
    """Return the constant loop with the given mean."""
    values = np.atleast_1d(np.asarray(values, dtype=float))
    coeffs = np.zeros((2 * modes + 1, len(values)))
    coeffs[0] = values
    return LoopState(coeffs, period)


def zero_loop(dimension, modes, period):
    """Return the zero loop."""
    return constant_loop(np.zeros(dimension), modes, period)


def random_loop(rng, dimension, modes, period, scale=1.0, mean_scale=None):
    """Return a loop with normal coefficients decaying like 1/(1+k).

    mean_scale defaults to scale.
    """
    if mean_scale is None:
        mean_scale = scale
    decay = 1.0 / (1.0 + np.arange(1, modes + 1))
    weights = np.concatenate([[mean_scale], scale * decay, scale * decay])
    coeffs = rng.standard_normal((2 * modes + 1, dimension)) * weights[:, None]
    return LoopState(coeffs, period)


def format_loop(q):
    """Return the text form of a loop with full repr precision.

    >>> print(format_loop(constant_loop([0.5], 1, 2.0)))
    loop n=1 K=1 T0=2.0
    mean 0.5
    cos 1 0.0
    sin 1 0.0
    """
    lines = [f'loop n={q.dimension} K={q.modes} T0={q.period!r}']
    lines.append('mean ' + ' '.join(repr(float(v)) for v in q.mean))
    for k in range(1, q.modes + 1):
        row = q.coeffs[k]
        lines.append(f'cos {k} ' + ' '.join(repr(float(v)) for v in row))
    for k in range(1, q.modes + 1):
        row = q.coeffs[q.modes + k]
        lines.append(f'sin {k} ' + ' '.join(repr(float(v)) for v in row))
    return '\n'.join(lines)


def parse_loop(text, period=None):
    """Parse a loop from its text form.

    The period comes from the header when present, else from period.
    """
    coeffs = None
    filled = set()
    for lineno, line in sources.lines(text):
        words = line.split()
        if coeffs is None:
            match = _header_re.match(line)
            if match is None:
                msg = f'expected "loop n=<n> K=<K>", got {line!r}'
                raise InputError(msg, lineno)
            dimension, modes = int(match.group(1)), int(match.group(2))
            if match.group(3) is not None:
                period = float(match.group(3))
            coeffs = np.zeros((2 * modes + 1, dimension))
            continue
        if words[0] == 'mean':
            row, values = 0, words[1:]
        elif words[0] in ('cos', 'sin') and len(words) > 1 and \
                words[1].isdigit():
            k = int(words[1])
            if not 1 <= k <= modes:
                msg = f'mode {k} outside 1..{modes}'
                raise InputError(msg, lineno)
            row = k if words[0] == 'cos' else modes + k
            values = words[2:]
        else:
            msg = f'unexpected line {line!r}'
            raise InputError(msg, lineno)
        if len(values) != dimension:
            msg = f'{len(values)} values, expected {dimension}'
            raise InputError(msg, lineno)
        try:
            coeffs[row] = [float(v) for v in values]
        except ValueError as exc:
            msg = f'bad coefficient line {line!r}'
            raise InputError(msg, lineno) from exc
        filled.add(row)
    if coeffs is None:
        msg = 'empty loop file'
        raise InputError(msg)
    if len(filled) != coeffs.shape[0]:
        msg = f'{coeffs.shape[0] - len(filled)} coefficient rows missing'
        raise InputError(msg)
    if period is None:
        msg = 'loop period unknown'
        raise InputError(msg)
    return LoopState(coeffs, period)


def load_loop(location, period=None):
    """Load a loop file from a path or URL."""
    return parse_loop(sources.read_text(location), period)
