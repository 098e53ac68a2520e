# Copyright (C) 2012, 2013, 2014 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A catalog of periodic Lagrangian problems.

Every problem has a position-dependent mass factor

    L(t, q) = (1 + mu * sum_i (1 - cos(2 pi q_i / T_i))) I,   mu >= 0,

which is symmetric, elliptic with alpha = 1 and even in q.
"""

import logging

import numpy as np

from equipass import configfile, sources
from equipass.crystal import CrystalGroup
from equipass.functional import PeriodicProblem
from equipass.permgroup import cyclic, trivial
from equipass.utils import parse_quantities, parse_quantity


def _mass(periods, mu):
    """Return the kinetic callback and its q-jacobian."""
    periods = np.asarray(periods, dtype=float)
    size = len(periods)
    ident = np.eye(size)

    def kinetic(_t, q):
        q = np.asarray(q, dtype=float).reshape(-1, size)
        factor = 1 + mu * (1 - np.cos(2 * np.pi * q / periods)).sum(axis=1)
        return factor[:, None, None] * ident

    def kinetic_jacobian(_t, q):
        q = np.asarray(q, dtype=float).reshape(-1, size)
        dfactor = mu * (2 * np.pi / periods) * np.sin(2 * np.pi * q / periods)
        return dfactor[:, :, None, None] * ident

    return kinetic, kinetic_jacobian


def _zero_forcing(size):
    def forcing(t):
        return np.zeros((len(np.atleast_1d(t)), size))
    return forcing


def _cos_forcing(period, amplitude, size):
    def forcing(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        column = amplitude * np.cos(2 * np.pi * t / period)
        return np.repeat(column[:, None], size, axis=1)
    return forcing


def translations(rank):
    """Return the lattice Z^n with trivial point group."""
    return CrystalGroup(f'Z^{rank}', rank, trivial(), [], 2)


def reflections(rank):
    """Return Z^n x| Z/2 with beta = -I."""
    return CrystalGroup(f'Z^{rank}xZ2', rank, cyclic(2),
                        [-np.eye(rank, dtype=np.int64)], 2)


def pendulum(period=2 * np.pi, length=2 * np.pi, amplitude=1.0, mu=0.0,
             forcing='zero', c=0.5, symmetry='dihedral', modes=16):
    """Return the forced pendulum W = A (1 - cos(2 pi q / T_1)).

    forcing is 'zero' or 'cos1' (c cos(2 pi t / T0)); symmetry is
    'dihedral' (beta = -1) or 'translations'.
    """
    if mu < 0:
        msg = f'mass factor mu={mu} must be non-negative'
        raise ValueError(msg)
    kinetic, jacobian = _mass([length], mu)
    wave = 2 * np.pi / length

    def potential(_t, q):
        return amplitude * (1 - np.cos(wave * np.asarray(q)[:, 0]))

    def potential_gradient(_t, q):
        return amplitude * wave * np.sin(wave * np.asarray(q))

    if forcing == 'zero':
        force = _zero_forcing(1)
    elif forcing == 'cos1':
        force = _cos_forcing(period, c, 1)
    else:
        msg = f'unknown forcing {forcing!r}'
        raise ValueError(msg)
    if symmetry == 'dihedral':
        group = reflections(1)
    elif symmetry == 'translations':
        group = translations(1)
    else:
        msg = f'unknown symmetry {symmetry!r}'
        raise ValueError(msg)
    return PeriodicProblem('pendulum', period, [length], kinetic, jacobian,
                           potential, potential_gradient, force, 1.0,
                           symmetry=group, modes=modes)


def coupled(period=2 * np.pi, periods=(2 * np.pi, 2 * np.pi), amplitude=1.0,
            coupling=0.25, mu=0.0, modes=16):
    """Return two pendula coupled through their phase difference.

    W = A (1 - cos k_1 q_1) + A (1 - cos k_2 q_2)
        + kappa (1 - cos(k_1 q_1 - k_2 q_2)),  k_i = 2 pi / T_i,

    which is even in q, so Z^2 x| Z/2 with beta = -I acts.
    """
    if mu < 0:
        msg = f'mass factor mu={mu} must be non-negative'
        raise ValueError(msg)
    periods = np.asarray(periods, dtype=float)
    if periods.shape != (2,):
        msg = 'the coupled pendulum needs two periods'
        raise ValueError(msg)
    kinetic, jacobian = _mass(periods, mu)
    waves = 2 * np.pi / periods

    def potential(_t, q):
        phase = waves * np.asarray(q)
        return amplitude * (1 - np.cos(phase)).sum(axis=1) + \
            coupling * (1 - np.cos(phase[:, 0] - phase[:, 1]))

    def potential_gradient(_t, q):
        phase = waves * np.asarray(q)
        grad = amplitude * waves * np.sin(phase)
        cross = coupling * np.sin(phase[:, 0] - phase[:, 1])
        grad[:, 0] += cross * waves[0]
        grad[:, 1] -= cross * waves[1]
        return grad

    return PeriodicProblem('coupled', period, periods, kinetic, jacobian,
                           potential, potential_gradient, _zero_forcing(2),
                           1.0, symmetry=reflections(2), modes=modes)


def free(period=2 * np.pi, periods=(2 * np.pi,), modes=16):
    """Return the convex toy L = I, W = 0, f = 0."""
    periods = np.asarray(periods, dtype=float).reshape(-1)
    size = len(periods)
    kinetic, jacobian = _mass(periods, 0.0)

    def potential(_t, q):
        return np.zeros(len(q))

    def potential_gradient(_t, q):
        return np.zeros((len(q), size))

    return PeriodicProblem('free', period, periods, kinetic, jacobian,
                           potential, potential_gradient, _zero_forcing(size),
                           1.0, symmetry=translations(size), modes=modes)


catalog = {'pendulum': pendulum, 'coupled': coupled, 'free': free}


def from_config(section):
    """Build a problem from a [problem] config section (key=value)."""
    name = section.get('problem', 'pendulum').strip()
    if name not in catalog:
        msg = f'unknown problem {name!r}'
        raise ValueError(msg)
    period = parse_quantity(section.get('T0'))
    periods = parse_quantities(section.get('periods'))
    modes = section.getint('modes')
    amplitude = parse_quantity(section.get('A'))
    mu = parse_quantity(section.get('mu', '0'))
    logging.info('problem %s: T0=%g periods=%s K=%d', name, period, periods,
                 modes)
    if name == 'pendulum':
        if len(periods) != 1:
            msg = f'pendulum takes one period, got {len(periods)}'
            raise ValueError(msg)
        return pendulum(period, periods[0], amplitude, mu,
                        section.get('forcing', 'zero').strip(),
                        parse_quantity(section.get('c', '0')),
                        section.get('symmetry', 'dihedral').strip(), modes)
    if name == 'coupled':
        if len(periods) == 1:
            periods = periods * 2
        return coupled(period, periods, amplitude,
                       parse_quantity(section.get('coupling')), mu, modes)
    return free(period, periods, modes)


def load(location):
    """Load a problem config file from a path or URL."""
    text = sources.read_text(location)
    return from_config(configfile.read_keyvalue(text, 'problem')['problem'])
