# Copyright (C) 2011, 2012, 2014 Ben Elliston
# Copyright (C) 2014, 2015, 2016 The University of New South Wales
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Implementation of the Context class.

A solver context encapsulates all state of one solve run, ensuring
that there is never any residual state left behind after a run. It
also allows the outcomes of several runs to be compared.
"""

from equipass import problems
from equipass.minimax import SolverSettings
from equipass.utils import ureg


class Context:
    """All solver state is kept in a Context object."""

    # pylint: disable=too-many-instance-attributes
    def __init__(self, problem=None, settings=None):
        """Initialise a default context (the catalog pendulum)."""
        self.verbose = False
        self.problem = problem if problem is not None else \
            problems.pendulum()
        self.settings = settings if settings is not None else \
            SolverSettings()
        # Size of the random perturbation of the initial path.
        self.perturbation = 0.0
        self.geometry = None
        self.invariance = None
        self.candidates = []
        self.neighborhood = None

    def converged(self):
        """Return the candidates whose gradient norm met the tolerance."""
        return [c for c in self.candidates if c.converged]

    def orbits(self):
        """Return the number of distinct orbit ids."""
        return len({c.orbit_id for c in self.candidates})

    def spread(self):
        """Return the value gap between the highest and lowest candidate."""
        if not self.candidates:
            return 0.0
        values = [c.value for c in self.candidates]
        return max(values) - min(values)

    def __str__(self):
        """Make a human-readable summary of the context."""
        string = f'Problem: {self.problem}\n'
        period = (self.problem.period * ureg.second).to_compact()
        string += f'Period: {period}\n'
        if self.verbose:
            string += f'Path points: {self.settings.pathpoints}, ' \
                f'sweeps: {self.settings.sweeps}, ' \
                f'seed: {self.settings.seed}\n'
        if self.geometry is not None:
            string += f'{self.geometry}\n'
        if self.invariance is not None:
            string += f'{self.invariance}\n'
        if not self.candidates:
            string += 'No critical candidates'
            return string
        string += f'Candidates: {len(self.candidates)} in ' \
            f'{self.orbits()} orbits, {len(self.converged())} converged\n'
        for cand in self.candidates:
            string += f'\t{cand.kind}: orbit {cand.orbit_id}, ' \
                f'value {cand.value:.10g}, gnorm {cand.gradient_norm:.3e}, ' \
                f'residual {cand.residual:.3e}\n'
        string += f'Value spread: {self.spread():.6g}'
        if self.neighborhood is not None:
            string += f'\n{self.neighborhood}'
        return string
