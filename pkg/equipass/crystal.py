# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Crystallographic groups G = Z^n x| P and their finite subgroups.

A CrystalGroup is given by a finite p-group P (as permutations) and an
integral representation beta: P -> GL_n(Z) on the generators. Elements
of G are pairs (t, h) with t in Z^n, multiplied by
(a, g)(b, h) = (a + beta(g) b, gh), acting on R^n by x -> t + beta(h) x.
"""

import itertools
import logging
import re
from fractions import Fraction

import numpy as np
from sympy import Matrix, Rational, isprime

from equipass import lattice, sources
from equipass.burnside import FamilyDiagram
from equipass.permgroup import (FiniteGroup, compose, exponent, is_p_group,
                                parse_cycles)
from equipass.types import InputError, PreconditionError

_header_re = re.compile(
    r'^crystal\s+(\S+)\s+rank=(\d+)\s+p=(\d+)(?:\s+degree=(\d+))?$')


def _matvec(matrix, vec):
    """Exact product of an integer matrix and a rational vector."""
    return tuple(sum((int(a) * b for a, b in zip(row, vec)), Fraction(0))
                 for row in matrix)


class CrystalGroup:
    """The semidirect product Z^n x|_beta P for a finite p-group P."""

    def __init__(self, name, rank, point_group, matrices, prime):
        """Construct a crystal group and extend beta to all of P.

        matrices[i] is the n x n integer matrix of the i-th generator.
        """
        if rank < 1:
            raise ValueError(rank)
        if not isprime(prime):
            msg = f'p={prime} is not prime'
            raise ValueError(msg)
        if not is_p_group(point_group, prime):
            msg = f'{point_group.name} of order {point_group.order} ' \
                f'is not a {prime}-group'
            raise ValueError(msg)
        if len(matrices) != len(point_group.generators):
            msg = f'{len(matrices)} matrices for ' \
                f'{len(point_group.generators)} generators'
            raise ValueError(msg)
        self.name = name
        self.rank = rank
        self.point_group = point_group
        self.prime = prime
        self.matrices = [np.array(m, dtype=np.int64).reshape(rank, rank)
                         for m in matrices]
        self.rep = self._extend()

    def _extend(self):
        """Return beta(g) for every element index g of P."""
        group = self.point_group
        ident = group.identity()
        mapped = {ident: np.eye(self.rank, dtype=np.int64)}
        frontier = [ident]
        while frontier:
            fresh = []
            for x in frontier:
                for gen, mat in zip(group.generators, self.matrices):
                    y = compose(gen, x)
                    value = mat @ mapped[x]
                    if y in mapped:
                        if not np.array_equal(mapped[y], value):
                            msg = f'beta is not a homomorphism on {self.name}'
                            raise ValueError(msg)
                    else:
                        mapped[y] = value
                        fresh.append(y)
            frontier = fresh
        rep = [mapped[x] for x in group.elements]
        for g, mat in enumerate(rep):
            det = Matrix(mat.tolist()).det()
            if det not in (1, -1):
                msg = f'det beta({g}) = {det} is not a unit'
                raise ValueError(msg)
        return rep

    def beta(self, h):
        """Return the matrix of the element of P with index h."""
        return self.rep[h]

    def element(self, translation, point=0):
        """Return the group element (translation, point)."""
        return GroupElement(self, translation, point)

    def __repr__(self):
        """Return the name."""
        return f'CrystalGroup({self.name}, rank={self.rank})'


class GroupElement:
    """An element (t, h) of Z^n x| P."""

    def __init__(self, crystal, translation, point=0):
        """Construct (translation, point) with point an index into P."""
        translation = tuple(int(t) for t in translation)
        if len(translation) != crystal.rank:
            raise ValueError(translation)
        self.crystal = crystal
        self.translation = translation
        self.point = point

    @property
    def linear(self):
        """Return beta(h)."""
        return self.crystal.beta(self.point)

    def __mul__(self, other):
        """Compose: (a, g)(b, h) = (a + beta(g) b, gh)."""
        table = self.crystal.point_group.table
        shift = self.linear @ np.array(other.translation, dtype=np.int64)
        return GroupElement(self.crystal,
                            np.array(self.translation) + shift,
                            int(table[self.point, other.point]))

    def inverse(self):
        """Return (-beta(h)^-1 t, h^-1)."""
        inv = int(self.crystal.point_group.inverses[self.point])
        back = self.crystal.beta(inv) @ np.array(self.translation)
        return GroupElement(self.crystal, -back, inv)

    def act(self, x):
        """Apply x -> t + beta(h) x to a vector (floats or Fractions)."""
        if isinstance(x[0], Fraction):
            moved = _matvec(self.linear, x)
            return tuple(t + v for t, v in zip(self.translation, moved))
        return np.asarray(self.translation) + self.linear @ np.asarray(x)

    def __eq__(self, other):
        """Equal translation and point part."""
        return isinstance(other, GroupElement) and \
            other.crystal is self.crystal and \
            other.translation == self.translation and \
            other.point == self.point

    def __hash__(self):
        """Hash on the components."""
        return hash((self.translation, self.point))

    def __repr__(self):
        """Return (t, h)."""
        return f'({self.translation}, {self.point})'


def free_outside_zero(crystal):
    """Return True if det(beta(g) - I) != 0 for every g != e in P."""
    ident = np.eye(crystal.rank, dtype=np.int64)
    for g in range(1, crystal.point_group.order):
        if Matrix((crystal.beta(g) - ident).tolist()).det() == 0:
            logging.debug('beta(%d) of %s fixes a nonzero vector', g,
                          crystal.name)
            return False
    return True


class MaximalClass:
    """A G-conjugacy class of maximal finite subgroups G_x = P_x."""

    # pylint: disable=too-few-public-methods
    def __init__(self, center, stabilizer):
        """Record the centre x (rational, in [0,1)^n) and P_x."""
        self.center = center
        self.stabilizer = stabilizer

    @property
    def order(self):
        """Return |P_x|."""
        return len(self.stabilizer)

    def __repr__(self):
        """Return center and stabilizer order."""
        center = ','.join(str(c) for c in self.center)
        return f'MaximalClass(({center}), order={self.order})'


def _stabilizers(crystal):
    """Map y in (Z/e)^n to {h : (I - beta(h)) y = 0 mod e}, e = exp(P)."""
    group = crystal.point_group
    denom = exponent(group)
    ident = np.eye(crystal.rank, dtype=np.int64)
    shifts = [ident - crystal.beta(h) for h in range(group.order)]
    result = {}
    for y in itertools.product(range(denom), repeat=crystal.rank):
        vec = np.array(y, dtype=np.int64)
        result[y] = frozenset(h for h, mat in enumerate(shifts)
                              if not ((mat @ vec) % denom).any())
    return denom, result


def maximal_finite_subgroups(crystal):
    """Return one MaximalClass per conjugacy class of maximal subgroups.

    The isotropy group of x in R^n is {(x - beta(h) x, h) : h in P_x}.
    Any nontrivial finite subgroup fixes exactly one point when P acts
    freely outside 0, so the classes are the affine orbits of points
    with nontrivial stabilizer. Their denominators divide exp(P).
    """
    if not free_outside_zero(crystal):
        msg = f'{crystal.name}: P does not act freely outside 0'
        raise PreconditionError(msg)
    zero = tuple(Fraction(0) for _ in range(crystal.rank))
    if crystal.point_group.order == 1:
        return [MaximalClass(zero, frozenset([0]))]
    denom, stabilizers = _stabilizers(crystal)
    seen = set()
    classes = []
    for y, stab in sorted(stabilizers.items()):
        if len(stab) < 2 or y in seen:
            continue
        orbit = {tuple(int(v) for v in (crystal.beta(h) @ np.array(y)) % denom)
                 for h in range(crystal.point_group.order)}
        seen.update(orbit)
        rep = min(orbit)
        classes.append(MaximalClass(tuple(Fraction(v, denom) for v in rep),
                                    stabilizers[rep]))
    classes.sort(key=lambda c: c.center)
    logging.info('%s: %d classes of maximal finite subgroups', crystal.name,
                 len(classes))
    return classes


def smith_invariants(crystal):
    """Return the invariant factors of the stacked (I - beta(g_i))."""
    ident = np.eye(crystal.rank, dtype=np.int64)
    rows = []
    for mat in crystal.matrices:
        rows.extend((ident - mat).tolist())
    if not rows:
        return []
    return lattice.determinantal_divisors(rows)


def _translation_part(crystal, x, h):
    """Return m_h = x - beta(h) x."""
    moved = _matvec(crystal.beta(h), x)
    return tuple(a - b for a, b in zip(x, moved))


def _unique_containment(crystal, classes):
    """Check that distinct maximal classes meet trivially.

    Conjugates are sampled over P and translations in {-1,0,1}^n.
    """
    group = crystal.point_group
    table, inverses = group.table, group.inverses
    shifts = list(itertools.product((-1, 0, 1), repeat=crystal.rank))
    for first, second in itertools.combinations(classes, 2):
        for k in range(group.order):
            moved = _matvec(crystal.beta(k), second.center)
            conj = {int(table[table[k, h], inverses[k]])
                    for h in second.stabilizer}
            common = (first.stabilizer & conj) - {0}
            for shift in shifts:
                other = tuple(a + b for a, b in zip(moved, shift))
                for h in common:
                    if _translation_part(crystal, first.center, h) == \
                            _translation_part(crystal, other, h):
                        logging.debug('classes at %s and %s share %d',
                                      first.center, other, h)
                        return False
    return True


def _self_normalizing(crystal, cls):
    """Check N_G(G_x) = G_x by solving the conjugation equations.

    (t, k) normalizes G_x iff for every h in P_x, h' = k h k^-1 lies in
    P_x and (I - beta(h')) t = m_h' - beta(k) m_h.
    """
    group = crystal.point_group
    table, inverses = group.table, group.inverses
    ident = np.eye(crystal.rank, dtype=np.int64)
    x = cls.center
    nontrivial = sorted(cls.stabilizer - {0})
    if not nontrivial:
        return True
    for k in range(group.order):
        solution = None
        for h in nontrivial:
            conj = int(table[table[k, h], inverses[k]])
            if conj not in cls.stabilizer:
                solution = None
                break
            rhs = [a - b for a, b in zip(
                _translation_part(crystal, x, conj),
                _matvec(crystal.beta(k), _translation_part(crystal, x, h)))]
            lhs = Matrix((ident - crystal.beta(conj)).tolist())
            t = tuple(Fraction(int(v.p), int(v.q))
                      for v in lhs.LUsolve(Matrix(
                          [Rational(r.numerator, r.denominator) for r in rhs])))
            if any(v.denominator != 1 for v in t) or \
                    (solution is not None and t != solution):
                solution = None
                break
            solution = t
        if solution is None:
            continue
        if k not in cls.stabilizer or \
                solution != _translation_part(crystal, x, k):
            logging.debug('(%s, %d) normalizes the class at %s', solution,
                          k, x)
            return False
    return True


class ConditionMReport:
    """The outcome of the maximality condition check."""

    # pylint: disable=too-few-public-methods
    # pylint: disable=too-many-arguments
    def __init__(self, crystal, free, classes, unique, self_normalizing,
                 smith_count, fixed_count):
        """Record the individual checks and the verdict."""
        self.crystal = crystal
        self.free_outside_zero = free
        self.maximal_classes = classes
        self.unique = unique
        self.self_normalizing = self_normalizing
        self.smith_count = smith_count
        self.fixed_count = fixed_count
        self.verdict = free and unique and self_normalizing

    def __str__(self):
        """Return the report in its text format (verdict last)."""
        lines = [f'crystal {self.crystal.name}',
                 f'free_outside_zero {self.free_outside_zero}']
        if self.free_outside_zero:
            lines.append(f'fixed_centers smith={self.smith_count} '
                         f'scan={self.fixed_count}')
            lines.append(f'classes {len(self.maximal_classes)}')
            for i, cls in enumerate(self.maximal_classes):
                center = ','.join(str(c) for c in cls.center)
                lines.append(f'class {i} center={center} order={cls.order}')
            lines.append(f'unique {self.unique}')
            lines.append(f'self_normalizing {self.self_normalizing}')
        return '\n'.join(lines)


def check_condition_m(crystal):
    """Check the maximality condition for Z^n x| P and return a report."""
    if not free_outside_zero(crystal):
        return ConditionMReport(crystal, False, [], False, False, None, None)
    classes = maximal_finite_subgroups(crystal)
    smith_count = 1
    for factor in smith_invariants(crystal):
        smith_count *= factor
    if crystal.point_group.order == 1:
        fixed_count = 1
    else:
        _, stabilizers = _stabilizers(crystal)
        fixed_count = sum(1 for stab in stabilizers.values()
                          if len(stab) == crystal.point_group.order)
    if smith_count != fixed_count:
        logging.warning('%s: Smith form predicts %d fixed centres, scan '
                        'found %d', crystal.name, smith_count, fixed_count)
    unique = _unique_containment(crystal, classes)
    normal = all(_self_normalizing(crystal, cls) for cls in classes)
    return ConditionMReport(crystal, True, classes, unique, normal,
                            smith_count, fixed_count)


def _generators(group, members):
    """Choose a short generating list for the subgroup with index set."""
    gens = []
    span = frozenset([0])
    for h in sorted(members):
        if h not in span:
            gens.append(h)
            span = group.closure(gens)
    return [group.elements[h] for h in gens]


def finite_subgroup_diagram(crystal):
    """Return the diagram of maximal finite subgroups over the trivial one."""
    if not free_outside_zero(crystal):
        msg = f'{crystal.name}: P does not act freely outside 0'
        raise PreconditionError(msg)
    group = crystal.point_group
    objects = [FiniteGroup('e', group.degree, [])]
    morphisms = []
    for i, cls in enumerate(maximal_finite_subgroups(crystal)):
        if cls.order < 2:
            continue
        obj = FiniteGroup(f'M{i}', group.degree,
                          _generators(group, cls.stabilizer))
        objects.append(obj)
        morphisms.append(('e', obj.name, []))
    return FamilyDiagram(f'{crystal.name}-fin', objects, morphisms)


def parse_crystal(text):
    """Parse a crystal group from its text format.

    >>> c = parse_crystal('crystal Dinf rank=1 p=2\\n(0 1)\\n-1\\n')
    >>> c.rank, c.point_group.order
    (1, 2)
    """
    header = None
    blocks = []
    for lineno, line in sources.lines(text):
        if header is None:
            match = _header_re.match(line)
            if match is None:
                msg = 'expected "crystal <name> rank=<n> p=<prime>", ' \
                    f'got {line!r}'
                raise InputError(msg, lineno)
            header = (lineno, match.group(1), int(match.group(2)),
                      int(match.group(3)), match.group(4))
        elif line.startswith('('):
            blocks.append((lineno, line, []))
        elif blocks and len(blocks[-1][2]) < header[2]:
            try:
                row = [int(tok) for tok in line.split()]
            except ValueError as exc:
                msg = f'bad matrix row {line!r}'
                raise InputError(msg, lineno) from exc
            if len(row) != header[2]:
                msg = f'matrix row has {len(row)} entries, expected {header[2]}'
                raise InputError(msg, lineno)
            blocks[-1][2].append(row)
        else:
            msg = f'unexpected line {line!r}'
            raise InputError(msg, lineno)
    if header is None:
        msg = 'empty crystal file'
        raise InputError(msg)
    hline, name, rank, prime, degree = header
    if degree is None:
        points = [int(p) for _, cyc, _ in blocks
                  for p in re.findall(r'\d+', cyc)]
        degree = max(points, default=0) + 1
    gens, matrices = [], []
    for lineno, cyc, rows in blocks:
        if len(rows) != rank:
            msg = f'generator {cyc} has {len(rows)} matrix rows, expected {rank}'
            raise InputError(msg, lineno)
        try:
            gens.append(parse_cycles(cyc, int(degree)))
        except ValueError as exc:
            raise InputError(str(exc), lineno) from exc
        matrices.append(rows)
    try:
        point_group = FiniteGroup(f'{name}-P', int(degree), gens)
        return CrystalGroup(name, rank, point_group, matrices, prime)
    except ValueError as exc:
        raise InputError(str(exc), hline) from exc


def load_crystal(location):
    """Load a crystal file from a path or URL."""
    return parse_crystal(sources.read_text(location))
