# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Exact arithmetic in the Burnside ring A(G) of a finite group.

An element of A(G) is an integer vector of coefficients on the basis
[G/K], one entry per conjugacy class of subgroups K in the order of
permgroup.subgroup_classes(). The marks (ghost) map sends x to the
vector of fixed point counts phi_H(x) and is an injective ring
homomorphism, so products are formed in ghost coordinates and solved
back exactly.
"""

import logging

from sympy import isprime

from equipass import configfile, lattice, sources
from equipass.permgroup import (FiniteGroup, class_of, compose,
                                fixed_point_count, format_cycles,
                                parse_cycles, parse_header,
                                subgroup_classes)
from equipass.types import (InputError, InvariantViolation,
                            PowerTooLargeError)


def format_vector(values):
    """Format an integer vector as comma-separated integers.

    >>> format_vector((0, -2))
    '0,-2'
    """
    return ','.join(str(v) for v in values)


def class_header(group):
    """Return the class-order header line for vectors over group."""
    orders = [c.order for c in subgroup_classes(group)]
    return f'# classes of {group.name} by order: {format_vector(orders)}'


class TableOfMarks:
    """The square matrix M[H][K] = |(G/K)^H|."""

    def __init__(self, group, matrix):
        """Construct a table of marks and check its invariants."""
        self.group = group
        self.matrix = tuple(tuple(row) for row in matrix)
        classes = subgroup_classes(group)
        for h, row in enumerate(self.matrix):
            for k, mark in enumerate(row):
                if mark and classes[h].order > classes[k].order:
                    msg = f'mark M[{h}][{k}] = {mark} below the diagonal'
                    raise InvariantViolation(msg)
            if row[h] != classes[h].normalizer_index or row[h] < 1:
                msg = f'diagonal mark M[{h}][{h}] = {row[h]}'
                raise InvariantViolation(msg)
        if self.matrix[0] != tuple(group.order // c.order for c in classes):
            msg = 'row of the trivial subgroup is not |G/K|'
            raise InvariantViolation(msg)

    def __len__(self):
        """Return the number of subgroup classes."""
        return len(self.matrix)

    def __str__(self):
        """Return the table, one comma-separated row per line."""
        return '\n'.join(format_vector(row) for row in self.matrix)


class GhostVector:
    """The marks phi_H(x), one per subgroup class H."""

    def __init__(self, group, values):
        """Construct a ghost vector."""
        values = tuple(int(v) for v in values)
        if len(values) != len(subgroup_classes(group)):
            raise ValueError(len(values))
        self.group = group
        self.values = values

    def __mul__(self, other):
        """Multiply pointwise (the ring structure in ghost coordinates)."""
        if other.group is not self.group:
            raise ValueError(other.group)
        return GhostVector(self.group,
                           [a * b for a, b in zip(self.values, other.values)])

    def __eq__(self, other):
        """Compare values over the same group."""
        return isinstance(other, GhostVector) and \
            other.group is self.group and other.values == self.values

    def __hash__(self):
        """Hash on the values."""
        return hash(self.values)

    def __repr__(self):
        """Return the values."""
        return f'GhostVector({format_vector(self.values)})'


class NotInImage:
    """A ghost vector with no integral preimage in A(G).

    coordinates maps the class index to the non-integral rational
    coefficient of the rational preimage.
    """

    # pylint: disable=too-few-public-methods
    def __init__(self, ghost, coordinates):
        """Record the offending ghost vector and coordinates."""
        self.ghost = ghost
        self.coordinates = coordinates

    def __repr__(self):
        """List the non-integral coordinates."""
        coords = ', '.join(f'{k}: {v}' for k, v in self.coordinates.items())
        return f'NotInImage({{{coords}}})'


class BurnsideElement:
    """An element of A(G): integer coefficients on the basis [G/K]."""

    def __init__(self, group, coeffs):
        """Construct an element from its coefficient vector."""
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != len(subgroup_classes(group)):
            msg = f'{len(coeffs)} coefficients for {group.name}'
            raise ValueError(msg)
        self.group = group
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, BurnsideElement):
            raise TypeError(other)
        if other.group is not self.group:
            msg = f'{other.group.name} is not {self.group.name}'
            raise ValueError(msg)

    def __add__(self, other):
        """Add two elements."""
        self._check(other)
        return BurnsideElement(self.group, [a + b for a, b in
                                            zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        """Subtract two elements."""
        self._check(other)
        return BurnsideElement(self.group, [a - b for a, b in
                                            zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        """Negate."""
        return BurnsideElement(self.group, [-a for a in self.coeffs])

    def __mul__(self, other):
        """Multiply by another element or by an integer."""
        if isinstance(other, int):
            return BurnsideElement(self.group,
                                   [other * a for a in self.coeffs])
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        """Equal when the groups and coefficients agree."""
        return isinstance(other, BurnsideElement) and \
            other.group is self.group and other.coeffs == self.coeffs

    def __hash__(self):
        """Hash on the coefficients."""
        return hash(self.coeffs)

    def __repr__(self):
        """Return the coefficients."""
        return f'BurnsideElement({self.group.name}: ' \
            f'{format_vector(self.coeffs)})'


class BurnsideRing:
    """The Burnside ring of one group: classes, marks, unit and basis."""

    def __init__(self, group):
        """Compute the table of marks of group."""
        self.group = group
        self.classes = subgroup_classes(group)
        size = len(self.classes)
        matrix = [[fixed_point_count(group, k, h) if
                   self.classes[h].order <= self.classes[k].order else 0
                   for k in range(size)] for h in range(size)]
        self.table = TableOfMarks(group, matrix)
        logging.info('table of marks of %s: %d classes', group.name, size)

    @property
    def rank(self):
        """Return the rank of A(G) as an abelian group."""
        return len(self.classes)

    def basis(self, k):
        """Return the basis element [G/K] for class k."""
        coeffs = [0] * self.rank
        coeffs[k] = 1
        return BurnsideElement(self.group, coeffs)

    def unit(self):
        """Return [G/G], the class of the one-point G-set."""
        return self.basis(self.rank - 1)

    def zero(self):
        """Return the zero element."""
        return BurnsideElement(self.group, [0] * self.rank)


def ring(group):
    """Return the Burnside ring of group, computed once and kept on it."""
    if group.burnside_ring is None:
        group.burnside_ring = BurnsideRing(group)
    return group.burnside_ring


def table_of_marks(group):
    """Return the table of marks of group."""
    return ring(group).table


def marks(x):
    """Return the ghost vector of x: phi_H(x) = sum_K x_K M[H][K]."""
    matrix = table_of_marks(x.group).matrix
    return GhostVector(x.group, [sum(m * c for m, c in zip(row, x.coeffs))
                                 for row in matrix])


def from_ghost(ghost):
    """Return the element with the given marks, or NotInImage.

    The marks matrix is upper triangular with a positive diagonal, so
    the rational preimage is unique.
    """
    matrix = table_of_marks(ghost.group).matrix
    solution = lattice.solve_upper(matrix, ghost.values)
    bad = {i: v for i, v in enumerate(solution) if v.denominator != 1}
    if bad:
        return NotInImage(ghost, bad)
    return BurnsideElement(ghost.group, [int(v) for v in solution])


def multiply(x, y):
    """Return the product x*y in A(G)."""
    x._check(y)  # pylint: disable=protected-access
    result = from_ghost(marks(x) * marks(y))
    if isinstance(result, NotInImage):
        msg = f'product of {x} and {y} has no preimage: {result}'
        raise InvariantViolation(msg)
    return result


def bartsch_element(group):
    """Return the product of u_K = [G/K] - |(G/K)^K| [G/G] over proper K.

    Its marks vanish on every proper class and the mark at G is the
    product of -|N(K):K| over proper K.
    """
    burnside = ring(group)
    unit = burnside.unit()
    result = unit
    for cls in burnside.classes[:-1]:
        weight = fixed_point_count(group, cls, cls)
        result = result * (burnside.basis(cls.class_id) - weight * unit)
    return result


class IdealSpec:
    """The prime ideal P(H, p) of A(G), or P(H, 0) for characteristic 0."""

    # pylint: disable=too-few-public-methods
    def __init__(self, class_id, characteristic=0):
        """Construct an ideal specification.

        >>> IdealSpec(0, 4)
        Traceback (most recent call last):
            ...
        ValueError: characteristic 4 is neither 0 nor a prime
        """
        if characteristic != 0 and not isprime(characteristic):
            msg = f'characteristic {characteristic} is neither 0 nor a prime'
            raise ValueError(msg)
        self.class_id = class_id
        self.characteristic = characteristic

    def __repr__(self):
        """Return P(H,p)."""
        return f'P({self.class_id},{self.characteristic})'


def ideal_membership(spec, x):
    """Return True if x lies in the prime ideal spec."""
    mark = marks(x).values[spec.class_id]
    if spec.characteristic == 0:
        return mark == 0
    return mark % spec.characteristic == 0


def augmentation(x):
    """Return phi_e(x), the cardinality of the virtual G-set x."""
    return marks(x).values[0]


def augmentation_ideal(group):
    """Return generators [G/K] - |G/K| [G/G] (K proper) of ker(phi_e)."""
    burnside = ring(group)
    unit = burnside.unit()
    return [burnside.basis(c.class_id) - (group.order // c.order) * unit
            for c in burnside.classes[:-1]]


def ideal_power(gens, n):
    """Return the canonical lattice basis of the n-th power of (gens).

    I is spanned additively by the products g*b (b a basis element) and
    I^k by the products of a basis of I^(k-1) with the generators.
    """
    if n < 1:
        raise ValueError(n)
    if not gens:
        msg = 'no generators'
        raise ValueError(msg)
    group = gens[0].group
    for gen in gens:
        gens[0]._check(gen)  # pylint: disable=protected-access
    burnside = ring(group)
    cap = configfile.getint('burnside', 'power-cap')
    if n * len(gens) * burnside.rank > cap:
        msg = f'power too large: n={n} with {len(gens)} generators ' \
            f'over {burnside.rank} classes exceeds {cap}'
        raise PowerTooLargeError(msg)
    current = lattice.canonical_basis(
        [(g * burnside.basis(k)).coeffs for g in gens
         for k in range(burnside.rank)], burnside.rank)
    for _ in range(n - 1):
        current = lattice.canonical_basis(
            [(BurnsideElement(group, row) * g).coeffs
             for row in current for g in gens], burnside.rank)
    return [BurnsideElement(group, row) for row in current]


def ideal_filtration(gens, depth):
    """Return [I, I^2, ..., I^depth], checking that the powers descend."""
    powers = [ideal_power(gens, n) for n in range(1, depth + 1)]
    for n in range(1, depth):
        big = [x.coeffs for x in powers[n - 1]]
        small = [x.coeffs for x in powers[n]]
        if not lattice.lattice_contains(big, small):
            msg = f'I^{n + 1} is not contained in I^{n}'
            raise InvariantViolation(msg)
    return powers


def prime_ideal_coincidences(group, p):
    """Partition the classes H by equality of the ideals P(H, p).

    P(H,p) = P(K,p) exactly when phi_H and phi_K agree mod p on every
    basis element, ie when the two mark rows agree mod p.
    """
    if not isprime(p):
        msg = f'{p} is not prime'
        raise ValueError(msg)
    blocks = {}
    for h, row in enumerate(table_of_marks(group).matrix):
        blocks.setdefault(tuple(m % p for m in row), []).append(h)
    return sorted(blocks.values())


def _cosets(group, members):
    """Return (representatives, coset id of each element) for G/K."""
    table = group.table
    assign = [-1] * group.order
    reps = []
    for g in range(group.order):
        if assign[g] < 0:
            for k in members:
                assign[int(table[g, k])] = len(reps)
            reps.append(g)
    return reps, assign


def gset_classes(group, npoints, act):
    """Decompose a finite G-set into orbits by stabilizer class.

    act(g, x) is the image of point x under the element with index g.
    Returns the corresponding element of A(G).
    """
    coeffs = [0] * len(subgroup_classes(group))
    seen = [False] * npoints
    for x in range(npoints):
        if seen[x]:
            continue
        stabilizer = []
        for g in range(group.order):
            y = act(g, x)
            seen[y] = True
            if y == x:
                stabilizer.append(g)
        coeffs[class_of(group, stabilizer)] += 1
    return BurnsideElement(group, coeffs)


def gset_product(group, k, l):
    """Return the class of G/K x G/L by counting orbits directly."""
    classes = subgroup_classes(group)
    table = group.table
    reps_k, assign_k = _cosets(group, classes[k].members)
    reps_l, assign_l = _cosets(group, classes[l].members)
    width = len(reps_l)

    def act(g, x):
        a, b = divmod(x, width)
        return assign_k[int(table[g, reps_k[a]])] * width + \
            assign_l[int(table[g, reps_l[b]])]

    return gset_classes(group, len(reps_k) * width, act)


class Morphism:
    """An injective homomorphism source -> target given on generators."""

    def __init__(self, source, target, images):
        """Construct the morphism and extend it to all of source.

        images[i] is the image (a permutation of the target's points)
        of the i-th generator of source.
        """
        self.source = source
        self.target = target
        images = [parse_cycles(im, target.degree) if isinstance(im, str)
                  else tuple(im) for im in images]
        if len(images) != len(source.generators):
            msg = f'{len(images)} images for {len(source.generators)} ' \
                f'generators of {source.name}'
            raise ValueError(msg)
        for image in images:
            if image not in target.index:
                msg = f'{image} is not an element of {target.name}'
                raise ValueError(msg)
        self.images = images
        self.hom = self._extend()

    def _extend(self):
        """Map every source element index to a target element index."""
        src, tgt = self.source, self.target
        mapped = {src.identity(): tgt.identity()}
        frontier = [src.identity()]
        while frontier:
            fresh = []
            for x in frontier:
                for gen, image in zip(src.generators, self.images):
                    y = compose(gen, x)
                    value = compose(image, mapped[x])
                    if y in mapped:
                        if mapped[y] != value:
                            msg = f'not a homomorphism {src.name} -> ' \
                                f'{tgt.name}'
                            raise ValueError(msg)
                    else:
                        mapped[y] = value
                        fresh.append(y)
            frontier = fresh
        hom = [tgt.index[mapped[x]] for x in src.elements]
        if len(set(hom)) != len(hom):
            msg = f'{src.name} -> {tgt.name} is not injective'
            raise ValueError(msg)
        return hom

    def restriction(self):
        """Return the matrix of res: A(target) -> A(source).

        Row i is the restriction of the target basis element i.
        """
        table = self.target.table
        rows = []
        for cls in subgroup_classes(self.target):
            reps, assign = _cosets(self.target, cls.members)

            def act(s, x, reps=reps, assign=assign):
                return assign[int(table[self.hom[s], reps[x]])]

            rows.append(list(gset_classes(self.source, len(reps),
                                          act).coeffs))
        return rows


class FamilyDiagram:
    """Finite groups and injective morphisms between them."""

    def __init__(self, name, objects, morphisms):
        """Construct a diagram.

        morphisms is a list of (source name, target name, images).
        """
        self.name = name
        self.objects = list(objects)
        self.by_name = {g.name: g for g in self.objects}
        if len(self.by_name) != len(self.objects):
            msg = 'object names must be unique'
            raise ValueError(msg)
        self.morphisms = []
        for src, tgt, images in morphisms:
            if src not in self.by_name or tgt not in self.by_name:
                msg = f'unknown object in morphism {src} -> {tgt}'
                raise ValueError(msg)
            self.morphisms.append(Morphism(self.by_name[src],
                                           self.by_name[tgt], images))


class LimitLattice:
    """The lattice of compatible families in the direct sum of rings."""

    # pylint: disable=too-few-public-methods
    def __init__(self, diagram, basis, offsets):
        """Record the basis and the offset of each object's block."""
        self.diagram = diagram
        self.basis = basis
        self.offsets = offsets
        self.rank = len(basis)

    def component(self, vector, name):
        """Return the block of vector belonging to the named object."""
        start = self.offsets[name]
        size = ring(self.diagram.by_name[name]).rank
        return vector[start:start + size]


def limit_burnside(diagram):
    """Return the lattice of families (x_H) with res_m(x_t) = x_s for all m."""
    offsets = {}
    total = 0
    for obj in diagram.objects:
        offsets[obj.name] = total
        total += ring(obj).rank
    constraints = []
    for mor in diagram.morphisms:
        res = mor.restriction()
        src, tgt = offsets[mor.source.name], offsets[mor.target.name]
        for j in range(ring(mor.source).rank):
            row = [0] * total
            for i, images in enumerate(res):
                row[tgt + i] += images[j]
            row[src + j] -= 1
            constraints.append(row)
    basis = lattice.kernel_basis(constraints, total)
    logging.info('limit over %s: %d constraints on %d coordinates, rank %d',
                 diagram.name, len(constraints), total, len(basis))
    return LimitLattice(diagram, basis, offsets)


def parse_diagram(text):
    """Parse a diagram from its text format."""
    name = None
    blocks = []
    for lineno, line in sources.lines(text):
        if name is None:
            words = line.split()
            if len(words) != 2 or words[0] != 'diagram':
                msg = f'expected "diagram <name>", got {line!r}'
                raise InputError(msg, lineno)
            name = words[1]
        elif line.startswith('group'):
            blocks.append(['group', lineno, parse_header(line, lineno), []])
        elif line.startswith('morphism'):
            words = line.split()
            if len(words) != 4 or words[2] != '->':
                msg = f'expected "morphism <src> -> <tgt>", got {line!r}'
                raise InputError(msg, lineno)
            blocks.append(['morphism', lineno, (words[1], words[3]), []])
        elif line.startswith('(') and blocks:
            blocks[-1][3].append((lineno, line))
        else:
            msg = f'unexpected line {line!r}'
            raise InputError(msg, lineno)
    if name is None:
        msg = 'empty diagram file'
        raise InputError(msg)
    objects = {}
    morphisms = []
    for kind, lineno, head, body in blocks:
        try:
            if kind == 'group':
                gname, degree = head
                gens = [parse_cycles(cycles, degree) for _, cycles in body]
                objects[gname] = FiniteGroup(gname, degree, gens)
            else:
                if head[1] not in objects:
                    msg = f'unknown object {head[1]}'
                    raise InputError(msg, lineno)
                degree = objects[head[1]].degree
                images = [parse_cycles(cycles, degree) for _, cycles in body]
                morphisms.append((head[0], head[1], images))
        except InputError:
            raise
        except ValueError as exc:
            raise InputError(str(exc), lineno) from exc
    try:
        return FamilyDiagram(name, objects.values(), morphisms)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def format_diagram(diagram):
    """Return the text format of a diagram."""
    lines = [f'diagram {diagram.name}']
    lines += [str(obj) for obj in diagram.objects]
    for mor in diagram.morphisms:
        lines.append(f'morphism {mor.source.name} -> {mor.target.name}')
        lines += [format_cycles(image) for image in mor.images]
    return '\n'.join(lines) + '\n'


def load_diagram(location):
    """Load a diagram file from a path or URL."""
    return parse_diagram(sources.read_text(location))
