# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Finite permutation groups, their subgroup classes and coset actions.

Permutations are tuples p of length degree with p[i] the image of
i. Products are read right to left: (p*q)(i) = p(q(i)).
"""

import logging
import re
from functools import cached_property
from math import lcm

import numpy as np
from sympy import isprime

from equipass import configfile, sources
from equipass.types import GroupTooLargeError, InputError

_cycle_re = re.compile(r'\(([^()]*)\)')
_header_re = re.compile(r'^group\s+(\S+)\s+degree=(\d+)$')


def compose(p, q):
    """Return the product p*q (apply q first, then p).

    >>> compose((1, 2, 0), (1, 0, 2))
    (2, 1, 0)
    """
    return tuple(p[i] for i in q)


def invert(p):
    """Return the inverse permutation.

    >>> invert((1, 2, 0))
    (2, 0, 1)
    """
    inv = [0] * len(p)
    for i, image in enumerate(p):
        inv[image] = i
    return tuple(inv)


def parse_cycles(text, degree):
    """Parse cycle notation into a permutation of range(degree).

    >>> parse_cycles('(0 1 2)(3 4)', 6)
    (1, 2, 0, 4, 3, 5)
    >>> parse_cycles('()', 2)
    (0, 1)
    >>> parse_cycles('(0 0)', 2)
    Traceback (most recent call last):
        ...
    ValueError: point 0 repeated
    """
    if _cycle_re.sub('', text).strip():
        msg = f'not in cycle notation: {text!r}'
        raise ValueError(msg)
    perm = list(range(degree))
    seen = set()
    for body in _cycle_re.findall(text):
        try:
            points = [int(tok) for tok in body.split()]
        except ValueError as exc:
            msg = f'bad cycle ({body})'
            raise ValueError(msg) from exc
        for point in points:
            if not 0 <= point < degree:
                msg = f'point {point} outside 0..{degree - 1}'
                raise ValueError(msg)
            if point in seen:
                msg = f'point {point} repeated'
                raise ValueError(msg)
            seen.add(point)
        for i, point in enumerate(points):
            perm[point] = points[(i + 1) % len(points)]
    return tuple(perm)


def format_cycles(perm):
    """Format a permutation in cycle notation, omitting fixed points.

    >>> format_cycles((1, 2, 0, 4, 3, 5))
    '(0 1 2)(3 4)'
    >>> format_cycles((0, 1))
    '()'
    """
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        point = perm[start]
        while point != start:
            cycle.append(point)
            seen.add(point)
            point = perm[point]
        cycles.append('(' + ' '.join(str(p) for p in cycle) + ')')
    return ''.join(cycles) if cycles else '()'


class SubgroupClass:
    """A conjugacy class of subgroups, held by a representative."""

    # pylint: disable=too-few-public-methods
    def __init__(self, class_id, members, representative, normalizer_index,
                 size):
        """Construct a subgroup class.

        members is the set of element indices of the representative,
        representative its sorted list of permutations and size the
        number of subgroups in the class.
        """
        self.class_id = class_id
        self.members = members
        self.representative = representative
        self.order = len(members)
        self.normalizer_index = normalizer_index
        self.size = size

    def __repr__(self):
        """Return a short description of the class."""
        return (f'SubgroupClass({self.class_id}, order={self.order}, '
                f'|N:H|={self.normalizer_index})')


class FiniteGroup:
    """A finite group given by permutation generators."""

    def __init__(self, name, degree, generators):
        """Construct a group from generators on range(degree).

        Generators may be tuples or strings in cycle notation.

        >>> FiniteGroup('Z2', 2, ['(0 1)']).order
        2
        """
        if degree < 1:
            raise ValueError(degree)
        self.name = name
        self.degree = degree
        gens = []
        for gen in generators:
            if isinstance(gen, str):
                gen = parse_cycles(gen, degree)
            gen = tuple(int(x) for x in gen)
            if sorted(gen) != list(range(degree)):
                msg = f'{gen} is not a permutation of 0..{degree - 1}'
                raise ValueError(msg)
            gens.append(gen)
        self.generators = gens
        # filled in by subgroup_classes()
        self.classes = None
        self.class_lookup = None
        # filled in by burnside.ring()
        self.burnside_ring = None

    @cached_property
    def elements(self):
        """All elements, identity first, in breadth-first order.

        Each breadth-first layer is sorted lexicographically.
        """
        cap = configfile.size_cap()
        ident = tuple(range(self.degree))
        seen = {ident}
        result = [ident]
        layer = [ident]
        while layer:
            fresh = set()
            for elt in layer:
                for gen in self.generators:
                    prod = compose(gen, elt)
                    if prod in seen or prod in fresh:
                        continue
                    fresh.add(prod)
                    if len(seen) + len(fresh) > cap:
                        msg = f'group too large: {self.name} exceeds ' \
                            f'{cap} elements'
                        raise GroupTooLargeError(msg)
            layer = sorted(fresh)
            seen.update(layer)
            result.extend(layer)
        logging.debug('group %s has %d elements', self.name, len(result))
        return result

    @cached_property
    def index(self):
        """Map each element to its position in elements."""
        return {elt: i for i, elt in enumerate(self.elements)}

    @cached_property
    def table(self):
        """Multiplication table: table[i, j] is the index of e_i * e_j."""
        elts = self.elements
        index = self.index
        size = len(elts)
        table = np.empty((size, size), dtype=np.int64)
        for i, left in enumerate(elts):
            table[i] = [index[compose(left, right)] for right in elts]
        return table

    @cached_property
    def inverses(self):
        """Index of the inverse of each element."""
        # Row i holds the identity (index 0) in the column of i^-1.
        return np.argmin(self.table, axis=1)

    @property
    def order(self):
        """Return |G|."""
        return len(self.elements)

    def identity(self):
        """Return the identity permutation."""
        return tuple(range(self.degree))

    def conjugate(self, members, g):
        """Return the index set g H g^-1 for an index set H."""
        idx = np.fromiter(members, dtype=np.int64, count=len(members))
        return frozenset(self.table[self.table[g, idx],
                                    self.inverses[g]].tolist())

    def closure(self, gens):
        """Return the index set of the subgroup generated by gens."""
        rows = self.table
        members = {0}
        frontier = [0]
        while frontier:
            fresh = []
            for x in frontier:
                for gen in gens:
                    y = int(rows[gen, x])
                    if y not in members:
                        members.add(y)
                        fresh.append(y)
            frontier = fresh
        return frozenset(members)

    def __repr__(self):
        """Return the group name."""
        return self.name

    def __str__(self):
        """Return the group in its text format."""
        lines = [f'group {self.name} degree={self.degree}']
        lines += [format_cycles(gen) for gen in self.generators]
        return '\n'.join(lines)


def elements(group):
    """Return the element list of group (identity first)."""
    return group.elements


def element_order(group, i):
    """Return the order of the element with index i."""
    table = group.table
    order, x = 1, i
    while x != 0:
        x = int(table[i, x])
        order += 1
    return order


def exponent(group):
    """Return the least common multiple of the element orders."""
    return lcm(*(element_order(group, i) for i in range(group.order)))


def _all_subgroups(group):
    """Enumerate all subgroups by joining cyclic subgroups bottom-up."""
    gens_of = {}
    for i in range(group.order):
        cyc = group.closure([i])
        if cyc not in gens_of:
            gens_of[cyc] = (i,)
    cyclics = list(gens_of.items())
    frontier = list(gens_of)
    while frontier:
        fresh = []
        for sub in frontier:
            for cyc, cgens in cyclics:
                if cyc <= sub:
                    continue
                gens = gens_of[sub] + cgens
                join = group.closure(gens)
                if join not in gens_of:
                    gens_of[join] = gens
                    fresh.append(join)
        frontier = fresh
    return gens_of


def _classify(group):
    """Group the subgroups into conjugacy classes (deterministic order)."""
    perms = group.elements

    def key(sub):
        return sorted(perms[i] for i in sub)

    subgroups = _all_subgroups(group)
    assigned = {}
    found = []
    for sub in sorted(subgroups, key=lambda s: (len(s), sorted(s))):
        if sub in assigned:
            continue
        conjugates = {group.conjugate(sub, g) for g in range(group.order)}
        keyed = sorted((key(c), c) for c in conjugates)
        rep_key, rep = keyed[0][0], keyed[0][1]
        for conj in conjugates:
            assigned[conj] = len(found)
        found.append((len(sub), rep_key, rep, len(conjugates)))
    order_of_discovery = sorted(range(len(found)),
                                key=lambda i: (found[i][0], found[i][1]))
    renumber = {}
    classes = []
    for cid, old in enumerate(order_of_discovery):
        order, rep_key, rep, size = found[old]
        normalizer_order = group.order // size
        classes.append(SubgroupClass(cid, rep, rep_key,
                                     normalizer_order // order, size))
        renumber[old] = cid
    lookup = {sub: renumber[old] for sub, old in assigned.items()}
    return classes, lookup


def subgroup_classes(group):
    """Return one SubgroupClass per conjugacy class of subgroups.

    Sorted by order, then by the sorted element list of the
    representative. Includes the trivial subgroup and the group.
    """
    if group.classes is None:
        group.classes, group.class_lookup = _classify(group)
        logging.info('group %s: %d subgroups in %d classes', group.name,
                     len(group.class_lookup), len(group.classes))
    return group.classes


def all_subgroups(group):
    """Return every subgroup (as an index set) of group."""
    subgroup_classes(group)
    return list(group.class_lookup)


def class_of(group, members):
    """Return the class id of the subgroup with the given index set."""
    subgroup_classes(group)
    try:
        return group.class_lookup[frozenset(members)]
    except KeyError as exc:
        msg = f'not a subgroup of {group.name}'
        raise ValueError(msg) from exc


def _as_class(group, cls):
    """Accept a SubgroupClass or a class id."""
    if isinstance(cls, SubgroupClass):
        return cls
    return subgroup_classes(group)[cls]


def fixed_point_count(group, k, h):
    """Return |(G/K)^H|, the number of cosets gK fixed by H.

    gK is fixed by H exactly when g^-1 H g lies in K.
    """
    k = _as_class(group, k)
    h = _as_class(group, h)
    in_k = np.zeros(group.order, dtype=bool)
    in_k[list(k.members)] = True
    hidx = np.fromiter(h.members, dtype=np.int64, count=h.order)
    table = group.table
    count = 0
    for g in range(group.order):
        conj = table[table[group.inverses[g], hidx], g]
        if in_k[conj].all():
            count += 1
    return count // k.order


def is_p_group(group, p):
    """Return True if |G| is a power of the prime p.

    >>> is_p_group(cyclic(4), 2), is_p_group(cyclic(6), 2)
    (True, False)
    """
    if not isprime(p):
        msg = f'{p} is not prime'
        raise ValueError(msg)
    order = group.order
    while order % p == 0:
        order //= p
    return order == 1


def trivial():
    """Return the trivial group."""
    return FiniteGroup('e', 1, [])


def cyclic(n):
    """Return Z/n acting regularly on n points."""
    return FiniteGroup(f'Z{n}', n, [tuple((i + 1) % n for i in range(n))])


def klein_four():
    """Return the Klein four group."""
    return FiniteGroup('V4', 4, ['(0 1)', '(2 3)'])


def dihedral(n):
    """Return the dihedral group of order 2n acting on an n-gon."""
    return FiniteGroup(f'D{n}', n, [tuple((i + 1) % n for i in range(n)),
                                    tuple((-i) % n for i in range(n))])


def quaternion():
    """Return Q8 in its regular representation.

    Points 0..7 stand for 1, i, j, k, -1, -i, -j, -k.
    """
    return FiniteGroup('Q8', 8, ['(0 1 4 5)(2 3 6 7)',
                                 '(0 2 4 6)(1 7 5 3)'])


def cyclic_product(a, b):
    """Return Z/a x Z/b on a + b points."""
    first = tuple((i + 1) % a for i in range(a)) + \
        tuple(range(a, a + b))
    second = tuple(range(a)) + \
        tuple(a + (i + 1) % b for i in range(b))
    return FiniteGroup(f'Z{a}xZ{b}', a + b, [first, second])


def catalog():
    """Return the test catalog of groups of order at most 16."""
    groups = [cyclic(n) for n in range(2, 17)]
    groups += [klein_four(), dihedral(4), quaternion(), cyclic_product(2, 4)]
    return groups


def parse_header(line, lineno):
    """Parse a 'group <name> degree=<d>' line."""
    match = _header_re.match(line)
    if match is None:
        msg = f'expected "group <name> degree=<d>", got {line!r}'
        raise InputError(msg, lineno)
    return match.group(1), int(match.group(2))


def parse_group(text):
    """Parse a group from its text format.

    >>> g = parse_group('group D4 degree=4\\n(0 1 2 3)\\n(0 2)\\n')
    >>> g.name, g.order
    ('D4', 8)
    """
    header = None
    gens = []
    for lineno, line in sources.lines(text):
        if header is None:
            header = parse_header(line, lineno)
            continue
        try:
            gens.append(parse_cycles(line, header[1]))
        except ValueError as exc:
            raise InputError(str(exc), lineno) from exc
    if header is None:
        msg = 'empty group file'
        raise InputError(msg)
    return FiniteGroup(header[0], header[1], gens)


def load_group(location):
    """Load a group file from a path or URL."""
    return parse_group(sources.read_text(location))
