# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Command-line interface: burnside, crystal and solve sub-commands.

Exit status: 0 success, 1 input error, 2 verdict failure, 3 no
mountain-pass geometry, 4 invariance failure.
"""

import argparse
import configparser
import logging
import os
import sys
from math import prod
from pathlib import Path

from equipass import burnside, configfile, crystal, minimax, problems, sources
from equipass.context import Context
from equipass.loops import format_loop
from equipass.permgroup import load_group, subgroup_classes
from equipass.types import EvaluationError, FlowError
from equipass.utils import (RunManifest, candidate_record, verdict_word,
                            write_timeseries)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERDICT = 2
EXIT_GEOMETRY = 3
EXIT_INVARIANCE = 4


def cmd_burnside(args, out):
    """Run a burnside sub-command."""
    if args.action == 'limit':
        diagram = burnside.load_diagram(args.file)
        limit = burnside.limit_burnside(diagram)
        print(f'# diagram {diagram.name}: {len(diagram.objects)} objects, '
              f'{len(diagram.morphisms)} morphisms', file=out)
        print(f'rank={limit.rank}', file=out)
        for row in limit.basis:
            print('basis ' + burnside.format_vector(row), file=out)
        return EXIT_OK
    group = load_group(args.file)
    print(burnside.class_header(group), file=out)
    if args.action == 'marks':
        print(burnside.table_of_marks(group), file=out)
        return EXIT_OK
    element = burnside.bartsch_element(group)
    ghost = burnside.marks(element).values
    expected = prod(-c.normalizer_index for c in subgroup_classes(group)[:-1])
    passed = not any(ghost[:-1]) and ghost[-1] == expected
    print('coeffs ' + burnside.format_vector(element.coeffs), file=out)
    print('ghost ' + burnside.format_vector(ghost), file=out)
    print(f'verdict {verdict_word(passed, out)}', file=out)
    return EXIT_OK if passed else EXIT_VERDICT


def cmd_crystal(args, out):
    """Check the maximality condition for a crystal group file."""
    group = crystal.load_crystal(args.file)
    report = crystal.check_condition_m(group)
    print(report, file=out)
    print(f'verdict {verdict_word(report.verdict, out)}', file=out)
    if args.emit_diagram:
        if report.free_outside_zero:
            diagram = crystal.finite_subgroup_diagram(group)
            Path(args.emit_diagram).write_text(
                burnside.format_diagram(diagram), encoding='utf-8')
            print(f'diagram {args.emit_diagram}', file=out)
        else:
            logging.warning('no diagram: %s does not act freely outside 0',
                            group.name)
    return EXIT_OK if report.verdict else EXIT_VERDICT


def _write_candidates(context, outdir, manifest, out):
    """Write loop, time-series and record files for every candidate."""
    records = []
    for i, cand in enumerate(context.candidates):
        loopfile = outdir / f'candidate-{i}.loop'
        loopfile.write_text(format_loop(cand.loop) + '\n', encoding='utf-8')
        manifest.add(loopfile)
        datfile = outdir / f'candidate-{i}.dat'
        write_timeseries(datfile, cand.loop)
        manifest.add(datfile)
        records.append(candidate_record(cand, loopfile.name))
    recfile = outdir / 'candidates.txt'
    recfile.write_text('\n'.join(records) + '\n', encoding='utf-8')
    manifest.add(recfile)
    for record in records:
        print(record, file=out)


def cmd_solve(args, out):
    """Search for critical orbits of a problem and write the artifacts."""
    problem_text = sources.read_text(args.problem)
    problem = problems.from_config(
        configfile.read_keyvalue(problem_text, 'problem')['problem'])
    solver_text = ''
    if args.solver is not None:
        solver_text = sources.read_text(args.solver)
    settings = minimax.SolverSettings(
        configfile.read_keyvalue(solver_text, 'solver')['solver'])
    if args.seed is not None:
        settings.seed = args.seed
    context = Context(problem, settings)
    context.verbose = args.verbose
    context.perturbation = args.perturb
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(sys.argv if args.argv is None else args.argv,
                           problem_text + solver_text)
    minimax.run(context)
    if not context.geometry.passed:
        status, summary = EXIT_GEOMETRY, 'geometry FAIL'
    elif not context.invariance.passed:
        status, summary = EXIT_INVARIANCE, 'invariance FAIL'
    else:
        _write_candidates(context, outdir, manifest, out)
        converged = context.converged()
        status = EXIT_OK if converged else EXIT_VERDICT
        summary = f'{len(context.candidates)} candidates, ' \
            f'{context.orbits()} orbits, {len(converged)} converged'
    print(context, file=out)
    manifest.write(outdir / 'manifest.txt', summary)
    return status


def parser():
    """Return the argument parser."""
    argp = argparse.ArgumentParser(prog='equipass',
                                   description='Equivariant minimax tools')
    argp.add_argument('-v', '--verbose', action='store_true',
                      help='be verbose')
    argp.add_argument('-d', '--debug', action='store_true',
                      help='enable debugging output')
    argp.add_argument('--cap', type=int,
                      help='group size cap for this run')
    sub = argp.add_subparsers(dest='command', required=True)
    burn = sub.add_parser('burnside', help='Burnside ring computations')
    burn.add_argument('action', choices=['marks', 'bartsch', 'limit'])
    burn.add_argument('file', help='group file (diagram file for limit)')
    cryst = sub.add_parser('crystal', help='crystallographic group checks')
    cryst.add_argument('action', choices=['check'])
    cryst.add_argument('file', help='crystal group file')
    cryst.add_argument('--emit-diagram', metavar='PATH',
                       help='write the finite subgroup diagram')
    solve = sub.add_parser('solve', help='search for critical orbits')
    solve.add_argument('problem', help='problem config (key=value)')
    solve.add_argument('solver', nargs='?', help='solver config (key=value)')
    solve.add_argument('--output', '-o', default='.', help='output directory')
    solve.add_argument('--seed', type=int, help='random seed')
    solve.add_argument('--perturb', type=float, default=0.0,
                       help='perturbation of the initial path')
    return argp


commands = {'burnside': cmd_burnside, 'crystal': cmd_crystal,
            'solve': cmd_solve}


def main(argv=None, out=None):
    """Run the command line and return the exit status."""
    out = sys.stdout if out is None else out
    args = parser().parse_args(argv)
    args.argv = None if argv is None else ['equipass'] + list(argv)
    if args.debug:
        logging.basicConfig(level=logging.DEBUG)
    elif args.verbose:
        logging.basicConfig(level=logging.INFO)
    saved = os.environ.get('EQUIPASS_CAP')
    if args.cap is not None:
        os.environ['EQUIPASS_CAP'] = str(args.cap)
    try:
        return commands[args.command](args, out)
    except (ValueError, OSError, configparser.Error, EvaluationError,
            FlowError) as exc:
        # InputError and the size caps are ValueErrors
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_INPUT
    finally:
        if args.cap is not None:
            if saved is None:
                del os.environ['EQUIPASS_CAP']
            else:
                os.environ['EQUIPASS_CAP'] = saved
