# Copyright (C) 2017, 2023 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Utility functions (quantities, output records and run artifacts)."""

import hashlib
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd
import pint
from colored import fg, set_tty_aware, stylize

# Default to abbreviated units when formatting.
ureg = pint.UnitRegistry(cache_folder=':auto:')
ureg.formatter.default_format = '~P'

# Number of sample times in a time-series file.
TIMESERIES_NODES = 256


def parse_quantity(text):
    """Parse a scalar quantity; times are converted to seconds.

    >>> round(parse_quantity('2*pi'), 6)
    6.283185
    >>> parse_quantity('1.5 min')
    90.0
    >>> parse_quantity('3 m')
    Traceback (most recent call last):
        ...
    ValueError: 3 m is neither a time nor dimensionless
    """
    try:
        qty = ureg.parse_expression(str(text).strip())
    except (pint.errors.PintError, SyntaxError, TypeError) as exc:
        msg = f'cannot parse quantity {text!r}'
        raise ValueError(msg) from exc
    if not isinstance(qty, pint.Quantity):
        value = float(qty)
    elif qty.dimensionless:
        value = float(qty.to(ureg.dimensionless).magnitude)
    elif qty.check('[time]'):
        value = float(qty.to(ureg.second).magnitude)
    else:
        msg = f'{text} is neither a time nor dimensionless'
        raise ValueError(msg)
    if not math.isfinite(value):
        msg = f'quantity {text!r} is not finite'
        raise ValueError(msg)
    return value


def parse_quantities(text):
    """Parse a comma-separated list of quantities.

    >>> parse_quantities('1, 2')
    [1.0, 2.0]
    """
    return [parse_quantity(word) for word in str(text).split(',')
            if word.strip()]


def verdict_word(passed, stream=None):
    """Return PASS or FAIL, in colour when stream is a terminal."""
    word = 'PASS' if passed else 'FAIL'
    stream = sys.stdout if stream is None else stream
    if hasattr(stream, 'isatty') and stream.isatty():
        # colored checks sys.stdout, not stream
        set_tty_aware(False)
        try:
            return stylize(word, fg('green' if passed else 'red'))
        finally:
            set_tty_aware(True)
    return word


def candidate_record(candidate, filename):
    """Return the one-line record of a critical candidate."""
    return f'orbit={candidate.orbit_id} value={candidate.value!r} ' \
        f'gnorm={candidate.gradient_norm:.6e} ' \
        f'residual={candidate.residual:.6e} file={filename}'


def parse_record(line):
    """Parse a candidate record into a dict of strings.

    >>> parse_record('orbit=0 value=1.5 file=a.loop')['value']
    '1.5'
    """
    return dict(word.split('=', 1) for word in line.split())


def write_timeseries(path, loop, nodes=TIMESERIES_NODES):
    """Write t, q_1 ... q_n at uniform times over one period."""
    times = np.arange(nodes) * loop.period / nodes
    columns = [f'q_{i + 1}' for i in range(loop.dimension)]
    frame = pd.DataFrame(loop.sample(times), columns=columns)
    frame.insert(0, 't', times)
    with Path(path).open('w', encoding='utf-8') as f:
        f.write('# ' + ' '.join(frame.columns) + '\n')
        frame.to_csv(f, sep=' ', header=False, index=False,
                     float_format='%.12g')


def read_timeseries(path):
    """Read a time-series file back into a DataFrame."""
    with Path(path).open(encoding='utf-8') as f:
        names = f.readline().lstrip('#').split()
    return pd.read_csv(path, sep=' ', comment='#', header=None, names=names)


def digest(text):
    """Return the sha256 hex digest of text (or bytes)."""
    if isinstance(text, str):
        text = text.encode('utf-8')
    return hashlib.sha256(text).hexdigest()


def timestamp():
    """Return the current UTC time in ISO 8601 format."""
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


class RunManifest:
    """Command line, config digest, timestamps and artifacts of a run."""

    def __init__(self, argv, config_text):
        """Start a manifest for a run."""
        self.command = ' '.join(argv)
        self.digest = digest(config_text)
        self.started = timestamp()
        self.finished = None
        self.artifacts = []
        self.summary = ''

    def add(self, path):
        """Record an artifact written during the run."""
        self.artifacts.append(Path(path))

    def write(self, path, summary):
        """Finish the run and write the manifest file."""
        self.finished = timestamp()
        self.summary = summary
        missing = [a for a in self.artifacts if not a.exists()]
        if missing:
            msg = f'artifacts missing on disk: {missing}'
            raise FileNotFoundError(msg)
        lines = [f'command={self.command}', f'config_sha256={self.digest}',
                 f'started={self.started}', f'finished={self.finished}',
                 f'summary={summary}']
        lines += [f'artifact {a.name}' for a in self.artifacts]
        Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')


def read_manifest(path):
    """Return (fields, artifact names) of a manifest file."""
    fields, artifacts = {}, []
    for line in Path(path).read_text(encoding='utf-8').splitlines():
        if line.startswith('artifact '):
            artifacts.append(line.split(' ', 1)[1])
        elif '=' in line:
            key, value = line.split('=', 1)
            fields[key] = value
    return fields, artifacts
