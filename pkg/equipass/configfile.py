# Copyright (C) 2014 The University of New South Wales
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Configuration file processing (eg, size caps, solver defaults)."""

import configparser
import os
from pathlib import Path

# Shipped next to the package when installed from a source tree.
_fallback = Path(__file__).resolve().parent.parent / 'equipass.cfg'


def load(filename):
    """Load a configuration file (or files)."""
    result = config.read(filename)
    if not result:
        msg = f"config file {filename} not found"
        raise FileNotFoundError(msg)
    # Verify
    config.get('groups', 'size-cap')
    config.get('burnside', 'power-cap')
    config.get('solver', 'pathpoints')
    config.get('deformation', 'steps')


def get(section, option):
    """Get an option value for the named section.

    This works the same as ConfigParser.get.
    """
    return config.get(section, option)


def getint(section, option):
    """Get an integer option value for the named section."""
    return config.getint(section, option)


def getfloat(section, option):
    """Get a floating point option value for the named section."""
    return config.getfloat(section, option)


def has_option_p(section, option):
    """Check if this section has a given option.

    This works the same as ConfigParser.has_option.
    """
    return config.has_option(section, option)


def size_cap():
    """Return the maximum number of group elements to enumerate.

    $EQUIPASS_CAP takes precedence over the [groups] size-cap option.
    """
    value = os.getenv('EQUIPASS_CAP')
    if value is None:
        return getint('groups', 'size-cap')
    try:
        cap = int(value)
    except ValueError as exc:
        msg = f'EQUIPASS_CAP is not an integer: {value!r}'
        raise ValueError(msg) from exc
    if cap < 1:
        msg = f'EQUIPASS_CAP must be positive: {cap}'
        raise ValueError(msg)
    return cap


def read_keyvalue(text, section):
    """Read key=value lines into a ConfigParser under section.

    Defaults are taken from the same section of the main config.

    >>> cfg = read_keyvalue('pathpoints = 12', 'solver')
    >>> cfg.get('solver', 'pathpoints'), cfg.has_option('solver', 'sweeps')
    ('12', True)
    """
    parser = configparser.ConfigParser(strict=False)
    if config.has_section(section):
        parser.read_dict({section: dict(config.items(section))})
    parser.read_string(f'[{section}]\n' + text)
    return parser


config = configparser.ConfigParser()

# If $EQUIPASSRC is set, use that as the config filename.
if os.getenv('EQUIPASSRC') is not None:
    load(os.getenv('EQUIPASSRC'))
elif Path('equipass.cfg').exists():
    load('equipass.cfg')
else:
    load(str(_fallback))
