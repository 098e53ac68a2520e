# Copyright (C) 2011, 2012, 2014 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Reading input files from local paths or URLs."""

from pathlib import Path

import requests


def read_text(location):
    """Return the text at location (a file path or an http(s) URL)."""
    location = str(location)
    if not location.startswith('http'):
        # Local file path
        return Path(location).read_text(encoding='utf-8')
    try:
        resp = requests.request('GET', location, timeout=5)
    except requests.exceptions.Timeout as exc:
        msg = f'timeout fetching {location}'
        raise TimeoutError(msg) from exc
    if not resp.ok:
        msg = f'HTTP {resp.status_code}: {location}'
        raise ConnectionError(msg)
    return resp.text


def lines(text):
    """Yield (line number, stripped line), skipping blanks and comments.

    >>> list(lines('# header\\n\\n  group e degree=1  \\n'))
    [(3, 'group e degree=1')]
    """
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if line:
            yield lineno, line
