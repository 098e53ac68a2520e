# Copyright (C) 2017 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Equivariant minimax for periodic Lagrangian systems."""

from equipass.context import Context
from equipass.minimax import run

__all__ = ['Context', 'run']
