# Copyright (C) 2022 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""Useful internal types (mostly exceptions)."""


class InvariantViolation(AssertionError):
    """An internal invariant does not hold."""


class GroupTooLargeError(ValueError):
    """The element count of a group exceeds the configured cap."""


class PowerTooLargeError(ValueError):
    """An ideal power would need too many products."""


class PreconditionError(ValueError):
    """A documented precondition of an operation is not met."""


class InputError(ValueError):
    """A malformed input file.

    >>> str(InputError('bad cycle', 3))
    'line 3: bad cycle'
    """

    def __init__(self, msg, lineno=None):
        """Record the message and the (1-based) line number."""
        self.lineno = lineno
        if lineno is not None:
            msg = f'line {lineno}: {msg}'
        ValueError.__init__(self, msg)


class EvaluationError(ArithmeticError):
    """A problem callback returned a non-finite value."""

    def __init__(self, what, time):
        """Record which callback failed and at which node time."""
        self.what = what
        self.time = time
        msg = f'non-finite {what} at t={time!r}'
        ArithmeticError.__init__(self, msg)


class FlowError(RuntimeError):
    """The deformation flow could not make an admissible step."""
