# Copyright (C) 2022 Ben Elliston
# Copyright (C) 2026 The equipass developers
#
# This file is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 3 of the License, or
# (at your option) any later version.

"""A testsuite for the configfile module."""

import configparser
import importlib
import os
import unittest

from equipass import configfile


class TestConfigfile(unittest.TestCase):
    """Tests for configfile.py functions."""

    def test_get(self):
        """Test get() function."""
        self.assertEqual(configfile.get('burnside', 'power-cap'), '100000')
        with self.assertRaises(configparser.NoSectionError):
            configfile.get('nosection', 'power-cap')
        with self.assertRaises(configparser.NoOptionError):
            configfile.get('burnside', 'nooption')

    def test_typed(self):
        """Test getint() and getfloat()."""
        self.assertEqual(configfile.getint('solver', 'pathpoints'), 40)
        self.assertEqual(configfile.getfloat('solver', 'gtol'), 1e-6)

    def test_has_option_p(self):
        """Test has_option_p() function."""
        self.assertTrue(configfile.has_option_p('solver', 'sweeps'))
        self.assertFalse(configfile.has_option_p('solver', 'nooption'))
        self.assertFalse(configfile.has_option_p('nosection', 'sweeps'))

    def test_read_keyvalue(self):
        """Key=value text overrides the defaults of its section."""
        cfg = configfile.read_keyvalue('pathpoints = 12\n# note\n', 'solver')
        self.assertEqual(cfg['solver'].getint('pathpoints'), 12)
        self.assertEqual(cfg['solver'].getint('sweeps'), 200)

    def test_read_keyvalue_header(self):
        """An explicit section header in the text is accepted."""
        cfg = configfile.read_keyvalue('[problem]\nproblem = free\n',
                                       'problem')
        self.assertEqual(cfg['problem']['problem'], 'free')
        self.assertEqual(cfg['problem']['T0'], '2*pi')


class TestSizeCap(unittest.TestCase):
    """Test the EQUIPASS_CAP override."""

    def setUp(self):
        """Save EQUIPASS_CAP."""
        self.old = os.environ.get('EQUIPASS_CAP')

    def tearDown(self):
        """Restore EQUIPASS_CAP."""
        if self.old is None:
            os.environ.pop('EQUIPASS_CAP', None)
        else:
            os.environ['EQUIPASS_CAP'] = self.old

    def test_default(self):
        """Without the variable the config value is used."""
        os.environ.pop('EQUIPASS_CAP', None)
        self.assertEqual(configfile.size_cap(), 1000000)

    def test_override(self):
        """The variable takes precedence."""
        os.environ['EQUIPASS_CAP'] = '12'
        self.assertEqual(configfile.size_cap(), 12)

    def test_bad(self):
        """Non-integer and non-positive caps are rejected."""
        for value in ('many', '0'):
            os.environ['EQUIPASS_CAP'] = value
            with self.assertRaises(ValueError):
                configfile.size_cap()


class TestConfigFileSet(unittest.TestCase):
    """Test with EQUIPASSRC set."""

    def setUp(self):
        """Set EQUIPASSRC."""
        try:
            self.old = os.environ['EQUIPASSRC']
        except KeyError:
            self.old = None
        os.environ['EQUIPASSRC'] = '/file/not/found'

    def tearDown(self):
        """Clean up the environment."""
        if self.old is None:
            del os.environ['EQUIPASSRC']
        else:
            os.environ['EQUIPASSRC'] = self.old
        importlib.reload(configfile)

    def test_open(self):
        """Test opening a non-existent config file."""
        with self.assertRaises(FileNotFoundError):
            importlib.reload(configfile)


class TestConfigFileUnset(unittest.TestCase):
    """Test with EQUIPASSRC unset."""

    def setUp(self):
        """Unset EQUIPASSRC."""
        self.old = os.environ.pop('EQUIPASSRC', None)
        importlib.reload(configfile)

    def tearDown(self):
        """Reset the environment."""
        if self.old:
            os.environ['EQUIPASSRC'] = self.old
        importlib.reload(configfile)

    def test_open(self):
        """Test opening the default configuration file."""
        reference = configparser.ConfigParser()
        reference.read(configfile._fallback)  # pylint: disable=protected-access
        self.assertEqual(reference, configfile.config)
