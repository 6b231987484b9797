#!/usr/bin/env python3
# PYTHON_ARGCOMPLETE_OK

"""Command Line Interface (CLI) for the derivlex package."""

import sys

from . import cli

sys.exit(cli.main())
