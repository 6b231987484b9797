"""Unit tests for the derivlex package."""

import os
import sys
import locale
import platform
import unittest

SLOW_TESTS_ENV_VAR = "DERIVLEX_SLOW_TESTS"
SLOW_TESTS = os.environ.get(SLOW_TESTS_ENV_VAR, "0") not in ("", "0")
HYPOTHESIS_PROFILE_ENV_VAR = "HYPOTHESIS_PROFILE"


def print_versions(hypothesis_profile: str | None = None):
    """Print platform information and library version."""
    from .. import __version__  # avoid circular imports
    from ..engine import FUEL_ENV_VAR, get_default_fuel

    fuel = os.environ.get(FUEL_ENV_VAR, "not specified")
    if hypothesis_profile is None:
        hypothesis_profile = os.environ.get(
            HYPOTHESIS_PROFILE_ENV_VAR, "default"
        )

    print(f"derivlex version:      {__version__}")
    print(f"Default fuel:          {get_default_fuel()}")
    print(f"{FUEL_ENV_VAR}:         {fuel}")
    print(f"Hypothesis profile:    {hypothesis_profile}")

    print(f"Python version:        {platform.python_version()}")
    print(f"Platform:              {platform.platform()}")
    print(f"Byte-ordering:         {sys.byteorder}")
    print(f"Default encoding:      {sys.getdefaultencoding()}")
    print(f"Default FS encoding:   {sys.getfilesystemencoding()}")
    print(f"Locale:                {locale.getlocale()}")

    print()

    sys.stdout.flush()


def load_hypothesis_profile(profile: str | None = None) -> str:
    """Load the hypothesis settings profile used by the property tests.

    The profile name defaults to the ``HYPOTHESIS_PROFILE`` environment
    variable, then to "default".  Returns the name of the loaded profile.
    """
    from hypothesis import settings

    from . import strategies  # noqa: F401  registers the profiles

    if profile is None:
        profile = os.environ.get(HYPOTHESIS_PROFILE_ENV_VAR, "default")
    settings.load_profile(profile)
    return profile


def suite(profile: str | None = None):
    """Return the test suite for the derivlex package.

    :param str profile:
        hypothesis profile ("default" or "acceptance") loaded before
        the test modules are discovered.
        Default: the ``HYPOTHESIS_PROFILE`` environment variable.
    """
    load_hypothesis_profile(profile)
    loader = unittest.TestLoader()
    return loader.discover(start_dir=os.path.dirname(__file__))


def test(
    verbosity: int = 1, failfast: bool = False, profile: str | None = None
):
    """Run the test suite for the derivlex package.

    :param int verbosity:
        verbosity level (higher is more verbose).
        Default: 1.
    :param bool failfast:
        stop the test run on the first error or failure.
        Default: False.
    :param str profile:
        hypothesis profile, "acceptance" runs 10k examples per property.
        Default: the ``HYPOTHESIS_PROFILE`` environment variable.
    """
    profile = load_hypothesis_profile(profile)
    print_versions(profile)
    tests = suite(profile)
    runner = unittest.TextTestRunner(verbosity=verbosity, failfast=failfast)
    result = runner.run(tests)

    return os.EX_OK if result.wasSuccessful() else 1
