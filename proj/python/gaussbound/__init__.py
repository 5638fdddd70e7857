"""Generalization-error bounds for Gaussian location problems."""

from gaussbound._core import *  # noqa: F401,F403
from gaussbound._core import __doc__  # noqa: F401

__version__ = "0.1.0"
