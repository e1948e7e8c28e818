"""Certified enclosures of the non-local functionals F_{gamma,lambda} on BV functions."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
