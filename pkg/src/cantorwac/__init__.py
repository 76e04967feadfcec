"""Cantor minimal systems, their dimension groups and circle skew products,
with certificate-carrying decisions of weak approximate conjugacy."""

from . import config, errors

__version__ = "0.1.0"
