"""Contextual probability calculus and two-slit Monte Carlo experiments."""

from ._ctxprob import *  # noqa: F401,F403
from ._ctxprob import __version__  # noqa: F401
