"""Hyperbolic structures on ideal triangulations of cusped 3-manifolds."""

from ._hypstruct import *  # noqa: F401,F403
from ._hypstruct import __doc__  # noqa: F401
