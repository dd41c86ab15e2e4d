"""Procedural semantic scenes, simulated UAV capture, and labeled point clouds."""

from ._citysynth import *  # noqa: F401,F403
from ._citysynth import __doc__  # noqa: F401
