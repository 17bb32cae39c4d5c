"""Charging-infrastructure planning for electric robo-taxi fleets.

Thin wrapper over the native module; see the project README for the model
and the command-line interface.
"""

from ._amod_ev import *  # noqa: F401,F403
from ._amod_ev import __doc__  # noqa: F401
