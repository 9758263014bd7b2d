"""Inelastic tunneling current maps and detection kinetics for molecular transitions.

Lengths are in nm, energies in eV and biases in volts.
"""

from ._stml import *  # noqa: F401,F403
from ._stml import __version__  # noqa: F401
