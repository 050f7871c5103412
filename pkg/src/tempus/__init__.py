"""Complex temporal functions of quantum responses and their applications.

The temporal function of a response ``S(omega)`` is ``tau = -i d ln S/d omega``:
its real part is the delay, its imaginary part the formation time. The
subpackages apply it to dispersion kinetics, multiphoton rates, critical
phenomena, tunneling and running couplings.
"""

from .errors import TempusError

__version__ = "0.1.0"

__all__ = ["TempusError", "__version__"]
