"""Radial eigenproblem with centrifugal, Coulomb and harmonic terms.

Two independent solution routes, cross-validated against each other:

* exact polynomial truncation of the series solution
  (:mod:`specurve.frobenius`), which yields isolated (theta, W) points, and
* the Rayleigh-Ritz variational method (:mod:`specurve.variational`), which
  yields the full spectral curves W_j(theta) those points lie on.

:mod:`specurve.model` maps physical parameters onto the dimensionless
problem, :mod:`specurve.spectral` builds curves, overlays and
self-consistent energies, and :mod:`specurve.cli` exposes everything on the
command line.
"""

from .model import PhysicalParameters, RadialProblem, energy_from_w
from .model import reduce as reduce_problem

__version__ = "0.1.0"

__all__ = [
    "PhysicalParameters",
    "RadialProblem",
    "reduce_problem",
    "energy_from_w",
    "__version__",
]
