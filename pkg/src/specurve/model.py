"""Physical parameter set and the dimensionless radial eigenproblem.

The radial equation solved by this package is

    -F''(x) - F'(x)/x + s^2/x^2 F - theta/x F + x^2 F = W F,   0 < x < infinity,

with square-integrability under the weight x dx.  All quantities are
dimensionless naturals (hbar = c = 1).  A :class:`PhysicalParameters` set maps
onto a :class:`RadialProblem` through

    s     = sqrt(l^2 - alpha^2)
    tau   = sqrt(g b / 2) |chi|
    theta = 2 alpha E / sqrt(tau)

and an eigenvalue W maps back to an energy through E^2 = m^2 + p_z^2 + tau W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError, NoSolutionError

__all__ = ["PhysicalParameters", "RadialProblem", "reduce", "energy_from_w"]


@dataclass(frozen=True)
class PhysicalParameters:
    """Particle, coupling and field parameters.

    ``chi`` may be left ``None`` while the magnetic-field parameter is still
    undetermined (it is an output of the permitted-value construction in
    :mod:`specurve.spectral`); operations that need ``tau`` then raise.
    """

    m: float
    p_z: float
    alpha: float
    l: int
    g: float
    b: float
    chi: float | None = None

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise DomainError("alpha must be >= 0")
        if self.l * self.l < self.alpha * self.alpha:
            raise DomainError(
                f"imaginary gamma: need l^2 >= alpha^2, got l={self.l}, alpha={self.alpha}"
            )
        if self.g <= 0 or self.b <= 0:
            raise DomainError("couplings g and b must be positive")

    @property
    def s(self) -> float:
        """Indicial exponent sqrt(l^2 - alpha^2)."""
        return math.sqrt(self.l * self.l - self.alpha * self.alpha)

    @property
    def tau(self) -> float:
        """Oscillator scale sqrt(g b / 2) |chi|; requires chi to be set."""
        if self.chi is None:
            raise DomainError("chi is not set on these parameters")
        return math.sqrt(0.5 * self.g * self.b) * abs(self.chi)


@dataclass(frozen=True)
class RadialProblem:
    """The dimensionless problem: exponent s >= 0 and Coulomb coefficient theta.

    theta is unrestricted; bound states exist for every real theta.
    """

    s: float
    theta: float

    def __post_init__(self) -> None:
        if self.s < 0:
            raise DomainError(f"exponent s must be >= 0, got {self.s}")


def reduce(params: PhysicalParameters, energy: float) -> RadialProblem:
    """Map physical parameters at a given energy to the dimensionless problem.

    Raises :class:`DomainError` when tau vanishes (the x^2-term normalization
    collapses and no dimensionless form exists).
    """
    tau = params.tau
    if tau == 0.0:
        raise DomainError("tau = 0: degenerate scaling, the x^2 term cannot be normalized")
    return RadialProblem(s=params.s, theta=2.0 * params.alpha * energy / math.sqrt(tau))


def energy_from_w(params: PhysicalParameters, w: float, antiparticle: bool = False) -> float:
    """Energy from an eigenvalue W: E = sqrt(m^2 + p_z^2 + tau W).

    The positive branch is returned by default; ``antiparticle=True`` flips
    the sign.  Raises :class:`NoSolutionError` on a negative radicand.
    """
    radicand = params.m**2 + params.p_z**2 + params.tau * w
    if radicand < 0:
        raise NoSolutionError(f"no real energy: m^2 + p_z^2 + tau*W = {radicand} < 0")
    e = math.sqrt(radicand)
    return -e if antiparticle else e
