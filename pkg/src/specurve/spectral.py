"""Spectral curves W_j(theta), truncation overlays, and physical energies.

Each level of the radial problem traces a strictly decreasing curve
W_j(theta).  The truncation solutions of :mod:`specurve.frobenius` supply
isolated points (theta_i, W) that must land on the curve of level j = i - 1;
``overlay_truncation`` measures how well they do.

``physical_energy`` solves the self-consistency E^2 = m^2 + p_z^2 +
tau W_j(2 alpha E / sqrt(tau)), the energy of one level of one fixed
potential.  ``permitted_chi`` reproduces the discrete field values obtained
by forcing the truncation instead; those are artifacts of selecting isolated
points on the curves (each root belongs to a different potential), and the
API makes callers acknowledge that before computing them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from . import frobenius, variational
from .exceptions import CoverageError, DomainError, NoSolutionError
from .model import PhysicalParameters, RadialProblem
from .model import reduce as reduce_problem

__all__ = [
    "SpectralCurve",
    "OverlayPoint",
    "OverlayReport",
    "PermittedValue",
    "EnergySolveInfo",
    "sweep",
    "overlay_grid",
    "overlay_truncation",
    "physical_energy",
    "permitted_chi",
    "reduce_roundtrip_residual",
]


@dataclass(frozen=True)
class SpectralCurve:
    """Sampled graph of W_level(theta) at fixed s and basis size."""

    s: float
    level: int
    thetas: np.ndarray
    values: np.ndarray
    n_basis: int

    def __post_init__(self) -> None:
        if len(self.thetas) != len(self.values) or len(self.thetas) < 2:
            raise DomainError("curve needs matching theta/value samples, at least two")
        if np.any(np.diff(self.thetas) <= 0):
            raise DomainError("curve thetas must be strictly increasing")
        if np.any(np.diff(self.values) >= 0):
            # dW/dtheta = -<1/x> < 0; a violation signals solver corruption.
            raise DomainError(
                f"curve level {self.level} not strictly decreasing; increase the basis size"
            )

    def interpolate(self, theta: float) -> float:
        """Local cubic through the four samples nearest theta."""
        t, v = self.thetas, self.values
        if theta < t[0] or theta > t[-1]:
            raise CoverageError(
                f"theta={theta} outside sampled range [{t[0]}, {t[-1]}]", points=(theta,)
            )
        pos = int(np.searchsorted(t, theta))
        lo = min(max(pos - 2, 0), len(t) - 4)
        window = slice(lo, lo + 4)
        # Newton's divided differences on the four points.
        xs, ys = t[window], v[window].copy()
        coef = ys.copy()
        for order in range(1, 4):
            coef[order:] = (coef[order:] - coef[order - 1 : -1]) / (xs[order:] - xs[:-order])
        out = coef[3]
        for order in (2, 1, 0):
            out = out * (theta - xs[order]) + coef[order]
        return float(out)


@dataclass(frozen=True)
class OverlayPoint:
    n: int
    i: int
    theta: float
    w_truncation: float
    w_curve: float
    deviation: float


@dataclass(frozen=True)
class OverlayReport:
    """Deviations of all truncation points from their spectral curves."""

    s: float
    points: tuple[OverlayPoint, ...]
    max_deviation: float


@dataclass(frozen=True)
class PermittedValue:
    """A discrete field value forced by the truncation (not physical).

    ``artifact_of_truncation`` is always True: the value ties an eigenvalue of
    one potential to a field strength chosen so that theta hits one root, and
    different roots belong to different potentials.
    """

    n: int
    i: int
    s: float
    l: int
    p_z: float
    theta: float
    w: float
    energy: float
    tau: float
    chi: float
    artifact_of_truncation: bool = True


@dataclass(frozen=True)
class EnergySolveInfo:
    iterations: int
    residual: float
    theta: float
    w: float


def sweep(
    s: float, j_max: int, theta_grid: np.ndarray, n_basis: int
) -> list[SpectralCurve]:
    """One curve per level j = 0..j_max, sampled on the given sorted grid."""
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise DomainError("theta grid must be one-dimensional with at least two points")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("theta grid must be strictly increasing")
    k = j_max + 1
    samples = np.empty((len(grid), k))
    for idx, theta in enumerate(grid):
        res = variational.solve(RadialProblem(s=s, theta=float(theta)), n_basis, k)
        samples[idx] = res.eigenvalues
    return [
        SpectralCurve(s=s, level=j, thetas=grid, values=samples[:, j], n_basis=n_basis)
        for j in range(k)
    ]


def overlay_grid(
    s: float,
    n_max: int,
    pad: float = 1.0,
    base_step: float = 0.25,
    window_step: float = 0.0125,
    exclusion: float = 0.1,
) -> np.ndarray:
    """Theta grid covering all truncation roots for n <= n_max.

    A uniform base grid is refined with four-point windows straddling every
    root (offsets +-window_step/2 and +-3*window_step/2, never the root
    itself, so interpolation across it stays honest).  Base points closer to
    a root than ``exclusion`` are dropped to keep sample spacing from
    collapsing where curve values are noisiest.
    """
    roots: list[float] = []
    for n in range(n_max + 1):
        roots.extend(frobenius.truncate(n, s).roots)
    lo = min(roots) - pad
    hi = max(roots) + pad
    base = np.arange(lo, hi + 0.5 * base_step, base_step)
    keep = np.ones(len(base), dtype=bool)
    for r in roots:
        keep &= np.abs(base - r) >= exclusion
    points = list(base[keep])
    for r in roots:
        for off in (-1.5, -0.5, 0.5, 1.5):
            points.append(r + off * window_step)
    return np.unique(np.asarray(points))


def overlay_truncation(
    s: float, n_max: int, curves: list[SpectralCurve]
) -> OverlayReport:
    """Check every root (theta_i, W) for n <= n_max against curve i - 1.

    Raises :class:`CoverageError` when a root falls outside the sampled range
    or its level has no curve.
    """
    by_level = {c.level: c for c in curves}
    points = []
    missing: list[float] = []
    for n in range(n_max + 1):
        sol = frobenius.truncate(n, s)
        for i, theta in enumerate(sol.roots, start=1):
            curve = by_level.get(i - 1)
            if curve is None:
                raise CoverageError(
                    f"no curve for level {i - 1} needed by n={n}, i={i}", points=(theta,)
                )
            if theta < curve.thetas[0] or theta > curve.thetas[-1]:
                missing.append(float(theta))
                continue
            w_curve = curve.interpolate(float(theta))
            points.append(
                OverlayPoint(
                    n=n,
                    i=i,
                    theta=float(theta),
                    w_truncation=sol.w,
                    w_curve=w_curve,
                    deviation=abs(w_curve - sol.w),
                )
            )
    if missing:
        raise CoverageError(
            f"roots outside the sampled theta range: {missing}", points=tuple(missing)
        )
    return OverlayReport(
        s=s, points=tuple(points), max_deviation=max(p.deviation for p in points)
    )


def physical_energy(
    params: PhysicalParameters,
    level: int,
    n_basis: int,
    full_output: bool = False,
):
    """Self-consistent energy of one level: E^2 = m^2 + p_z^2 + tau W_level(theta(E)).

    E > 0 is unique when it exists: the left side grows with E while the
    right side falls (theta grows with E and the curves decrease).  With
    alpha = 0 the coupling is absent and the closed form is returned without
    iteration.
    """
    tau = params.tau
    if tau <= 0:
        raise DomainError("tau must be positive for a physical energy")
    s = params.s
    sqrt_tau = math.sqrt(tau)
    k = level + 1

    def w_of(theta: float) -> float:
        res = variational.solve(RadialProblem(s=s, theta=theta), n_basis, k)
        return float(res.eigenvalues[level])

    base = params.m**2 + params.p_z**2

    if params.alpha == 0.0:
        w0 = w_of(0.0)
        if base + tau * w0 < 0:
            raise NoSolutionError("no positive energy: radicand negative at alpha = 0")
        e = math.sqrt(base + tau * w0)
        info = EnergySolveInfo(iterations=0, residual=0.0, theta=0.0, w=w0)
        return (e, info) if full_output else e

    counter = {"n": 0}

    def gap(e: float) -> float:
        counter["n"] += 1
        return e * e - base - tau * w_of(2.0 * params.alpha * e / sqrt_tau)

    w0 = w_of(0.0)
    hi = math.sqrt(max(base + tau * w0, 0.0))
    if hi == 0.0:
        hi = 1.0
    expansions = 0
    while gap(hi) < 0.0:
        hi *= 2.0
        expansions += 1
        if expansions > 60:
            raise NoSolutionError("no sign change found while bracketing the energy")
    e = brentq(gap, 0.0, hi, xtol=1e-13, rtol=8.9e-16)
    theta = 2.0 * params.alpha * e / sqrt_tau
    w = w_of(theta)
    residual = e * e - base - tau * w
    info = EnergySolveInfo(
        iterations=counter["n"], residual=float(residual), theta=float(theta), w=float(w)
    )
    return (float(e), info) if full_output else float(e)


def permitted_chi(
    params: PhysicalParameters,
    n: int,
    i: int,
    acknowledge_artifact: bool = False,
) -> PermittedValue:
    """The discrete chi that pins theta to root i of truncation order n.

    Requires ``acknowledge_artifact=True``: the output is the truncation
    artifact, not a spectrum of one fixed potential.  ``params.chi`` is
    ignored; the field value is the output.  Raises for the theta = 0 root
    (no Coulomb coupling, chi unconstrained), for a negative root (the sign
    is incompatible with E > 0, alpha > 0), and when the closed form has no
    real solution.
    """
    if not acknowledge_artifact:
        raise DomainError(
            "permitted_chi reproduces a truncation artifact; "
            "pass acknowledge_artifact=True to compute it anyway"
        )
    s = params.s
    sol = frobenius.truncate(n, s)
    if not 1 <= i <= n + 1:
        raise DomainError(f"root index must be in 1..{n + 1}, got {i}")
    theta = float(sol.roots[i - 1])
    if theta == 0.0:
        raise DomainError(
            "theta = 0 root: no Coulomb coupling, chi is unconstrained by the truncation"
        )
    if theta < 0.0 and params.alpha > 0.0:
        raise NoSolutionError(
            f"root theta = {theta} < 0 cannot be reached with E > 0 and alpha > 0"
        )
    denom = 1.0 - 4.0 * params.alpha**2 * sol.w / (theta * theta)
    if denom <= 0.0:
        raise NoSolutionError(
            f"no real energy: 1 - 4 alpha^2 W / theta^2 = {denom} <= 0"
        )
    base = params.m**2 + params.p_z**2
    if base <= 0.0:
        raise NoSolutionError("need m^2 + p_z^2 > 0 for a positive energy")
    energy = math.sqrt(base / denom)
    tau = (2.0 * params.alpha * energy / theta) ** 2
    chi = tau * math.sqrt(2.0 / (params.g * params.b))
    return PermittedValue(
        n=n,
        i=i,
        s=s,
        l=params.l,
        p_z=params.p_z,
        theta=theta,
        w=sol.w,
        energy=energy,
        tau=tau,
        chi=chi,
    )


def reduce_roundtrip_residual(value: PermittedValue, params: PhysicalParameters) -> float:
    """|theta(reconstructed) - theta_root| when the output chi is fed back in."""
    completed = replace(params, chi=value.chi)
    return abs(reduce_problem(completed, value.energy).theta - value.theta)
