"""Rayleigh-Ritz driver: spectra, convergence studies, slope checks.

Because the basis does not depend on theta, the variational eigenvalues obey
the same slope law as the exact ones: dW/dtheta = -<1/x> < 0, which
``hellmann_feynman_check`` verifies against a central finite difference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .exceptions import DomainError
from .model import RadialProblem

__all__ = [
    "MAX_BASIS_SIZE",
    "VariationalResult",
    "ConvergenceTable",
    "solve",
    "convergence_study",
    "hellmann_feynman_check",
]

# Double precision supports this monomial-Gaussian basis up to here; beyond,
# even the projection fallback runs out of usable overlap directions.
MAX_BASIS_SIZE = 20


@dataclass(frozen=True)
class VariationalResult:
    """Lowest part of the spectrum at one (problem, basis size).

    Eigenvalues ascend and bound the exact ones from above; eigenvector
    columns are S-orthonormal.
    """

    problem: RadialProblem
    n_basis: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    overlap_condition: float
    method: str


@dataclass(frozen=True)
class ConvergenceTable:
    """Eigenvalues per basis size N = 2..n_max.

    ``rows`` holds (N, values) with min(N, k) entries each; ``converged[j]``
    reports whether level j moved by less than tol (relative) over the last
    basis enlargement.
    """

    problem: RadialProblem
    k: int
    rows: tuple[tuple[int, np.ndarray], ...]
    converged: tuple[bool, ...]
    tol: float

    @property
    def final(self) -> np.ndarray:
        return self.rows[-1][1]


def solve(problem: RadialProblem, n_basis: int, k: int) -> VariationalResult:
    """The k lowest eigenpairs at basis size n_basis (1 <= k <= n_basis <= 20)."""
    if not 1 <= k <= n_basis <= MAX_BASIS_SIZE:
        raise DomainError(
            f"need 1 <= k <= n_basis <= {MAX_BASIS_SIZE}, got k={k}, n_basis={n_basis}"
        )
    basis = linalg.BasisSpec(s=problem.s, size=n_basis)
    sol = linalg.solve_generalized(linalg.assemble(problem, basis), k)
    return VariationalResult(
        problem=problem,
        n_basis=n_basis,
        eigenvalues=sol.eigenvalues,
        eigenvectors=sol.eigenvectors,
        overlap_condition=sol.overlap_condition,
        method=sol.method,
    )


def convergence_study(
    problem: RadialProblem, n_max: int, k: int, tol: float = 1e-9
) -> ConvergenceTable:
    """Spectra for N = 2..n_max with per-level convergence flags.

    The default tol matches ten-digit table output.
    """
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    rows = []
    for n_basis in range(2, n_max + 1):
        res = solve(problem, n_basis, min(n_basis, k))
        rows.append((n_basis, res.eigenvalues))
    flags = []
    last, prev = rows[-1][1], rows[-2][1]
    for j in range(k):
        if j >= len(last) or j >= len(prev):
            flags.append(False)
        else:
            flags.append(bool(abs(last[j] - prev[j]) <= tol * abs(last[j])))
    return ConvergenceTable(
        problem=problem, k=k, rows=tuple(rows), converged=tuple(flags), tol=tol
    )


def hellmann_feynman_check(
    problem: RadialProblem, n_basis: int, level: int, step: float = 1e-4
) -> tuple[float, float]:
    """(central-difference slope of W_level, -<1/x> on that level).

    The two must agree for a converged level, and both are negative for
    every theta.
    """
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    k = level + 1
    plus = solve(RadialProblem(problem.s, problem.theta + step), n_basis, k)
    minus = solve(RadialProblem(problem.s, problem.theta - step), n_basis, k)
    slope_fd = (plus.eigenvalues[level] - minus.eigenvalues[level]) / (2.0 * step)

    center = solve(problem, n_basis, k)
    basis = linalg.BasisSpec(s=problem.s, size=n_basis)
    inv_x = linalg.expectation_value(basis, center.eigenvectors[:, level], power=-1)
    return float(slope_fd), float(-inv_x)
