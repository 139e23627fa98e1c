"""Series solution of the radial problem and its polynomial truncation.

Writing F(x) = x^s exp(-x^2/2) P(x) with P(x) = sum_j a_j x^j turns the
radial equation into the three-term recurrence

    a_{j+2} = [-theta a_{j+1} + (2j + 2s - W + 2) a_j] / [(j+2)(j + 2(s+1))],

with a_{-1} = 0 and a_0 = 1.  Requiring a_{n+1} = a_{n+2} = 0 forces

    W = 2(n + s + 1)

together with a_{n+1}(theta) = 0, a degree-(n+1) polynomial condition on
theta whose n+1 roots are all real.  Each root theta_i yields a distinct
potential sharing the single eigenvalue W, with eigenfunction
F(x) = x^s P_i(x) exp(-x^2/2) of polynomial degree n and exactly i-1
positive nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly

from .exceptions import DomainError, RootFindingError

__all__ = [
    "ThetaPolynomial",
    "TruncationSolution",
    "PolynomialEigenfunction",
    "recurrence_step",
    "coefficient_polynomials",
    "truncation_eigenvalue",
    "truncate",
    "eigenfunction",
    "count_nodes",
]

# Companion-matrix roots with |Im| above this (relative to the root scale)
# contradict the all-roots-real property and abort the solve.
_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class ThetaPolynomial:
    """A series coefficient a_j as a polynomial in theta, coeffs[k] * theta^k."""

    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, theta: float) -> float:
        return float(npoly.polyval(theta, self.coeffs))

    def derivative(self) -> "ThetaPolynomial":
        return ThetaPolynomial(tuple(npoly.polyder(self.coeffs)))


@dataclass(frozen=True)
class TruncationSolution:
    """All data produced by one truncation order n at exponent s.

    ``roots`` holds the n+1 real values theta_s^(n,i) in ascending order;
    ``coeff_table[i, j]`` is a_j evaluated at roots[i] (a_0 = 1 column).
    """

    n: int
    s: float
    w: float
    roots: np.ndarray
    coeff_table: np.ndarray


@dataclass(frozen=True)
class PolynomialEigenfunction:
    """F(x) = x^s P(x) exp(-x^2/2) for one truncation root.

    ``index`` is the 1-based root index i; ``coefficients`` are a_0 .. a_n.
    """

    n: int
    s: float
    index: int
    theta: float
    coefficients: tuple[float, ...]

    def polynomial(self, x):
        """P(x), the degree-n polynomial factor."""
        return npoly.polyval(x, self.coefficients)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x**self.s * self.polynomial(x) * np.exp(-0.5 * x * x)


def recurrence_step(j: int, s: float, w: float, theta: float, a_j: float, a_j1: float) -> float:
    """One recurrence step: a_{j+2} from (a_j, a_{j+1}).

    Valid for j >= -1 and s >= 0, where the denominator is positive.
    """
    if j < -1:
        raise DomainError(f"recurrence index must be >= -1, got {j}")
    if s < 0:
        raise DomainError(f"exponent s must be >= 0, got {s}")
    den = (j + 2.0) * (j + 2.0 * (s + 1.0))
    return (-theta * a_j1 + (2.0 * j + 2.0 * s - w + 2.0) * a_j) / den


def truncation_eigenvalue(n: int, s: float) -> float:
    """The shared eigenvalue W = 2(n + s + 1) forced by the truncation."""
    return 2.0 * (n + s + 1.0)


def _polynomial_table(n: int, s: float, upto: int) -> list[np.ndarray]:
    """Ascending-order coefficient arrays of a_0 .. a_upto at W = 2(n+s+1)."""
    w = truncation_eigenvalue(n, s)
    table = [np.array([1.0])]
    prev = np.zeros(1)  # a_{-1}
    for j in range(-1, upto - 1):
        den = (j + 2.0) * (j + 2.0 * (s + 1.0))
        a_j1 = table[-1]
        out = np.zeros(len(a_j1) + 1)
        out[1:] -= a_j1  # theta * a_{j+1}, shifted up one power
        out[: len(prev)] += (2.0 * j + 2.0 * s - w + 2.0) * prev
        table.append(out / den)
        prev = a_j1
    return table


def coefficient_polynomials(n: int, s: float) -> list[ThetaPolynomial]:
    """a_0(theta) .. a_{n+1}(theta) generated at W = 2(n+s+1).

    a_j has degree exactly j; the truncation condition is a_{n+1}(theta) = 0.
    """
    if n < 0:
        raise DomainError(f"truncation order n must be >= 0, got {n}")
    if s < 0:
        raise DomainError(f"exponent s must be >= 0, got {s}")
    return [ThetaPolynomial(tuple(c)) for c in _polynomial_table(n, s, n + 1)]


def _polish_root(coeffs: np.ndarray, dcoeffs: np.ndarray, x0: float) -> float:
    """A few Newton steps from x0; returns the refined root."""
    x = x0
    for _ in range(60):
        f = npoly.polyval(x, coeffs)
        fp = npoly.polyval(x, dcoeffs)
        if fp == 0.0:
            break
        step = f / fp
        x -= step
        if abs(step) <= 1e-16 * (1.0 + abs(x)):
            break
    return x


def _residual_tolerance(coeffs: np.ndarray, theta: float) -> float:
    # A true root evaluated in floating point cannot beat the running error
    # of Horner evaluation, which dominates 1e-12*max|coeff| at high degree.
    floor = np.finfo(float).eps * npoly.polyval(abs(theta), np.abs(coeffs))
    return max(1e-12 * np.max(np.abs(coeffs)), 4.0 * len(coeffs) * floor)


def truncate(n: int, s: float) -> TruncationSolution:
    """Solve the truncation condition at order n: all roots plus coefficients.

    Roots come from the companion matrix of a_{n+1}(theta), Newton-polished,
    with a sign-change bisection fallback.  Raises
    :class:`RootFindingError` if any root is materially complex, a pair
    coincides, or a residual stays above tolerance.
    """
    if n < 0:
        raise DomainError(f"truncation order n must be >= 0, got {n}")
    if s < 0:
        raise DomainError(f"exponent s must be >= 0, got {s}")
    table = _polynomial_table(n, s, n + 1)
    target = table[n + 1]
    dtarget = npoly.polyder(target)

    raw = npoly.polyroots(target)
    scale = 1.0 + np.max(np.abs(raw.real))
    bad = np.abs(raw.imag) > _IMAG_TOL * scale
    if np.any(bad):
        raise RootFindingError(
            f"complex roots for n={n}, s={s}: {raw[bad]} (all roots should be real)"
        )

    roots = np.sort([_polish_root(target, dtarget, r) for r in raw.real])
    for k, r in enumerate(roots):
        tol = _residual_tolerance(target, r)
        if abs(npoly.polyval(r, target)) <= tol:
            continue
        # Bracket between the neighbouring root midpoints and bisect.
        lo = 0.5 * (roots[k - 1] + r) if k > 0 else r - max(1.0, abs(r))
        hi = 0.5 * (r + roots[k + 1]) if k < len(roots) - 1 else r + max(1.0, abs(r))
        roots[k] = _bisect_root(target, lo, hi, r)
        if abs(npoly.polyval(roots[k], target)) > tol:
            raise RootFindingError(
                f"root {k} of a_{n + 1} did not converge for n={n}, s={s}: "
                f"residual {abs(npoly.polyval(roots[k], target)):.3e} > {tol:.3e}"
            )
    if np.any(np.diff(roots) <= 0):
        raise RootFindingError(f"roots not strictly increasing for n={n}, s={s}: {roots}")

    coeff_table = np.empty((n + 1, n + 1))
    for i, r in enumerate(roots):
        coeff_table[i] = [npoly.polyval(r, table[j]) for j in range(n + 1)]

    return TruncationSolution(
        n=n, s=float(s), w=truncation_eigenvalue(n, s), roots=roots, coeff_table=coeff_table
    )


def _bisect_root(coeffs: np.ndarray, lo: float, hi: float, fallback: float) -> float:
    flo = npoly.polyval(lo, coeffs)
    fhi = npoly.polyval(hi, coeffs)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        return fallback
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = npoly.polyval(mid, coeffs)
        if fmid == 0.0 or hi - lo <= 4e-16 * (1.0 + abs(mid)):
            return mid
        if flo * fmid < 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def eigenfunction(sol: TruncationSolution, i: int) -> PolynomialEigenfunction:
    """The eigenfunction for 1-based root index i of a truncation solution."""
    if not 1 <= i <= sol.n + 1:
        raise DomainError(f"root index must be in 1..{sol.n + 1}, got {i}")
    return PolynomialEigenfunction(
        n=sol.n,
        s=sol.s,
        index=i,
        theta=float(sol.roots[i - 1]),
        coefficients=tuple(sol.coeff_table[i - 1]),
    )


def count_nodes(f: PolynomialEigenfunction) -> int:
    """Number of strictly positive zeros of the polynomial factor P.

    Uses an exact Sturm chain over rational arithmetic on the (float)
    coefficients, so no tolerance enters the count.
    """
    return _sturm_positive_roots([Fraction(c) for c in f.coefficients])


def _sturm_positive_roots(coeffs: list[Fraction]) -> int:
    p0 = list(coeffs)
    while p0 and p0[-1] == 0:
        p0.pop()
    if len(p0) <= 1:
        return 0
    chain = [p0, [k * c for k, c in enumerate(p0)][1:]]
    while len(chain[-1]) > 1:
        rem = _neg_remainder(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(rem)

    def variations(signs: list[int]) -> int:
        signs = [sg for sg in signs if sg != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)

    sign = lambda v: (v > 0) - (v < 0)
    at_zero = [sign(p[0]) for p in chain]
    at_inf = [sign(p[-1]) for p in chain]
    return variations(at_zero) - variations(at_inf)


def _neg_remainder(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = list(a)
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        q = r[-1] / b[-1]
        shift = len(r) - len(b)
        for i, c in enumerate(b):
            r[i + shift] -= q * c
        r.pop()
    return [-c for c in r]
