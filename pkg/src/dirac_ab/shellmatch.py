"""Finite-radius flux shell: exact matching across the delta shell and the R -> 0 limit.

Inside the shell (r < R) the particle sees no vector potential; outside it sees
the full flux.  With ``nu = |m + alpha|`` and ``lam = M omega`` the radial
solutions are

    interior:  C r^|m|  e^{-lam r^2/2} 1F1(a_in; |m|+1; lam r^2)
    exterior:  A r^nu   e^{-lam r^2/2} 1F1(a_A;  1+nu;  lam r^2)
             + B r^-nu  e^{-lam r^2/2} 1F1(a_B;  1-nu;  lam r^2)

glued by continuity of f and the jump f'(R+) - f'(R-) = (alpha s / R) f(R).
A bound state needs the exp(+lam r^2) growth of the exterior solution to
cancel, which fixes the energy.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DivisionError, NoRootError, PoleError, SingularSystemError
from .spectrum import PhysicalParams, wavenumbers
from .specfun import gamma_ratio, kummer_1f1, kummer_1f1_dz, nonpositive_integer

SCAN_POINTS = 400
ROOT_XTOL = 1e-10


@dataclass(frozen=True)
class ShellModel:
    R: float
    params: PhysicalParams
    m: int

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("shell radius must be positive")
        if self.R * math.sqrt(self.params.lam) > 0.3:
            warnings.warn(f"R={self.R} is not small against the oscillator length", stacklevel=2)

    @property
    def nu(self) -> float:
        return abs(self.m + self.params.alpha)


@dataclass(frozen=True)
class MatchedCoefficients:
    A: float
    B: float
    C: float
    E: float


def _kummer_a(order: float, k_sq: float, lam: float) -> float:
    return 0.5 * (order + 1.0 - k_sq / (2.0 * lam))


def _exterior_params(shell: ShellModel, E: float):
    _, k_out, _ = wavenumbers(shell.params, shell.m, E)
    lam, nu = shell.params.lam, shell.nu
    return (_kummer_a(nu, k_out, lam), 1.0 + nu), (_kummer_a(-nu, k_out, lam), 1.0 - nu)


def _solution(power, a, c, lam, r, exact=True):
    """Value and r-derivative of r**power e^{-lam r^2/2} 1F1(a; c; lam r^2)."""
    z = lam * r * r
    if exact:
        F, dF = kummer_1f1(a, c, z), kummer_1f1_dz(a, c, z)
    else:
        F, dF = 1.0, a / c  # lowest order in R: F ~ 1, dF/dr ~ (2a/c) lam r
    g = math.exp(-0.5 * z)
    val = r ** power * g * F
    der = val * (power / r - lam * r) + r ** power * g * dF * 2.0 * lam * r
    return val, der


def interior_solution(shell: ShellModel, E: float, r, C: float = 1.0):
    """C r^|m| e^{-lam r^2/2} 1F1(1/2 [|m| + 1 - k_in^2/(2 lam)]; |m|+1; lam r^2)."""
    k_in, _, _ = wavenumbers(shell.params, shell.m, E)
    lam, mu = shell.params.lam, abs(shell.m)
    a = _kummer_a(mu, k_in, lam)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r > shell.R * (1 + 1e-12)):
        raise ValueError("interior solution is defined on 0 < r <= R")
    vals = np.array([C * _solution(mu, a, mu + 1.0, lam, float(x))[0] for x in r.ravel()])
    vals = vals.reshape(r.shape)
    return vals if vals.ndim else float(vals)


def exterior_solution(shell: ShellModel, E: float, coeffs: MatchedCoefficients, r):
    (aA, cA), (aB, cB) = _exterior_params(shell, E)
    lam, nu = shell.params.lam, shell.nu
    r = np.asarray(r, dtype=float)
    vals = np.array([coeffs.A * _solution(nu, aA, cA, lam, float(x))[0]
                     + coeffs.B * _solution(-nu, aB, cB, lam, float(x))[0] for x in r.ravel()])
    vals = vals.reshape(r.shape)
    return vals if vals.ndim else float(vals)


def _check_nu(shell: ShellModel):
    if nonpositive_integer(-shell.nu) is not None:
        raise PoleError(f"|m+alpha| = {shell.nu} is an integer; the second exterior solution degenerates")


def match_coefficients(shell: ShellModel, E: float, lowest_order: bool = False) -> MatchedCoefficients:
    """Exterior amplitudes (A, B) for interior amplitude C = 1.

    ``lowest_order=True`` replaces the confluent series by their leading
    small-R forms, reproducing the textbook lowest-order matching.  Without
    flux the shell is inert and the interior solution continues unchanged.
    """
    if shell.params.alpha == 0.0:
        return MatchedCoefficients(1.0, 0.0, 1.0, E)
    _check_nu(shell)
    prm, R = shell.params, shell.R
    lam, nu, mu = prm.lam, shell.nu, abs(shell.m)
    exact = not lowest_order
    k_in, _, _ = wavenumbers(prm, shell.m, E)
    f_in, df_in = _solution(mu, _kummer_a(mu, k_in, lam), mu + 1.0, lam, R, exact)
    (aA, cA), (aB, cB) = _exterior_params(shell, E)
    uA, duA = _solution(nu, aA, cA, lam, R, exact)
    uB, duB = _solution(-nu, aB, cB, lam, R, exact)
    rhs_d = df_in + prm.alpha * prm.s / R * f_in
    det = uA * duB - uB * duA
    if det == 0.0 or abs(det) < 1e-300:
        raise SingularSystemError(f"matching determinant vanishes at E={E}")
    A = (f_in * duB - uB * rhs_d) / det
    B = (uA * rhs_d - duA * f_in) / det
    return MatchedCoefficients(A, B, 1.0, E)


def matching_residuals(shell: ShellModel, coeffs: MatchedCoefficients) -> tuple[float, float]:
    """Relative residuals of value continuity and of the derivative jump at r = R."""
    prm, R, E = shell.params, shell.R, coeffs.E
    lam, nu, mu = prm.lam, shell.nu, abs(shell.m)
    k_in, _, _ = wavenumbers(prm, shell.m, E)
    f_in, df_in = _solution(mu, _kummer_a(mu, k_in, lam), mu + 1.0, lam, R)
    f_in, df_in = coeffs.C * f_in, coeffs.C * df_in
    (aA, cA), (aB, cB) = _exterior_params(shell, E)
    uA, duA = _solution(nu, aA, cA, lam, R)
    uB, duB = _solution(-nu, aB, cB, lam, R) if coeffs.B else (0.0, 0.0)
    f_out = coeffs.A * uA + coeffs.B * uB
    df_out = coeffs.A * duA + coeffs.B * duB
    jump = prm.alpha * prm.s / R * f_in
    cont = abs(f_out - f_in) / max(abs(f_in), abs(coeffs.A * uA), abs(coeffs.B * uB))
    scale = max(abs(df_in), abs(coeffs.A * duA), abs(coeffs.B * duB), abs(jump))
    return cont, abs(df_out - df_in - jump) / scale


def shell_weights(shell: ShellModel, coeffs: MatchedCoefficients) -> tuple[float, float]:
    """Shares of the regular and irregular exterior terms in f(R); they sum to one.

    As R -> 0 these tend to the lowest-order coefficients (c_reg, c_irr).
    """
    (aA, cA), (aB, cB) = _exterior_params(shell, coeffs.E)
    lam, nu, R = shell.params.lam, shell.nu, shell.R
    a = coeffs.A * _solution(nu, aA, cA, lam, R)[0]
    b = coeffs.B * _solution(-nu, aB, cB, lam, R)[0] if coeffs.B else 0.0
    return a / (a + b), b / (a + b)


def lowest_order_coefficients(m: int, alpha: float, s: int) -> tuple[float, float]:
    """R -> 0 weights of the regular and irregular exterior solutions."""
    x = m + alpha
    if x == 0:
        raise DivisionError("m + alpha = 0")
    t = (abs(m) + alpha * s) / (2.0 * abs(x))
    return 0.5 + t, 0.5 - t


def quantization_mismatch(shell: ShellModel, E: float) -> float:
    """Coefficient of the growing exp(lam r^2) tail of the matched exterior solution.

    Both exterior terms grow like z^{-(1 + k^2/(2 lam))/2} e^z with z = lam r^2;
    the returned value is the sum of their prefactors.  Bound states are its
    roots in E.
    """
    coeffs = match_coefficients(shell, E)
    (aA, cA), (aB, cB) = _exterior_params(shell, E)
    lam, nu = shell.params.lam, shell.nu
    grow = coeffs.A * gamma_ratio(cA, aA) * lam ** (-0.5 * nu)
    if coeffs.B:
        grow += coeffs.B * gamma_ratio(cB, aB) * lam ** (0.5 * nu)
    return grow


def solve_finite_R_spectrum(shell: ShellModel, E_window: tuple[float, float],
                            count: int = 1) -> list[float]:
    """Lowest ``count`` roots of the quantization mismatch inside ``E_window``."""
    lo, hi = E_window
    if not 0 <= lo < hi:
        raise ValueError("window must lie on the positive branch with lo < hi")
    if count < 1:
        raise ValueError("count must be at least 1")
    grid = np.linspace(lo, hi, SCAN_POINTS)
    values = np.array([quantization_mismatch(shell, E) for E in grid])
    xtol = ROOT_XTOL * shell.params.M
    roots: list[float] = []
    for i in range(SCAN_POINTS - 1):
        f0, f1 = values[i], values[i + 1]
        if f0 == 0.0:
            roots.append(float(grid[i]))
        elif f0 * f1 < 0:
            root = optimize.brentq(lambda E: quantization_mismatch(shell, E), grid[i], grid[i + 1],
                                   xtol=xtol, rtol=4 * np.finfo(float).eps)
            roots.append(float(root))
        if len(roots) >= count:
            return roots[:count]
    raise NoRootError(f"found {len(roots)} of {count} roots in [{lo}, {hi}]")


def extrapolate_to_zero_radius(radii, roots) -> tuple[float, float]:
    """Fit E(R) = E0 + c R**p through the three smallest radii; return (E0, p)."""
    order = np.argsort(radii)[:3][::-1]
    (R1, R2, R3), (E1, E2, E3) = np.asarray(radii, float)[order], np.asarray(roots, float)[order]
    d12, d23 = E1 - E2, E2 - E3
    if d23 == 0.0:
        return float(E3), math.inf
    target = d12 / d23

    def gap(p):
        return (R1 ** p - R2 ** p) / (R2 ** p - R3 ** p) - target

    if target <= 0 or gap(0.05) * gap(8.0) > 0:
        raise ValueError("root sequence is not monotone in R")
    p = optimize.brentq(gap, 0.05, 8.0, xtol=1e-12)
    c = d23 / (R2 ** p - R3 ** p)
    return float(E3 - c * R3 ** p), float(p)
