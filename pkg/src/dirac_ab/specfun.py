"""Special-function kernel: Kummer's 1F1, generalized Laguerre polynomials, Gamma ratios.

Everything here is a pure function of its arguments.  The confluent series is
summed directly; for the arguments used in this package (``z = M*omega*r**2``
at small radius, or terminating polynomials) that is both accurate and cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, PoleError

INTEGER_TOL = 1e-12
SERIES_RTOL = 1e-16
SERIES_QUIET_TERMS = 3
SERIES_MAX_TERMS = 10_000


def nonpositive_integer(x: float, tol: float = INTEGER_TOL) -> int | None:
    """Return ``n`` if ``x`` equals ``-n`` (n >= 0) within ``tol``, else None."""
    k = round(x)
    if k <= 0 and abs(x - k) <= tol:
        return -int(k)
    return None


@dataclass(frozen=True)
class KummerParams:
    """Validated arguments of 1F1(a; c; z)."""

    a: float
    c: float
    z: float

    def __post_init__(self):
        if not math.isfinite(self.z) or self.z < 0:
            raise ValueError(f"z must be finite and non-negative, got {self.z}")
        p = nonpositive_integer(self.c)
        if p is not None:
            n = nonpositive_integer(self.a)
            # a = -n terminates the series before (c)_k reaches zero iff n <= p
            if n is None or n > p:
                raise PoleError(f"1F1 undefined for c={self.c} with a={self.a}")

    @property
    def degree(self) -> int | None:
        """Polynomial degree when the series terminates, else None."""
        return nonpositive_integer(self.a)


def _sum_series(first: float, ratio, degree: int | None) -> float:
    # ratio(k) maps term k to term k+1
    total = term = first
    if degree is not None:
        for k in range(degree):
            term *= ratio(k)
            total += term
        return total
    quiet = 0
    for k in range(SERIES_MAX_TERMS):
        term *= ratio(k)
        total += term
        if term == 0.0 or (total != 0.0 and abs(term / total) < SERIES_RTOL):
            quiet += 1
            if quiet >= SERIES_QUIET_TERMS:
                return total
        else:
            quiet = 0
    raise ConvergenceError(f"1F1 series did not converge in {SERIES_MAX_TERMS} terms")


def kummer_1f1(a: float, c: float, z: float) -> float:
    """Confluent hypergeometric function 1F1(a; c; z) for real a, c and z >= 0.

    Terminating cases (``a = -n``) are summed exactly as a degree-n polynomial.
    """
    p = KummerParams(float(a), float(c), float(z))
    n = p.degree
    a = float(-n) if n is not None else p.a
    c, z = p.c, p.z
    return _sum_series(1.0, lambda k: (a + k) * z / ((c + k) * (k + 1)), n)


def kummer_1f1_dz(a: float, c: float, z: float) -> float:
    """d/dz 1F1(a; c; z), from the term-wise differentiated series."""
    p = KummerParams(float(a), float(c), float(z))
    n = p.degree
    a = float(-n) if n is not None else p.a
    c, z = p.c, p.z
    if n == 0:
        return 0.0
    # term k of the derivative: (a)_{k+1} / (c)_{k+1} * z**k / k!
    return _sum_series(a / c, lambda k: (a + k + 1) * z / ((c + k + 1) * (k + 1)),
                       None if n is None else n - 1)


def log_gamma_ratio(c: float, a: float) -> tuple[float, float]:
    """Return ``(sign, log|Gamma(c)/Gamma(a)|)``; sign is 0 when a is a pole."""
    if nonpositive_integer(c, 0.0) is not None:
        raise PoleError(f"Gamma({c}) is at a pole")
    if nonpositive_integer(a, 0.0) is not None:
        return 0.0, -math.inf
    sign = float(special.gammasgn(c) * special.gammasgn(a))
    return sign, float(special.gammaln(c) - special.gammaln(a))


def gamma_ratio(c: float, a: float) -> float:
    """Gamma(c) / Gamma(a), zero when ``a`` is a non-positive integer."""
    sign, log_mag = log_gamma_ratio(c, a)
    return sign * math.exp(log_mag) if sign else 0.0


def kummer_asymptotic(a: float, c: float, z: float) -> float:
    """Leading large-z form Gamma(c)/Gamma(a) * exp(z) * z**(a - c)."""
    if z <= 0:
        raise ValueError("asymptotic form needs z > 0")
    if nonpositive_integer(a, 0.0) is not None:
        raise PoleError(f"Gamma({a}) is at a pole")
    sign, log_mag = log_gamma_ratio(c, a)
    return sign * math.exp(log_mag + z + (a - c) * math.log(z))


def laguerre(n: int, mu: float, x):
    """Generalized Laguerre polynomial L_n^mu(x) by upward three-term recurrence.

    ``mu`` may be any real number (negative fractional orders are needed for
    the irregular channels).  ``x`` may be a scalar or an array.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + mu - x
    for k in range(2, n + 1):
        prev, cur = cur, ((2 * k - 1 + mu - x) * cur - (k - 1 + mu) * prev) / k
    return cur if cur.ndim else float(cur)


def laguerre_kummer_prefactor(n: int, mu: float) -> float:
    """Gamma(n + mu + 1) / (n! Gamma(mu + 1)), so that L_n^mu = prefactor * 1F1(-n; mu+1; x)."""
    sign, log_mag = log_gamma_ratio(n + mu + 1.0, mu + 1.0)
    return sign * math.exp(log_mag - math.lgamma(n + 1.0))


def laguerre_radial_derivative(n: int, mu: float, M: float, omega: float, r):
    """d/dr L_n^mu(M omega r^2) = -2 M omega r L_{n-1}^{mu+1}(M omega r^2)."""
    r = np.asarray(r, dtype=float)
    if n == 0:
        out = np.zeros_like(r)
    else:
        lam = M * omega
        out = -2.0 * lam * r * laguerre(n - 1, mu + 1.0, lam * r * r)
    return out if out.ndim else float(out)


def laguerre_derivative_lhs(n: int, mu: float, M: float, omega: float, r: float) -> float:
    """Centered finite difference of r -> L_n^mu(M omega r^2)."""
    h = 1e-6 * max(1.0, r)
    lam = M * omega
    return (laguerre(n, mu, lam * (r + h) ** 2) - laguerre(n, mu, lam * (r - h) ** 2)) / (2 * h)
