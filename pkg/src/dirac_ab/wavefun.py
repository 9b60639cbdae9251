"""Two-component spinor eigenfunctions and their check against the first-order Dirac system.

Upper component, one channel:

    psi1 = a * r**p * L_n^p(lam r^2) * exp(-lam r^2 / 2) * exp(i m theta)

with ``p = |m+alpha|`` for regular channels, ``p = -xi`` (IrregularA) and
``p = xi - 1`` (IrregularB).  The lower component follows from the second
line of the coupled system,

    psi2 = -i / (E + M) * exp(i s theta) * (d/dr + (i s / r) d/dtheta - s alpha / r + lam r) psi1
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .errors import ChannelError, DegenerateEnergyError, IntegrabilityError
from .spectrum import PhysicalParams, Regularity, classify_state
from .specfun import gamma_ratio, laguerre

# five-point central stencil for the first derivative
_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
THETA_STEP = 1e-3


@dataclass(frozen=True)
class RadialProfile:
    """One partial wave of the upper component, ``amplitude`` being a_{m,n}."""

    kind: Regularity
    m: int
    n: int
    params: PhysicalParams
    amplitude: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("radial index must be non-negative")
        if self.kind.irregular and not 0.0 < self.params.flux.xi < 1.0:
            raise ChannelError("irregular profiles need a fractional flux 0 < xi < 1")

    @property
    def exponent(self) -> float:
        xi = self.params.flux.xi
        if self.kind is Regularity.IRREGULAR_A:
            return -xi
        if self.kind is Regularity.IRREGULAR_B:
            return xi - 1.0
        return abs(self.m + self.params.alpha)


def make_profile(params: PhysicalParams, m: int, n: int, amplitude: float = 1.0,
                 kind: Regularity | None = None) -> RadialProfile:
    """Profile for channel ``m``; the kind defaults to the channel's classification."""
    actual = classify_state(m, params)
    if kind is not None and kind is not actual:
        raise ChannelError(f"channel m={m} is {actual.value}; a {kind.value} term is not allowed")
    return RadialProfile(actual, m, n, params, amplitude)


def amplitude_from_series(a_m: float, n: int, order: float) -> float:
    """a_{m,n} = n! Gamma(order + 1) / Gamma(order + 1 + n) * a_m."""
    return a_m * math.factorial(n) * gamma_ratio(order + 1.0, order + 1.0 + n)


def radial_value(profile: RadialProfile, r):
    """amplitude * r**p * L_n^p(lam r^2) * exp(-lam r^2 / 2)."""
    r = np.asarray(r, dtype=float)
    lam, p = profile.params.lam, profile.exponent
    x = lam * r * r
    out = profile.amplitude * r ** p * laguerre(profile.n, p, x) * np.exp(-0.5 * x)
    return out if out.ndim else float(out)


def _lower_radial(profile: RadialProfile, r):
    """Radial bracket of psi2 (without the -i/(E+M) prefactor and phases)."""
    lam, p, n = profile.params.lam, profile.exponent, profile.n
    x = lam * r * r
    out = bracket(profile) * r ** (p - 1.0) * laguerre(n, p, x)
    if n >= 1:
        out = out - 2.0 * lam * r ** (p + 1.0) * laguerre(n - 1, p + 1.0, x)
    return profile.amplitude * out * np.exp(-0.5 * x)


def bracket(profile: RadialProfile) -> float:
    """Coefficient of r**(p-1) L_n^p in psi2: p - s(m + alpha)."""
    prm = profile.params
    return profile.exponent - prm.s * (profile.m + prm.alpha)


def printed_bracket(profile: RadialProfile) -> float:
    """The r**(p-1) coefficient exactly as printed for each kind of term.

    Regular: mu - s(alpha + m); IrregularA: -xi + s(N - alpha);
    IrregularB: xi - 1 - s(N + 1) - s alpha.  The IrregularB form differs from
    :func:`bracket` by 2 s (N + 1); it is kept for comparison only.
    """
    prm = profile.params
    N, xi, s, a = prm.flux.N, prm.flux.xi, prm.s, prm.alpha
    if profile.kind is Regularity.IRREGULAR_A:
        return -xi + s * (N - a)
    if profile.kind is Regularity.IRREGULAR_B:
        return xi - 1.0 - s * (N + 1) - s * a
    return abs(a + profile.m) - s * (a + profile.m)


def _validate(params: PhysicalParams, profiles: Sequence[RadialProfile]):
    for prof in profiles:
        if prof.params != params:
            raise ChannelError("profile built for different physical parameters")
        actual = classify_state(prof.m, params)
        if prof.kind is not actual:
            raise ChannelError(
                f"channel m={prof.m} is {actual.value}; its {prof.kind.value} term is excluded")


def _as_list(profiles) -> list[RadialProfile]:
    return [profiles] if isinstance(profiles, RadialProfile) else list(profiles)


def upper_component(params: PhysicalParams, profiles: RadialProfile | Iterable[RadialProfile],
                    r, theta):
    """psi1(r, theta) summed over the given partial waves."""
    profiles = _as_list(profiles)
    _validate(params, profiles)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    total = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
    for prof in profiles:
        total = total + radial_value(prof, r) * np.exp(1j * prof.m * theta)
    return total if total.ndim else complex(total)


def lower_component(params: PhysicalParams, profiles: RadialProfile | Iterable[RadialProfile],
                    E: float, r, theta):
    """psi2(r, theta) for energy E, from the closed-form derivative of psi1."""
    if abs(E + params.M) < 1e-12 * params.M:
        raise DegenerateEnergyError("E + M vanishes")
    profiles = _as_list(profiles)
    _validate(params, profiles)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    total = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
    for prof in profiles:
        total = total + _lower_radial(prof, r) * np.exp(1j * prof.m * theta)
    total = total * (-1j / (E + params.M)) * np.exp(1j * params.s * theta)
    return total if total.ndim else complex(total)


def lower_component_from_operator(params: PhysicalParams, profiles, E: float, r, theta,
                                  h: float | None = None):
    """psi2 by applying the first-order operator to psi1 with finite differences."""
    profiles = _as_list(profiles)
    r = np.asarray(r, dtype=float)
    h = h or 1e-4 * params.length
    s, a, lam = params.s, params.alpha, params.lam

    def psi1(rr, tt):
        return upper_component(params, profiles, rr, tt)

    dr = sum(c * psi1(r + o * h, theta) for c, o in zip(_STENCIL, _OFFSETS)) / h
    dth = sum(c * psi1(r, theta + o * THETA_STEP) for c, o in zip(_STENCIL, _OFFSETS)) / THETA_STEP
    op = dr + 1j * s / r * dth - s * a / r * psi1(r, theta) + lam * r * psi1(r, theta)
    return -1j / (E + params.M) * np.exp(1j * s * theta) * op


def residual_profile(params: PhysicalParams, E: float, profiles, r_grid,
                     theta: float = 0.7) -> tuple[np.ndarray, np.ndarray, float]:
    """Pointwise residuals of both lines of the coupled first-order system.

    Line 1: (E - M) psi1 = exp(-i s theta) (pi_r - i s pi_theta + i lam r) psi2
    Line 2: (E + M) psi2 = exp(+i s theta) (pi_r + i s pi_theta - i lam r) psi1

    with pi_r = -i d/dr and pi_theta = -(i/r) d/dtheta + alpha/r.  Derivatives
    use five-point stencils in r and theta.  Returns ``(|line1|, |line2|, scale)``
    where ``scale`` is sup |M psi| over the grid.
    """
    profiles = _as_list(profiles)
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise ValueError("residual grid must lie inside (0, inf)")
    h = 1e-4 * params.length
    s, a, lam, M = params.s, params.alpha, params.lam, params.M

    def psi1(rr, tt):
        return upper_component(params, profiles, rr, tt)

    def psi2(rr, tt):
        return lower_component(params, profiles, E, rr, tt)

    def d_r(f):
        return sum(c * f(r + o * h, theta) for c, o in zip(_STENCIL, _OFFSETS)) / h

    def d_theta(f):
        return sum(c * f(r, theta + o * THETA_STEP) for c, o in zip(_STENCIL, _OFFSETS)) / THETA_STEP

    p1, p2 = psi1(r, theta), psi2(r, theta)

    def pi_theta(f, val):
        return -1j / r * d_theta(f) + a / r * val

    line1 = (E - M) * p1 - np.exp(-1j * s * theta) * (
        -1j * d_r(psi2) - 1j * s * pi_theta(psi2, p2) + 1j * lam * r * p2)
    line2 = (E + M) * p2 - np.exp(1j * s * theta) * (
        -1j * d_r(psi1) + 1j * s * pi_theta(psi1, p1) - 1j * lam * r * p1)
    scale = float(M * np.max(np.sqrt(np.abs(p1) ** 2 + np.abs(p2) ** 2)))
    return np.abs(line1), np.abs(line2), scale


def dirac_residual(params: PhysicalParams, E: float, profiles, r_grid,
                   theta: float = 0.7) -> tuple[float, float]:
    """Sup-norm residuals of the two lines, each divided by sup |M psi|."""
    line1, line2, scale = residual_profile(params, E, profiles, r_grid, theta)
    return float(np.max(line1)) / scale, float(np.max(line2)) / scale


def residual_grid(params: PhysicalParams, count: int = 200) -> np.ndarray:
    """Default residual grid, 0.1 to 5 oscillator lengths."""
    return np.linspace(0.1, 5.0, count) * params.length


def quadrature_cutoff(profile: RadialProfile) -> float:
    lam = profile.params.lam
    return 8.0 / math.sqrt(lam) + math.sqrt((4 * profile.n + 2 * abs(profile.exponent) + 4) / lam)


def normalize(profile: RadialProfile) -> float:
    """Constant c with integral_0^inf |c f(r)|^2 r dr = 1."""
    p = profile.exponent
    if p <= -1.0:
        raise IntegrabilityError(f"r**{p} is not square-integrable with measure r dr")
    lam = profile.params.lam
    split = 1.0 / math.sqrt(lam)

    def smooth(r):
        return (profile.amplitude * laguerre(profile.n, p, lam * r * r) * math.exp(-0.5 * lam * r * r)) ** 2

    # the r**(2p+1) factor is integrated exactly by the algebraic weight
    inner, _ = integrate.quad(smooth, 0.0, split, weight="alg", wvar=(2 * p + 1, 0.0),
                              epsabs=1e-12, epsrel=1e-12, limit=200)
    outer, _ = integrate.quad(lambda r: radial_value(profile, r) ** 2 * r, split,
                              quadrature_cutoff(profile), epsabs=1e-12, epsrel=1e-12, limit=200)
    return 1.0 / math.sqrt(inner + outer)


def normalized(profile: RadialProfile) -> RadialProfile:
    return replace(profile, amplitude=profile.amplitude * normalize(profile))


@dataclass(frozen=True)
class SpinorSample:
    r: float
    theta: float
    psi1: complex
    psi2: complex


def sample_spinor(params: PhysicalParams, profiles, E: float, r_values,
                  theta: float = 0.0) -> list[SpinorSample]:
    r_values = np.asarray(r_values, dtype=float)
    p1 = np.atleast_1d(upper_component(params, profiles, r_values, theta))
    p2 = np.atleast_1d(lower_component(params, profiles, E, r_values, theta))
    return [SpinorSample(float(r), float(theta), complex(a), complex(b))
            for r, a, b in zip(np.atleast_1d(r_values), p1, p2)]
