"""Flux decomposition, regular/irregular selection rules and analytic energy levels.

Natural units (hbar = c = 1).  The physical system is fixed by
:class:`PhysicalParams`; a bound state by its angular index ``m`` and radial
index ``n``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ClassificationError, NonRealEnergy

DEGENERACY_RTOL = 1e-12


class Branch(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.POSITIVE else -1.0


class Regularity(enum.Enum):
    REGULAR = "Regular"
    IRREGULAR_A = "IrregularA"
    IRREGULAR_B = "IrregularB"

    @property
    def irregular(self) -> bool:
        return self is not Regularity.REGULAR


@dataclass(frozen=True)
class PhysicalParams:
    """Mass ``M``, oscillator frequency ``omega``, flux ``alpha``, spin label ``s``."""

    M: float
    omega: float
    alpha: float
    s: int

    def __post_init__(self):
        if not (self.M > 0 and math.isfinite(self.M)):
            raise ValueError(f"mass must be positive, got {self.M}")
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.s not in (1, -1):
            raise ValueError(f"spin label must be +1 or -1, got {self.s}")

    @property
    def lam(self) -> float:
        """Inverse squared oscillator length, M*omega."""
        return self.M * self.omega

    @property
    def length(self) -> float:
        return 1.0 / math.sqrt(self.lam)

    @property
    def flux(self) -> "FluxDecomposition":
        return decompose_flux(self.alpha)


@dataclass(frozen=True)
class FluxDecomposition:
    N: int
    xi: float


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    m: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"radial index must be non-negative, got {self.n}")


@dataclass(frozen=True)
class EnergyLevel:
    E: float
    branch: Branch
    regularity: Regularity
    qn: QuantumNumbers


def decompose_flux(alpha: float) -> FluxDecomposition:
    """Split ``alpha = N + xi`` with integer N and 0 <= xi < 1."""
    N = math.floor(alpha)
    xi = alpha - N
    if xi >= 1.0:  # rounding guard for alpha just below an integer
        N, xi = N + 1, 0.0
    return FluxDecomposition(int(N), xi)


def classify_state(m: int, params: PhysicalParams) -> Regularity:
    """Which radial solution survives the zero-radius flux limit in channel ``m``."""
    N, xi = params.flux.N, params.flux.xi
    if xi == 0.0:
        return Regularity.REGULAR
    if params.s == -1 and params.alpha > 0 and m == -N:
        return Regularity.IRREGULAR_A
    if params.s == 1 and params.alpha < 0 and m == -N - 1:
        return Regularity.IRREGULAR_B
    return Regularity.REGULAR


def spin_orbit_shift(params: PhysicalParams, m: int) -> float:
    """2 M omega [1 - s(m + alpha)], the constant added to E^2 - M^2 outside the flux."""
    return 2.0 * params.lam * (1.0 - params.s * (m + params.alpha))


def wavenumbers(params: PhysicalParams, m: int, E: float) -> tuple[float, float, float]:
    """Return ``(k_in^2, k_out^2, lambda^2)`` for the interior and exterior equations."""
    base = E * E - params.M ** 2
    k_out_sq = base + spin_orbit_shift(params, m)
    k_in_sq = base + 2.0 * params.lam * (1.0 - params.s * m)
    return k_in_sq, k_out_sq, params.lam ** 2


def _level(params, radicand, branch, regularity, qn) -> EnergyLevel:
    if radicand < 0:
        raise NonRealEnergy(f"E^2 = {radicand} < 0 for {qn} ({regularity.value})")
    return EnergyLevel(branch.sign * math.sqrt(radicand), branch, regularity, qn)


def regular_radicand(params: PhysicalParams, m: int, n: int) -> float:
    x = m + params.alpha
    return params.M ** 2 + 2.0 * params.lam * (abs(x) + params.s * x + 2 * n)


def energy_regular(params: PhysicalParams, qn: QuantumNumbers,
                   branch: Branch = Branch.POSITIVE) -> EnergyLevel:
    """E = +-sqrt(M^2 + 2 M omega [|m+alpha| + s(m+alpha) + 2n])."""
    cls = classify_state(qn.m, params)
    if cls.irregular:
        raise ClassificationError(f"channel m={qn.m} is {cls.value}, not Regular")
    return _level(params, regular_radicand(params, qn.m, qn.n), branch, cls, qn)


def energy_irregular_a(params: PhysicalParams, n: int,
                       branch: Branch = Branch.POSITIVE) -> EnergyLevel:
    """E = +-sqrt(M^2 + 4 M omega (n - xi)) for m = -N, s = -1."""
    flux = params.flux
    qn = QuantumNumbers(-flux.N, n)
    radicand = params.M ** 2 + 4.0 * params.lam * (n - flux.xi)
    return _level(params, radicand, branch, Regularity.IRREGULAR_A, qn)


def energy_irregular_b(params: PhysicalParams, n: int,
                       branch: Branch = Branch.POSITIVE) -> EnergyLevel:
    """E = +-sqrt(M^2 + 4 M omega (n + xi - 1)) for m = -N - 1, s = +1."""
    flux = params.flux
    qn = QuantumNumbers(-flux.N - 1, n)
    radicand = params.M ** 2 + 4.0 * params.lam * (n + flux.xi - 1.0)
    return _level(params, radicand, branch, Regularity.IRREGULAR_B, qn)


def energy_level(params: PhysicalParams, qn: QuantumNumbers,
                 branch: Branch = Branch.POSITIVE) -> EnergyLevel:
    """Classify ``qn.m`` and dispatch to the matching closed form."""
    cls = classify_state(qn.m, params)
    if cls is Regularity.IRREGULAR_A:
        return energy_irregular_a(params, qn.n, branch)
    if cls is Regularity.IRREGULAR_B:
        return energy_irregular_b(params, qn.n, branch)
    return energy_regular(params, qn, branch)


def _check_class(params, qn, regularity):
    actual = classify_state(qn.m, params)
    if actual is not regularity:
        raise ClassificationError(
            f"channel m={qn.m} is {actual.value}, requested {regularity.value}")


def energy_nonrel(params: PhysicalParams, qn: QuantumNumbers,
                  regularity: Regularity | None = None) -> float:
    """Pauli-limit energy epsilon (E = M + epsilon), spin-orbit term included."""
    if regularity is None:
        regularity = classify_state(qn.m, params)
    _check_class(params, qn, regularity)
    w, n = params.omega, qn.n
    xi = params.flux.xi
    if regularity is Regularity.IRREGULAR_A:
        shifted = w * (2 * n + 1 - 2 * xi)
    elif regularity is Regularity.IRREGULAR_B:
        shifted = w * (2 * n - 1 + 2 * xi)
    else:
        x = qn.m + params.alpha
        shifted = w * (2 * n + 1 + abs(x) + params.s * x)
    return shifted - w


def energy_nonrel_no_spin_orbit(params: PhysicalParams, qn: QuantumNumbers,
                                regularity: Regularity | None = None) -> float:
    """Shifted Pauli-limit energy ``epsilon + omega`` with the s(m+alpha) term dropped.

    Irregular channels give ``omega (2n + 1 - |m+alpha|)``; a regular channel
    gives the spinless ``omega (2n + 1 + |m+alpha|)`` ladder.
    """
    if regularity is None:
        regularity = classify_state(qn.m, params)
    _check_class(params, qn, regularity)
    w, n, xi = params.omega, qn.n, params.flux.xi
    if regularity is Regularity.IRREGULAR_A:
        return w * (2 * n + 1 - xi)
    if regularity is Regularity.IRREGULAR_B:
        return w * (2 * n + xi)
    return w * (2 * n + 1 + abs(qn.m + params.alpha))


def degeneracy_family(params: PhysicalParams, qn: QuantumNumbers, max_shift: int,
                      m_window: Iterable[int] | None = None) -> list[QuantumNumbers]:
    """States degenerate with ``qn`` under the regular spectrum.

    On the ladder side (m+alpha > 0 with s = +1, or m+alpha < 0 with s = -1) the
    family is generated by shifting (m, n) along the conserved combination, up
    to ``max_shift`` steps either way.  On the other side the energy depends on
    n only, and every regular m' from ``m_window`` in the same sign region is
    returned.  The input state is always the first element.
    """
    if classify_state(qn.m, params).irregular:
        raise ClassificationError(f"channel m={qn.m} is irregular")
    x = qn.m + params.alpha
    region = (x > 0) - (x < 0)
    candidates: list[QuantumNumbers] = []
    if region != 0 and region == params.s:
        # s=+1: m+n conserved; s=-1: n-m conserved
        step_n = -params.s
        for ell in range(-max_shift, max_shift + 1):
            m2, n2 = qn.m + ell, qn.n + step_n * ell
            if n2 >= 0:
                candidates.append(QuantumNumbers(m2, n2))
    else:
        if m_window is None:
            raise ValueError("an m window is required where E depends on n only")
        candidates = [QuantumNumbers(m2, qn.n) for m2 in m_window]
    E0 = regular_radicand(params, qn.m, qn.n)
    family = [qn]
    for c in candidates:
        if c == qn or classify_state(c.m, params).irregular:
            continue
        x2 = c.m + params.alpha
        if ((x2 > 0) - (x2 < 0)) != region:
            continue
        if abs(regular_radicand(params, c.m, c.n) - E0) <= DEGENERACY_RTOL * E0:
            family.append(c)
    return family


@dataclass
class SpectrumRow:
    qn: QuantumNumbers
    regularity: Regularity
    E: float
    epsilon: float
    status: str = "ok"
    family_id: int = -1
    error: str = field(default="", repr=False)


def spectrum_table(params: PhysicalParams, m_range: Iterable[int], n_range: Iterable[int],
                   branch: Branch = Branch.POSITIVE) -> list[SpectrumRow]:
    """Every (m, n) cell classified and evaluated, sorted by energy.

    Cells whose squared energy is negative are kept with ``E = nan`` and
    ``status = "nonreal"``; they sort last.  Rows sharing an energy (relative
    1e-12) share a ``family_id``.
    """
    m_range, n_range = list(m_range), list(n_range)
    if not m_range or not n_range:
        raise ValueError("ranges must be non-empty")
    rows = []
    for m in m_range:
        for n in n_range:
            qn = QuantumNumbers(m, n)
            cls = classify_state(m, params)
            eps = energy_nonrel(params, qn, cls)
            try:
                E = energy_level(params, qn, branch).E
                rows.append(SpectrumRow(qn, cls, E, eps))
            except NonRealEnergy as exc:
                rows.append(SpectrumRow(qn, cls, math.nan, eps, "nonreal", error=str(exc)))
    rows.sort(key=lambda r: (math.isnan(r.E), 0.0 if math.isnan(r.E) else r.E, r.qn.m, r.qn.n))
    family, last = -1, None
    for row in rows:
        if math.isnan(row.E):
            continue
        if last is None or abs(row.E - last) > DEGENERACY_RTOL * max(abs(last), 1.0):
            family += 1
            last = row.E
        row.family_id = family
    return rows
