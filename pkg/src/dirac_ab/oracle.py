"""Finite-difference radial eigensolver used as an independent check of the closed forms.

The exterior radial operator

    -(f'' + f'/r) + lam^2 r^2 f + nu^2 / r^2 f = kappa f,     nu = |m + alpha|

is discretized on (0, r_max) and its lowest eigenvalues ``kappa`` are mapped
back to energies.  Near the origin the solution behaves like ``r**sigma`` with
``sigma = +nu`` (regular) or ``sigma = -nu`` (irregular).  The default scheme
factors that power out, ``f = r**sigma g``, which turns the problem into the
weighted Sturm-Liouville form

    -(w g')' + lam^2 r^2 w g = kappa w g,     w = r**(1 + 2 sigma)

with a smooth ``g``.  A cell-centred finite-volume discretization with exact
cell moments of ``w`` gives a symmetric tridiagonal matrix after diagonal
scaling, and the same second-order convergence for every ``sigma > -1``.

The plain Liouville substitution ``u = sqrt(r) f`` with Dirichlet ends is kept
as ``scheme="liouville"`` for regular channels; it only reaches second order
when ``nu >= 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError
from .spectrum import PhysicalParams, Regularity, classify_state, spin_orbit_shift

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap if not (args and callable(args[0])) else args[0]

DEFAULT_COUNT = 4000
BISECTION_TOL = 1e-12
MAX_LEVELS = 10


@njit(cache=True)
def _sturm_count(d, e2, x):
    """Number of eigenvalues of the tridiagonal (d, e) below x."""
    count = 0
    q = 1.0
    for i in range(d.shape[0]):
        q = d[i] - x - (e2[i - 1] / q if i else 0.0)
        if q == 0.0:
            # a zero pivot counts as negative, consistently with its use below
            q = -1e-300
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_lowest(d, e2, k, lo, hi, tol):
    out = np.empty(k)
    lower = lo
    for j in range(k):
        a, b = lower, hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if _sturm_count(d, e2, mid) > j:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
        lower = a
    return out


def sturm_count(diag, off, x: float) -> int:
    """Eigenvalues of the symmetric tridiagonal matrix (diag, off) below ``x``."""
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    return int(_sturm_count(diag, off * off, float(x)))


def tridiagonal_lowest_eigenvalues(diag, off, k: int, tol: float = BISECTION_TOL) -> np.ndarray:
    """The ``k`` smallest eigenvalues by bisection on the Sturm sequence."""
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    if diag.ndim != 1 or off.shape != (diag.size - 1,):
        raise ValueError("off-diagonal must have length len(diag) - 1")
    if not 1 <= k <= diag.size:
        raise ValueError(f"cannot extract {k} eigenvalues from a {diag.size}x{diag.size} matrix")
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))
    return _bisect_lowest(diag, off * off, k, lo, hi, tol)


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid of ``count`` cells on (0, r_max).

    The inner boundary is the origin itself; ``r_min`` is the first node.
    """

    r_max: float
    count: int = DEFAULT_COUNT

    def __post_init__(self):
        if self.count < 100:
            raise GridError(f"grid needs at least 100 points, got {self.count}")
        if not self.r_max > 0:
            raise GridError("r_max must be positive")

    @property
    def spacing(self) -> float:
        return self.r_max / self.count

    @property
    def r_min(self) -> float:
        return 0.5 * self.spacing

    def refined(self) -> "RadialGrid":
        return RadialGrid(self.r_max, 2 * self.count)


def required_r_max(params: PhysicalParams, m: int, k: int) -> float:
    """Smallest admissible r_max: 8 oscillator lengths plus the turning-point margin."""
    nu = abs(m + params.alpha)
    return 8.0 * params.length + math.sqrt((4 * (k - 1) + 2 * nu + 4) / params.lam)


def default_grid(params: PhysicalParams, m: int, k: int = 4, count: int = DEFAULT_COUNT) -> RadialGrid:
    return RadialGrid(required_r_max(params, m, k), count)


def _frobenius_matrix(lam, sigma, grid):
    h = grid.spacing
    faces = h * np.arange(grid.count + 1)
    q = 2.0 + 2.0 * sigma
    mass = (faces[1:] ** q - faces[:-1] ** q) / q
    potential = lam * lam * (faces[1:] ** (q + 2) - faces[:-1] ** (q + 2)) / (q + 2)
    w = np.zeros(grid.count + 1)
    w[1:] = faces[1:] ** (1.0 + 2.0 * sigma)  # no flux through the origin
    stiff_d = (w[:-1] + w[1:]) / h + potential
    stiff_e = -w[1:-1] / h
    scale = 1.0 / np.sqrt(mass)
    return stiff_d * scale * scale, stiff_e * scale[:-1] * scale[1:]


def _liouville_matrix(lam, nu, grid):
    h = grid.r_max / (grid.count + 1)
    r = h * np.arange(1, grid.count + 1)
    diag = 2.0 / h ** 2 + lam * lam * r * r + (nu * nu - 0.25) / (r * r)
    off = np.full(grid.count - 1, -1.0 / h ** 2)
    return diag, off


def radial_operator_eigenvalues(params: PhysicalParams, m: int, grid: RadialGrid, k: int,
                                regularity: Regularity | None = None,
                                scheme: str = "frobenius") -> np.ndarray:
    """Lowest ``k`` eigenvalues kappa = k_out^2 of the exterior radial operator."""
    if not 1 <= k <= MAX_LEVELS:
        raise ValueError(f"k must be in 1..{MAX_LEVELS}")
    if grid.r_max < required_r_max(params, m, k) * (1 - 1e-12):
        raise GridError(f"r_max={grid.r_max} below the required {required_r_max(params, m, k)}")
    if regularity is None:
        regularity = classify_state(m, params)
    nu = abs(m + params.alpha)
    if scheme == "frobenius":
        sigma = -nu if regularity.irregular else nu
        diag, off = _frobenius_matrix(params.lam, sigma, grid)
    elif scheme == "liouville":
        if regularity.irregular:
            raise ValueError("the Liouville scheme only supports the regular boundary condition")
        diag, off = _liouville_matrix(params.lam, nu, grid)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return tridiagonal_lowest_eigenvalues(diag, off, k)


def fd_radial_eigenvalues(params: PhysicalParams, m: int, grid: RadialGrid | None = None,
                          k: int = 4, regularity: Regularity | None = None,
                          scheme: str = "frobenius") -> np.ndarray:
    """Squared energies E_j^2 = M^2 - 2 M omega [1 - s(m+alpha)] + kappa_j."""
    grid = grid or default_grid(params, m, k)
    kappa = radial_operator_eigenvalues(params, m, grid, k, regularity, scheme)
    return params.M ** 2 - spin_orbit_shift(params, m) + kappa


def fd_nonrel_eigenvalues(params: PhysicalParams, m: int, grid: RadialGrid | None = None,
                          k: int = 4, regularity: Regularity | None = None,
                          spin_orbit: bool = True) -> np.ndarray:
    """Pauli-limit energies epsilon_j from the same radial operator.

    ``spin_orbit=False`` drops the s(m+alpha) coupling, leaving the spinless
    circular oscillator shifted down by omega.
    """
    grid = grid or default_grid(params, m, k)
    kappa = radial_operator_eigenvalues(params, m, grid, k, regularity)
    shift = spin_orbit_shift(params, m) if spin_orbit else 2.0 * params.lam
    return (kappa - shift) / (2.0 * params.M)


def richardson_extrapolate(coarse, fine) -> np.ndarray:
    """(4 v_{h/2} - v_h) / 3 per level, for a second-order scheme."""
    coarse = np.asarray(coarse, dtype=float)
    fine = np.asarray(fine, dtype=float)
    if coarse.shape != fine.shape:
        raise ValueError(f"level lists differ in length: {coarse.shape} vs {fine.shape}")
    return (4.0 * fine - coarse) / 3.0


def extrapolated_eigenvalues(params: PhysicalParams, m: int, k: int = 4,
                             count: int = DEFAULT_COUNT,
                             regularity: Regularity | None = None) -> np.ndarray:
    """E^2 levels from grids of ``count`` and ``2*count`` cells, Richardson-combined."""
    grid = default_grid(params, m, k, count)
    coarse = fd_radial_eigenvalues(params, m, grid, k, regularity)
    fine = fd_radial_eigenvalues(params, m, grid.refined(), k, regularity)
    return richardson_extrapolate(coarse, fine)
