"""Command-line interface: spectra, spinor dumps, shell convergence and oracle checks.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 computation failure.
Every real number is written as ``{:.14e}`` (15 significant digits) so that
identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import oracle, shellmatch, wavefun
from .errors import (ConvergenceError, DegenerateEnergyError, DiracABError, NoRootError,
                     NonRealEnergy, SingularSystemError)
from .spectrum import (Branch, PhysicalParams, QuantumNumbers, classify_state,
                       degeneracy_family, energy_level, energy_nonrel, spectrum_table)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2, 3
VERIFY_RTOL = 1e-4
RESIDUAL_TOL = 1e-8
_COMPUTE_ERRORS = (ConvergenceError, NoRootError, SingularSystemError, DegenerateEnergyError,
                   ArithmeticError)


class IntRange(click.ParamType):
    """Inclusive integer interval written ``a..b``; a bare integer means ``a..a``."""

    name = "range"

    def convert(self, value, param, ctx):
        if isinstance(value, range):
            return value
        text = str(value).strip()
        try:
            if ".." in text:
                lo, hi = (int(part) for part in text.split("..", 1))
            else:
                lo = hi = int(text)
        except ValueError:
            self.fail(f"{value!r} is not an integer range a..b", param, ctx)
        if hi < lo:
            self.fail(f"empty range {value!r}", param, ctx)
        return range(lo, hi + 1)


class FloatList(click.ParamType):
    name = "list"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return [float(v) for v in value]
        try:
            return [float(v) for v in str(value).split(",") if v.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of numbers", param, ctx)


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    m_range: range
    n_range: range
    branch: Branch
    output_format: str
    output_path: Path | None


def _fmt(value) -> str | None:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else f"{float(value):.14e}"
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        # round-trip through the CSV text so both formats carry the same number
        return None if math.isnan(value) else float(f"{float(value):.14e}")
    return value


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        data = [{c: _json_value(row[c]) for c in columns} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _emit(config: RunConfig, rows: list[dict], columns: list[str]):
    text = render(rows, columns, config.output_format)
    if config.output_path is None:
        click.echo(text, nl=False)
    else:
        config.output_path.write_text(text)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def common_options(func):
    options = [
        click.option("--mass", type=float, default=1.0, show_default=True),
        click.option("--omega", type=float, default=0.05, show_default=True),
        click.option("--alpha", type=float, default=0.3, show_default=True),
        click.option("--spin", type=int, default=1, show_default=True, help="+1 or -1"),
        click.option("--m", "m_range", type=IntRange(), default="-3..3", show_default=True),
        click.option("--n", "n_range", type=IntRange(), default="0..3", show_default=True),
        click.option("--branch", type=click.Choice(["positive", "negative"]), default="positive",
                     show_default=True),
        click.option("--format", "output_format", type=click.Choice(["csv", "json"]),
                     default="csv", show_default=True),
        click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None),
        click.option("--unit-check", is_flag=True, help="print omega/M to stderr"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config(mass, omega, alpha, spin, m_range, n_range, branch, output_format, output,
            unit_check) -> RunConfig:
    try:
        params = PhysicalParams(mass, omega, alpha, spin)
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))
    if unit_check:
        click.echo(f"omega/M = {omega / mass:.14e}", err=True)
        click.echo(f"oscillator length * M = {mass * params.length:.14e}", err=True)
    return RunConfig(params, m_range, n_range, Branch(branch), output_format, output)


def _single(rng: range, name: str) -> int:
    if len(rng) != 1:
        _fail(EXIT_INPUT, f"--{name} must select a single value here, got {rng.start}..{rng.stop - 1}")
    return rng.start


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Dirac oscillator with an Aharonov-Bohm flux line (natural units)."""


@main.command()
@common_options
def spectrum(**kwargs):
    """Analytic relativistic and Pauli-limit levels over an (m, n) grid."""
    cfg = _config(**kwargs)
    rows = [{
        "m": row.qn.m, "n": row.qn.n, "class": row.regularity.value, "status": row.status,
        "E_relativistic": row.E, "epsilon_nonrel": row.epsilon,
        "degeneracy_family_id": row.family_id,
    } for row in spectrum_table(cfg.params, cfg.m_range, cfg.n_range, cfg.branch)]
    _emit(cfg, rows, ["m", "n", "class", "status", "E_relativistic", "epsilon_nonrel",
                      "degeneracy_family_id"])


@main.command()
@common_options
@click.option("--theta", type=float, default=0.0, show_default=True)
@click.option("--r-min", type=float, default=None, help="default 0.1 oscillator lengths")
@click.option("--r-max", type=float, default=None, help="default 5 oscillator lengths")
@click.option("--points", type=click.IntRange(2, 100_000), default=200, show_default=True)
@click.option("--normalize/--no-normalize", default=False, show_default=True)
@click.option("--check", is_flag=True, help="append pointwise residuals; exit 1 above 1e-8")
def wavefunction(theta, r_min, r_max, points, normalize, check, **kwargs):
    """Spinor components of one (m, n) eigenstate on a radial grid."""
    cfg = _config(**kwargs)
    prm = cfg.params
    m, n = _single(cfg.m_range, "m"), _single(cfg.n_range, "n")
    r_min = 0.1 * prm.length if r_min is None else r_min
    r_max = 5.0 * prm.length if r_max is None else r_max
    if not 0 < r_min < r_max:
        _fail(EXIT_INPUT, "radial grid needs 0 < r-min < r-max")
    try:
        E = energy_level(prm, QuantumNumbers(m, n), cfg.branch).E
        profile = wavefun.make_profile(prm, m, n)
        if normalize:
            profile = wavefun.normalized(profile)
    except (NonRealEnergy, ValueError) as exc:
        _fail(EXIT_INPUT, str(exc))
    r = np.linspace(r_min, r_max, points)
    try:
        psi1 = np.atleast_1d(wavefun.upper_component(prm, profile, r, theta))
        psi2 = np.atleast_1d(wavefun.lower_component(prm, profile, E, r, theta))
        if check:
            line1, line2, scale = wavefun.residual_profile(prm, E, profile, r, theta)
    except _COMPUTE_ERRORS as exc:
        _fail(EXIT_COMPUTE, str(exc))
    columns = ["r", "re_psi1", "im_psi1", "re_psi2", "im_psi2"]
    rows = [{"r": r[i], "re_psi1": psi1[i].real, "im_psi1": psi1[i].imag,
             "re_psi2": psi2[i].real, "im_psi2": psi2[i].imag} for i in range(points)]
    if check:
        columns += ["residual_1", "residual_2"]
        for i, row in enumerate(rows):
            row["residual_1"] = line1[i] / scale
            row["residual_2"] = line2[i] / scale
    _emit(cfg, rows, columns)
    if check:
        worst = max(float(np.max(line1)), float(np.max(line2))) / scale
        click.echo(f"max residual = {worst:.14e} (E = {E:.14e})", err=True)
        if not worst <= RESIDUAL_TOL:
            sys.exit(EXIT_VERIFY)


@main.command("match")
@common_options
@click.option("--R", "radii", type=FloatList(), default="0.1,0.03,0.01,0.003", show_default=True,
              help="shell radii in oscillator lengths, descending")
def match_cmd(radii, **kwargs):
    """Finite-radius shell roots approaching the zero-radius level."""
    cfg = _config(**kwargs)
    prm = cfg.params
    m, n = _single(cfg.m_range, "m"), _single(cfg.n_range, "n")
    if cfg.branch is Branch.NEGATIVE:
        _fail(EXIT_INPUT, "shell matching is implemented on the positive branch")
    if not radii or any(R <= 0 for R in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        _fail(EXIT_INPUT, "--R must be positive and strictly descending")
    try:
        target = energy_level(prm, QuantumNumbers(m, n)).E
    except (NonRealEnergy, ValueError) as exc:
        _fail(EXIT_INPUT, str(exc))
    # half a level spacing in E^2 on either side of the target
    lo = math.sqrt(max(target * target - 2.0 * prm.lam, 0.0))
    hi = math.sqrt(target * target + 2.0 * prm.lam)
    rows = []
    try:
        for R in radii:
            shell = shellmatch.ShellModel(R * prm.length, prm, m)
            root = shellmatch.solve_finite_R_spectrum(shell, (lo, hi), count=1)[0]
            coeffs = shellmatch.match_coefficients(shell, root)
            a_w, b_w = shellmatch.shell_weights(shell, coeffs)
            rows.append({"R": R, "E_root": root, "error": abs(root - target),
                         "A_weight": abs(a_w), "B_weight": abs(b_w)})
    except DiracABError as exc:
        code = EXIT_INPUT if isinstance(exc, ValueError) else EXIT_COMPUTE
        _fail(code, str(exc))
    _emit(cfg, rows, ["R", "E_root", "error", "A_weight", "B_weight"])


@main.command()
@common_options
@click.option("--grid-count", type=int, default=oracle.DEFAULT_COUNT, show_default=True)
@click.option("--r-max", type=float, default=None, help="outer radius of the oracle grid")
@click.option("--no-richardson", is_flag=True, help="use the single grid without extrapolation")
def verify(grid_count, r_max, no_richardson, **kwargs):
    """Compare closed-form energies with the finite-difference oracle; exit 1 above 1e-4."""
    cfg = _config(**kwargs)
    prm = cfg.params
    k = max(cfg.n_range) + 1
    if min(cfg.n_range) < 0 or k > oracle.MAX_LEVELS:
        _fail(EXIT_INPUT, f"--n must lie in 0..{oracle.MAX_LEVELS - 1}")
    rows, worst = [], 0.0
    try:
        for m in cfg.m_range:
            grid = (oracle.RadialGrid(r_max, grid_count) if r_max is not None
                    else oracle.default_grid(prm, m, k, grid_count))
            E_sq = oracle.fd_radial_eigenvalues(prm, m, grid, k)
            if not no_richardson:
                fine = oracle.fd_radial_eigenvalues(prm, m, grid.refined(), k)
                E_sq = oracle.richardson_extrapolate(E_sq, fine)
            cls = classify_state(m, prm)
            for n in cfg.n_range:
                try:
                    exact = energy_level(prm, QuantumNumbers(m, n), cfg.branch).E
                except NonRealEnergy:
                    rows.append({"m": m, "n": n, "class": cls.value, "status": "nonreal",
                                 "E_analytic": math.nan, "E_oracle": math.nan,
                                 "rel_error": math.nan})
                    continue
                approx = cfg.branch.sign * math.sqrt(max(E_sq[n], 0.0))
                err = abs(approx - exact) / abs(exact)
                worst = max(worst, err)
                rows.append({"m": m, "n": n, "class": cls.value, "status": "ok",
                             "E_analytic": exact, "E_oracle": approx, "rel_error": err})
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))
    except _COMPUTE_ERRORS as exc:
        _fail(EXIT_COMPUTE, str(exc))
    _emit(cfg, rows, ["m", "n", "class", "status", "E_analytic", "E_oracle", "rel_error"])
    click.echo(f"max relative error = {worst:.14e}", err=True)
    if not worst <= VERIFY_RTOL:
        sys.exit(EXIT_VERIFY)


@main.command()
@common_options
@click.option("--max-shift", type=click.IntRange(0), default=3, show_default=True)
@click.option("--window", type=IntRange(), default=None,
              help="m' window where E depends on n only")
def degeneracy(max_shift, window, **kwargs):
    """States sharing the energy of one regular (m, n) level."""
    cfg = _config(**kwargs)
    prm = cfg.params
    m, n = _single(cfg.m_range, "m"), _single(cfg.n_range, "n")
    qn = QuantumNumbers(m, n)
    try:
        family = degeneracy_family(prm, qn, max_shift, window)
        ref = energy_level(prm, qn, cfg.branch).E
        rows = []
        for member in family:
            E = energy_level(prm, member, cfg.branch).E
            rows.append({"m": member.m, "n": member.n,
                         "class": classify_state(member.m, prm).value,
                         "E_relativistic": E, "epsilon_nonrel": energy_nonrel(prm, member),
                         "abs_diff": abs(E - ref)})
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))
    _emit(cfg, rows, ["m", "n", "class", "E_relativistic", "epsilon_nonrel", "abs_diff"])


if __name__ == "__main__":  # pragma: no cover
    main()
