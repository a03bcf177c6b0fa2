"""Linearized fluctuations around the steady state and the scattered-light spectrum.

Fluctuations obey ``d(db)/dt = A db + B db^+ + sqrt(2G) b_in``. In the
frequency domain (``f(w) = int f(t) exp(-i w t) dt``) the response is
governed by ``E(w) = |A|^2 - |B|^2 - w^2 - i w (A + A*)`` and the
normally ordered spectrum is ``S(w) = |B|^2 / |E(w)|^2``. The noise
prefactor ``2G`` is dropped in that expression; ``s_normalized`` carries it.

Two linearizations are offered:

``"rederived"`` (default)
    Wirtinger derivatives of the mean-field drift:
    ``A = -iD - G + i sqrt(N) g (e - k)(beta + beta*) + 4i w (e - k)|beta|^2``.
    The mean-field relaxation rates follow this form.
``"paper"``
    The alternative coefficient whose last term reads ``-4i w (e - k) beta^2``.
    It coincides with ``"rederived"`` only when beta is purely imaginary.

Both share ``B = i sqrt(N) g (e - k) beta + 2i w (e - k) beta^2``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import PhysicalParams
from .steady_state import SolverError, SteadyState, solve_beta

MODES = ("rederived", "paper")
DEFAULT_MODE = "rederived"


def default_grid(lo: float = -50.0, hi: float = 50.0, n: int = 2001) -> np.ndarray:
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class FluctuationCoeffs:
    a_coef: complex
    b_coef: complex
    mode: str = DEFAULT_MODE

    @property
    def drift_matrix(self) -> np.ndarray:
        """Acts on ``(db, db^+)``."""
        a, b = self.a_coef, self.b_coef
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])

    @property
    def trace(self) -> float:
        return 2.0 * self.a_coef.real

    @property
    def det(self) -> float:
        return abs(self.a_coef) ** 2 - abs(self.b_coef) ** 2

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.drift_matrix)


@dataclass(frozen=True)
class SpectrumResult:
    omega_over_gamma: np.ndarray
    s_values: np.ndarray
    params: PhysicalParams
    coeffs: FluctuationCoeffs
    stable: bool
    steady: SteadyState | None = None

    @property
    def s_normalized(self) -> np.ndarray:
        """Spectrum with the ``2 Gamma`` noise prefactor restored."""
        return 2.0 * self.params.big_gamma * self.s_values

    @property
    def peak(self) -> float:
        return float(self.s_values.max())


def linearization_coeffs(ss: SteadyState | complex, p: PhysicalParams, mode: str = DEFAULT_MODE) -> FluctuationCoeffs:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    beta = complex(ss.beta if isinstance(ss, SteadyState) else ss)
    e_k = -p.deformation
    sg = math.sqrt(p.n_atoms) * p.g
    bc = beta.conjugate()
    a = -1j * p.delta - p.big_gamma + 1j * sg * e_k * (beta + bc)
    if mode == "paper":
        a += -4j * p.omega_bar * e_k * beta**2
    else:
        a += 4j * p.omega_bar * e_k * abs(beta) ** 2
    b = 1j * sg * e_k * beta + 2j * p.omega_bar * e_k * beta**2
    return FluctuationCoeffs(complex(a), complex(b), mode)


def char_function_E(omega, c: FluctuationCoeffs):
    omega = np.asarray(omega, dtype=float)
    a = c.a_coef
    return abs(a) ** 2 - abs(c.b_coef) ** 2 - omega**2 - 1j * omega * (a + a.conjugate()).real


def stability_check(c: FluctuationCoeffs) -> bool:
    """Routh-Hurwitz for the 2x2 drift: ``Re A < 0`` and ``|A|^2 - |B|^2 > 0``."""
    return c.a_coef.real < 0 and c.det > 0


def spectrum_S(grid, ss: SteadyState, p: PhysicalParams, mode: str = DEFAULT_MODE) -> SpectrumResult:
    """``|B|^2 / |E(w)|^2`` on ``grid`` (in units of gamma).

    Unstable linearizations are flagged, not rejected.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be one-dimensional and strictly increasing")
    c = linearization_coeffs(ss, p, mode)
    E = char_function_E(grid * p.gamma, c)
    s = abs(c.b_coef) ** 2 / np.abs(E) ** 2
    return SpectrumResult(grid, s, p, c, stability_check(c), ss)


def spectrum_at(p: PhysicalParams, grid=None, mode: str = DEFAULT_MODE) -> SpectrumResult:
    grid = default_grid() if grid is None else grid
    return spectrum_S(grid, solve_beta(p), p, mode)


@dataclass
class SweepTable:
    """Sweep output in input order; failed points are kept in ``failures``."""

    variable: str
    results: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def peaks(self) -> np.ndarray:
        return np.array([r.peak for r in self.results])

    def rows(self):
        for r in self.results:
            stable = int(r.stable)
            for w, s, sn in zip(r.omega_over_gamma, r.s_values, r.s_normalized):
                yield {"N": r.params.n_atoms, "kappa": r.params.kappa, "omega_over_gamma": w,
                       "S": s, "S_normalized": sn, "stable": stable, "mode": r.coeffs.mode}


def _sweep_point(args):
    p, grid, mode = args
    try:
        return spectrum_at(p, grid, mode)
    except SolverError as exc:
        return exc


def sweep(points: list[PhysicalParams], variable: str, grid=None, mode: str = DEFAULT_MODE,
          workers: int = 1) -> SweepTable:
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    jobs = [(p, grid, mode) for p in points]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            outs = list(ex.map(_sweep_point, jobs))
    else:
        outs = [_sweep_point(j) for j in jobs]
    table = SweepTable(variable)
    for p, out in zip(points, outs):
        if isinstance(out, Exception):
            table.failures.append((getattr(p, "n_atoms" if variable == "N" else "kappa"), str(out)))
        else:
            table.results.append(out)
    return table


def sweep_fig3(n_values, grid, p0: PhysicalParams, mode: str = DEFAULT_MODE, workers: int = 1) -> SweepTable:
    """Spectrum versus atom number without collisions (kappa forced to 0)."""
    return sweep([p0.with_(n_atoms=int(n), kappa=0.0) for n in n_values], "N", grid, mode, workers)


def sweep_fig4(kappa_values, grid, p0: PhysicalParams, mode: str = DEFAULT_MODE, workers: int = 1) -> SweepTable:
    """Spectrum versus collision rate at fixed ``p0.n_atoms``."""
    return sweep([p0.with_(kappa=float(k)) for k in kappa_values], "kappa", grid, mode, workers)
