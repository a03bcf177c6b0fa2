"""Independent numerical checks of the analytic pipeline.

Three routes, each sharing nothing with the closed forms beyond the model
itself:

* ``resolvent_spectrum`` inverts the shifted 2x2 drift matrix per frequency
  and contracts the response with the input-noise correlations. Fourier
  convention: ``f(w) = int f(t) exp(-i w t) dt``, so ``d/dt -> i w`` and the
  response matrix is ``(i w - M)^-1``.
* ``sde_spectrum`` integrates the linear Langevin system as a classical
  complex SDE (Euler-Maruyama) and estimates its power spectrum from
  Hann-windowed periodograms. A c-number simulation realizes symmetric noise
  statistics, so it checks the *symmetrized* spectrum (the pole structure
  ``|E(w)|^2``); the normally ordered numerator ``|B|^2`` is the resolvent
  route's job.
* ``nonlinear_meanfield`` integrates the noise-free nonlinear drift to its
  fixed point; ``relaxation_fit`` estimates the linear relaxation
  eigenvalues from a small transient.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from numba import njit

from .core import PhysicalParams
from .spectrum import MODES, FluctuationCoeffs, linearization_coeffs, stability_check
from .steady_state import drift

# Correlations <xi_k(w) xi_l(w')> ~ D_kl delta(w + w') for xi = (b_in, b_in^+).
# Vacuum input: only <b_in b_in^+> = 1 survives.
NORMAL_NOISE = np.array([[0.0, 1.0], [0.0, 0.0]])
# Classical complex white noise of unit covariance.
SYMMETRIZED_NOISE = np.array([[0.0, 1.0], [1.0, 0.0]])

DIVERGENCE_LIMIT = 1e6


class OracleInstability(RuntimeError):
    pass


# --- frequency domain ---------------------------------------------------------


def _response(omega, M, big_gamma):
    """``sqrt(2G) (i w - M)^-1`` stacked over ``omega``; singular points are NaN."""
    shifted = 1j * omega[:, None, None] * np.eye(2) - M
    det = np.linalg.det(shifted)
    bad = np.abs(det) < 1e-300
    shifted[bad] = np.eye(2)
    G = np.sqrt(2.0 * big_gamma) * np.linalg.inv(shifted)
    G[bad] = np.nan
    return G


def resolvent_spectrum(grid, c: FluctuationCoeffs, big_gamma: float, ordering: str = "normal") -> np.ndarray:
    """Stationary spectrum from the frequency-domain resolvent.

    ``ordering="normal"`` returns ``<db^+(w) db(w')>`` integrated over w';
    ``ordering="symmetrized"`` returns ``<db(w) db(w)*>`` for unit classical
    noise. The ``2 Gamma`` prefactor is kept.
    """
    if not stability_check(c):
        warnings.warn("drift matrix is not Hurwitz; resolvent spectrum is not stationary",
                      RuntimeWarning, stacklevel=2)
    w = np.asarray(grid, dtype=float)
    M = c.drift_matrix
    Gp = _response(w, M, big_gamma)
    Gm = _response(-w, M, big_gamma)
    if ordering == "normal":
        s = np.einsum("wk,wl,kl->w", Gp[:, 1, :], Gm[:, 0, :], NORMAL_NOISE)
    elif ordering == "symmetrized":
        s = np.einsum("wk,wl,kl->w", Gp[:, 0, :], Gm[:, 1, :], SYMMETRIZED_NOISE)
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    return s.real


# --- time domain: linear SDE -------------------------------------------------


@dataclass(frozen=True)
class TrajectoryConfig:
    """Ensemble settings for :func:`sde_spectrum`.

    ``burn_in`` is the fraction of ``t_total`` discarded before the record
    starts; ``stride`` keeps every stride-th step of the record.
    ``omega_max`` bounds the frequencies whose per-trajectory periodograms
    are retained for band statistics.
    """

    dt: float
    t_total: float
    n_traj: int = 4096
    seed: int = 0
    burn_in: float = 0.1
    stride: int = 1
    omega_max: float = 100.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_total > self.dt:
            raise ValueError("t_total must exceed dt")
        if self.n_traj < 1:
            raise ValueError("n_traj must be >= 1")
        if not 0 <= self.burn_in < 1:
            raise ValueError("burn_in must be a fraction in [0, 1)")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")

    @classmethod
    def for_rates(cls, c: FluctuationCoeffs, big_gamma: float, gamma_t: float = 200.0,
                  dt_scale: float = 2e-3, **kw) -> "TrajectoryConfig":
        """Horizon ``gamma_t / Gamma``; step ``dt_scale / max|eigenvalue|``."""
        rate = max(np.abs(c.eigenvalues()).max(), big_gamma)
        dt = dt_scale / rate
        stride = max(1, int(0.025 / (rate * dt)))
        return cls(dt=dt, t_total=gamma_t / big_gamma, stride=stride, **kw)


@dataclass
class SDEEstimate:
    omega: np.ndarray
    spectrum: np.ndarray
    stderr: np.ndarray
    periodograms: np.ndarray  # (n_traj, len(omega))
    variance: float
    variance_stderr: float
    integrated: float
    integrated_stderr: float
    parseval_gap: float
    parseval_stderr: float

    def band_average(self, edges) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-band (centre, mean, stderr) from per-trajectory band means."""
        edges = np.asarray(edges, dtype=float)
        centres, means, errs = [], [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            sel = (self.omega >= lo) & (self.omega < hi)
            if not sel.any():
                continue
            per = self.periodograms[:, sel].mean(axis=1)
            centres.append(self.omega[sel].mean())
            means.append(per.mean())
            errs.append(per.std(ddof=1) / math.sqrt(len(per)))
        return np.array(centres), np.array(means), np.array(errs)

    def band_mask(self, edges):
        """Bin membership matrix matching :meth:`band_average` (nonempty bands only)."""
        rows = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            sel = (self.omega >= lo) & (self.omega < hi)
            if sel.any():
                rows.append(sel)
        return np.array(rows)


@njit(cache=True)
def _em_kernel(a, b, dt, amp, noise, n_burn, stride, out):
    """Euler-Maruyama for ``dz = (a z + b z*) dt + amp dW`` from z = 0.

    ``noise`` holds 2 standard normals per step (real, imaginary part of
    ``dW / sqrt(dt/2)``). Samples after the burn-in are written every
    ``stride`` steps. Returns False on blow-up.
    """
    scale = amp * math.sqrt(0.5 * dt)
    n_steps = noise.shape[0] // 2
    z = 0j
    m = 0
    for n in range(n_steps):
        z = z + (a * z + b * z.conjugate()) * dt + scale * complex(noise[2 * n], noise[2 * n + 1])
        if n >= n_burn and (n - n_burn) % stride == 0:
            if abs(z) > DIVERGENCE_LIMIT or z != z:
                return False
            out[m] = z
            m += 1
    return True


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trajectory ``index`` derived from ``(seed, index)``."""
    return np.random.Generator(np.random.SFC64(np.random.SeedSequence([seed, index])))


def sde_spectrum(c: FluctuationCoeffs, big_gamma: float, cfg: TrajectoryConfig) -> SDEEstimate:
    """Periodogram estimate of the stationary spectrum of the fluctuation SDE.

    Noise of trajectory ``i`` comes from its own generator seeded by
    ``(cfg.seed, i)``; reductions run in index order, so results are
    bit-reproducible for a fixed seed.
    """
    if cfg.t_total * big_gamma < 20:
        warnings.warn(f"t_total * Gamma = {cfg.t_total * big_gamma:.3g} < 20", stacklevel=2)
    M = c.drift_matrix
    amp = math.sqrt(2.0 * big_gamma)
    n_steps = int(round(cfg.t_total / cfg.dt))
    n_burn = int(cfg.burn_in * n_steps)
    dt_out = cfg.dt * cfg.stride
    L = len(range(n_burn, n_steps, cfg.stride))
    win = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(L) / L)
    norm = dt_out / np.sum(win**2)
    omega_full = 2.0 * np.pi * np.fft.fftfreq(L, dt_out)
    keep = np.abs(omega_full) <= cfg.omega_max
    order = np.argsort(omega_full[keep])
    omega = omega_full[keep][order]
    d_omega = 2.0 * np.pi / (L * dt_out)

    batch = max(1, min(cfg.n_traj, (1 << 23) // max(L, 1)))
    pgrams = np.empty((cfg.n_traj, omega.size))
    variances = np.empty(cfg.n_traj)
    integrals = np.empty(cfg.n_traj)
    a, b = complex(M[0, 0]), complex(M[0, 1])
    noise = np.empty(2 * n_steps)
    for start in range(0, cfg.n_traj, batch):
        stop = min(start + batch, cfg.n_traj)
        z = np.empty((stop - start, L), dtype=complex)
        for i in range(start, stop):
            trajectory_rng(cfg.seed, i).standard_normal(out=noise)
            if not _em_kernel(a, b, cfg.dt, amp, noise, n_burn, cfg.stride, z[i - start]):
                raise OracleInstability("trajectory norm exceeded 1e6; drift is unstable or dt too large")
        P = norm * np.abs(np.fft.fft(win * z, axis=-1)) ** 2
        pgrams[start:stop] = P[:, keep][:, order]
        variances[start:stop] = np.mean(np.abs(z) ** 2, axis=-1)
        # periodic grid: the trapezoid rule reduces to a plain sum
        integrals[start:stop] = P.sum(axis=-1) * d_omega / (2.0 * np.pi)

    n = cfg.n_traj
    se = lambda x: float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")  # noqa: E731
    gap = integrals - variances
    return SDEEstimate(
        omega=omega,
        spectrum=pgrams.mean(axis=0),
        stderr=pgrams.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.full(omega.size, np.nan),
        periodograms=pgrams,
        variance=float(variances.mean()),
        variance_stderr=se(variances),
        integrated=float(integrals.mean()),
        integrated_stderr=se(integrals),
        parseval_gap=float(gap.mean()),
        parseval_stderr=se(gap),
    )


# --- nonlinear mean field ------------------------------------------------------


def _flow(p, shift=0j, offset=0j):
    def rhs(t, y):
        f = drift(complex(y[0], y[1]) + shift, p) - offset
        return [f.real, f.imag]
    return rhs


def nonlinear_meanfield(p: PhysicalParams, beta_init: complex, t_total: float, n_out: int = 2001,
                        rtol: float = 1e-11, atol: float = 1e-13) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the noise-free drift with adaptive RK45; returns ``(t, beta(t))``."""

    def blowup(t, y):
        return DIVERGENCE_LIMIT - math.hypot(y[0], y[1])
    blowup.terminal = True

    t_eval = np.linspace(0.0, t_total, n_out)
    sol = solve_ivp(_flow(p), (0.0, t_total), [beta_init.real, beta_init.imag], method="RK45",
                    t_eval=t_eval, rtol=rtol, atol=atol, events=blowup)
    if sol.status == 1:
        raise OracleInstability(f"mean-field trajectory diverged (|b| > 1e6) at {p}")
    if sol.status != 0:
        raise OracleInstability(sol.message)
    return sol.t, sol.y[0] + 1j * sol.y[1]


def meanfield_fixed_point(p: PhysicalParams, beta_init: complex, chunk: float | None = None,
                          max_chunks: int = 200, tol: float = 1e-11) -> complex:
    """Integrate in chunks of ``chunk`` (default ``10/Gamma``) until the drift vanishes."""
    chunk = 10.0 / p.big_gamma if chunk is None else chunk
    beta = complex(beta_init)
    for _ in range(max_chunks):
        _, traj = nonlinear_meanfield(p, beta, chunk, n_out=2)
        moved = abs(traj[-1] - beta)
        beta = complex(traj[-1])
        # the integrator's own noise floor sits near 1e-10 in |drift|
        if abs(drift(beta, p)) < 1e-9 * max(1.0, p.big_gamma) and moved < tol:
            return beta
    raise OracleInstability(f"mean field did not settle within {max_chunks} chunks")


def relaxation_fit(p: PhysicalParams, beta_star: complex, amplitude: float = 1e-6,
                   horizon: float | None = None, n_samples: int = 400) -> np.ndarray:
    """Relaxation eigenvalues from small transients of the nonlinear flow.

    Two transients (real and imaginary kicks of size ``amplitude``) are
    sampled every ``h``; the least-squares one-step propagator ``Phi`` gives
    ``log(eig Phi) / h``. The decay envelope of a single transient is the
    special case of a real eigenvalue pair.
    """
    horizon = 3.0 / p.big_gamma if horizon is None else horizon
    h = horizon / n_samples
    t_eval = np.arange(n_samples + 1) * h
    offset = drift(beta_star, p)
    X0, X1 = [], []
    for kick in (amplitude, 1j * amplitude):
        sol = solve_ivp(_flow(p, beta_star, offset), (0.0, t_eval[-1]), [kick.real, kick.imag],
                        method="RK45", t_eval=t_eval, rtol=1e-11, atol=1e-12 * amplitude)
        X0.append(sol.y[:, :-1])
        X1.append(sol.y[:, 1:])
    X0, X1 = np.hstack(X0), np.hstack(X1)
    Phi = np.linalg.lstsq(X0.T, X1.T, rcond=None)[0].T
    return np.log(np.linalg.eigvals(Phi).astype(complex)) / h


def _eig_mismatch(fit, model):
    """Max relative eigenvalue error under the better of the two pairings."""
    best = np.inf
    for perm in ((0, 1), (1, 0)):
        err = max(abs(fit[i] - model[j]) / abs(model[j]) for i, j in enumerate(perm))
        best = min(best, err)
    return best


def mode_verdict(p: PhysicalParams, beta_star: complex, fitted=None, tol: float = 0.01) -> dict:
    """Compare fitted relaxation eigenvalues with each linearization mode.

    Returns ``{"errors": {mode: rel_error}, "supported": [modes within tol], "fitted": ...}``.
    """
    fitted = relaxation_fit(p, beta_star) if fitted is None else fitted
    errors = {m: _eig_mismatch(fitted, linearization_coeffs(beta_star, p, m).eigenvalues()) for m in MODES}
    return {"errors": errors, "supported": [m for m in MODES if errors[m] <= tol], "fitted": fitted}
