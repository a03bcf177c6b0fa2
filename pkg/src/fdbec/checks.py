"""Cross-check suite behind ``fdbec verify``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraParams, f_squared, f_squared_recursion, gardiner_ops
from .core import PhysicalParams, fig_params
from .oracles import (TrajectoryConfig, meanfield_fixed_point, mode_verdict, resolvent_spectrum,
                      sde_spectrum)
from .spectrum import DEFAULT_MODE, FluctuationCoeffs, default_grid, linearization_coeffs, spectrum_S
from .steady_state import solve_beta

SDE_BAND_WIDTH = 10.0


@dataclass
class CheckResult:
    name: str
    source: str  # analytic | resolvent | sde | meanfield
    observed: float
    expected: float
    tolerance: float
    passed: bool
    detail: str = ""


def _check(name, source, observed, expected, tol, detail="", relation="abs"):
    if relation == "abs":
        ok = abs(observed - expected) <= tol
    elif relation == "le":
        ok = observed <= tol
    else:
        raise ValueError(relation)
    return CheckResult(name, source, float(observed), float(expected), float(tol), bool(ok), detail)


def commutator_check(n_values=(10, 100, 200)) -> CheckResult:
    worst = 0.0
    for N in n_values:
        dim = min(N, 50)
        bq, bqd = gardiner_ops(N, dim)
        diag = np.diag(bq @ bqd - bqd @ bq).real[: dim - 1]
        n = np.arange(dim - 1)
        worst = max(worst, np.abs(diag - (1.0 - 2.0 * n / N)).max())
    return _check("gardiner_commutator", "analytic", worst, 0.0, 1e-13, relation="le")


def recursion_check(n_max: int = 50, n_grid: int = 5) -> CheckResult:
    worst = 0.0
    for tnu in np.linspace(0.0, 0.5, n_grid):
        for tmu in np.linspace(0.0, 0.5, n_grid):
            a = AlgebraParams(tau=1.0, nu=tnu, mu_sq=tmu**2)
            closed = f_squared(np.arange(1, n_max + 1), a)
            rec = f_squared_recursion(n_max, a)
            worst = max(worst, np.max(np.abs(closed - rec) / np.abs(rec)))
    return _check("algebra_recursion", "analytic", worst, 0.0, 1e-12, "relative", relation="le")


def null_spectrum_check(grid, mode=DEFAULT_MODE) -> CheckResult:
    worst = 0.0
    for N in (10, 100, 1000):
        p = fig_params(N, kappa=1.0 / N)
        worst = max(worst, np.abs(spectrum_S(grid, solve_beta(p), p, mode).s_values).max())
    return _check("null_spectrum_kappa_eq_eta", "analytic", worst, 0.0, 0.0, relation="le")


def resolvent_ratio_check(points, grid, mode=DEFAULT_MODE, corrupt_b: float = 0.0) -> list[CheckResult]:
    """Resolvent / closed-form ratio must equal 2 Gamma at every frequency.

    ``corrupt_b`` perturbs B in the closed-form side only (fault injection).
    """
    out = []
    for p in points:
        ss = solve_beta(p)
        c = linearization_coeffs(ss, p, mode)
        res = resolvent_spectrum(grid, c, p.big_gamma)
        tag = f"[N={p.n_atoms},kappa={p.kappa:g}]"
        if c.b_coef == 0 and corrupt_b == 0:
            out.append(_check("resolvent_null" + tag, "resolvent", np.abs(res).max(), 0.0, 0.0,
                              "B vanishes, no ratio defined", relation="le"))
            continue
        bad = FluctuationCoeffs(c.a_coef, c.b_coef * (1.0 + corrupt_b), c.mode)
        closed = abs(bad.b_coef) ** 2 / np.abs(np.asarray(
            abs(bad.a_coef) ** 2 - abs(bad.b_coef) ** 2 - grid**2 - 2j * grid * bad.a_coef.real)) ** 2
        ratio = res / closed / (2.0 * p.big_gamma)
        spread = float(np.max(np.abs(ratio - 1.0)))
        out.append(_check("resolvent_ratio" + tag, "resolvent", spread, 0.0,
                          1e-12, f"ratio/(2 Gamma) - 1, mean ratio {np.mean(res / closed):.17g}",
                          relation="le"))
    return out


def sde_comparison(c: FluctuationCoeffs, big_gamma: float, cfg: TrajectoryConfig,
                   band_width: float = SDE_BAND_WIDTH, omega_limit: float = 50.0) -> dict:
    """Statistics of an SDE run against the symmetrized resolvent spectrum."""
    est = sde_spectrum(c, big_gamma, cfg)
    sel = np.abs(est.omega) <= omega_limit
    ref = resolvent_spectrum(est.omega, c, big_gamma, "symmetrized")
    rel = est.spectrum[sel] / ref[sel] - 1.0
    edges = np.arange(-omega_limit, omega_limit + 0.5 * band_width, band_width)
    _, band_mean, band_err = est.band_average(edges)
    mask = est.band_mask(edges)
    band_ref = (mask * ref).sum(axis=1) / mask.sum(axis=1)
    z = (band_mean - band_ref) / band_err
    return {
        "estimate": est,
        "rms_rel": float(np.sqrt(np.mean(rel**2))),
        "band_z": z,
        "max_band_z": float(np.max(np.abs(z))),
        "parseval_z": float(abs(est.parseval_gap) / est.parseval_stderr),
    }


def sde_check(p: PhysicalParams, seed: int, n_traj: int = 1024, mode=DEFAULT_MODE) -> list[CheckResult]:
    ss = solve_beta(p)
    c = linearization_coeffs(ss, p, mode)
    cfg = TrajectoryConfig.for_rates(c, p.big_gamma, n_traj=n_traj, seed=seed)
    r = sde_comparison(c, p.big_gamma, cfg)
    tag = f"[N={p.n_atoms},kappa={p.kappa:g},delta={p.delta:g}]"
    return [
        _check("sde_rms_rel" + tag, "sde", r["rms_rel"], 0.0, 0.05, relation="le"),
        _check("sde_band_z" + tag, "sde", r["max_band_z"], 0.0, 3.0, "max |z| over bands", relation="le"),
        _check("sde_parseval_z" + tag, "sde", r["parseval_z"], 0.0, 3.0, relation="le"),
    ]


def meanfield_check(points, mode=DEFAULT_MODE) -> list[CheckResult]:
    out = []
    for p in points:
        ss = solve_beta(p)
        fp = meanfield_fixed_point(p, ss.beta0)
        tag = f"[N={p.n_atoms},kappa={p.kappa:g}]"
        out.append(_check("meanfield_fixed_point" + tag, "meanfield", abs(fp - ss.beta), 0.0, 1e-8,
                          relation="le"))
        v = mode_verdict(p, ss.beta)
        best = min(v["errors"].values())
        verdict = ",".join(v["supported"]) or "none"
        detail = "; ".join(f"{m}={e:.3g}" for m, e in v["errors"].items()) + f"; supported: {verdict}"
        out.append(_check("relaxation_rates" + tag, "meanfield", best, 0.0, 0.01, detail, relation="le"))
    return out


def run_verification(p: PhysicalParams | None = None, seed: int = 0, mode: str = DEFAULT_MODE,
                     grid=None, corrupt_b: float = 0.0, sde_traj: int = 2048) -> list[CheckResult]:
    p = fig_params(100, 0.05) if p is None else p
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    points = [p, fig_params(100, 0.0), fig_params(1000, 0.1), fig_params(50, 0.0).with_(omega_laser=40.0)]
    results = [commutator_check(), recursion_check(), null_spectrum_check(grid, mode)]
    results += resolvent_ratio_check(points, grid, mode, corrupt_b)
    results += sde_check(fig_params(100, 0.0), seed, sde_traj, mode)
    results += meanfield_check(points, mode)
    return results


def format_table(results) -> str:
    w = max(len(r.name) for r in results)
    lines = [f"{'check':<{w}}  {'source':<9}  {'observed':>12}  {'tol':>8}  result"]
    for r in results:
        lines.append(f"{r.name:<{w}}  {r.source:<9}  {r.observed:12.4e}  {r.tolerance:8.1e}  "
                     f"{'PASS' if r.passed else 'FAIL'}")
    return "\n".join(lines)


