"""Semiclassical steady state of the deformed, driven condensate mode.

The mean-field drift is

    F(b) = -i D b - 2i w (k - e) b* b^2 - i g sqrt(N)
           - i g sqrt(N) (k - e)/2 (2 b* b + b^2) - G b

with D the detuning, w the transition frequency, (k - e) = kappa - eta and
G = gamma sqrt(N). The cubic term comes from the ``b^+ b^2`` ordering of
the Heisenberg equation. A steady state solves F(beta) = 0 with beta* the
complex conjugate of beta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams, beta0

RESIDUAL_TOL = 1e-12
DEDUP_TOL = 1e-8
MAX_NEWTON = 200
VALIDITY_LIMIT = 0.5


class SolverError(RuntimeError):
    """Newton/continuation failure; carries the last iterate."""

    def __init__(self, message, beta=None, residual=None):
        super().__init__(message)
        self.beta = beta
        self.residual = residual


@dataclass(frozen=True)
class SteadyState:
    beta: complex
    beta0: complex
    residual_norm: float
    homotopy_steps: int
    converged: bool

    @property
    def deviation(self) -> float:
        """``| |beta| - |beta0| |``."""
        return abs(abs(self.beta) - abs(self.beta0))


def drift(beta, p: PhysicalParams, scale: float = 1.0):
    """Mean-field drift with the deformation ``kappa - eta`` multiplied by ``scale``."""
    d = scale * p.deformation
    sg = math.sqrt(p.n_atoms) * p.g
    bc = np.conj(beta)
    mod2 = beta * bc
    return (-1j * p.delta * beta - 2j * p.omega_bar * d * beta * mod2 - 1j * sg
            - 1j * sg * 0.5 * d * (2.0 * mod2 + beta**2) - p.big_gamma * beta)


def residual(beta, p: PhysicalParams) -> complex:
    """Left-hand side of the steady-state condition at ``beta``."""
    return drift(beta, p)


def drift_derivatives(beta: complex, p: PhysicalParams, scale: float = 1.0) -> tuple[complex, complex]:
    """Wirtinger derivatives ``(dF/db, dF/db*)`` of the drift at ``beta``."""
    d = scale * p.deformation
    sg = math.sqrt(p.n_atoms) * p.g
    bc = beta.conjugate()
    dfdb = (-1j * p.delta - p.big_gamma - 4j * p.omega_bar * d * abs(beta) ** 2
            - 1j * sg * d * (beta + bc))
    dfdbc = -2j * p.omega_bar * d * beta**2 - 1j * sg * d * beta
    return dfdb, dfdbc


def _real_jacobian(beta, p, scale):
    a, b = drift_derivatives(beta, p, scale)
    du, dv = a + b, 1j * (a - b)
    return np.array([[du.real, dv.real], [du.imag, dv.imag]])


def newton(beta: complex, p: PhysicalParams, scale: float = 1.0, tol: float = RESIDUAL_TOL,
           max_iter: int = MAX_NEWTON) -> tuple[complex, float, int]:
    """Damped Newton on (Re beta, Im beta); halves the step while the residual grows.

    Returns ``(beta, |residual|, iterations)``; raises :class:`SolverError`.
    """
    r = drift(beta, p, scale)
    rn = abs(r)
    for it in range(max_iter + 1):
        if rn <= tol:
            return beta, rn, it
        if it == max_iter:
            break
        J = _real_jacobian(beta, p, scale)
        if abs(np.linalg.det(J)) < 1e-14 * max(1.0, np.abs(J).max()) ** 2:
            raise SolverError("singular Jacobian; use a smaller continuation step", beta, rn)
        dx = np.linalg.solve(J, [-r.real, -r.imag])
        step = complex(dx[0], dx[1])
        lam = 1.0
        while True:
            trial = beta + lam * step
            rt = abs(drift(trial, p, scale))
            if rt < rn or lam < 1e-10:
                break
            lam *= 0.5
        if rt >= rn:
            # stalled at roundoff: no descent direction left
            break
        beta, rn = trial, rt
        r = drift(beta, p, scale)
    raise SolverError(f"Newton did not converge (|residual| = {rn:.3e})", beta, rn)


def solve_beta(p: PhysicalParams, n_steps: int = 20, tol: float = RESIDUAL_TOL,
               min_step: float = 1e-6) -> SteadyState:
    """Steady state on the branch continuously connected to the undeformed amplitude.

    The deformation ``kappa - eta`` is switched on as ``s (kappa - eta)``
    with s going from 0 (closed-form undeformed solution) to 1 in
    ``n_steps`` nodes; a node whose Newton solve fails is retried with half
    the step, down to ``min_step``. Each node is seeded by linear
    extrapolation of the previous two.
    """
    b0 = beta0(p)
    if p.deformation == 0.0:
        return SteadyState(b0, b0, abs(residual(b0, p)), 0, True)

    s, ds = 0.0, 1.0 / n_steps
    beta, prev = b0, None
    nodes = 0
    while s < 1.0:
        s_next = min(1.0, s + ds)
        guess = beta if prev is None else beta + (beta - prev[1]) * (s_next - s) / (s - prev[0])
        try:
            new, _, _ = newton(guess, p, s_next, tol)
        except SolverError as exc:
            if ds / 2 < min_step:
                raise SolverError(f"continuation stalled at s = {s:.6g}: {exc}", exc.beta,
                                  exc.residual) from exc
            ds /= 2
            continue
        prev = (s, beta)
        beta, s = new, s_next
        nodes += 1
        ds = min(ds * 1.5, 1.0 / n_steps)
    rn = abs(residual(beta, p))
    if abs(p.deformation) * abs(beta) ** 2 > VALIDITY_LIMIT:
        warnings.warn(f"|kappa - eta| |beta|^2 = {abs(p.deformation) * abs(beta) ** 2:.3g} exceeds "
                      f"{VALIDITY_LIMIT}: first-order deformation questionable", stacklevel=2)
    return SteadyState(beta, b0, rn, nodes, rn <= tol)


def all_roots(p: PhysicalParams, box: float, n_grid: int = 25, tol: float = RESIDUAL_TOL) -> list[complex]:
    """All residual roots reachable by multi-start Newton from a grid in ``[-box, box]^2``.

    Roots closer than ``DEDUP_TOL`` are merged; the continuation root is
    always included when it lies inside the box.
    """
    if box <= 0:
        raise ValueError("box must be positive")
    found: list[complex] = []

    def add(z):
        if max(abs(z.real), abs(z.imag)) <= box and all(abs(z - w) > DEDUP_TOL for w in found):
            found.append(z)

    try:
        add(solve_beta(p, tol=tol).beta)
    except SolverError:
        pass
    axis = np.linspace(-box, box, n_grid)
    for x in axis:
        for y in axis:
            try:
                z, _, _ = newton(complex(x, y), p, tol=tol, max_iter=60)
            except SolverError:
                continue
            add(z)
    return found
