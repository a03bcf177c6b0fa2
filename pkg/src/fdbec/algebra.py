"""f-deformed oscillator algebra on a truncated number basis.

Covers the symmetric q-number, the four-parameter deformation function
``|f(n)|^2`` and its free Hamiltonian, the small-deformation expansions
(collision and Kerr cases), and matrix realizations of the number-conserving
phonon operators with and without the extra collision deformation.

Units: hbar = 1. Energies of the free f-oscillator are returned in units of
``omega0``; the expansion helpers return units of ``omega0 / 2`` as written
in the regrouped series. (The printed Kerr Hamiltonian omits hbar on its
second term; with hbar = 1 the two readings coincide.)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

# Below this |tau*mu*n| the sinh ratio is evaluated by its series.
SERIES_THRESHOLD = 1e-3


class AlgebraSingularity(ValueError):
    """The analytic continuation sin(tau|mu| n)/sin(tau|mu|) hits a pole."""


class DomainError(ValueError):
    """A deformation function is evaluated outside its physical domain."""


@dataclass(frozen=True)
class AlgebraParams:
    """Four-parameter deformation in canonical form.

    ``q = exp(tau)``; the algebra exponents are ``alpha = nu + mu`` and
    ``gamma = nu - mu``. ``mu_sq`` may be negative, in which case alpha and
    gamma are complex conjugates and only ``(nu, mu_sq)`` is meaningful
    as a real parametrization.
    """

    tau: float
    nu: float
    mu_sq: float
    beta_d: float = 0.0
    omega0: float = 1.0

    @classmethod
    def from_exponents(cls, tau, alpha_d, beta_d, gamma_d, omega0=1.0):
        nu = 0.5 * (alpha_d + gamma_d)
        mu_sq = (0.5 * (alpha_d - gamma_d)) ** 2
        return cls(tau=tau, nu=nu, mu_sq=mu_sq, beta_d=beta_d, omega0=omega0)

    @classmethod
    def collision(cls, kappa, omega0=1.0, tau=1.0):
        """mu^2 = 0, nu = kappa / (2 omega0): reproduces (kappa/2) n^2 to first order."""
        return cls(tau=tau, nu=kappa / (2.0 * omega0), mu_sq=0.0, omega0=omega0)

    @classmethod
    def kerr(cls, k, omega0=1.0, tau=1.0):
        """mu^2 = -3 nu, nu = 2k / omega0: Kerr term (k/2) n(n-1)."""
        nu = 2.0 * k / omega0
        return cls(tau=tau, nu=nu, mu_sq=-3.0 * nu, omega0=omega0)

    @property
    def q(self) -> float:
        return math.exp(self.tau)

    @property
    def mu(self) -> complex:
        """Principal root of ``mu_sq``; purely imaginary when ``mu_sq < 0``."""
        if self.mu_sq >= 0:
            return complex(math.sqrt(self.mu_sq))
        return 1j * math.sqrt(-self.mu_sq)

    @property
    def alpha_d(self) -> float:
        self._require_real_exponents()
        return self.nu + math.sqrt(self.mu_sq)

    @property
    def gamma_d(self) -> float:
        self._require_real_exponents()
        return self.nu - math.sqrt(self.mu_sq)

    def complex_exponents(self) -> tuple[complex, complex]:
        """``(alpha, gamma)`` allowing complex values for ``mu_sq < 0``."""
        return self.nu + self.mu, self.nu - self.mu

    def _require_real_exponents(self):
        if self.mu_sq < 0:
            raise ValueError("alpha_d/gamma_d are complex for mu_sq < 0; use (nu, mu_sq)")


def q_bracket(x, q: float):
    """Symmetric q-number ``(q**x - q**-x) / (q - 1/q)``.

    The classical limit ``[x] -> x`` is taken by series for ``|q - 1| < 1e-6``.
    """
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    x = np.asarray(x, dtype=float)
    t = math.log(q)
    if abs(q - 1.0) < 1e-6:
        out = x * (1.0 + (x**2 - 1.0) * t**2 / 6.0)
    else:
        out = np.sinh(x * t) / math.sinh(t)
    return out if out.ndim else float(out)


def _sinh_ratio(n, tau_mu_sq):
    """``sinh(t n) / sinh(t)`` with ``t**2 = tau_mu_sq`` (continued to sin for t**2 < 0)."""
    n = np.asarray(n, dtype=float)
    t = math.sqrt(abs(tau_mu_sq))
    small = t * np.maximum(np.abs(n), 1.0) < SERIES_THRESHOLD
    x2 = tau_mu_sq
    series = n * (1.0 + (n**2 - 1.0) * x2 / 6.0 + (n**2 - 1.0) * (3.0 * n**2 - 7.0) * x2**2 / 360.0)
    if np.all(small):
        return series
    if tau_mu_sq > 0:
        direct = np.sinh(t * n) / math.sinh(t)
    else:
        s = math.sin(t)
        if abs(s) < 1e-14:
            raise AlgebraSingularity(f"sin(tau*|mu|) = 0 at tau*|mu| = {t!r}")
        direct = np.sin(t * n) / s
    return np.where(small, series, direct)


def _ratio_over_n_at_zero(tau_mu_sq):
    """Limit of ``sinh(t n) / (n sinh(t))`` as n -> 0, i.e. ``t / sinh(t)``."""
    t = math.sqrt(abs(tau_mu_sq))
    if t < SERIES_THRESHOLD:
        return 1.0 - tau_mu_sq / 6.0 + 7.0 * tau_mu_sq**2 / 360.0
    if tau_mu_sq > 0:
        return t / math.sinh(t)
    s = math.sin(t)
    if abs(s) < 1e-14:
        raise AlgebraSingularity(f"sin(tau*|mu|) = 0 at tau*|mu| = {t!r}")
    return t / s


def number_function(n, a: AlgebraParams):
    """``F(n) = n |f(n)|^2``, the eigenvalue of ``A^+ A`` on level n."""
    n = np.asarray(n, dtype=float)
    r = _sinh_ratio(n, a.tau**2 * a.mu_sq)
    out = r * np.exp(a.tau * (a.beta_d + a.nu * (n - 1.0)))
    return out if out.ndim else float(out)


def f_squared(n, a: AlgebraParams):
    """Deformation function ``|f(n)|^2`` in closed form.

    For ``mu_sq < 0`` the sinh ratio is continued to ``sin(tau|mu|n)/sin(tau|mu|)``.
    At ``n = 0`` (formally 0/0) the continuous limit
    ``tau*mu / sinh(tau*mu) * exp(tau*(beta - nu))`` is returned.
    """
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 0):
        raise ValueError("n must be nonnegative")
    tms = a.tau**2 * a.mu_sq
    safe = np.where(n_arr == 0, 1.0, n_arr)
    ratio = _sinh_ratio(safe, tms) / safe
    ratio = np.where(n_arr == 0, _ratio_over_n_at_zero(tms), ratio)
    out = ratio * np.exp(a.tau * (a.beta_d + a.nu * (n_arr - 1.0)))
    return out if out.ndim else float(out)


def f_squared_recursion(n_max: int, a: AlgebraParams) -> np.ndarray:
    """``|f(n)|^2`` for n = 1..n_max from the algebra relation alone.

    Iterates ``F(n+1) = q**gamma F(n) + q**(alpha n + beta)`` from ``F(0) = 0``
    (the vacuum is annihilated) and divides by n. Complex exponents are used
    when ``mu_sq < 0``; the imaginary part of the result is roundoff.
    """
    alpha, gamma = a.complex_exponents()
    qg = np.exp(a.tau * gamma)
    F = np.zeros(n_max + 1, dtype=complex)
    for n in range(n_max):
        F[n + 1] = qg * F[n] + np.exp(a.tau * (alpha * n + a.beta_d))
    n = np.arange(1, n_max + 1)
    return (F[1:] / n).real


# --- Fock-space matrices -------------------------------------------------


def annihilation(dim: int) -> np.ndarray:
    if dim < 2:
        raise ValueError(f"dim must be at least 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(float(dim)))


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def deformed_ladder(dim: int, a: AlgebraParams) -> tuple[np.ndarray, np.ndarray]:
    """``A = a f(N)`` and its adjoint, with ``f = sqrt(|f|^2)``.

    Requires ``|f(n)|^2 >= 0`` on all levels. The top level is
    truncation-contaminated for ``A A^+``.
    """
    fs = f_squared(np.arange(dim), a)
    if np.any(fs < 0):
        raise DomainError("|f(n)|^2 < 0 on the requested levels")
    A = annihilation(dim) @ np.diag(np.sqrt(fs))
    return A, A.conj().T


def algebra_defect(dim: int, a: AlgebraParams) -> np.ndarray:
    """Diagonal of ``A A^+ - q^gamma A^+ A - q^(alpha N + beta)`` for n = 0..dim-2."""
    alpha, gamma = a.complex_exponents()
    A, Ad = deformed_ladder(dim, a)
    n = np.arange(dim)
    lhs = np.diag(A @ Ad) - np.exp(a.tau * gamma) * np.diag(Ad @ A)
    rhs = np.exp(a.tau * (alpha * n + a.beta_d))
    return (lhs - rhs)[:-1]


# --- energies --------------------------------------------------------------


def free_hamiltonian_energies(dim: int, a: AlgebraParams, closed_form: bool = False) -> np.ndarray:
    """Levels of ``(omega0/2)(A^+A + AA^+)`` in units of ``omega0``.

    By default built from ``F(n+1) + F(n)``; ``closed_form=True`` evaluates
    the explicit ``exp(tau(beta + nu n)) [r(n+1) + exp(-tau nu) r(n)]`` form.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    n = np.arange(float(dim))
    if closed_form:
        r = lambda m: _sinh_ratio(m, a.tau**2 * a.mu_sq)  # noqa: E731
        return 0.5 * np.exp(a.tau * (a.beta_d + a.nu * n)) * (r(n + 1) + np.exp(-a.tau * a.nu) * r(n))
    F = number_function(np.arange(float(dim + 1)), a)
    return 0.5 * (F[1:] + F[:-1])


def expanded_hamiltonian_energies(dim: int, nu: float, mu_sq: float, form: str = "regrouped") -> np.ndarray:
    """Small-(nu, mu^2) expansion of the free f-oscillator, units of ``omega0/2``.

    ``form="printed"`` uses ``(2n+1) + mu^2 n/6 + (mu^2/2 + 2 nu) n^2``;
    ``form="regrouped"`` uses ``(2n+1) + (2mu^2/3 + 2nu) n + (mu^2/2 + 2nu) n(n-1)``.
    The two are algebraically identical. Only first order in ``nu`` is exact:
    the exact levels at that order also carry ``mu^2 n^3 / 3``.
    """
    if abs(nu) > 0.1 or abs(mu_sq) > 0.1:
        warnings.warn(f"expansion used outside small-parameter regime (nu={nu}, mu_sq={mu_sq})",
                      stacklevel=2)
    n = np.arange(float(dim))
    base = 2.0 * n + 1.0
    if form == "printed":
        return base + mu_sq * n / 6.0 + (0.5 * mu_sq + 2.0 * nu) * n**2
    if form == "regrouped":
        return base + linear_coefficient(nu, mu_sq) * n + (0.5 * mu_sq + 2.0 * nu) * n * (n - 1.0)
    raise ValueError(f"unknown form {form!r}")


def linear_coefficient(nu: float, mu_sq: float) -> float:
    """Coefficient of n in the regrouped expansion; zero on the Kerr line mu^2 = -3 nu."""
    # grouped so that mu_sq = -3 nu cancels exactly in floating point
    return 2.0 * (mu_sq + 3.0 * nu) / 3.0


def collision_hamiltonian_energies(dim: int, kappa: float) -> np.ndarray:
    """Levels of ``(kappa/2)(a^+ a)^2``."""
    n = np.arange(float(dim))
    return 0.5 * kappa * n**2


def kerr_hamiltonian_energies(dim: int, k: float, omega0: float = 1.0) -> np.ndarray:
    n = np.arange(float(dim))
    return 0.5 * omega0 * (2.0 * n + 1.0) + 0.5 * k * n * (n - 1.0)


# --- phonon operators ------------------------------------------------------


def f1_of_n(n, eta: float):
    """Intrinsic deformation ``sqrt(1 - eta (n - 1))`` with ``eta = 1/N``."""
    n = np.asarray(n, dtype=float)
    rad = 1.0 - eta * (n - 1.0)
    if np.any(rad < 0):
        raise DomainError(f"1 - eta(n-1) < 0: occupation exceeds N+1 = {1.0 / eta + 1.0:g}")
    out = np.sqrt(rad)
    return out if out.ndim else float(out)


def f2_of_n(n, kappa: float):
    """Collision deformation ``sqrt(kappa n + 1 - kappa)``."""
    n = np.asarray(n, dtype=float)
    rad = kappa * n + 1.0 - kappa
    if np.any(rad < 0):
        raise DomainError(f"kappa n + 1 - kappa < 0 for kappa = {kappa}")
    out = np.sqrt(rad)
    return out if out.ndim else float(out)


def gardiner_ops(n_atoms: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Number-conserving phonon operators ``b_q = b f1(n)`` in the excited-number basis.

    Equivalent to ``a^+ b / sqrt(N)`` restricted to ``a^+ a = N - n``.
    """
    if dim > n_atoms + 1:
        raise ValueError(f"dim = {dim} exceeds N + 1 = {n_atoms + 1}")
    bq = annihilation(dim) @ np.diag(f1_of_n(np.arange(dim), 1.0 / n_atoms))
    return bq, bq.conj().T


def small_deformation_ops(n_atoms: int, kappa: float, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """First-order doubly deformed operators built from standard ladder matrices.

    ``B_q = (b - b^+ b b / 2N) [1 - (kappa/2){1 - (b^+ b - b^+ b^+ b b / N)}]``.
    All polynomials used are exact on the truncated space.
    """
    eta = 1.0 / n_atoms
    if kappa * dim > 0.5 or eta * dim**2 > 0.5:
        warnings.warn(f"first-order deformation questionable at kappa*dim={kappa * dim:.3g}, "
                      f"eta*dim^2={eta * dim**2:.3g}", stacklevel=2)
    b = annihilation(dim)
    bd = b.T
    num = bd @ b
    left = b - 0.5 * eta * (bd @ b @ b)
    bracket = np.eye(dim) - 0.5 * kappa * (np.eye(dim) - (num - eta * (bd @ bd @ b @ b)))
    Bq = left @ bracket
    return Bq, Bq.conj().T


def deformed_gardiner_ops(n_atoms: int, kappa: float, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact composition ``B_q = b_q f2(b_q^+ b_q)``, no expansion."""
    bq, bqd = gardiner_ops(n_atoms, dim)
    nq = np.diag(bqd @ bq).real
    Bq = bq @ np.diag(f2_of_n(nq, kappa))
    return Bq, Bq.conj().T


def save_matrix_csv(path, m: np.ndarray) -> None:
    """Dense CSV dump; complex entries are written in Python ``complex()`` syntax."""
    m = np.asarray(m)
    with open(path, "w") as fh:
        for row in m:
            if np.iscomplexobj(m):
                cells = (repr(complex(v)).strip("()") for v in row)
            else:
                cells = (f"{v:.17g}" for v in row)
            fh.write(",".join(cells) + "\n")
