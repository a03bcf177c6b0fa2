"""Physical parameters of the driven condensate and the undeformed reference solution.

All frequencies and rates are expressed in units of the one-atom linewidth
``gamma``. The total atom number doubles as the initial condensate number
(all atoms start in the condensate), so a single ``n_atoms`` field serves both.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

PARAM_KEYS = ("omega_bar", "omega_laser", "g", "gamma", "n_atoms", "kappa")
# |kappa - eta| at or below this is treated as the undeformed model
DEFORMATION_ATOL = 1e-12


class ParameterError(ValueError):
    """Raised for physically invalid or incomplete parameter sets."""


@dataclass(frozen=True)
class PhysicalParams:
    """Laser, atom and trap parameters.

    Parameters
    ----------
    omega_bar : float
        Atomic transition frequency.
    omega_laser : float
        Laser frequency.
    g : float
        Classical-field coupling.
    gamma : float
        One-atom linewidth; sets the unit scale.
    n_atoms : int
        Total number of atoms.
    kappa : float
        Collision rate.
    """

    omega_bar: float
    omega_laser: float
    g: float
    gamma: float = 1.0
    n_atoms: int = 100
    kappa: float = 0.0

    def __post_init__(self):
        vals = [self.omega_bar, self.omega_laser, self.g, self.gamma, self.kappa]
        if not all(math.isfinite(float(v)) for v in vals):
            raise ParameterError(f"non-finite parameter in {self}")
        if self.gamma <= 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ParameterError(f"n_atoms must be a positive integer, got {self.n_atoms}")
        if self.g < 0:
            raise ParameterError(f"g must be nonnegative, got {self.g}")
        if self.kappa < 0:
            raise ParameterError(f"kappa must be nonnegative, got {self.kappa}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))

    @property
    def delta(self) -> float:
        return self.omega_bar - self.omega_laser

    @property
    def big_gamma(self) -> float:
        """Collective damping rate ``gamma * sqrt(N)``."""
        return self.gamma * math.sqrt(self.n_atoms)

    @property
    def eta(self) -> float:
        return 1.0 / self.n_atoms

    @property
    def deformation(self) -> float:
        """``kappa - eta``; every deformation term of the model carries this factor.

        Values within :data:`DEFORMATION_ATOL` of zero are returned as exactly 0.
        """
        d = self.kappa - self.eta
        return 0.0 if abs(d) <= DEFORMATION_ATOL else d

    def with_(self, **changes) -> "PhysicalParams":
        return replace(self, **changes)

    def in_gamma_units(self) -> "PhysicalParams":
        """Rescale every frequency and rate so that ``gamma == 1``."""
        s = self.gamma
        return replace(
            self,
            omega_bar=self.omega_bar / s,
            omega_laser=self.omega_laser / s,
            g=self.g / s,
            kappa=self.kappa / s,
            gamma=1.0,
        )

    def as_dict(self) -> dict:
        return asdict(self)


def fig_params(n_atoms: int = 100, kappa: float = 0.0) -> PhysicalParams:
    """Parameters of the reference figures: zero detuning, g = 2.5, omega_bar = 50."""
    return PhysicalParams(omega_bar=50.0, omega_laser=50.0, g=2.5, gamma=1.0,
                          n_atoms=n_atoms, kappa=kappa)


def derive_params(p: PhysicalParams) -> tuple[float, float, float]:
    """Return ``(delta, big_gamma, eta)``."""
    return p.delta, p.big_gamma, p.eta


def beta0(p: PhysicalParams) -> complex:
    """Undeformed steady-state amplitude ``-i g sqrt(N) / (Gamma + i delta)``.

    At zero detuning this is ``-i g / gamma``; its argument is ``-pi/2``
    for ``g > 0``. Only moduli enter the reported deviations, so the phase
    convention does not matter downstream.
    """
    return -1j * p.g * math.sqrt(p.n_atoms) / (p.big_gamma + 1j * p.delta)


def collision_rate(density: float, scatt_length: float, v_rms: float) -> float:
    """Kinetic-theory collision rate ``rho * pi * a**2 * v_rms``."""
    for name, v in (("density", density), ("scatt_length", scatt_length), ("v_rms", v_rms)):
        if v < 0:
            raise ParameterError(f"{name} must be nonnegative, got {v}")
    return density * math.pi * scatt_length**2 * v_rms


def parse_params(text: str) -> PhysicalParams:
    """Parse flat ``key = value`` text (``#`` starts a comment).

    Every key in :data:`PARAM_KEYS` is required; unknown keys are rejected.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in PARAM_KEYS:
            raise ParameterError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val)
        except ValueError:
            raise ParameterError(f"line {lineno}: {key} is not a number: {val!r}") from None
    missing = [k for k in PARAM_KEYS if k not in values]
    if missing:
        raise ParameterError(f"missing keys: {', '.join(missing)}")
    n = values["n_atoms"]
    if n != int(n):
        raise ParameterError(f"n_atoms must be an integer, got {n}")
    values["n_atoms"] = int(n)
    return PhysicalParams(**values)


def load_params(path: str | Path) -> PhysicalParams:
    return parse_params(Path(path).read_text())


def format_params(p: PhysicalParams) -> str:
    """Inverse of :func:`parse_params` (17 significant digits)."""
    lines = []
    for k in PARAM_KEYS:
        v = getattr(p, k)
        lines.append(f"{k} = {v}" if k == "n_atoms" else f"{k} = {v:.17g}")
    return "\n".join(lines) + "\n"
