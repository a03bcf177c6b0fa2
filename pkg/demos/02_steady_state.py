"""How far does the deformed steady state sit from the undeformed one?

Reproduces the two deviation trends: shrinking with atom number at
kappa = 0, growing with the collision rate at N = 100.
"""
import warnings

import numpy as np

from fdbec import fig_params, solve_beta
from fdbec.steady_state import all_roots

# %% Without collisions the only deformation is the finite-N one, eta = 1/N,
# so the amplitude approaches the undeformed value as N grows.
print("N        |beta|-|beta0|     beta")
for N in np.logspace(1, 4, 7).round().astype(int):
    ss = solve_beta(fig_params(int(N)))
    print(f"{N:<8d} {ss.deviation:.6e}     {ss.beta:.6f}")

# %% Collisions add kappa to the deformation; only kappa - 1/N matters.
print("\nkappa    |beta|-|beta0|")
with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # the largest kappa leaves the first-order regime
    for kappa in np.linspace(0.0, 0.2, 9):
        print(f"{kappa:<8.3f} {solve_beta(fig_params(100, kappa)).deviation:.6e}")

# %% The steady-state equation is cubic-like in beta; other roots exist but
# the physical branch is the one continued from the undeformed solution.
p = fig_params(100, 0.1)
roots = all_roots(p, box=6.0)
print(f"\nroots in [-6, 6]^2 for kappa = 0.1: {len(roots)}")
for z in roots:
    print(f"  {z:.8f}")
print("continuation branch:", f"{solve_beta(p).beta:.8f}")
