"""The f-deformed oscillator behind the condensate model.

Walks through the deformation function, the collision and Kerr limits of
the free Hamiltonian, and the number-conserving phonon operators.
Run with ``python3 demos/01_deformed_oscillator.py``.
"""
import numpy as np

from fdbec.algebra import (AlgebraParams, algebra_defect, expanded_hamiltonian_energies, f_squared,
                           f_squared_recursion, free_hamiltonian_energies, gardiner_ops, linear_coefficient)

# %% The deformation function |f(n)|^2 has a closed form; the algebra alone
# fixes it through a two-term recursion started from the vacuum.
a = AlgebraParams(tau=1.0, nu=0.05, mu_sq=0.01)
n = np.arange(1, 11)
print("n   closed form        recursion")
for k, c, r in zip(n, f_squared(n, a), f_squared_recursion(10, a)):
    print(f"{k:<3d} {c:.15f}  {r:.15f}")

# The same relation holds for the matrices A = a f(N) built in a truncated Fock space.
print("max algebra defect on 30 levels:", np.abs(algebra_defect(30, a)).max())

# %% Collision limit: mu^2 = 0, nu = kappa / 2. The small-nu expansion of the
# levels reproduces E_n = (n + 1/2) + (kappa/2) n^2, while the exact levels
# pick up corrections of order nu^2 n^3.
kappa = 2e-3
exact = free_hamiltonian_energies(8, AlgebraParams.collision(kappa))
expanded = 0.5 * expanded_hamiltonian_energies(8, kappa / 2, 0.0)
print("\nn   exact           expanded        (n+1/2) + kappa n^2/2")
for k in range(8):
    print(f"{k:<3d} {exact[k]:.12f}  {expanded[k]:.12f}  {k + 0.5 + 0.5 * kappa * k * k:.12f}")

# %% Kerr line: mu^2 = -3 nu wipes out the linear-in-n correction entirely.
for nu in (1e-3, 1e-2):
    print(f"nu = {nu:g}: linear coefficient on the Kerr line = {linear_coefficient(nu, -3 * nu)}")

# %% Phonon operators of a finite condensate obey [b_q, b_q^+] = 1 - 2 n / N.
N = 10
bq, bqd = gardiner_ops(N, N + 1)
print("\ncommutator diagonal for N = 10:", np.round(np.diag(bq @ bqd - bqd @ bq).real[:-1], 12))
