"""Brute-force check of the spectrum with stochastic trajectories.

Integrates the linear fluctuation equation with classical white noise and
compares the averaged periodogram with the symmetrized resolvent spectrum.
A classical simulation sees symmetric noise statistics, so this validates
the poles of the response. The normally ordered numerator is checked by the
resolvent itself.
"""
import numpy as np

from fdbec import fig_params, solve_beta
from fdbec.checks import sde_comparison
from fdbec.oracles import TrajectoryConfig, resolvent_spectrum
from fdbec.spectrum import linearization_coeffs

p = fig_params(100, 0.03).with_(omega_laser=60.0)  # detuned by -10
c = linearization_coeffs(solve_beta(p), p)
cfg = TrajectoryConfig.for_rates(c, p.big_gamma, n_traj=1024, seed=1)
print(f"dt = {cfg.dt:.3e}, record length Gamma t = {cfg.t_total * p.big_gamma:g}, {cfg.n_traj} trajectories")

r = sde_comparison(c, p.big_gamma, cfg)
est = r["estimate"]
print(f"RMS relative deviation {r['rms_rel']:.3f}, worst band |z| {r['max_band_z']:.2f}, "
      f"Parseval |z| {r['parseval_z']:.2f}")

# %% A coarse side-by-side view of the two spectra.
print("\nomega    SDE          resolvent")
for w0 in range(-40, 41, 10):
    i = np.argmin(np.abs(est.omega - w0))
    ref = resolvent_spectrum(est.omega[i:i + 1], c, p.big_gamma, "symmetrized")[0]
    print(f"{est.omega[i]:7.2f}  {est.spectrum[i]:.5f}      {ref:.5f}")
