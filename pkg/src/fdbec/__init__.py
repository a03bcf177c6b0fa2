"""Light scattering from an f-deformed Bose-Einstein condensate with atomic collisions."""

from .algebra import (AlgebraParams, AlgebraSingularity, DomainError, collision_hamiltonian_energies,
                      deformed_gardiner_ops, expanded_hamiltonian_energies, f1_of_n, f2_of_n,
                      f_squared, f_squared_recursion, free_hamiltonian_energies, gardiner_ops,
                      q_bracket, small_deformation_ops)
from .core import (ParameterError, PhysicalParams, beta0, collision_rate, derive_params, fig_params,
                   load_params, parse_params)
from .oracles import (TrajectoryConfig, meanfield_fixed_point, mode_verdict, nonlinear_meanfield,
                      relaxation_fit, resolvent_spectrum, sde_spectrum)
from .spectrum import (FluctuationCoeffs, SpectrumResult, char_function_E, linearization_coeffs,
                       spectrum_at, spectrum_S, stability_check, sweep_fig3, sweep_fig4)
from .steady_state import SolverError, SteadyState, all_roots, residual, solve_beta

__version__ = "0.1.0"
