"""Entanglement entropies and ground-state phases of generalized su(m+1)
Lipkin-Meshkov-Glick models.

The package computes, exactly and in the thermodynamic limit, the
bipartite von Neumann / Renyi / Tsallis entropies of Dicke ground states,
classifies the ground-state phase from the magnetic field by projection
onto the weight simplex, and verifies the Dicke ground state by small-N
exact diagonalization.
"""

from .errors import ResourceCapError, ValidationError
from .model import (Coupling, FieldLocation, ModelSpec, RoundingTieWarning,
                    densities_from_field, field_from_densities,
                    finite_magnon_numbers, locate_field, weight_vectors)
from .rdm import (BlockSpec, Moments, RdmSpectrum, log_binomial,
                  moments_brute_force, moments_closed_form, rdm_eigenvalue,
                  rdm_spectrum, schmidt_coefficients, support_size)
from .entropy import (AsymptoticInput, EntropyValue, entropy_exact,
                      entropy_upper_bound, renyi_asymptotic, renyi_exact,
                      trace_power_asymptotic, tsallis_asymptotic, tsallis_exact,
                      tsallis_extensive_limit, vn_asymptotic,
                      zero_entropy_distance)
from .gaussian import (GaussianModel, covariance_matrix,
                       gaussian_eigenvalue_approx, hypergeometric_gaussian_approx)
from .phase import (PhaseResult, Su3Region, phase_scan, project_to_simplex,
                    su3_entropy_piecewise, su3_region)
from .diag import (GroundStateReport, SectorSpectrum, build_hamiltonian,
                   ground_state_verify, lmg_su2_energy, sector_spectrum,
                   su2_multiplicity)

__version__ = "0.1.0"
