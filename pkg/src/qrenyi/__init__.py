"""Quantum Renyi information toolkit.

Entropies and lengths, sandwiched relative entropy, asymmetry and coherence
bounds, and exact error-distribution checkers for phase, rotation, and
time-energy estimation limits.
"""

from .entropy import (CircularDensity, DiscreteDistribution, RealLineDensity,
                      classical_relative_entropy, conjugate_order,
                      convolution_lower_bound, convolve, maxent_extremal_density,
                      renyi_entropy, renyi_length, sibson_mutual_information,
                      wrap_mod_interval)
from .metrology import (EffectPovm, EstimationScenario, ErrorStatistics, PhasePovm,
                        UniformCircle, UniformInterval, canonical_phase_density,
                        conjecture_search, corollary1_check, corollary4_check,
                        corollary6_check, deviation_bound_coefficient,
                        error_distribution, fisher_comparison, information_chain,
                        interval_error_distribution, maximize_scaling_function,
                        nonlinear_generator_check, rotation_bounds,
                        scaling_function_f, theorem1_check, theorem2_bounds,
                        theorem5_check)
from .quantum import (AsymmetryResult, SignalEnsemble, asymmetry, asymmetry_alpha1,
                      asymmetry_numeric, asymmetry_pure, asymmetry_upper_bound,
                      coherence_bounds, coherence_measures, renyi_holevo,
                      sandwiched_relative_entropy,
                      uniform_ensemble_asymmetry_approximation)
from .spectral import (DensityOperator, Generator, GeneratorKind,
                       SpectralDecomposition, ValidationError, angular_momentum_z,
                       dephase, displace, eigendecompose, energy_generator,
                       fractional_power, generator_from_matrix, maximally_mixed,
                       number_generator, partial_trace, pure_state, purify,
                       random_density, random_pure, random_unitary,
                       von_neumann_entropy)
from .timeenergy import (AlmostPeriodicDensity, EnergySpectrum,
                         almost_periodic_density, almost_periodic_renyi_entropy,
                         besicovitch_mean, corollary9_check,
                         information_gain_lower_bound, periodic_time_density,
                         time_estimation_bounds)

__version__ = "0.1.0"
