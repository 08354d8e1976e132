"""Sup and regular norms, Bohr radii and convergence radii for polynomials on l_p^n."""
from .bohr import BOHR_DISC_LIMIT, BohrEstimate, bohr_grid, ckk_unit_norm_family, disc_bohr_threshold, estimate_bohr_m
from .construct import (BracketError, ConstructionResult, EtaUnreachableError, construct_ratio_polynomial,
                        construct_small_regular_radius_series, disjoint_product, find_extremal)
from .lattice import (INF, Polydisc, SpaceSpec, disjoint, krivine_modulus, log_interpolate, lp_norm, modulus_point,
                      p_norm, polydisc_contains, vector_from_json, vector_to_json)
from .norms import (NonConvergenceError, NormEstimate, OptimizerConfig, estimate_real_sup_norm,
                    estimate_regular_norm, estimate_sup_norm, gradient_regular_norm, holder_check, norm_pair,
                    regular_norm_bounds_l1, regular_norms, sup_norms)
from .ortho import (DiagonalPolynomial, diagonal_series, exact_regular_norm, oa_norm_pair, oa_real_ratio,
                    oa_series_radius_check, random_diagonal, rotation_witness)
from .poly import (HomogeneousPolynomial, complexification_formula, complexify, count_multiindices, derivative_poly,
                   enumerate_multiindices, evaluate, evaluate_modulus, is_orthogonally_additive, partial_derivative,
                   poly_modulus, polynomial_from_json, polynomial_to_json, random_polynomial, real_imag_parts,
                   symmetric_form)
from .series import (ConvergenceResult, PowerSeries, ProbeReport, RadiusReport, bohr_sandwich, coherence_demo,
                     geometric_series, log_convexity_probe, radii, radii_many, recenter_1d, regular_converges_at)

__version__ = "0.1.0"
