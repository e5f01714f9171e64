"""Numerical horizontal calculus and weighted Hardy-type inequalities on the Heisenberg group.

The group H^n is R^{2n+1} with the law
``(x, y, t) o (x', y', t') = (x + x', y + y', t + t' + 2(x'.y - x.y'))``,
homogeneous dimension ``Q = 2n + 2`` and gauge ``d = (|z|^4 + t^2)^{1/4}``.
"""

__version__ = "0.1.0"

from .errors import (CaseError, CatalogError, ConfigError, DegenerateFamilyError, DomainError,
                     HeisenbergError, IntegrandError, ParameterError, SingularPointError)
from .group import (GroupParams, GroupPoint, compose, dilate, distance, distance_closed_form,
                    gauge, inverse)
from .calculus import (GaugeRadialProfile, ScalarField, apply_frame_field, check_gauge_identities,
                       gauge_radial_p_sub_laplacian, horizontal_divergence, horizontal_gradient,
                       horizontal_hessian, p_sub_laplacian, sub_laplacian)
from .quadrature import (IntegralResult, QuadratureSpec, integrate, integrate_weighted,
                         monte_carlo_integrate, radial_integrate)
from .corpus import corpus_function, corpus_labels, standard_corpus
from .inequalities import (InequalityCase, VerificationReport, catalog, discriminant_check,
                           evaluate_case, evaluate_cases, evaluate_hardy,
                           evaluate_hardy_interpolation, evaluate_hardy_p2, evaluate_hpw,
                           evaluate_named_case, evaluate_rellich_interpolation,
                           evaluate_rellich_p2, get_case, named_catalog, verify_embedding_bound)
from .optimize import OptimizationResult
from .sharpness import ExtremalFamily, extremal_profile, sharpness_ratio, sharpness_schedule
from .vector_fields import (HalfSpaceSpec, VectorFieldSpec, divergence_functional,
                            example1_optimize_alpha, halfspace_angle_function, verify_ball_hardy,
                            verify_field_inequality, verify_halfspace_hardy, verify_log_hardy)
