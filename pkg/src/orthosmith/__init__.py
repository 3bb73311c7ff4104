"""Exact integrality probabilities for conjugation by rational orthogonal matrices."""
from .core import (DimensionError, DomainError, ExactMatrix, FactoredInteger, GaussianInteger,
                   OrthoSmithError, SizeError, ValidationError, det, factorize, gaussian_gcd,
                   is_scaled_orthogonal)
from .expectation import (expected_N2, expected_N3, figure_series, limit_constants,
                          partial_bound_sum)
from .ortho import (Quaternion4, RationalOrthogonalMatrix, count_r4p, enumerate_O2, enumerate_O3,
                    euler_rodrigues, level, primitive_reps_four_squares,
                    primitive_reps_two_squares)
from .probability import (ProbabilityReport, prob_asymmetric, prob_hermitian, prob_orthogonal,
                          prob_symmetric, prob_symmetric_gaussian)
from .smith import SmithData, determinantal_ideals_bruteforce, smith_mod, smith_normal_form
from .verify import (McEstimate, SampleConfig, exhaustive_prob, exhaustive_prob_gaussian, mc_prob,
                     sample_N)

__version__ = "0.1.0"
