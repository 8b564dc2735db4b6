"""Multi-Sidon spaces over finite fields, the cyclic subspace codes they
generate, and the linear sets with few heavy points they define."""

__version__ = "0.1.0"

from .codes import (ChannelParams, CyclicCode, build_code, code_equivalence, decode_min_distance,
                    min_distance, simulate, subspace_distance, transmit)
from .construct import (MonomialParams, RothCodeParams, find_monomial_params, monomial_equivalence,
                        monomial_family, roth_code_params)
from .errors import (CapExceededError, FieldError, HypothesisError, InvariantError, OrbitOverlapError,
                     ParameterError, ZeroPolynomialError)
from .field import Extension, FiniteField, make_field, parse_field_spec
from .linearized import LinearizedPoly, lp_kernel_dim
from .linset import heavy_points_analysis, hyperplane_weights, product_space, weight_spectrum
from .sidon import (SubspaceFamily, Verdict, canonical_form, family_equivalence, is_multi_sidon,
                    is_sidon, is_weak_multi_sidon, poly_criterion, span_class)
from .subspace import Subspace, span_canonical

__all__ = [
    "__version__",
    "build_code",
    "canonical_form",
    "CapExceededError",
    "ChannelParams",
    "code_equivalence",
    "CyclicCode",
    "decode_min_distance",
    "Extension",
    "family_equivalence",
    "FieldError",
    "find_monomial_params",
    "FiniteField",
    "heavy_points_analysis",
    "hyperplane_weights",
    "HypothesisError",
    "InvariantError",
    "is_multi_sidon",
    "is_sidon",
    "is_weak_multi_sidon",
    "LinearizedPoly",
    "lp_kernel_dim",
    "make_field",
    "min_distance",
    "monomial_equivalence",
    "monomial_family",
    "MonomialParams",
    "OrbitOverlapError",
    "ParameterError",
    "parse_field_spec",
    "poly_criterion",
    "product_space",
    "roth_code_params",
    "RothCodeParams",
    "simulate",
    "span_canonical",
    "span_class",
    "Subspace",
    "subspace_distance",
    "SubspaceFamily",
    "transmit",
    "Verdict",
    "weight_spectrum",
    "ZeroPolynomialError",
]
