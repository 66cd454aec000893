"""Separators of fat points in P^n x P^m: ideals, separator degrees, good sets,
Hilbert functions, ACM tests and minimal bigraded free resolutions."""

from .coeff import DEFAULT_PRIME, Field, FieldElement, FieldMismatch
from .biring import Bidegree, Polynomial, RingSpec, dim_bigraded_piece, monomials_of_bidegree
from .gbasis import (Ideal, groebner, ideal_equal, ideal_intersection, ideal_power,
                     ideal_product, ideal_quotient, ideal_sum, minimal_generators)
from .scheme import (FatPointScheme, PPoint, SchemeFormatError, load_scheme,
                     parse_scheme_text, point_ideal, reduce_multiplicity,
                     scheme_degree, scheme_ideal)
from .separator import (AcmReport, HilbertTable, HypothesisError, SeparatorSet,
                        acm_check, degree_of_point, good_set_verdict,
                        hilbert_function, hilbert_relation_check, is_good_set,
                        is_separator, minimal_separators, not_acm_from_degree,
                        separator_colon_check, separator_count_check)
from .resol import (Resolution, hilbert_from_betti, last_syzygy_separator_check,
                    minimal_free_resolution, pdim, point_resolution_check,
                    rank_bound_check)

__version__ = "0.1.0"
