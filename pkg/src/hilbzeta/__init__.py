"""Hilbert-zeta functions of plane curves over finite fields.

Computes Z_Hilb(t) = sum_n #Hilb^n(C)(F_q) t^n for integral plane curves by
exact point counting and punctual ideal enumeration, and checks the Weil-type
facts it should satisfy: rationality with an integer numerator of degree
2*g_a, the functional equation p_{2g-i} = q^{g-i} p_i, the smooth-curve
two-path (Macdonald) identity, and the local numerator of degree 2*delta
over (1-t)^r at each planar singularity.
"""

from .errors import BudgetError, HilbzetaError, InconsistentCountsError, SchemaError
from .fields import FieldElement, FiniteField, embed, make_field
from .series import (
    NumeratorPolynomial,
    TruncatedSeries,
    check_functional_equation,
    counts_from_zeta,
    extract_numerator,
    numerator_from_power_sums,
    zeta_from_counts,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "HilbzetaError",
    "InconsistentCountsError",
    "SchemaError",
    "FieldElement",
    "FiniteField",
    "embed",
    "make_field",
    "TruncatedSeries",
    "NumeratorPolynomial",
    "zeta_from_counts",
    "counts_from_zeta",
    "extract_numerator",
    "check_functional_equation",
    "numerator_from_power_sums",
]
