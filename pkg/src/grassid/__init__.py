"""Exact Z2-graded polynomial identities of the Grassmann algebra over GF(p^n)."""

from .field import FieldElement, FieldSpec, ff_arith, ff_enumerate, ff_make, ff_pow
from .grassmann import GrassmannElement, g_commutator, g_mul, supp_wt_dom, wedge
from .gradings import (GradingSpec, Kind, apply_automorphism, generator_degree,
                       homogeneous_components, sample_homogeneous)
from .freealg import (FreePolynomial, PrTerm, Variable, gsubstitute, left_normed,
                      straighten, var_order)
from .parser import ParseError, parse_polynomial
from .ssform import (PPolynomial, SSMonomial, TestPolynomial, bad_terms, basis_for_grading,
                     leading_term, reduce, ss_compare)
from .witness import (IdentityVerdict, Substitution, WitnessSequence, build_almost_type_sequence,
                      build_type_sequence, is_graded_identity, scalar_witness, theorem_witness)

__all__ = [
    "FieldElement", "FieldSpec", "ff_arith", "ff_enumerate", "ff_make", "ff_pow",
    "GrassmannElement", "g_commutator", "g_mul", "supp_wt_dom", "wedge",
    "GradingSpec", "Kind", "apply_automorphism", "generator_degree",
    "homogeneous_components", "sample_homogeneous",
    "FreePolynomial", "PrTerm", "Variable", "gsubstitute", "left_normed", "straighten",
    "var_order", "ParseError", "parse_polynomial",
    "PPolynomial", "SSMonomial", "TestPolynomial", "bad_terms", "basis_for_grading",
    "leading_term", "reduce", "ss_compare",
    "IdentityVerdict", "Substitution", "WitnessSequence", "build_almost_type_sequence",
    "build_type_sequence", "is_graded_identity", "scalar_witness", "theorem_witness",
]
