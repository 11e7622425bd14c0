"""Exact divided-power algebras, generic-matrix invariants and the factorization
of homogeneous multiplicative polynomial laws through the determinant."""

from .exactalg import MultiPoly, ParseError, PolyMatrix, Var, entry, formal, parse_poly, poly_det, render
from .freering import FreeElem, enumerate_words, parse_free
from .divpow import DegreeMismatch, DPElem, DPMonomial, ab_component_rank, normalize, parse_dp, rho, tau_mul
from .genmat import (GenericContext, char_coeff, delta, e_span_rank, embed_generic, esym, invariant_space,
                     pi_image, present)
from .lawkit import (LawError, LawOracle, check_homogeneous, check_multiplicative, check_welldefined,
                     factor_law, parse_fixture, relations_discover, verify_factorization)

__all__ = [
    "MultiPoly", "ParseError", "PolyMatrix", "Var", "entry", "formal", "parse_poly", "poly_det", "render",
    "FreeElem", "enumerate_words", "parse_free",
    "DegreeMismatch", "DPElem", "DPMonomial", "ab_component_rank", "normalize", "parse_dp", "rho", "tau_mul",
    "GenericContext", "char_coeff", "delta", "e_span_rank", "embed_generic", "esym", "invariant_space",
    "pi_image", "present",
    "LawError", "LawOracle", "check_homogeneous", "check_multiplicative", "check_welldefined",
    "factor_law", "parse_fixture", "relations_discover", "verify_factorization",
]
