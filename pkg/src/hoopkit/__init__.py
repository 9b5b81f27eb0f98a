"""Finite universal algebra for hoops, MV-algebras and rings.

Operation tables are numpy integer arrays; every check is exhaustive over
the finite carrier.
"""

from hoopkit.algebra import (Congruence, FiniteAlgebra, Homomorphism, Point, generate_congruence, product,
                             pullback, quotient, subalgebra)
from hoopkit.parsing import format_algebra, parse_algebra, parse_document, parse_term, parse_theory
from hoopkit.search import find_isomorphism, find_models
from hoopkit.terms import App, Equation, Signature, Term, Theory, Var, Verdict, check_identity, check_theory
from hoopkit.theories import (BOORNG, CRING, CRNG, HOOP, MV, WHOOP, get_theory, hoop_reduct,
                              lukasiewicz_chain)

__version__ = "0.1.0"

__all__ = [
    "App", "BOORNG", "CRING", "CRNG", "Congruence", "Equation", "FiniteAlgebra", "HOOP", "Homomorphism", "MV",
    "Point", "Signature", "Term", "Theory", "Var", "Verdict", "WHOOP", "check_identity", "check_theory",
    "find_isomorphism", "find_models", "format_algebra", "generate_congruence", "get_theory", "hoop_reduct",
    "lukasiewicz_chain", "parse_algebra", "parse_document", "parse_term", "parse_theory", "product", "pullback",
    "quotient", "subalgebra",
]
