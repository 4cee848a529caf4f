"""Finite model theory toolkit: first-order syntax and semantics over finite
models, bounded and monadic satisfiability, the Post correspondence encoding,
and satisfiability-preserving signature reductions."""

from folmt.errors import FolError
from folmt.search import Sat, Unsat, UnknownWithinBound, fsat_bounded, fsat_on_domain, monadic_decide
from folmt.semantics import Assignment, FiniteModel, make_model, satisfies
from folmt.syntax import Signature, parse_formula, parse_problem, print_formula

__version__ = "0.1.0"

__all__ = [
    "Assignment", "FiniteModel", "FolError", "Sat", "Signature", "UnknownWithinBound", "Unsat",
    "fsat_bounded", "fsat_on_domain", "make_model", "monadic_decide", "parse_formula",
    "parse_problem", "print_formula", "satisfies",
]
