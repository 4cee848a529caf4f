"""Satisfiability-preserving signature reductions with model transports."""

from folmt.reductions.base import ReductionResult, TraceRecord, compose, fresh_var
from folmt.reductions.equality import congruence_axioms, eq_elim
from folmt.reductions.membership import MEM, membership_to_fun, nary_to_membership
from folmt.reductions.monadic import monadic_fun_elim
from folmt.reductions.pipeline import (
    STAGES, discrete_to_binary, full_trakhtenbrot, run_chain, to_target,
)
from folmt.reductions.signature import (
    arity_pad, const_elim, embed, fun_elim, rel_merge, sig_gc, zero_arity_lift,
)

__all__ = [
    "MEM", "STAGES", "ReductionResult", "TraceRecord", "arity_pad", "compose", "congruence_axioms",
    "const_elim", "discrete_to_binary", "embed", "eq_elim", "fresh_var", "full_trakhtenbrot",
    "fun_elim", "membership_to_fun", "monadic_fun_elim", "nary_to_membership", "rel_merge",
    "run_chain", "sig_gc", "to_target", "zero_arity_lift",
]
