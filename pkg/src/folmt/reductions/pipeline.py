"""Composite reductions and the stage registry used by ``folmt reduce``."""

from __future__ import annotations

from typing import Callable

from folmt.errors import FolError, PreconditionError
from folmt.reductions.base import ReductionResult, compose
from folmt.reductions.equality import eq_elim
from folmt.reductions.membership import MEM, membership_to_fun, nary_to_membership
from folmt.reductions.monadic import monadic_fun_elim
from folmt.reductions.signature import (
    arity_pad, const_elim, embed, fun_elim, rel_merge, sig_gc, zero_arity_lift,
)
from folmt.syntax import Formula, Signature


def discrete_to_binary(sig: Signature, phi: Formula) -> ReductionResult:
    """Reduce any finite signature to a single binary relation in seven stages."""
    stages = [sig_gc(sig, phi)]

    def step(fn, *args):
        prev = stages[-1]
        stages.append(fn(prev.out_sig, prev.out_formula, *args))

    step(fun_elim)
    step(eq_elim, stages[-1].eqsym)
    step(arity_pad, max(stages[-1].out_sig.max_arity(), 1))
    step(rel_merge)
    step(const_elim)
    step(nary_to_membership)
    return compose("discrete-to-binary", stages)


def to_target(sig: Signature, phi: Formula, target: Signature) -> ReductionResult:
    """Map a single-binary-relation problem into ``target``.

    Uses a relation of arity >= 2 when there is one, else a function of
    arity >= 2 together with a unary relation.
    """
    if any(a >= 2 for _, a in target.rels):
        return embed(sig, phi, target)
    funs = sorted((a, f) for f, a in target.funcs if a >= 2)
    if funs and any(a == 1 for _, a in target.rels):
        a, _ = funs[0]
        st = membership_to_fun(sig, phi, a)
        return compose("to-target", [st, embed(st.out_sig, st.out_formula, target)])
    raise PreconditionError("target signature needs a relation of arity >= 2, "
                            "or a function of arity >= 2 and a unary relation")


def full_trakhtenbrot(R, target: Signature) -> ReductionResult:
    """Reduce a BPCP instance to finite satisfiability over ``target``."""
    from folmt.bpcp import EQ, encode

    if not (any(a >= 2 for _, a in target.rels)
            or (any(a >= 2 for _, a in target.funcs) and any(a == 1 for _, a in target.rels))):
        raise PreconditionError("target signature needs a relation of arity >= 2, "
                                "or a function of arity >= 2 and a unary relation")
    sig, phi = encode(R)
    s1 = eq_elim(sig, phi, EQ)
    s2 = discrete_to_binary(s1.out_sig, s1.out_formula)
    s3 = to_target(s2.out_sig, s2.out_formula, target)
    return compose("full-trakhtenbrot", [s1, s2, s3])


# -- registry ---------------------------------------------------------------

def _eq_elim_auto(sig, phi):
    eqs = [p for p, a in sig.rels if a == 2 and p.startswith("eq")]
    if not eqs:
        raise PreconditionError("eq-elim needs a binary relation named eq")
    return eq_elim(sig, phi, eqs[0])


def _param(name: str, arg: str | None) -> int:
    if arg is None:
        raise FolError(f"stage {name} needs a parameter, as in {name}:<n>")
    try:
        return int(arg)
    except ValueError:
        raise FolError(f"stage {name}: parameter {arg!r} is not a number") from None


STAGES: dict[str, Callable] = {
    "eq-elim": lambda sig, phi, arg, target: _eq_elim_auto(sig, phi),
    "sig-gc": lambda sig, phi, arg, target: sig_gc(sig, phi),
    "fun-elim": lambda sig, phi, arg, target: fun_elim(sig, phi),
    "arity-pad": lambda sig, phi, arg, target: arity_pad(sig, phi, _param("arity-pad", arg)),
    "rel-merge": lambda sig, phi, arg, target: rel_merge(sig, phi),
    "const-elim": lambda sig, phi, arg, target: const_elim(sig, phi),
    "to-membership": lambda sig, phi, arg, target: nary_to_membership(sig, phi),
    "to-fun": lambda sig, phi, arg, target: membership_to_fun(sig, phi, _param("to-fun", arg)),
    "embed": lambda sig, phi, arg, target: _embed(sig, phi, target),
    "monadic-fun-elim": lambda sig, phi, arg, target: monadic_fun_elim(sig, phi),
    "zero-lift": lambda sig, phi, arg, target: zero_arity_lift(sig, phi),
    "discrete-to-binary": lambda sig, phi, arg, target: discrete_to_binary(sig, phi),
}


def _embed(sig, phi, target):
    if target is None:
        raise FolError("stage embed needs a target signature")
    return embed(sig, phi, target)


def run_chain(sig: Signature, phi: Formula, chain: list[str], target: Signature | None = None) -> ReductionResult:
    """Apply named stages in order; ``name:<n>`` passes a numeric parameter."""
    if not chain:
        raise FolError("empty reduction chain")
    stages = []
    for item in chain:
        name, _, arg = item.partition(":")
        if name not in STAGES:
            raise FolError(f"unknown stage {name!r}; known: {', '.join(STAGES)}")
        st = STAGES[name](sig, phi, arg or None, target)
        stages.append(st)
        sig, phi = st.out_sig, st.out_formula
    return stages[0] if len(stages) == 1 else compose("chain", stages)


__all__ = ["MEM", "STAGES", "discrete_to_binary", "full_trakhtenbrot", "run_chain", "to_target"]
