from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from folmt.semantics import Assignment, FiniteModel
from folmt.syntax import (
    ALL, EX, App, Atom, Bin, Bot, Formula, Name, Quant, Signature, Var, check_formula, conj,
    free_vars, impl, map_terms,
)

Transport = Callable[[FiniteModel, Assignment], "tuple[FiniteModel, Assignment]"]


@dataclass(frozen=True)
class TraceRecord:
    name: str
    in_funcs: int
    in_rels: int
    out_funcs: int
    out_rels: int

    def __str__(self):
        return (f"{self.name}: ({self.in_funcs} funcs, {self.in_rels} rels)"
                f" -> ({self.out_funcs} funcs, {self.out_rels} rels)")


@dataclass(frozen=True)
class ReductionResult:
    """Output of one satisfiability-preserving step, with model transports.

    ``forward`` maps a model and assignment satisfying the input formula to
    ones satisfying the output; ``backward`` goes the other way.
    """

    name: str
    in_sig: Signature
    in_formula: Formula
    out_sig: Signature
    out_formula: Formula
    forward: Optional[Transport] = None
    backward: Optional[Transport] = None
    stages: tuple = field(default=(), compare=False)

    def __post_init__(self):
        check_formula(self.out_formula, self.out_sig)

    @property
    def trace(self) -> list[TraceRecord]:
        if self.stages:
            return [r for st in self.stages for r in st.trace]
        return [TraceRecord(self.name, len(self.in_sig.funcs), len(self.in_sig.rels),
                            len(self.out_sig.funcs), len(self.out_sig.rels))]


def compose(name: str, stages: Sequence[ReductionResult]) -> ReductionResult:
    stages = tuple(stages)
    fwds = [s.forward for s in stages]
    bwds = [s.backward for s in stages]

    def forward(model, env):
        for f in fwds:
            model, env = f(model, env)
        return model, env

    def backward(model, env):
        for b in reversed(bwds):
            model, env = b(model, env)
        return model, env

    return ReductionResult(
        name, stages[0].in_sig, stages[0].in_formula, stages[-1].out_sig, stages[-1].out_formula,
        forward if all(fwds) else None, backward if all(bwds) else None, stages)


def fresh_var(phi: Formula) -> int:
    """Least index above every free variable of ``phi``."""
    fv = free_vars(phi)
    return fv[-1] + 1 if fv else 0


def relativize(phi: Formula, dom, atom_fn) -> Formula:
    """Restrict quantifiers to ``dom(Var(0))`` and rewrite atoms with ``atom_fn(atom)``."""
    if isinstance(phi, Bot):
        return phi
    if isinstance(phi, Atom):
        return atom_fn(phi)
    if isinstance(phi, Bin):
        return Bin(phi.op, relativize(phi.left, dom, atom_fn), relativize(phi.right, dom, atom_fn))
    body = relativize(phi.body, dom, atom_fn)
    if phi.kind == ALL:
        return Quant(ALL, impl(dom(Var(0)), body))
    return Quant(EX, conj(dom(Var(0)), body))


def instantiate(phi: Formula, slots: dict) -> Formula:
    """Replace each placeholder ``Name(n)`` by the free variable ``slots[n]``."""
    def term(t, depth):
        if isinstance(t, Name) and t.name in slots:
            return Var(slots[t.name] + depth)
        if isinstance(t, App):
            return App(t.func, tuple(term(a, depth) for a in t.args))
        return t

    return map_terms(phi, term)
