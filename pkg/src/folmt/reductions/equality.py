from __future__ import annotations

from folmt.errors import ArityError, PreconditionError
from folmt.quotient import EquivClasses, quotient_by, quotient_env
from folmt.reductions.base import ReductionResult
from folmt.syntax import (
    App, Atom, Formula, Name, Signature, atom, conj, conj_all, forall, impl, syms,
)


def _foralls(names, body):
    for n in reversed(names):
        body = forall(n, body)
    return body


def congruence_axioms(sig: Signature, funcs, rels, eqsym: str) -> list[Formula]:
    """Equivalence axioms for ``eqsym`` plus one congruence axiom per listed symbol."""
    x, y, z = Name("#x"), Name("#y"), Name("#z")

    def eq(a, b):
        return atom(eqsym, a, b)

    out = [
        forall("#x", eq(x, x)),
        _foralls(["#x", "#y"], impl(eq(x, y), eq(y, x))),
        _foralls(["#x", "#y", "#z"], impl(eq(x, y), impl(eq(y, z), eq(x, z)))),
    ]

    def premises(a, body):
        for i in reversed(range(a)):
            body = impl(eq(Name(f"#x{i}"), Name(f"#y{i}")), body)
        return _foralls([f"#x{i}" for i in range(a)] + [f"#y{i}" for i in range(a)], body)

    for f in funcs:
        a = sig.func_arity(f)
        xs = tuple(Name(f"#x{i}") for i in range(a))
        ys = tuple(Name(f"#y{i}") for i in range(a))
        out.append(premises(a, eq(App(f, xs), App(f, ys))))
    for p in rels:
        a = sig.rel_arity(p)
        xs = tuple(Name(f"#x{i}") for i in range(a))
        ys = tuple(Name(f"#y{i}") for i in range(a))
        out.append(premises(a, impl(Atom(p, xs), Atom(p, ys))))
    return out


def eq_elim(sig: Signature, phi: Formula, eqsym: str) -> ReductionResult:
    """Drop the "interpreted as equality" requirement on ``eqsym``.

    Conjoins axioms making ``eqsym`` an equivalence and a congruence for every
    symbol of ``phi``.  Backward transport quotients by ``eqsym``.
    """
    if not sig.has_rel(eqsym):
        raise PreconditionError(f"{eqsym} is not a relation of the signature")
    if sig.rel_arity(eqsym) != 2:
        raise ArityError(f"{eqsym} must be binary")
    fs, ps = syms(phi)
    out = conj(phi, conj_all(congruence_axioms(sig, fs, ps, eqsym)))

    def forward(model, env):
        return model, env

    def backward(model, env):
        classes = EquivClasses.from_relation(model.size, model.rels[eqsym])
        return quotient_by(model, classes), quotient_env(classes, env)

    return ReductionResult("eq-elim", sig, phi, sig, out, forward, backward)
