"""Function elimination for monadic signatures."""

from __future__ import annotations

from folmt.errors import PreconditionError
from folmt.reductions.base import ReductionResult
from folmt.semantics import make_model
from folmt.syntax import (
    App, Atom, Formula, Signature, Var, alls, conj, conj_all, exs, iff, map_atoms,
)


def _word(t) -> tuple[tuple[str, ...], Var]:
    """``f1(f2(...fk(x)))`` as the word ``(f1, ..., fk)`` and the variable ``x``."""
    w = []
    while isinstance(t, App):
        w.append(t.func)
        t = t.args[0]
    return tuple(w), t


def monadic_fun_elim(sig: Signature, phi: Formula) -> ReductionResult:
    """Replace ``P(w(x))`` by ``R_{w,P}(x)`` for every word ``w`` of unary functions.

    ``R_{w,P}`` is named ``P[f,g,...]`` with the outermost function first.
    For each ``P`` the words in use are closed under dropping the innermost
    letter, and one axiom ties the relations together::

        forall x. AND_f exists y. AND_{P, v++[f] in W_P} (R_{v,P}(y) <-> R_{v++[f],P}(x))

    so that ``y`` can serve as ``f(x)``.  Backward transport picks the least
    such ``y``; ``P`` is read from ``R_{[],P}``.
    """
    if any(a != 1 for _, a in sig.funcs + sig.rels):
        raise PreconditionError("monadic_fun_elim needs every symbol to have arity 1")
    words: dict[str, set] = {p: set() for p in sig.rel_names}

    def collect(a, _d):
        w, _ = _word(a.args[0])
        for i in range(len(w) + 1):
            words[a.rel].add(w[:i])
        return a

    map_atoms(phi, collect)
    for p in sig.rel_names:
        words[p].add(())
    taken = set(sig.func_names)
    names: dict = {}
    for p in sig.rel_names:
        for w in sorted(words[p], key=lambda w: (len(w), w)):
            base = f"{p}[{','.join(w)}]"
            name = base
            i = 1
            while name in taken:
                name = f"{base}_{i}"
                i += 1
            taken.add(name)
            names[(w, p)] = name
    out_sig = Signature((), tuple((names[key], 1) for key in names))

    def rewrite(a, _d):
        w, x = _word(a.args[0])
        return Atom(names[(w, a.rel)], (x,))

    body = map_atoms(phi, rewrite)
    # link[f]: pairs (v, P) with v ++ [f] in W_P
    link = {f: [(w[:-1], p) for (w, p) in names if w and w[-1] == f] for f in sig.func_names}

    def step(f):
        # under binders x (Var 1) and y (Var 0)
        return conj_all(iff(Atom(names[(v, p)], (Var(0),)), Atom(names[(v + (f,), p)], (Var(1),)))
                        for v, p in link[f])

    axiom_parts = [exs(1, step(f)) for f in sig.func_names if link[f]]
    out = conj(body, alls(1, conj_all(axiom_parts))) if axiom_parts else body

    def forward(model, env):
        def apply(w, x):
            for f in reversed(w):
                x = model.funcs[f][(x,)]
            return x

        rels = {names[(w, p)]: (lambda args, w=w, p=p: (apply(w, args[0]),) in model.rels[p])
                for (w, p) in names}
        return make_model(out_sig, model.size, {}, rels), env

    def backward(model, env):
        k = model.size
        R = model.rels

        def witness(f, x):
            for y in range(k):
                if all(((y,) in R[names[(v, p)]]) == ((x,) in R[names[(v + (f,), p)]]) for v, p in link[f]):
                    return y
            raise PreconditionError(f"model violates the linking axiom for {f} at {x}")

        funcs = {f: {(x,): witness(f, x) for x in range(k)} for f in sig.func_names}
        rels = {p: R[names[((), p)]] for p in sig.rel_names}
        return make_model(sig, k, funcs, rels), env

    res = ReductionResult("monadic-fun-elim", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "names", names)
    return res
