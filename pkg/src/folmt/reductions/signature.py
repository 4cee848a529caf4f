"""Signature-level reductions: garbage collection, function and constant
elimination, arity normalisation, relation merging and embeddings."""

from __future__ import annotations

from folmt.errors import ArityError, PreconditionError
from folmt.reductions.base import ReductionResult, fresh_var
from folmt.semantics import (
    grid, inflate, make_model, reinterpret,
)
from folmt.syntax import (
    App, Atom, Formula, Name, Signature, Term, Var, alls, conj, conj_all, exists, exs, impl,
    map_atoms, map_symbols, syms,
)


def sig_gc(sig: Signature, phi: Formula) -> ReductionResult:
    """Restrict the signature to the symbols that occur, in occurrence order."""
    fs, ps = syms(phi)
    out_sig = sig.restrict(fs, ps)
    out = map_symbols(phi, target=out_sig)

    def forward(model, env):
        return reinterpret(model, out_sig), env

    def backward(model, env):
        return reinterpret(model, sig), env

    return ReductionResult("sig-gc", sig, phi, out_sig, out, forward, backward)


# -- function elimination ---------------------------------------------------

def graph_names(sig: Signature) -> dict[str, str]:
    taken = set(sig.rel_names)
    out = {}
    for f in sig.func_names:
        name = f"G_{f}"
        i = 1
        while name in taken:
            name = f"G_{f}_{i}"
            i += 1
        taken.add(name)
        out[f] = name
    return out


class _Names:
    def __init__(self):
        self.n = 0

    def __call__(self) -> str:
        self.n += 1
        return f"#t{self.n}"


def _flat_eq(x: Term, t: App, graphs: dict, fresh: _Names) -> Formula:
    """A function-free formula saying ``x`` is the value of ``t`` (innermost first)."""
    args = []
    inner = []
    for s in t.args:
        if isinstance(s, App):
            n = fresh()
            inner.append((n, s))
            args.append(Name(n))
        else:
            args.append(s)
    body = Atom(graphs[t.func], tuple(args) + (x,))
    body = conj_all([_flat_eq(Name(n), s, graphs, fresh) for n, s in inner] + [body])
    for n, _ in reversed(inner):
        body = exists(n, body)
    return body


def _flatten_atom(a: Atom, graphs: dict, fresh: _Names) -> Formula:
    if not any(isinstance(t, App) for t in a.args):
        return a
    args = []
    inner = []
    for t in a.args:
        if isinstance(t, App):
            n = fresh()
            inner.append((n, t))
            args.append(Name(n))
        else:
            args.append(t)
    body = conj_all([_flat_eq(Name(n), t, graphs, fresh) for n, t in inner] + [Atom(a.rel, tuple(args))])
    for n, _ in reversed(inner):
        body = exists(n, body)
    return body


def fun_elim(sig: Signature, phi: Formula, eqsym: str | None = None) -> ReductionResult:
    """Replace every function ``f`` by its graph relation ``G_f`` (arity + 1).

    The output is an equality instance: ``eqsym`` (fresh by default) must be
    read as identity, which the forward transport provides and the backward
    transport assumes.  Pair with :func:`eq_elim` to drop that requirement.
    """
    graphs = graph_names(sig)
    taken = set(sig.rel_names) | set(graphs.values())
    if eqsym is None:
        eqsym = "eq"
        i = 1
        while eqsym in taken:
            eqsym = f"eq_{i}"
            i += 1
    elif eqsym in taken:
        raise PreconditionError(f"{eqsym} is already a relation symbol")
    out_sig = Signature((), ((eqsym, 2),)
                        + tuple((graphs[f], a + 1) for f, a in sig.funcs) + sig.rels)
    fresh = _Names()
    body = map_atoms(phi, lambda a, _d: _flatten_atom(a, graphs, fresh))
    axioms = []
    for f, a in sig.funcs:
        g = graphs[f]
        # totality: forall xs. exists y. G(xs, y)
        xs = tuple(Var(a - i) for i in range(a))
        axioms.append(alls(a, exs(1, Atom(g, xs + (Var(0),)))))
        # functionality: forall xs y z. G(xs, y) -> G(xs, z) -> y = z
        xs = tuple(Var(a + 1 - i) for i in range(a))
        axioms.append(alls(a + 2, impl(Atom(g, xs + (Var(1),)),
                                       impl(Atom(g, xs + (Var(0),)), Atom(eqsym, (Var(1), Var(0)))))))
    out = conj(body, conj_all(axioms)) if axioms else body

    def forward(model, env):
        k = model.size
        rels = {eqsym: [(x, x) for x in range(k)]}
        for f, a in sig.funcs:
            rels[graphs[f]] = [args + (v,) for args, v in model.funcs[f].items()]
        for p in sig.rel_names:
            rels[p] = model.rels[p]
        return make_model(out_sig, k, {}, rels), env

    def backward(model, env):
        funcs = {}
        for f, a in sig.funcs:
            g = graphs[f]
            funcs[f] = {args: next((y for y in range(model.size) if args + (y,) in model.rels[g]), 0)
                        for args in grid(model.size, a)}
        rels = {p: model.rels[p] for p in sig.rel_names}
        return make_model(sig, model.size, funcs, rels), env

    res = ReductionResult("fun-elim", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "eqsym", eqsym)
    return res


# -- arity normalisation ----------------------------------------------------

def _pad_args(args: tuple, n: int, x0: int, depth: int) -> tuple:
    return args + (Var(x0 + depth),) * (n - len(args))


def arity_pad(sig: Signature, phi: Formula, n: int) -> ReductionResult:
    """Give every relation arity exactly ``n`` by repeating a fresh free variable."""
    bad = [p for p, a in sig.rels if a > n]
    if bad:
        raise ArityError(f"relations {bad} have arity above {n}")
    x0 = fresh_var(phi)
    out_sig = Signature(sig.funcs, tuple((p, n) for p, _ in sig.rels))
    out = map_atoms(phi, lambda a, d: Atom(a.rel, _pad_args(a.args, n, x0, d)))

    def forward(model, env):
        rels = {p: (lambda args, p=p, a=a: args[:a] in model.rels[p]) for p, a in sig.rels}
        return make_model(out_sig, model.size, model.funcs, rels), env

    def backward(model, env):
        v = env(x0)
        rels = {p: (lambda args, p=p, a=a: args + (v,) * (n - a) in model.rels[p]) for p, a in sig.rels}
        return make_model(sig, model.size, model.funcs, rels), env

    res = ReductionResult(f"arity-pad:{n}", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "x0", x0)
    return res


def zero_arity_lift(sig: Signature, phi: Formula) -> ReductionResult:
    """Lift 0-ary functions and relations to arity 1, applied to a fresh variable."""
    if sig.max_arity() > 1:
        raise PreconditionError("zero_arity_lift needs all arities <= 1")
    x0 = fresh_var(phi)
    out_sig = Signature(tuple((f, 1) for f, _ in sig.funcs), tuple((p, 1) for p, _ in sig.rels))

    def term(t, d):
        if isinstance(t, App):
            if not t.args:
                return App(t.func, (Var(x0 + d),))
            return App(t.func, tuple(term(a, d) for a in t.args))
        return t

    def atom_fn(a, d):
        args = tuple(term(t, d) for t in a.args)
        return Atom(a.rel, args if args else (Var(x0 + d),))

    out = map_atoms(phi, atom_fn)
    zf = [f for f, a in sig.funcs if a == 0]
    zp = [p for p, a in sig.rels if a == 0]

    def forward(model, env):
        funcs = {f: ((lambda args, v=model.funcs[f][()]: v) if f in zf else model.funcs[f])
                 for f in sig.func_names}
        rels = {p: ((lambda args, v=(() in model.rels[p]): v) if p in zp else model.rels[p])
                for p in sig.rel_names}
        return make_model(out_sig, model.size, funcs, rels), env

    def backward(model, env):
        v = env(x0)
        funcs = {f: ({(): model.funcs[f][(v,)]} if f in zf else model.funcs[f]) for f in sig.func_names}
        rels = {p: (([()] if (v,) in model.rels[p] else []) if p in zp else model.rels[p])
                for p in sig.rel_names}
        return make_model(sig, model.size, funcs, rels), env

    res = ReductionResult("zero-lift", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "x0", x0)
    return res


# -- merging relations and removing constants -------------------------------

def rel_merge(sig: Signature, phi: Formula) -> ReductionResult:
    """Merge relations of uniform arity ``n`` into one ``Q`` of arity ``1 + n``.

    ``P(v)`` becomes ``Q(c_P, v)`` for a fresh constant ``c_P``.  The forward
    transport clones an element if there are fewer elements than relations,
    so that the constants can be pairwise distinct.
    """
    if sig.funcs:
        raise PreconditionError("rel_merge expects a signature without functions")
    arities = {a for _, a in sig.rels}
    if len(arities) > 1:
        raise PreconditionError("rel_merge expects all relations to have the same arity")
    n = arities.pop() if arities else 0
    consts = {p: f"c_{p}" for p in sig.rel_names}
    out_sig = Signature(tuple((consts[p], 0) for p in sig.rel_names), (("Q", 1 + n),))
    out = map_atoms(phi, lambda a, _d: Atom("Q", (App(consts[a.rel], ()),) + a.args))
    names = sig.rel_names

    def forward(model, env):
        m = len(names)
        if model.size < m:
            model = inflate(model, m, lambda j: 0)
        q = [(i,) + args for i, p in enumerate(names) for args in model.rels[p]]
        funcs = {consts[p]: {(): i} for i, p in enumerate(names)}
        return make_model(out_sig, model.size, funcs, {"Q": q}), env

    def backward(model, env):
        rels = {}
        for p in names:
            c = model.funcs[consts[p]][()]
            rels[p] = [args[1:] for args in model.rels["Q"] if args[0] == c]
        return make_model(sig, model.size, {}, rels), env

    return ReductionResult("rel-merge", sig, phi, out_sig, out, forward, backward)


def const_elim(sig: Signature, phi: Formula) -> ReductionResult:
    """Replace each constant by its own fresh free variable."""
    if any(a != 0 for _, a in sig.funcs):
        raise PreconditionError("const_elim expects only 0-ary function symbols")
    base = fresh_var(phi)
    slot = {c: base + i for i, c in enumerate(sig.func_names)}
    out_sig = Signature((), sig.rels)

    def term(t, d):
        if isinstance(t, App):
            return Var(slot[t.func] + d)
        return t

    out = map_atoms(phi, lambda a, d: Atom(a.rel, tuple(term(t, d) for t in a.args)))

    def forward(model, env):
        env = env.with_values({slot[c]: model.funcs[c][()] for c in sig.func_names})
        return reinterpret(model, out_sig), env

    def backward(model, env):
        funcs = {c: {(): env(slot[c])} for c in sig.func_names}
        return make_model(sig, model.size, funcs, model.rels), env

    res = ReductionResult("const-elim", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "slots", slot)
    return res


# -- embeddings into larger signatures --------------------------------------

def embed(sig: Signature, phi: Formula, target: Signature, *, rel: str | None = None,
          fun: str | None = None, pred: str | None = None) -> ReductionResult:
    """Inject a one-relation or one-function-plus-unary-relation problem into ``target``.

    A relation of arity ``a`` goes to a target relation of arity ``>= a``; a
    function of arity ``n`` (with a unary relation) to a target function of
    arity ``>= n`` and a unary target relation.  Extra argument places are
    filled with a fresh free variable; unused target symbols get default
    tables.
    """
    x0 = fresh_var(phi)
    if not sig.funcs and len(sig.rels) == 1:
        (p, a), = sig.rels
        choices = [rel] if rel else [q for q, b in sorted(target.rels, key=lambda r: r[1]) if b >= a]
        choices = [q for q in choices if target.has_rel(q) and target.rel_arity(q) >= a]
        if not choices:
            raise PreconditionError(f"target has no relation of arity >= {a}")
        q = choices[0]
        n = target.rel_arity(q)
        out = map_atoms(phi, lambda at, d: Atom(q, _pad_args(at.args, n, x0, d)))

        def forward(model, env):
            return make_model(target, model.size, {}, {q: lambda args: args[:a] in model.rels[p]}), env

        def backward(model, env):
            v = env(x0)
            return make_model(sig, model.size, {}, {p: lambda args: args + (v,) * (n - a) in model.rels[q]}), env

        return ReductionResult("embed", sig, phi, target, out, forward, backward)

    if len(sig.funcs) == 1 and len(sig.rels) == 1 and sig.rels[0][1] == 1:
        (f, a), = sig.funcs
        (p, _), = sig.rels
        gs = [fun] if fun else [g for g, b in sorted(target.funcs, key=lambda r: r[1]) if b >= a]
        gs = [g for g in gs if target.has_func(g) and target.func_arity(g) >= a]
        us = [pred] if pred else [u for u, b in target.rels if b == 1]
        us = [u for u in us if target.has_rel(u) and target.rel_arity(u) == 1]
        if not gs or not us:
            raise PreconditionError(f"target needs a function of arity >= {a} and a unary relation")
        g, u = gs[0], us[0]
        n = target.func_arity(g)

        def term(t, d):
            if isinstance(t, App):
                return App(g, _pad_args(tuple(term(s, d) for s in t.args), n, x0, d))
            return t

        out = map_atoms(phi, lambda at, d: Atom(u, tuple(term(t, d) for t in at.args)))

        def forward(model, env):
            return make_model(target, model.size, {g: lambda args: model.funcs[f][args[:a]]},
                              {u: model.rels[p]}), env

        def backward(model, env):
            v = env(x0)
            return make_model(sig, model.size, {f: lambda args: model.funcs[g][args + (v,) * (n - a)]},
                              {p: model.rels[u]}), env

        return ReductionResult("embed", sig, phi, target, out, forward, backward)

    raise PreconditionError("embed expects a single relation, or one function plus one unary relation")
