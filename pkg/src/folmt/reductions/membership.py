"""Compressing an n-ary relation to membership, and membership to one function."""

from __future__ import annotations

from itertools import product

from folmt.errors import PreconditionError
from folmt.hfs import relation_to_membership_model
from folmt.reductions.base import ReductionResult, fresh_var, instantiate, relativize
from folmt.semantics import Assignment, make_model, satisfies
from folmt.syntax import (
    App, Atom, Formula, Name, Signature, Var, conj, conj_all, disj, exists, forall, free_vars, impl,
)

MEM = "mem"


class _Fresh:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> str:
        self.n += 1
        return f"{self.prefix}{self.n}"


def _in(a, b) -> Atom:
    return Atom(MEM, (a, b))


def _all_in(fresh, s, body_fn) -> Formula:
    """``forall w in s. body(w)``."""
    w = fresh()
    return forall(w, impl(_in(Name(w), s), body_fn(Name(w))))


def _ex_in(fresh, s, body_fn) -> Formula:
    """``exists w in s. body(w)``."""
    w = fresh()
    return exists(w, conj(_in(Name(w), s), body_fn(Name(w))))


def eqset(fresh, a, b) -> Formula:
    """Same members."""
    return conj(_all_in(fresh, a, lambda z: _in(z, b)), _all_in(fresh, b, lambda z: _in(z, a)))


def is_sing(fresh, x, a) -> Formula:
    """``x = {a}``."""
    return conj(_in(a, x), _all_in(fresh, x, lambda w: eqset(fresh, w, a)))


def is_doub(fresh, x, a, b) -> Formula:
    """``x = {a, b}``."""
    return conj_all([_in(a, x), _in(b, x),
                     _all_in(fresh, x, lambda w: disj(eqset(fresh, w, a), eqset(fresh, w, b)))])


def is_pair(fresh, t, a, b) -> Formula:
    """``t = {{a}, {a, b}}``, stated through members of ``t`` only."""
    return conj_all([
        _all_in(fresh, t, lambda x: disj(is_sing(fresh, x, a), is_doub(fresh, x, a, b))),
        _ex_in(fresh, t, lambda x: is_sing(fresh, x, a)),
        _ex_in(fresh, t, lambda x: is_doub(fresh, x, a, b)),
    ])


def is_tuple(fresh, t, vs) -> Formula:
    """``t = (v1, (v2, ... vn))`` with a 1-tuple being its component."""
    if len(vs) == 1:
        return eqset(fresh, t, vs[0])
    return _ex_in(fresh, t, lambda x: _ex_in(
        fresh, x, lambda p: conj(is_tuple(fresh, p, vs[1:]), is_pair(fresh, t, vs[0], p))))


def tuple_in(fresh, vs, r) -> Formula:
    """Some member of ``r`` is the tuple of ``vs``."""
    if len(vs) == 1:
        return _in(vs[0], r)
    return _ex_in(fresh, r, lambda t: is_tuple(fresh, t, vs))


def extensionality() -> Formula:
    """Sets with the same members belong to the same sets."""
    fresh = _Fresh("#e")
    x, y, z = Name("#ex"), Name("#ey"), Name("#ez")
    owners = forall("#ez", impl(_in(x, z), _in(y, z)))
    return forall("#ex", forall("#ey", impl(eqset(fresh, x, y), owners)))


def nary_to_membership(sig: Signature, phi: Formula) -> ReductionResult:
    """Encode a single ``n``-ary relation ``P`` through a binary membership relation.

    With fresh free variables ``d`` and ``r``, ``P(v)`` becomes "the tuple of
    ``v`` is a member of ``r``" and all quantifiers are restricted to members
    of ``d``.  Side conditions: extensionality, ``d`` inhabited, and every
    free variable of ``phi`` a member of ``d``.
    """
    if sig.funcs or len(sig.rels) != 1:
        raise PreconditionError("nary_to_membership expects exactly one relation and no functions")
    (p, n), = sig.rels
    if n < 1:
        raise PreconditionError("nary_to_membership expects a relation of arity >= 1")
    base = fresh_var(phi)
    D, R = Name("#d"), Name("#r")
    fresh = _Fresh("#m")
    body = relativize(phi, lambda x: _in(x, D), lambda a: tuple_in(fresh, list(a.args), R))
    side = [extensionality(),
            exists("#w", _in(Name("#w"), D))]
    side += [_in(Var(i), D) for i in free_vars(phi)]
    out = instantiate(conj(conj_all(side), body), {"#d": base, "#r": base + 1})
    out_sig = Signature((), ((MEM, 2),))

    def forward(model, env):
        mm = relation_to_membership_model(model.size, n, model.rels[p])
        ix = [mm.index(s) for s in mm.i]
        env = env.mapped(lambda x: ix[x]).with_values({base: mm.index(mm.d), base + 1: mm.index(mm.r)})
        return mm.to_model(MEM), env

    def backward(model, env):
        d, r = env(base), env(base + 1)
        members = [x for x in range(model.size) if (x, d) in model.rels[MEM]]
        if not members:
            raise PreconditionError("d has no members")
        pos = {x: j for j, x in enumerate(members)}
        enc = instantiate(tuple_in(_Fresh("#m"), [Var(i) for i in range(n)], R), {"#r": n})
        rows = [v for v in product(range(len(members)), repeat=n)
                if satisfies(model, Assignment(tuple(members[j] for j in v) + (r,)), enc, check=False)]
        src = make_model(sig, len(members), {}, {p: rows})
        return src, env.mapped(lambda x: pos.get(x, 0))

    res = ReductionResult("to-membership", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "slots", (base, base + 1))
    return res


def membership_to_fun(sig: Signature, phi: Formula, n: int = 2) -> ReductionResult:
    """Encode one binary relation with an ``n``-ary function ``f`` and a unary ``Q``.

    ``P(x, y)`` becomes ``Q(f(x, y, x, ..., x))``; the domain is carved out
    by ``Q(f(d, x, d, ..., d))`` for a fresh free variable ``d``, which must
    be inhabited and contain every free variable of ``phi``.
    """
    if n < 2:
        raise PreconditionError("membership_to_fun needs n >= 2")
    if sig.funcs or len(sig.rels) != 1 or sig.rels[0][1] != 2:
        raise PreconditionError("membership_to_fun expects exactly one binary relation and no functions")
    (p, _), = sig.rels
    base = fresh_var(phi)
    dn = Name("#d")

    def dom(x):
        return Atom("Q", (App("f", (dn, x) + (dn,) * (n - 2)),))

    def atom_fn(a):
        x, y = a.args
        return Atom("Q", (App("f", (x, y) + (x,) * (n - 2)),))

    side = [exists("#w", dom(Name("#w")))] + [dom(Var(i)) for i in free_vars(phi)]
    out = instantiate(conj(conj_all(side), relativize(phi, dom, atom_fn)), {"#d": base})
    out_sig = Signature((("f", n),), (("Q", 1),))

    def forward(model, env):
        k = model.size
        P = model.rels[p]

        def f(args):
            x, y = args[0], args[1]
            if y < k and (x == k or (x < k and (x, y) in P)):
                return 0
            return k

        tgt = make_model(out_sig, k + 1, {"f": f}, {"Q": [(x,) for x in range(k)]})
        return tgt, env.with_values({base: k})

    def backward(model, env):
        d = env(base)
        F, Q = model.funcs["f"], model.rels["Q"]
        members = [x for x in range(model.size) if (F[(d, x) + (d,) * (n - 2)],) in Q]
        if not members:
            raise PreconditionError("the domain predicate is empty")
        pos = {x: j for j, x in enumerate(members)}
        rows = [(a, b) for a, b in product(range(len(members)), repeat=2)
                if (F[(members[a], members[b]) + (members[a],) * (n - 2)],) in Q]
        return make_model(sig, len(members), {}, {p: rows}), env.mapped(lambda x: pos.get(x, 0))

    res = ReductionResult(f"to-fun:{n}", sig, phi, out_sig, out, forward, backward)
    object.__setattr__(res, "slots", (base,))
    return res
