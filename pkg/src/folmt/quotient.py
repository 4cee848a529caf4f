"""Pigeonhole witnesses, first-order indistinguishability, and quotient models."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

from folmt.errors import TotalityError
from folmt.semantics import Assignment, FiniteModel, make_model
from folmt.syntax import App, Atom, Formula, Var, syms


def php_witness(rel: Callable, l: Sequence, m: Sequence) -> tuple[int, int, object]:
    """Two positions ``i < j`` of ``l`` related to the same ``y`` in ``m``.

    Requires ``len(m) < len(l)`` and every element of ``l`` related to some
    element of ``m``.
    """
    if not len(m) < len(l):
        raise TotalityError(f"need |m| < |l|, got {len(m)} and {len(l)}")
    first: dict = {}
    for j, x in enumerate(l):
        k = next((k for k, y in enumerate(m) if rel(x, y)), None)
        if k is None:
            raise TotalityError(f"element at position {j} of l is related to nothing in m")
        if k in first:
            return first[k], j, m[k]
        first[k] = j
    raise AssertionError("unreachable: pigeonhole")


@dataclass(frozen=True)
class EquivClasses:
    count: int
    c: tuple        # element -> class index
    r: tuple        # class index -> representative (least member)
    iterations: int = 0
    layers: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_labels(cls, labels: Sequence, **kw) -> "EquivClasses":
        """Number classes by first occurrence; representatives are least members."""
        ids: dict = {}
        c = []
        r = []
        for x, lab in enumerate(labels):
            if lab not in ids:
                ids[lab] = len(r)
                r.append(x)
            c.append(ids[lab])
        return cls(len(r), tuple(c), tuple(r), **kw)

    @classmethod
    def from_relation(cls, k: int, rel) -> "EquivClasses":
        """Classes of an equivalence given as a set of pairs over ``{0..k-1}``."""
        labels = [min(y for y in range(k) if (x, y) in rel) if (x, x) in rel else x for x in range(k)]
        return cls.from_labels(labels)

    def same(self, x: int, y: int) -> bool:
        return self.c[x] == self.c[y]


def _refine(model: FiniteModel, fs, ps, R: list[list[bool]]) -> list[list[bool]]:
    k = model.size
    new = [[False] * k for _ in range(k)]
    for x in range(k):
        new[x][x] = True
        for y in range(x + 1, k):
            if not R[x][y]:
                continue
            ok = True
            for p in ps:
                a = model.sig.rel_arity(p)
                table = model.rels[p]
                for i in range(a):
                    for ctx in product(range(k), repeat=a - 1):
                        vx = ctx[:i] + (x,) + ctx[i:]
                        vy = ctx[:i] + (y,) + ctx[i:]
                        if (vx in table) != (vy in table):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                for f in fs:
                    a = model.sig.func_arity(f)
                    table = model.funcs[f]
                    for i in range(a):
                        for ctx in product(range(k), repeat=a - 1):
                            u = table[ctx[:i] + (x,) + ctx[i:]]
                            v = table[ctx[:i] + (y,) + ctx[i:]]
                            if not R[u][v]:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
            new[x][y] = new[y][x] = ok
    return new


def indist_fixpoint(model: FiniteModel, fs: Sequence[str], ps: Sequence[str]) -> EquivClasses:
    """Greatest relation that the listed symbols cannot tell apart.

    Kleene iteration from the full relation.  Every strict step removes at
    least one pair, so at most ``k*k + 1`` refinements are computed; the
    layers are kept for reconstructing separating contexts.
    """
    k = model.size
    R = [[True] * k for _ in range(k)]
    layers = [R]
    bound = k * k + 1
    for it in range(1, bound + 1):
        nxt = _refine(model, fs, ps, R)
        if nxt == R:
            break
        R = nxt
        layers.append(R)
    else:
        raise AssertionError("indistinguishability fixpoint failed to stabilise")
    labels = [min(y for y in range(k) if R[x][y]) for x in range(k)]
    return EquivClasses.from_labels(labels, iterations=it, layers=tuple(tuple(map(tuple, L)) for L in layers))


def quotient_by(model: FiniteModel, classes: EquivClasses) -> FiniteModel:
    """Tables induced on classes through representatives."""
    c, r = classes.c, classes.r
    funcs = {f: (lambda args, t=model.funcs[f]: c[t[tuple(r[a] for a in args)]]) for f in model.sig.func_names}
    rels = {p: (lambda args, t=model.rels[p]: tuple(r[a] for a in args) in t) for p in model.sig.rel_names}
    return make_model(model.sig, classes.count, funcs, rels)


def quotient_model(model: FiniteModel, phi: Formula) -> tuple[FiniteModel, EquivClasses]:
    """Collapse elements indistinguishable by the symbols of ``phi``.

    Satisfaction of ``phi`` is preserved when assignments are pushed
    through ``classes.c``.
    """
    fs, ps = syms(phi)
    classes = indist_fixpoint(model, fs, ps)
    return quotient_by(model, classes), classes


def quotient_env(classes: EquivClasses, rho: Assignment) -> Assignment:
    return rho.mapped(lambda x: classes.c[x])


def separating_context(model: FiniteModel, classes: EquivClasses, fs: Sequence[str], ps: Sequence[str],
                       x: int, y: int) -> tuple[Formula, Assignment]:
    """An atom with a hole at variable 0 that tells ``x`` and ``y`` apart.

    Returns ``(phi, env)`` with ``model |= phi`` under ``env.push(x)``
    differing from ``env.push(y)``.  Built by walking the fixpoint layers back from the
    first one that separates the pair.
    """
    layers = classes.layers
    k = model.size
    ctx_vals: list[int] = []

    def fresh(v: int) -> Var:
        ctx_vals.append(v)
        return Var(len(ctx_vals))

    hole_chain: list = []         # (f, i, ctx) from the hole outwards
    a, b = x, y
    level = next(n for n, L in enumerate(layers) if not L[a][b])
    while True:
        found = None
        for p in ps:
            ar = model.sig.rel_arity(p)
            for i in range(ar):
                for ctx in product(range(k), repeat=ar - 1):
                    if (ctx[:i] + (a,) + ctx[i:] in model.rels[p]) != (ctx[:i] + (b,) + ctx[i:] in model.rels[p]):
                        found = ("rel", p, i, ctx)
                        break
                if found:
                    break
            if found:
                break
        if found:
            break
        prev = layers[level - 1]
        for f in fs:
            ar = model.sig.func_arity(f)
            for i in range(ar):
                for ctx in product(range(k), repeat=ar - 1):
                    u = model.funcs[f][ctx[:i] + (a,) + ctx[i:]]
                    v = model.funcs[f][ctx[:i] + (b,) + ctx[i:]]
                    if not prev[u][v]:
                        found = ("fun", f, i, ctx, u, v)
                        break
                if found:
                    break
            if found:
                break
        assert found is not None, "layer separates the pair but no symbol does"
        _, f, i, ctx, u, v = found
        hole_chain.append((f, i, ctx))
        a, b = u, v
        level -= 1
    term = Var(0)
    for f, i, ctx in hole_chain:
        args = [fresh(c) for c in ctx]
        term = App(f, tuple(args[:i] + [term] + args[i:]))
    _, p, i, ctx = found
    args = [fresh(c) for c in ctx]
    phi = Atom(p, tuple(args[:i] + [term] + args[i:]))
    return phi, Assignment(tuple(ctx_vals))
