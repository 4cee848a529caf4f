"""Finite models given in extension, variable assignments, and Tarski satisfaction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from folmt import sexp
from folmt.errors import FolError, ModelError, ParseError
from folmt.syntax import (
    ALL, AND, IMPL, OR, App, Atom, Bin, Bot, Formula, Quant, Signature, Term, Var,
    check_formula, free_vars, lift_term,
)


@dataclass(frozen=True)
class FiniteModel:
    """Interpretation of a signature over the domain ``{0, ..., size-1}``.

    ``funcs[f]`` maps every argument tuple to a domain element; ``rels[P]`` is
    the set of argument tuples where ``P`` holds.  Both are total over the grid.
    """

    sig: Signature
    size: int
    funcs: Mapping[str, Mapping[tuple, int]]
    rels: Mapping[str, frozenset]
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        k = self.size
        if k < 1:
            raise ModelError("domain must be inhabited (size >= 1)")
        if set(self.funcs) != set(self.sig.func_names):
            raise ModelError("function tables do not match the signature")
        if set(self.rels) != set(self.sig.rel_names):
            raise ModelError("relation tables do not match the signature")
        for f, a in self.sig.funcs:
            table = self.funcs[f]
            if len(table) != k ** a:
                raise ModelError(f"table of {f} is not total over the {k}^{a} grid")
            for args, v in table.items():
                if len(args) != a or not all(0 <= x < k for x in args) or not 0 <= v < k:
                    raise ModelError(f"table of {f} has an out-of-range entry {args} -> {v}")
        for p, a in self.sig.rels:
            for args in self.rels[p]:
                if len(args) != a or not all(0 <= x < k for x in args):
                    raise ModelError(f"table of {p} has an out-of-range tuple {args}")

    def fun(self, f: str, args: tuple) -> int:
        return self.funcs[f][args]

    def holds(self, p: str, args: tuple) -> bool:
        return args in self.rels[p]

    def index(self, p: str, pos: int) -> dict:
        """Map each tuple of the other arguments of ``p`` to the values at ``pos`` making ``p`` true."""
        key = (p, pos)
        idx = self._index.get(key)
        if idx is None:
            idx = {}
            for args in self.rels[p]:
                rest = args[:pos] + args[pos + 1:]
                idx.setdefault(rest, []).append(args[pos])
            for v in idx.values():
                v.sort()
            self._index[key] = idx
        return idx


def grid(k: int, arity: int):
    return itertools.product(range(k), repeat=arity)


def make_model(sig: Signature, size: int, funcs: Mapping | None = None,
               rels: Mapping | None = None) -> FiniteModel:
    """Build a model, filling unspecified symbols with the all-zero / all-false table.

    A function table may be a dict over argument tuples or a callable taking
    the argument tuple; a relation table may be any iterable of true tuples or
    a predicate on tuples.
    """
    funcs = dict(funcs or {})
    rels = dict(rels or {})
    unknown = (set(funcs) - set(sig.func_names)) | (set(rels) - set(sig.rel_names))
    if unknown:
        raise ModelError(f"tables given for symbols outside the signature: {sorted(unknown)}")
    ftabs = {}
    for f, a in sig.funcs:
        t = funcs.get(f)
        if t is None:
            ftabs[f] = {args: 0 for args in grid(size, a)}
        elif callable(t):
            ftabs[f] = {args: t(args) for args in grid(size, a)}
        else:
            ftabs[f] = {tuple(k): v for k, v in t.items()}
    rtabs = {}
    for p, a in sig.rels:
        t = rels.get(p)
        if t is None:
            rtabs[p] = frozenset()
        elif callable(t):
            rtabs[p] = frozenset(args for args in grid(size, a) if t(args))
        else:
            rtabs[p] = frozenset(tuple(x) for x in t)
    return FiniteModel(sig, size, ftabs, rtabs)


def default_model(sig: Signature, size: int) -> FiniteModel:
    return make_model(sig, size)


def reinterpret(model: FiniteModel, sig: Signature, funcs: Mapping | None = None,
                rels: Mapping | None = None) -> FiniteModel:
    """Same domain, new signature: keep shared tables, override or default the rest."""
    funcs = dict(funcs or {})
    rels = dict(rels or {})
    for f in sig.func_names:
        if f not in funcs and model.sig.has_func(f) and model.sig.func_arity(f) == sig.func_arity(f):
            funcs[f] = model.funcs[f]
    for p in sig.rel_names:
        if p not in rels and model.sig.has_rel(p) and model.sig.rel_arity(p) == sig.rel_arity(p):
            rels[p] = model.rels[p]
    return make_model(sig, model.size, funcs, rels)


def inflate(model: FiniteModel, new_size: int, origin: Callable[[int], int]) -> FiniteModel:
    """Add clones: element ``j >= size`` behaves exactly like ``origin(j)``.

    Old elements keep their identity, so function values stay in range.  Clones
    are first-order indistinguishable from their origin in the absence of
    interpreted equality.
    """
    k = model.size
    h = lambda j: j if j < k else origin(j)
    funcs = {f: (lambda args, f=f: model.funcs[f][tuple(h(x) for x in args)]) for f in model.sig.func_names}
    rels = {p: (lambda args, p=p: tuple(h(x) for x in args) in model.rels[p]) for p in model.sig.rel_names}
    return make_model(model.sig, new_size, funcs, rels)


def models_ext_equal(m1: FiniteModel, m2: FiniteModel, fs: Iterable[str], ps: Iterable[str]) -> bool:
    """True iff the two models agree pointwise on every listed symbol."""
    if m1.size != m2.size:
        raise ModelError(f"domain sizes differ: {m1.size} vs {m2.size}")
    return (all(m1.funcs[f] == m2.funcs[f] for f in fs)
            and all(m1.rels[p] == m2.rels[p] for p in ps))


# -- assignments ------------------------------------------------------------

@dataclass(frozen=True)
class Assignment:
    """Variable assignment: explicit values for the first indices, then a default."""

    prefix: tuple = ()
    default: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))

    def __call__(self, i: int) -> int:
        return self.prefix[i] if i < len(self.prefix) else self.default

    def push(self, a: int) -> "Assignment":
        """De Bruijn extension ``a . rho``."""
        return Assignment((a,) + self.prefix, self.default)

    def extended(self, length: int) -> "Assignment":
        """Same function, with the prefix padded to at least ``length`` entries."""
        if len(self.prefix) >= length:
            return self
        return Assignment(self.prefix + (self.default,) * (length - len(self.prefix)), self.default)

    def with_values(self, values: Mapping[int, int]) -> "Assignment":
        n = max([len(self.prefix)] + [i + 1 for i in values])
        pre = list(self.extended(n).prefix)
        for i, v in values.items():
            pre[i] = v
        return Assignment(tuple(pre), self.default)

    def mapped(self, fn: Callable[[int], int]) -> "Assignment":
        return Assignment(tuple(fn(x) for x in self.prefix), fn(self.default))

    def check(self, k: int) -> None:
        if not all(0 <= x < k for x in self.prefix) or not 0 <= self.default < k:
            raise ModelError(f"assignment has values outside the domain of size {k}")


DEFAULT_ENV = Assignment()


# -- evaluation -------------------------------------------------------------

def eval_term(model: FiniteModel, rho: Assignment, t: Term) -> int:
    if isinstance(t, Var):
        return rho(t.index)
    if isinstance(t, App):
        return model.funcs[t.func][tuple(eval_term(model, rho, a) for a in t.args)]
    raise FolError(f"cannot evaluate {t!r}")


MEMO_CAP = 100_000


class _Compiler:
    """Compile a formula into closures over a binder stack.

    The stack starts with the values of the free variables ``0..nfree-1``
    and gains one slot per binder, so every variable resolves to a fixed
    stack slot and one compiled formula serves any assignment.  Quantifiers whose body starts with an atom
    guarding the bound variable only visit elements satisfying the atom.
    Quantifier results are memoised on the values of their outer bound
    variables, up to ``MEMO_CAP`` entries per node.
    """

    def __init__(self, model: FiniteModel, nfree: int, memo: bool):
        self.m = model
        self.nfree = nfree
        self.memo = memo
        self.dom = range(model.size)

    def slot(self, i: int, d: int) -> int:
        return i - d if i >= d else self.nfree + d - 1 - i

    def term(self, t: Term, d: int):
        if isinstance(t, Var):
            slot = self.slot(t.index, d)
            return lambda s: s[slot]
        if not isinstance(t, App):
            raise FolError(f"cannot evaluate {t!r}")
        table = self.m.funcs[t.func]
        subs = [self.term(a, d) for a in t.args]
        if not subs:
            v = table[()]
            return lambda s: v
        if len(subs) == 1:
            a0 = subs[0]
            return lambda s: table[(a0(s),)]
        if len(subs) == 2:
            a0, a1 = subs
            return lambda s: table[(a0(s), a1(s))]
        return lambda s: table[tuple(a(s) for a in subs)]

    def formula(self, p: Formula, d: int):
        if isinstance(p, Bot):
            return lambda s: False
        if isinstance(p, Atom):
            table = self.m.rels[p.rel]
            subs = [self.term(a, d) for a in p.args]
            if not subs:
                v = () in table
                return lambda s: v
            if len(subs) == 1:
                a0 = subs[0]
                return lambda s: (a0(s),) in table
            if len(subs) == 2:
                a0, a1 = subs
                return lambda s: (a0(s), a1(s)) in table
            return lambda s: tuple(a(s) for a in subs) in table
        if isinstance(p, Bin):
            l, r = self.formula(p.left, d), self.formula(p.right, d)
            if p.op == IMPL:
                if isinstance(p.right, Bot):
                    return lambda s: not l(s)
                return lambda s: (not l(s)) or r(s)
            if p.op == AND:
                return lambda s: l(s) and r(s)
            if p.op == OR:
                return lambda s: l(s) or r(s)
            raise FolError(f"unknown connective {p.op!r}")
        if isinstance(p, Quant):
            return self.quant(p, d)
        raise FolError(f"not a formula: {p!r}")

    def _guard(self, p: Quant):
        body = p.body
        want = IMPL if p.kind == ALL else AND
        if not (isinstance(body, Bin) and body.op == want and isinstance(body.left, Atom)):
            return None
        g = body.left
        pos = [i for i, a in enumerate(g.args) if a == Var(0)]
        if len(pos) != 1:
            return None
        others = [a for i, a in enumerate(g.args) if i != pos[0]]
        if any(0 in free_vars(a) for a in others):
            return None
        return g.rel, pos[0], [lift_term(a, -1, 1) for a in others], body.right

    def quant(self, p: Quant, d: int):
        guard = self._guard(p)
        is_all = p.kind == ALL
        dom = self.dom
        if guard is not None:
            rel, pos, others, rest = guard
            idx = self.m.index(rel, pos)
            osubs = [self.term(a, d) for a in others]
            body = self.formula(rest, d + 1)
            empty: list = []

            def cands(s):
                return idx.get(tuple(o(s) for o in osubs), empty)
        else:
            body = self.formula(p.body, d + 1)

            def cands(s):
                return dom

        def run(s):
            s.append(0)
            try:
                for a in cands(s):
                    s[-1] = a
                    if body(s) != is_all:
                        return not is_all
                return is_all
            finally:
                s.pop()

        if not self.memo:
            return run
        slots = [self.slot(i, d) for i in free_vars(p)]
        cache: dict = {}
        if not slots:
            def memo0(s):
                r = cache.get(())
                if r is None:
                    r = cache[()] = run(s)
                return r
            return memo0

        def memo(s):
            key = tuple([s[j] for j in slots])
            r = cache.get(key)
            if r is None:
                r = run(s)
                if len(cache) < MEMO_CAP:
                    cache[key] = r
            return r
        return memo


def compile_open(model: FiniteModel, phi: Formula, memo: bool = True):
    """Compile once; the result maps a tuple of values for the free variables
    ``0..n-1`` (``n`` one above the largest free index) to a truth value."""
    fv = free_vars(phi)
    n = fv[-1] + 1 if fv else 0
    f = _Compiler(model, n, memo).formula(phi, 0)

    def run(values) -> bool:
        s = list(values)
        if len(s) != n:
            raise FolError(f"expected {n} free-variable values, got {len(s)}")
        return f(s)

    run.nfree = n
    return run


def compile_formula(model: FiniteModel, rho: Assignment, phi: Formula, memo: bool = True):
    """Return a zero-argument callable deciding ``model |=_rho phi``."""
    f = compile_open(model, phi, memo)
    vals = [rho(i) for i in range(f.nfree)]
    return lambda: f(vals)


def satisfies(model: FiniteModel, rho: Assignment, phi: Formula, *, check: bool = True,
              memo: bool = True) -> bool:
    """Decide ``model |=_rho phi`` by finite quantification."""
    if check:
        check_formula(phi, model.sig)
        rho.check(model.size)
    return compile_formula(model, rho, phi, memo)()


# -- file formats -----------------------------------------------------------

def print_model(model: FiniteModel) -> str:
    lines = [f"(model (size {model.size})"]
    for f, a in model.sig.funcs:
        for args in grid(model.size, a):
            lines.append(f"  (fun {f} ({' '.join(map(str, args))}) {model.funcs[f][args]})")
    for p, a in model.sig.rels:
        tuples = " ".join("(" + " ".join(map(str, t)) + ")" for t in sorted(model.rels[p]))
        lines.append(f"  (rel {p}{' ' + tuples if tuples else ''})")
    return "\n".join(lines) + ")\n"


def parse_model(text: str, sig: Signature) -> FiniteModel:
    node = sexp.read_one(text)
    if not isinstance(node, sexp.SList) or node.head() != "model":
        raise ParseError("expected '(model (size k) ...)'", node.pos)
    items = node.items[1:]
    if not items or not isinstance(items[0], sexp.SList) or items[0].head() != "size" or len(items[0].items) != 2:
        raise ParseError("model must start with '(size k)'", node.pos)
    k = sexp.expect_nat(items[0].items[1], "domain size")
    funcs: dict = {}
    rels: dict = {}
    for entry in items[1:]:
        if not isinstance(entry, sexp.SList) or entry.head() not in ("fun", "rel") or len(entry.items) < 2:
            raise ParseError("expected '(fun f (args) v)' or '(rel P (args) ...)'", entry.pos)
        name = sexp.expect_name(entry.items[1])
        if entry.head() == "fun":
            a = sig.func_arity(name)
            if len(entry.items) != 4 or not isinstance(entry.items[2], sexp.SList):
                raise ParseError("expected '(fun f (a1 ... an) v)'", entry.pos)
            args = tuple(sexp.expect_nat(x) for x in entry.items[2].items)
            if len(args) != a:
                raise ParseError(f"function {name} has arity {a}", entry.pos)
            table = funcs.setdefault(name, {})
            if args in table:
                raise ParseError(f"duplicate entry for {name}{args}", entry.pos)
            table[args] = sexp.expect_nat(entry.items[3])
        else:
            a = sig.rel_arity(name)
            table = rels.setdefault(name, set())
            for tup in entry.items[2:]:
                if not isinstance(tup, sexp.SList):
                    raise ParseError("expected a tuple '(a1 ... an)'", tup.pos)
                args = tuple(sexp.expect_nat(x) for x in tup.items)
                if len(args) != a:
                    raise ParseError(f"relation {name} has arity {a}", tup.pos)
                table.add(args)
    for f in sig.func_names:
        if f not in funcs:
            raise ModelError(f"no table given for function {f}")
    return make_model(sig, k, funcs, rels)


def print_env(rho: Assignment) -> str:
    vals = " ".join(map(str, rho.prefix))
    return f"(env{' ' + vals if vals else ''} (default {rho.default}))"


def parse_env(text: str) -> Assignment:
    node = sexp.read_one(text)
    if not isinstance(node, sexp.SList) or node.head() != "env":
        raise ParseError("expected '(env e0 e1 ... (default d))'", node.pos)
    vals: list = []
    default = 0
    for item in node.items[1:]:
        if isinstance(item, sexp.SList):
            if item.head() != "default" or len(item.items) != 2:
                raise ParseError("expected '(default d)'", item.pos)
            default = sexp.expect_nat(item.items[1])
        else:
            vals.append(sexp.expect_nat(item))
    return Assignment(tuple(vals), default)
