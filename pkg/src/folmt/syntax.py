"""First-order terms and formulas over finite signatures, with de Bruijn binding.

Variables are de Bruijn indices: ``Var(0)`` refers to the innermost enclosing
quantifier, and indices that reach past every binder are free.  Symbols are
referred to by name; arities live only in the :class:`Signature`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from folmt import sexp
from folmt.errors import ArityError, FolError, ParseError, UnknownSymbolError

IMPL, AND, OR = "impl", "and", "or"
ALL, EX = "all", "ex"
CONNECTIVES = (IMPL, AND, OR)
QUANTIFIERS = (ALL, EX)


@dataclass(frozen=True)
class Signature:
    funcs: tuple[tuple[str, int], ...] = ()
    rels: tuple[tuple[str, int], ...] = ()
    _fa: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _ra: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        funcs = tuple((str(n), int(a)) for n, a in self.funcs)
        rels = tuple((str(n), int(a)) for n, a in self.rels)
        object.__setattr__(self, "funcs", funcs)
        object.__setattr__(self, "rels", rels)
        for sort, table in (("function", funcs), ("relation", rels)):
            names = [n for n, _ in table]
            if len(set(names)) != len(names):
                raise FolError(f"duplicate {sort} symbol in signature")
            if any(a < 0 for _, a in table):
                raise FolError(f"negative arity for a {sort} symbol")
        object.__setattr__(self, "_fa", dict(funcs))
        object.__setattr__(self, "_ra", dict(rels))

    def func_arity(self, name: str) -> int:
        try:
            return self._fa[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown function symbol {name!r}") from None

    def rel_arity(self, name: str) -> int:
        try:
            return self._ra[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown relation symbol {name!r}") from None

    def has_func(self, name: str) -> bool:
        return name in self._fa

    def has_rel(self, name: str) -> bool:
        return name in self._ra

    @property
    def func_names(self) -> list[str]:
        return [n for n, _ in self.funcs]

    @property
    def rel_names(self) -> list[str]:
        return [n for n, _ in self.rels]

    def max_arity(self) -> int:
        return max([a for _, a in self.funcs + self.rels], default=0)

    def restrict(self, funcs: Iterable[str], rels: Iterable[str]) -> "Signature":
        funcs, rels = list(funcs), list(rels)
        return Signature(tuple((f, self.func_arity(f)) for f in funcs),
                         tuple((p, self.rel_arity(p)) for p in rels))

    def fresh_rel_name(self, base: str) -> str:
        return _fresh(base, self._ra)

    def fresh_func_name(self, base: str) -> str:
        return _fresh(base, self._fa)


def _fresh(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class App:
    func: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Name:
    """Named placeholder used only while building formulas; see :func:`forall`."""
    name: str


Term = Union[Var, App, Name]


# -- formulas ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Atom:
    rel: str
    args: tuple = ()


@dataclass(frozen=True, slots=True)
class Bin:
    op: str
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Quant:
    kind: str
    body: "Formula"


Formula = Union[Bot, Atom, Bin, Quant]
BOT = Bot()


def atom(rel: str, *args: Term) -> Atom:
    return Atom(rel, tuple(args))


def app(func: str, *args: Term) -> App:
    return App(func, tuple(args))


def impl(a: Formula, b: Formula) -> Formula:
    return Bin(IMPL, a, b)


def conj(a: Formula, b: Formula) -> Formula:
    return Bin(AND, a, b)


def disj(a: Formula, b: Formula) -> Formula:
    return Bin(OR, a, b)


def neg(a: Formula) -> Formula:
    return Bin(IMPL, a, BOT)


def top() -> Formula:
    return Bin(IMPL, BOT, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(impl(a, b), impl(b, a))


def conj_all(fs: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is truth."""
    fs = list(fs)
    if not fs:
        return top()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Bin(AND, f, out)
    return out


def disj_all(fs: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; the empty disjunction is falsity."""
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Bin(OR, f, out)
    return out


def alls(n: int, body: Formula) -> Formula:
    for _ in range(n):
        body = Quant(ALL, body)
    return body


def exs(n: int, body: Formula) -> Formula:
    for _ in range(n):
        body = Quant(EX, body)
    return body


# -- named construction -----------------------------------------------------

def _abstract_term(t: Term, name: str, depth: int) -> Term:
    if isinstance(t, Name):
        return Var(depth) if t.name == name else t
    if isinstance(t, Var):
        return Var(t.index + 1) if t.index >= depth else t
    return App(t.func, tuple(_abstract_term(a, name, depth) for a in t.args))


def abstract(phi: Formula, name: str, depth: int = 0) -> Formula:
    """Turn ``Name(name)`` into the variable bound by a new outermost binder.

    Free de Bruijn variables are shifted up by one so they keep pointing past
    the binder that the caller is about to wrap around the result.
    """
    if isinstance(phi, Bot):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(_abstract_term(a, name, depth) for a in phi.args))
    if isinstance(phi, Bin):
        return Bin(phi.op, abstract(phi.left, name, depth), abstract(phi.right, name, depth))
    return Quant(phi.kind, abstract(phi.body, name, depth + 1))


def forall(name: str, body: Formula) -> Formula:
    return Quant(ALL, abstract(body, name))


def exists(name: str, body: Formula) -> Formula:
    return Quant(EX, abstract(body, name))


# -- structural queries -----------------------------------------------------

def _term_vars(t: Term, depth: int, out: set):
    if isinstance(t, Var):
        if t.index >= depth:
            out.add(t.index - depth)
    elif isinstance(t, App):
        for a in t.args:
            _term_vars(a, depth, out)


def _formula_vars(phi: Formula, depth: int, out: set):
    if isinstance(phi, Atom):
        for a in phi.args:
            _term_vars(a, depth, out)
    elif isinstance(phi, Bin):
        _formula_vars(phi.left, depth, out)
        _formula_vars(phi.right, depth, out)
    elif isinstance(phi, Quant):
        _formula_vars(phi.body, depth + 1, out)


def free_vars(x: Term | Formula) -> list[int]:
    """Sorted, duplicate-free list of free de Bruijn indices."""
    out: set = set()
    if isinstance(x, (Var, App, Name)):
        _term_vars(x, 0, out)
    else:
        _formula_vars(x, 0, out)
    return sorted(out)


def syms(x: Term | Formula) -> tuple[list[str], list[str]]:
    """Function and relation symbols occurring in ``x``, in first-occurrence order."""
    fs: dict = {}
    ps: dict = {}

    def term(t):
        if isinstance(t, App):
            fs.setdefault(t.func, None)
            for a in t.args:
                term(a)

    def form(p):
        if isinstance(p, Atom):
            ps.setdefault(p.rel, None)
            for a in p.args:
                term(a)
        elif isinstance(p, Bin):
            form(p.left)
            form(p.right)
        elif isinstance(p, Quant):
            form(p.body)

    if isinstance(x, (Var, App, Name)):
        term(x)
    else:
        form(x)
    return list(fs), list(ps)


def lift_term(t: Term, amount: int, cutoff: int = 0) -> Term:
    if isinstance(t, Var):
        return Var(t.index + amount) if t.index >= cutoff else t
    if isinstance(t, App):
        return App(t.func, tuple(lift_term(a, amount, cutoff) for a in t.args))
    return t


def lift(x: Term | Formula, amount: int, cutoff: int = 0):
    """Shift every free index ``>= cutoff`` by ``amount``."""
    if amount == 0:
        return x
    if isinstance(x, (Var, App, Name)):
        return lift_term(x, amount, cutoff)
    if isinstance(x, Bot):
        return x
    if isinstance(x, Atom):
        return Atom(x.rel, tuple(lift_term(a, amount, cutoff) for a in x.args))
    if isinstance(x, Bin):
        return Bin(x.op, lift(x.left, amount, cutoff), lift(x.right, amount, cutoff))
    return Quant(x.kind, lift(x.body, amount, cutoff + 1))


def map_terms(phi: Formula, fn: Callable[[Term, int], Term], depth: int = 0) -> Formula:
    """Rebuild ``phi`` applying ``fn(term, binder_depth)`` to each atom argument."""
    if isinstance(phi, Bot):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(fn(a, depth) for a in phi.args))
    if isinstance(phi, Bin):
        return Bin(phi.op, map_terms(phi.left, fn, depth), map_terms(phi.right, fn, depth))
    return Quant(phi.kind, map_terms(phi.body, fn, depth + 1))


def map_atoms(phi: Formula, fn: Callable[[Atom, int], Formula], depth: int = 0) -> Formula:
    """Rebuild ``phi`` replacing each atom by ``fn(atom, binder_depth)``."""
    if isinstance(phi, Bot):
        return phi
    if isinstance(phi, Atom):
        return fn(phi, depth)
    if isinstance(phi, Bin):
        return Bin(phi.op, map_atoms(phi.left, fn, depth), map_atoms(phi.right, fn, depth))
    return Quant(phi.kind, map_atoms(phi.body, fn, depth + 1))


def map_symbols(phi: Formula, func_map: dict | None = None, rel_map: dict | None = None,
                target: Signature | None = None) -> Formula:
    """Rename symbols; unmapped names are kept.

    When ``target`` is given the image is arity-checked against it.
    """
    func_map = func_map or {}
    rel_map = rel_map or {}

    def term(t):
        if isinstance(t, App):
            f = func_map.get(t.func, t.func)
            if target is not None and target.func_arity(f) != len(t.args):
                raise ArityError(f"{t.func} -> {f}: arity {len(t.args)} vs {target.func_arity(f)}")
            return App(f, tuple(term(a) for a in t.args))
        return t

    def atom_fn(a, _depth):
        p = rel_map.get(a.rel, a.rel)
        if target is not None and target.rel_arity(p) != len(a.args):
            raise ArityError(f"{a.rel} -> {p}: arity {len(a.args)} vs {target.rel_arity(p)}")
        return Atom(p, tuple(term(t) for t in a.args))

    return map_atoms(phi, atom_fn)


def size(phi: Formula) -> int:
    if isinstance(phi, Bin):
        return 1 + size(phi.left) + size(phi.right)
    if isinstance(phi, Quant):
        return 1 + size(phi.body)
    return 1


def check_term(t: Term, sig: Signature) -> None:
    if isinstance(t, Name):
        raise FolError(f"unbound builder name {t.name!r}")
    if isinstance(t, Var):
        if t.index < 0:
            raise FolError("negative de Bruijn index")
        return
    if sig.func_arity(t.func) != len(t.args):
        raise ArityError(f"function {t.func} expects {sig.func_arity(t.func)} arguments, got {len(t.args)}")
    for a in t.args:
        check_term(a, sig)


def check_formula(phi: Formula, sig: Signature) -> None:
    """Raise if ``phi`` is not well formed over ``sig``."""
    if isinstance(phi, Atom):
        if sig.rel_arity(phi.rel) != len(phi.args):
            raise ArityError(f"relation {phi.rel} expects {sig.rel_arity(phi.rel)} arguments, got {len(phi.args)}")
        for a in phi.args:
            check_term(a, sig)
    elif isinstance(phi, Bin):
        if phi.op not in CONNECTIVES:
            raise FolError(f"unknown connective {phi.op!r}")
        check_formula(phi.left, sig)
        check_formula(phi.right, sig)
    elif isinstance(phi, Quant):
        if phi.kind not in QUANTIFIERS:
            raise FolError(f"unknown quantifier {phi.kind!r}")
        check_formula(phi.body, sig)
    elif not isinstance(phi, Bot):
        raise FolError(f"not a formula: {phi!r}")


def signature_of(phi: Formula) -> Signature:
    """Smallest signature ``phi`` is well formed over (arities read off the occurrences)."""
    fa: dict = {}
    ra: dict = {}

    def note(table, name, n):
        if table.setdefault(name, n) != n:
            raise ArityError(f"symbol {name} used with arities {table[name]} and {n}")

    def term(t):
        if isinstance(t, App):
            note(fa, t.func, len(t.args))
            for a in t.args:
                term(a)

    def atom_fn(a, _d):
        note(ra, a.rel, len(a.args))
        for t in a.args:
            term(t)
        return a

    map_atoms(phi, atom_fn)
    return Signature(tuple(fa.items()), tuple(ra.items()))


# -- printing ---------------------------------------------------------------

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"(var {t.index})"
    if isinstance(t, Name):
        raise FolError(f"cannot print builder name {t.name!r}")
    return "(app " + " ".join([t.func] + [print_term(a) for a in t.args]) + ")"


def print_formula(phi: Formula) -> str:
    parts: list[str] = []

    def go(p):
        if isinstance(p, Bot):
            parts.append("bot")
        elif isinstance(p, Atom):
            parts.append("(rel " + " ".join([p.rel] + [print_term(a) for a in p.args]) + ")")
        elif isinstance(p, Bin):
            parts.append(f"({p.op} ")
            go(p.left)
            parts.append(" ")
            go(p.right)
            parts.append(")")
        else:
            parts.append(f"({p.kind} ")
            go(p.body)
            parts.append(")")

    go(phi)
    return "".join(parts)


def print_signature(sig: Signature) -> str:
    fs = " ".join(f"({n} {a})" for n, a in sig.funcs)
    ps = " ".join(f"({n} {a})" for n, a in sig.rels)
    return f"(signature (funcs{' ' + fs if fs else ''}) (rels{' ' + ps if ps else ''}))"


def print_problem(sig: Signature, phi: Formula) -> str:
    return print_signature(sig) + "\n" + print_formula(phi) + "\n"


# -- parsing ----------------------------------------------------------------

def _term_from(node, sig: Signature) -> Term:
    if not isinstance(node, sexp.SList) or not node.items:
        raise ParseError("expected a term '(var i)' or '(app f ...)'", node.pos)
    head = node.head()
    if head == "var":
        if len(node.items) != 2:
            raise ParseError("'var' takes exactly one index", node.pos)
        return Var(sexp.expect_nat(node.items[1], "variable index"))
    if head == "app":
        if len(node.items) < 2:
            raise ParseError("'app' needs a function symbol", node.pos)
        f = sexp.expect_name(node.items[1])
        args = tuple(_term_from(a, sig) for a in node.items[2:])
        if sig.func_arity(f) != len(args):
            raise ArityError(f"function {f} expects {sig.func_arity(f)} arguments, got {len(args)} (offset {node.pos})")
        return App(f, args)
    raise ParseError(f"unknown term constructor {head!r}", node.pos)


def _formula_from(node, sig: Signature) -> Formula:
    if isinstance(node, sexp.Atom):
        if node.text == "bot":
            return BOT
        raise ParseError(f"unexpected token {node.text!r}", node.pos)
    head = node.head()
    if head == "rel":
        if len(node.items) < 2:
            raise ParseError("'rel' needs a relation symbol", node.pos)
        p = sexp.expect_name(node.items[1])
        args = tuple(_term_from(a, sig) for a in node.items[2:])
        if sig.rel_arity(p) != len(args):
            raise ArityError(f"relation {p} expects {sig.rel_arity(p)} arguments, got {len(args)} (offset {node.pos})")
        return Atom(p, args)
    if head in CONNECTIVES:
        if len(node.items) != 3:
            raise ParseError(f"'{head}' takes two formulas", node.pos)
        return Bin(head, _formula_from(node.items[1], sig), _formula_from(node.items[2], sig))
    if head in QUANTIFIERS:
        if len(node.items) != 2:
            raise ParseError(f"'{head}' takes one formula", node.pos)
        return Quant(head, _formula_from(node.items[1], sig))
    raise ParseError(f"unknown formula constructor {head!r}", node.pos)


def _signature_from(node) -> Signature:
    if not isinstance(node, sexp.SList) or node.head() != "signature":
        raise ParseError("expected '(signature (funcs ...) (rels ...))'", node.pos)
    funcs: list = []
    rels: list = []
    for part in node.items[1:]:
        if not isinstance(part, sexp.SList) or part.head() not in ("funcs", "rels"):
            raise ParseError("expected '(funcs ...)' or '(rels ...)'", part.pos)
        target = funcs if part.head() == "funcs" else rels
        for decl in part.items[1:]:
            if not isinstance(decl, sexp.SList) or len(decl.items) != 2:
                raise ParseError("expected '(name arity)'", decl.pos)
            target.append((sexp.expect_name(decl.items[0]), sexp.expect_nat(decl.items[1], "arity")))
    return Signature(tuple(funcs), tuple(rels))


def parse_formula(text: str, sig: Signature) -> Formula:
    return _formula_from(sexp.read_one(text), sig)


def parse_term(text: str, sig: Signature) -> Term:
    return _term_from(sexp.read_one(text), sig)


def parse_signature(text: str) -> Signature:
    return _signature_from(sexp.read_one(text))


def parse_problem(text: str) -> tuple[Signature, Formula]:
    """Parse a signature header followed by one formula."""
    exps = sexp.read_all(text)
    if len(exps) != 2:
        raise ParseError(f"expected a signature header and a formula, found {len(exps)} expressions", 0)
    sig = _signature_from(exps[0])
    return sig, _formula_from(exps[1], sig)
