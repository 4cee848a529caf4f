"""Binary Post correspondence: derivability, bounded solving, and the
first-order encoding with its witness model and solution extraction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from folmt.errors import ModelMalformed, ParseError
from folmt.semantics import FiniteModel, make_model
from folmt.syntax import (
    App, Atom, Formula, Name, Signature, conj, conj_all, disj, disj_all, exists, forall, impl, neg,
)

STAR, E, F_TT, F_FF = "star", "e", "f_tt", "f_ff"
P, PREC, EQ = "P", "prec", "eq"
SIG_BPCP = Signature(((STAR, 0), (E, 0), (F_TT, 1), (F_FF, 1)), ((P, 2), (PREC, 2), (EQ, 2)))
BIT_FUNC = {"1": F_TT, "0": F_FF}


@dataclass(frozen=True)
class BpcpInstance:
    """A finite set of pairs of bit strings (order kept, duplicates dropped)."""

    pairs: tuple = ()

    def __post_init__(self):
        seen = []
        for s, t in self.pairs:
            for x in (s, t):
                if any(c not in "01" for c in x):
                    raise ValueError(f"not a bit string: {x!r}")
            if (s, t) not in seen:
                seen.append((s, t))
        object.__setattr__(self, "pairs", tuple(seen))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __str__(self):
        return "\n".join(f"{s or '-'} {t or '-'}" for s, t in self.pairs)


def instance(*pairs) -> BpcpInstance:
    return BpcpInstance(tuple(pairs))


def parse_instance(text: str) -> BpcpInstance:
    """One pair per line, ``s t``; ``-`` is the empty string, ``#`` starts a comment."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two strings, got {len(parts)}", lineno)
        strs = []
        for p in parts:
            if p == "-":
                strs.append("")
            elif set(p) <= {"0", "1"}:
                strs.append(p)
            else:
                raise ParseError(f"line {lineno}: {p!r} is not a bit string", lineno)
        pairs.append(tuple(strs))
    return BpcpInstance(tuple(pairs))


def _deriver(R: BpcpInstance):
    pairs = R.pairs
    steps = [(a, b) for a, b in pairs if a or b]

    @lru_cache(maxsize=None)
    def go(s: str, t: str) -> bool:
        if (s, t) in pairs:
            return True
        return any(s.startswith(a) and t.startswith(b) and go(s[len(a):], t[len(b):])
                   for a, b in steps)

    return go


def derives(R: BpcpInstance, s: str, t: str) -> bool:
    """``s/t`` is built from a pair of ``R`` by prepending pairs of ``R``."""
    return _deriver(R)(s, t)


def strings_upto(n: int):
    """All bit strings of length ``<= n`` ordered by length, then lexicographically."""
    for length in range(n + 1):
        for bits in product("01", repeat=length):
            yield "".join(bits)


def solve(R: BpcpInstance, maxlen: int) -> str | None:
    """Shortest, then lexicographically least, ``s`` with ``R |> s/s`` and ``|s| <= maxlen``."""
    go = _deriver(R)
    for s in strings_upto(maxlen):
        if go(s, s):
            return s
    return None


# -- encoding ---------------------------------------------------------------

def bar(s: str, tail=None):
    """``f_{b1}(f_{b2}(... tail))`` with ``tail`` defaulting to ``e``."""
    t = App(E, ()) if tail is None else tail
    for b in reversed(s):
        t = App(BIT_FUNC[b], (t,))
    return t


def _eq(a, b):
    return Atom(EQ, (a, b))


def _prec(a, b):
    return Atom(PREC, (a, b))


def _P(a, b):
    return Atom(P, (a, b))


def _foralls(names, body):
    for n in reversed(names):
        body = forall(n, body)
    return body


def _exists(names, body):
    for n in reversed(names):
        body = exists(n, body)
    return body


def axioms(R: BpcpInstance) -> dict[str, Formula]:
    """The named conjuncts of the encoding."""
    x, y, z, u, v = (Name(n) for n in ("#x", "#y", "#z", "#u", "#v"))
    star = App(STAR, ())
    e = App(E, ())
    tt = lambda a: App(F_TT, (a,))
    ff = lambda a: App(F_FF, (a,))
    phi_P = _foralls(["#x", "#y"], impl(_P(x, y), conj(neg(_eq(x, star)), neg(_eq(y, star)))))
    phi_prec = conj(forall("#x", neg(_prec(x, x))),
                    _foralls(["#x", "#y", "#z"], impl(_prec(x, y), impl(_prec(y, z), _prec(x, z)))))
    phi_f = conj(
        conj_all([
            conj(_eq(tt(star), star), _eq(ff(star), star)),
            forall("#x", neg(_eq(tt(x), e))),
            forall("#x", neg(_eq(ff(x), e))),
        ]),
        conj_all([
            _foralls(["#x", "#y"], impl(neg(_eq(tt(x), star)), impl(_eq(tt(x), tt(y)), _eq(x, y)))),
            _foralls(["#x", "#y"], impl(neg(_eq(ff(x), star)), impl(_eq(ff(x), ff(y)), _eq(x, y)))),
            _foralls(["#x", "#y"], impl(_eq(tt(x), ff(y)), conj(_eq(tt(x), star), _eq(ff(y), star)))),
        ]))
    below = disj_all([conj(_prec(u, x), _eq(v, y)),
                      conj(_prec(v, y), _eq(u, x)),
                      conj(_prec(u, x), _prec(v, y))])
    branches = [disj(conj(_eq(x, bar(s)), _eq(y, bar(t))),
                     _exists(["#u", "#v"], conj_all([_P(u, v), _eq(x, bar(s, u)), _eq(y, bar(t, v)), below])))
                for s, t in R.pairs]
    phi_inv = _foralls(["#x", "#y"], impl(_P(x, y), disj_all(branches)))
    solution = exists("#x", _P(x, x))
    return {"P": phi_P, "prec": phi_prec, "f": phi_f, "inv": phi_inv, "solution": solution}


def encode(R: BpcpInstance) -> tuple[Signature, Formula]:
    """Closed formula over ``SIG_BPCP``, finitely satisfiable with ``eq`` as identity iff ``R`` is solvable."""
    ax = axioms(R)
    return SIG_BPCP, conj_all([ax["P"], ax["prec"], ax["f"], ax["inv"], ax["solution"]])


# -- witness model ----------------------------------------------------------

def model_elements(n: int) -> list:
    """Element names of the witness model: ``None`` for overflow, then strings."""
    return [None] + list(strings_upto(n))


def build_model(R: BpcpInstance, n: int) -> FiniteModel:
    """Strings of length ``<= n`` plus an overflow element 0; ``eq`` is identity."""
    elems = model_elements(n)
    idx = {s: i for i, s in enumerate(elems)}
    go = _deriver(R)

    def cons(b):
        def f(args):
            s = elems[args[0]]
            if s is None or len(s) >= n:
                return 0
            return idx[b + s]
        return f

    def prec(args):
        s, t = elems[args[0]], elems[args[1]]
        return s is not None and t is not None and s != t and t.endswith(s)

    def derivable(args):
        s, t = elems[args[0]], elems[args[1]]
        return s is not None and t is not None and go(s, t)

    return make_model(SIG_BPCP, len(elems),
                      {STAR: {(): 0}, E: {(): idx[""]}, F_TT: cons("1"), F_FF: cons("0")},
                      {P: derivable, PREC: prec, EQ: lambda a: a[0] == a[1]})


# -- extraction -------------------------------------------------------------

def _apply_bar(model: FiniteModel, s: str, x: int) -> int:
    for b in reversed(s):
        x = model.funcs[BIT_FUNC[b]][(x,)]
    return x


def extract_solution(R: BpcpInstance, model: FiniteModel, *, stats: dict | None = None) -> str:
    """Read a solution off a model of ``encode(R)`` in which ``eq`` is identity.

    Starting from some ``P(x, x)``, each step decodes ``P(x, y)`` through the
    inversion axiom and moves to a strictly smaller pair.  Revisiting a pair
    or exceeding ``|D|^2 + 1`` steps means the model is broken.
    """
    k = model.size
    Ptab, prec = model.rels[P], model.rels[PREC]
    e = model.funcs[E][()]
    start = next((x for x in range(k) if (x, x) in Ptab), None)
    if start is None:
        raise ModelMalformed("no element x with P(x, x)")
    cur = (start, start)
    left, right = [], []
    visited = set()
    bound = k * k + 1
    steps = 0
    while True:
        steps += 1
        if cur in visited or steps > bound:
            raise ModelMalformed("decoding does not descend")
        visited.add(cur)
        x, y = cur
        base = next(((s, t) for s, t in R.pairs
                     if _apply_bar(model, s, e) == x and _apply_bar(model, t, e) == y), None)
        if base is not None:
            left.append(base[0])
            right.append(base[1])
            break
        nxt = None
        for s, t in R.pairs:
            us = [u for u in range(k) if _apply_bar(model, s, u) == x]
            vs = [v for v in range(k) if _apply_bar(model, t, v) == y]
            for u in us:
                for v in vs:
                    if (u, v) not in Ptab:
                        continue
                    if (((u, x) in prec and v == y) or ((v, y) in prec and u == x)
                            or ((u, x) in prec and (v, y) in prec)):
                        nxt = (s, t, u, v)
                        break
                if nxt:
                    break
            if nxt:
                break
        if nxt is None:
            raise ModelMalformed(f"P holds at {cur} but neither case of the inversion axiom is witnessed")
        s, t, u, v = nxt
        left.append(s)
        right.append(t)
        cur = (u, v)
    if stats is not None:
        stats["steps"] = steps
    s, t = "".join(left), "".join(right)
    if s != t or not derives(R, s, t):
        raise ModelMalformed(f"decoded pair {s!r}/{t!r} is not a solution")
    return s
