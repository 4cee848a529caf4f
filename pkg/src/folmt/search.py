"""Finite model search: fixed domain size, increasing size, and the monadic fragment."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from folmt.errors import CapExceeded, FolError, PreconditionError
from folmt.semantics import (
    DEFAULT_ENV, Assignment, FiniteModel, compile_open, grid, make_model, reinterpret, satisfies,
)
from folmt.syntax import (
    ALL, AND, IMPL, Atom, Bin, Bot, Formula, Signature, Var,
    check_formula, free_vars, signature_of, syms,
)

ENUM_THRESHOLD = 2 ** 20
DEFAULT_KMAX = 6
MONADIC_CAP = 4


@dataclass(frozen=True)
class Sat:
    model: FiniteModel
    size: int
    env: Assignment = field(default=DEFAULT_ENV)

    def __str__(self):
        return f"SAT k={self.size}"


@dataclass(frozen=True)
class Unsat:
    def __str__(self):
        return "UNSAT"


@dataclass(frozen=True)
class UnknownWithinBound:
    bound: int

    def __str__(self):
        return f"UNKNOWN bound={self.bound}"


Verdict = Sat | Unsat | UnknownWithinBound


def _resolve_sig(phi: Formula, sig: Signature | None) -> Signature:
    if sig is None:
        return signature_of(phi)
    check_formula(phi, sig)
    return sig


def _checked(phi: Formula, verdict: Sat) -> Sat:
    if not satisfies(verdict.model, verdict.env, phi):
        raise FolError("internal error: emitted model does not satisfy the query")
    return verdict


def _identity(k: int) -> frozenset:
    return frozenset((a, a) for a in range(k))


def enumerate_interpretations(sig: Signature, occurring: tuple[Sequence[str], Sequence[str]], k: int,
                              *, equality: str | None = None) -> Iterator[FiniteModel]:
    """Every interpretation of the occurring symbols over ``{0..k-1}``, once each.

    Other symbols get the all-zero / all-false table.  If ``equality`` names a
    binary relation it is fixed to the identity instead of enumerated.
    """
    if k < 1:
        raise PreconditionError("domain size must be at least 1")
    fs = [f for f in occurring[0]]
    ps = [p for p in occurring[1] if p != equality]
    fgrids = [list(grid(k, sig.func_arity(f))) for f in fs]
    pgrids = [list(grid(k, sig.rel_arity(p))) for p in ps]
    choices = ([itertools.product(range(k), repeat=len(g)) for g in fgrids]
               + [itertools.product((False, True), repeat=len(g)) for g in pgrids])
    fixed = {equality: _identity(k)} if equality is not None else {}
    for combo in itertools.product(*[list(c) for c in choices]):
        funcs = {f: dict(zip(g, vals)) for f, g, vals in zip(fs, fgrids, combo[:len(fs)])}
        rels = {p: [a for a, b in zip(g, vals) if b] for p, g, vals in zip(ps, pgrids, combo[len(fs):])}
        rels.update(fixed)
        yield make_model(sig, k, funcs, rels)


def count_candidates(sig: Signature, phi: Formula, k: int, equality: str | None = None) -> int:
    fs, ps = syms(phi)
    n = k ** len(free_vars(phi))
    for f in fs:
        n *= k ** (k ** sig.func_arity(f))
    for p in ps:
        if p != equality:
            n *= 2 ** (k ** sig.rel_arity(p))
    return n


def _envs(phi: Formula, k: int) -> Iterator[Assignment]:
    fv = free_vars(phi)
    if not fv:
        yield DEFAULT_ENV
        return
    for vals in itertools.product(range(k), repeat=len(fv)):
        yield DEFAULT_ENV.with_values(dict(zip(fv, vals)))


def _fsat_enumerate(sig, phi, k, equality):
    occ = syms(phi)
    if equality is not None and not sig.has_rel(equality):
        equality = None
    fv = free_vars(phi)
    n = fv[-1] + 1 if fv else 0
    for model in enumerate_interpretations(sig, occ, k, equality=equality):
        run = compile_open(model, phi)
        # indices below n that are not free are irrelevant; pin them to 0
        for vals in itertools.product(range(k), repeat=len(fv)):
            full = [0] * n
            for i, v in zip(fv, vals):
                full[i] = v
            if run(full):
                env = DEFAULT_ENV.with_values(dict(zip(fv, vals))) if fv else DEFAULT_ENV
                return Sat(model, k, env)
    return None


class _Need(Exception):
    def __init__(self, key):
        self.key = key


def _fsat_lazy(sig, phi, k, equality):
    """Backtracking over exactly the table entries that evaluation demands."""
    partial: dict = {}

    def var(i, env):
        if i < len(env):
            return env[i]
        key = ("v", i - len(env))
        if key not in partial:
            raise _Need(key)
        return partial[key]

    def term(t, env):
        if isinstance(t, Var):
            return var(t.index, env)
        key = ("f", t.func, tuple(term(a, env) for a in t.args))
        if key not in partial:
            raise _Need(key)
        return partial[key]

    def form(p, env):
        if isinstance(p, Bot):
            return False
        if isinstance(p, Atom):
            args = tuple(term(a, env) for a in p.args)
            if p.rel == equality:
                return args[0] == args[1]
            key = ("r", p.rel, args)
            if key not in partial:
                raise _Need(key)
            return partial[key]
        if isinstance(p, Bin):
            if p.op == IMPL:
                return (not form(p.left, env)) or form(p.right, env)
            if p.op == AND:
                return form(p.left, env) and form(p.right, env)
            return form(p.left, env) or form(p.right, env)
        if p.kind == ALL:
            return all(form(p.body, (a,) + env) for a in range(k))
        return any(form(p.body, (a,) + env) for a in range(k))

    done = object()
    stack: list = []
    while True:
        try:
            ok = form(phi, ())
        except _Need as need:
            it = iter((False, True) if need.key[0] == "r" else range(k))
            partial[need.key] = next(it)
            stack.append((need.key, it))
            continue
        if ok:
            break
        while stack:
            key, it = stack[-1]
            nxt = next(it, done)
            if nxt is done:
                stack.pop()
                del partial[key]
                continue
            partial[key] = nxt
            break
        else:
            return None

    funcs: dict = {f: {} for f in sig.func_names}
    rels: dict = {p: [] for p in sig.rel_names}
    env_vals = {}
    for key, v in partial.items():
        if key[0] == "v":
            env_vals[key[1]] = v
        elif key[0] == "f":
            funcs[key[1]][key[2]] = v
        elif v:
            rels[key[1]].append(key[2])
    for f, a in sig.funcs:
        table = funcs[f]
        for args in grid(k, a):
            table.setdefault(args, 0)
    if equality is not None and sig.has_rel(equality):
        rels[equality] = _identity(k)
    env = DEFAULT_ENV.with_values(env_vals) if env_vals else DEFAULT_ENV
    return Sat(make_model(sig, k, funcs, rels), k, env)


def fsat_on_domain(phi: Formula, k: int, sig: Signature | None = None, *,
                   equality: str | None = None, threshold: int = ENUM_THRESHOLD) -> Sat | Unsat:
    """Complete decision: does ``phi`` have a model (and assignment) over ``{0..k-1}``?

    Small search spaces (at most ``threshold`` candidate models times
    assignments) are enumerated outright; larger ones use lazy backtracking.
    ``equality`` optionally names a binary relation interpreted as identity.
    """
    if k < 1:
        raise PreconditionError("domain size must be at least 1")
    sig = _resolve_sig(phi, sig)
    if count_candidates(sig, phi, k, equality) <= threshold:
        found = _fsat_enumerate(sig, phi, k, equality)
    else:
        found = _fsat_lazy(sig, phi, k, equality)
    return Unsat() if found is None else _checked(phi, found)


def _fsat_job(args):
    phi, k, sig, equality, threshold = args
    return fsat_on_domain(phi, k, sig, equality=equality, threshold=threshold)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("FOLMT_JOBS", "1")))
    except ValueError:
        return 1


def fsat_bounded(phi: Formula, kmax: int = DEFAULT_KMAX, sig: Signature | None = None, *,
                 equality: str | None = None, threshold: int = ENUM_THRESHOLD,
                 jobs: int | None = None) -> Sat | UnknownWithinBound:
    """Semi-decision: the least ``k <= kmax`` with a model, else ``UnknownWithinBound``."""
    if kmax < 1:
        raise PreconditionError("kmax must be at least 1")
    sig = _resolve_sig(phi, sig)
    jobs = default_jobs() if jobs is None else jobs
    if jobs > 1 and kmax > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fsat_job, [(phi, k, sig, equality, threshold)
                                                for k in range(1, kmax + 1)]))
        for v in results:
            if isinstance(v, Sat):
                return v
        return UnknownWithinBound(kmax)
    for k in range(1, kmax + 1):
        v = fsat_on_domain(phi, k, sig, equality=equality, threshold=threshold)
        if isinstance(v, Sat):
            return v
    return UnknownWithinBound(kmax)


def monadic_rel_decide(phi: Formula, sig: Signature | None = None, *, cap: int = MONADIC_CAP) -> Sat | Unsat:
    """Decide satisfiability of a function-free formula over unary relations.

    Any model collapses onto the set of predicate vectors its elements
    realise, so it suffices to try every nonempty set of vectors in ``B^n``
    (smallest first) with each ``P_i`` read off coordinate ``i``.
    """
    sig = _resolve_sig(phi, sig)
    if sig.funcs:
        raise PreconditionError("monadic_rel_decide expects a signature without functions")
    if any(a != 1 for _, a in sig.rels):
        raise PreconditionError("monadic_rel_decide expects all relations to be unary")
    occurring = syms(phi)[1]
    n = len(occurring)
    if n > cap:
        raise CapExceeded(f"{n} unary relations exceed the cap of {cap} (search space 2^(2^{n}))")
    vectors = list(itertools.product((False, True), repeat=n))
    for size in range(1, len(vectors) + 1):
        for subset in itertools.combinations(vectors, size):
            rels = {p: [(j,) for j, v in enumerate(subset) if v[i]] for i, p in enumerate(occurring)}
            model = make_model(sig, size, {}, rels)
            for env in _envs(phi, size):
                if satisfies(model, env, phi, check=False):
                    return _checked(phi, Sat(model, size, env))
    return Unsat()


def monadic_decide(phi: Formula, sig: Signature | None = None, *, cap: int = MONADIC_CAP) -> Sat | Unsat:
    """Decide finite satisfiability when every symbol has arity at most 1.

    Also accepts arbitrary function arities when every relation is 0-ary,
    since then no term can occur.
    """
    from folmt.reductions import monadic_fun_elim, sig_gc, zero_arity_lift

    sig = orig_sig = _resolve_sig(phi, sig)
    if all(a == 0 for _, a in sig.rels) and any(a > 1 for _, a in sig.funcs):
        sig = Signature((), sig.rels)
    if sig.max_arity() > 1:
        raise PreconditionError("monadic_decide needs all arities <= 1")
    stages = [zero_arity_lift(sig, phi)]
    stages.append(sig_gc(stages[-1].out_sig, stages[-1].out_formula))
    stages.append(monadic_fun_elim(stages[-1].out_sig, stages[-1].out_formula))
    stages.append(sig_gc(stages[-1].out_sig, stages[-1].out_formula))
    verdict = monadic_rel_decide(stages[-1].out_formula, stages[-1].out_sig, cap=cap)
    if isinstance(verdict, Unsat):
        return verdict
    model, env = verdict.model, verdict.env
    for st in reversed(stages):
        model, env = st.backward(model, env)
    if sig is not orig_sig:
        model = reinterpret(model, orig_sig)
    return _checked(phi, Sat(model, model.size, env))
