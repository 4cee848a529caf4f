import random

import pytest

from folmt.errors import CapExceeded, PreconditionError
from folmt.search import (
    Sat, UnknownWithinBound, Unsat, enumerate_interpretations, fsat_bounded, fsat_on_domain,
    monadic_decide, monadic_rel_decide,
)
from folmt.semantics import DEFAULT_ENV, satisfies
from folmt.syntax import (
    BOT, Signature, Var, alls, app, atom, conj, conj_all, disj, exs, neg, parse_problem, top,
)

from _gen import rand_formula

ASYM = exs(2, conj(atom("P", Var(0), Var(1)), neg(atom("P", Var(1), Var(0)))))
SIG2 = Signature((), (("P", 2),))


def test_enumerate_counts():
    assert len(list(enumerate_interpretations(SIG2, ([], ["P"]), 2))) == 16
    assert len(list(enumerate_interpretations(SIG2, ([], []), 3))) == 1
    sig = Signature((("f", 1),), ())
    models = list(enumerate_interpretations(sig, (["f"], []), 2))
    assert len(models) == 4
    assert len({tuple(sorted(m.funcs["f"].items())) for m in models}) == 4


def test_non_occurring_symbols_get_defaults():
    sig = Signature((("f", 1),), (("P", 2), ("Q", 1)))
    for m in enumerate_interpretations(sig, ([], ["P"]), 2):
        assert m.rels["Q"] == frozenset()
        assert set(m.funcs["f"].values()) == {0}


def test_fsat_on_domain_examples():
    assert isinstance(fsat_on_domain(ASYM, 1, SIG2), Unsat)
    v = fsat_on_domain(ASYM, 2, SIG2)
    assert isinstance(v, Sat) and satisfies(v.model, v.env, ASYM)
    assert isinstance(fsat_on_domain(top(), 1), Sat)


def test_fsat_bounded_examples():
    v = fsat_bounded(ASYM, 3, SIG2)
    assert isinstance(v, Sat) and v.size == 2
    assert fsat_bounded(BOT, 5) == UnknownWithinBound(5)
    all_p = alls(1, atom("P", Var(0)))
    assert fsat_bounded(all_p, 1).size == 1
    assert str(fsat_bounded(BOT, 5)) == "UNKNOWN bound=5"


def test_lazy_and_enumeration_agree():
    rng = random.Random(20)
    sig = Signature((("f", 1), ("c", 0)), (("P", 1), ("R", 2)))
    for _ in range(150):
        phi = rand_formula(rng, sig, 4, free=1)
        for k in (1, 2):
            a = fsat_on_domain(phi, k, sig)
            b = fsat_on_domain(phi, k, sig, threshold=0)
            assert type(a) is type(b)
            for v in (a, b):
                if isinstance(v, Sat):
                    assert satisfies(v.model, v.env, phi)


def test_equality_option_fixes_identity():
    sig = Signature((), (("eq", 2),))
    distinct = exs(2, neg(atom("eq", Var(0), Var(1))))
    assert isinstance(fsat_on_domain(distinct, 1, sig, equality="eq"), Unsat)
    v = fsat_on_domain(distinct, 2, sig, equality="eq")
    assert v.model.rels["eq"] == {(0, 0), (1, 1)}
    assert isinstance(fsat_on_domain(distinct, 2, sig, equality="eq", threshold=0), Sat)


def test_bounded_monotone():
    rng = random.Random(21)
    sig = Signature((("f", 1),), (("P", 1), ("R", 2)))
    for _ in range(40):
        phi = rand_formula(rng, sig, 4)
        v2 = fsat_bounded(phi, 2, sig)
        if isinstance(v2, Sat):
            assert fsat_bounded(phi, 3, sig).size == v2.size


def test_jobs_give_same_answer():
    assert fsat_bounded(ASYM, 3, SIG2, jobs=2).size == 2
    assert fsat_bounded(BOT, 2, jobs=2) == UnknownWithinBound(2)


def _p(text):
    return parse_problem(text)


def test_monadic_rel_examples():
    sig = Signature((), (("P", 1), ("Q", 1)))
    P, Q = (lambda v: atom("P", v)), (lambda v: atom("Q", v))
    assert isinstance(monadic_rel_decide(exs(1, conj(P(Var(0)), neg(Q(Var(0))))), sig), Sat)
    assert isinstance(monadic_rel_decide(conj(alls(1, P(Var(0))), exs(1, neg(P(Var(0))))), sig), Unsat)
    phi = conj_all([alls(1, disj(P(Var(0)), Q(Var(0)))), exs(1, neg(P(Var(0)))), exs(1, neg(Q(Var(0))))])
    v = monadic_rel_decide(phi, sig)
    assert isinstance(v, Sat) and v.size == 2


def test_monadic_rel_preconditions():
    with pytest.raises(PreconditionError):
        monadic_rel_decide(atom("R", Var(0), Var(0)), Signature((), (("R", 2),)))
    sig = Signature((), tuple((f"P{i}", 1) for i in range(5)))
    phi = conj_all([exs(1, atom(f"P{i}", Var(0))) for i in range(5)])
    with pytest.raises(CapExceeded):
        monadic_rel_decide(phi, sig)
    assert isinstance(monadic_rel_decide(phi, sig, cap=5), Sat)


def test_monadic_decide_examples():
    sig = Signature((("f", 1),), (("P", 1),))
    P = lambda v: atom("P", v)
    unsat = conj(alls(1, neg(P(Var(0)))), alls(1, P(app("f", Var(0)))))
    assert isinstance(monadic_decide(unsat, sig), Unsat)
    sat = conj(alls(1, P(app("f", Var(0)))), exs(1, neg(P(Var(0)))))
    v = monadic_decide(sat, sig)
    assert isinstance(v, Sat) and v.size == 2
    assert satisfies(v.model, DEFAULT_ENV, sat)
    sig0 = Signature((), (("P", 0),))
    assert isinstance(monadic_decide(conj(atom("P"), neg(atom("P"))), sig0), Unsat)


def test_monadic_decide_rejects_binary():
    with pytest.raises(PreconditionError):
        monadic_decide(atom("R", Var(0), Var(0)), Signature((), (("R", 2),)))
