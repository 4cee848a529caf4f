import random

import pytest
from hypothesis import given, settings, strategies as st

from folmt.errors import ArityError, FolError, ParseError, UnknownSymbolError
from folmt.syntax import (
    BOT, App, Atom, Bin, Name, Quant, Signature, Var, alls, atom, conj_all, disj_all, exists, forall,
    free_vars, lift, map_symbols, neg, parse_formula, parse_problem, print_formula, print_problem,
    signature_of, syms, top,
)

from _gen import SIG_MIXED, rand_formula

SIG = Signature((("f", 1), ("c", 0)), (("P", 1), ("R", 2)))


def test_parse_examples():
    assert parse_formula("(all (rel P (var 0)))", SIG) == Quant("all", Atom("P", (Var(0),)))
    assert parse_formula("bot", SIG) == BOT
    assert parse_formula(" ( ex\n(rel R (app f (var 0)) (app c)) ) ", SIG) == \
        Quant("ex", Atom("R", (App("f", (Var(0),)), App("c", ()))))


def test_parse_errors_are_distinct():
    with pytest.raises(ArityError):
        parse_formula("(rel R (var 0))", SIG)
    with pytest.raises(UnknownSymbolError):
        parse_formula("(rel Z (var 0))", SIG)
    with pytest.raises(ParseError) as e:
        parse_formula("(all (rel P (var 0))", SIG)
    assert e.value.pos is not None
    with pytest.raises(ParseError):
        parse_formula("(nand bot bot)", SIG)
    with pytest.raises(ArityError):
        parse_formula("(rel P (app f))", SIG)


def test_print_examples():
    assert print_formula(BOT) == "bot"
    assert print_formula(Quant("all", Atom("P", (Var(0),)))) == "(all (rel P (var 0)))"


def test_round_trip_corpus():
    rng = random.Random(1)
    for _ in range(1000):
        phi = rand_formula(rng, SIG_MIXED, 5, term_depth=2)
        assert parse_formula(print_formula(phi), SIG_MIXED) == phi


def test_problem_round_trip():
    rng = random.Random(2)
    phi = rand_formula(rng, SIG_MIXED, 4)
    assert parse_problem(print_problem(SIG_MIXED, phi)) == (SIG_MIXED, phi)


def test_free_vars_examples():
    # forall exists (P 1 4 -> P 0 5)
    phi = alls(1, Quant("ex", Bin("impl", atom("R", Var(1), Var(4)), atom("R", Var(0), Var(5)))))
    assert free_vars(phi) == [2, 3]
    assert free_vars(BOT) == []
    assert free_vars(atom("R", Var(0), Var(7))) == [0, 7]


def test_free_vars_under_quantifier():
    rng = random.Random(3)
    for _ in range(300):
        phi = rand_formula(rng, SIG_MIXED, 4, free=4)
        assert free_vars(Quant("all", phi)) == [n - 1 for n in free_vars(phi) if n >= 1]


def test_syms():
    assert syms(BOT) == ([], [])
    assert syms(Quant("ex", atom("P", App("f", (Var(0),))))) == (["f"], ["P"])


def test_lift_examples():
    assert lift(Var(0), 1, 0) == Var(1)
    assert lift(Var(0), 1, 1) == Var(0)
    assert lift(Quant("all", atom("R", Var(0), Var(1))), 2, 0) == Quant("all", atom("R", Var(0), Var(3)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 4))
def test_lift_zero_is_identity(seed, cutoff):
    phi = rand_formula(random.Random(seed), SIG_MIXED, 4, free=3)
    assert lift(phi, 0, cutoff) == phi


def test_map_symbols():
    phi = Quant("all", atom("P", Var(0)))
    assert map_symbols(phi) == phi
    tgt = Signature((), (("Q", 1),))
    assert map_symbols(atom("P", Var(0)), rel_map={"P": "Q"}, target=tgt) == atom("Q", Var(0))
    with pytest.raises(ArityError):
        map_symbols(atom("P", Var(0)), rel_map={"P": "R"}, target=SIG)


def test_map_symbols_round_trip_and_images():
    rng = random.Random(4)
    fm = {"f": "h", "g": "k", "c": "d"}
    rm = {"P": "Q", "R": "T", "S": "U"}
    inv_f = {v: k for k, v in fm.items()}
    inv_r = {v: k for k, v in rm.items()}
    for _ in range(200):
        phi = rand_formula(rng, SIG_MIXED, 4, term_depth=2)
        img = map_symbols(phi, fm, rm)
        fs, ps = syms(phi)
        assert syms(img) == ([fm[f] for f in fs], [rm[p] for p in ps])
        assert map_symbols(img, inv_f, inv_r) == phi


def test_derived_builders():
    assert neg(BOT) == Bin("impl", BOT, BOT) == top()
    assert conj_all([]) == top()
    assert disj_all([]) == BOT
    a = atom("P", Var(0))
    assert conj_all([a]) == a


def test_named_binders_shift_free_vars():
    phi = forall("x", atom("R", App("f", (Var(0),)), Name("x")))
    assert phi == Quant("all", atom("R", App("f", (Var(1),)), Var(0)))
    assert free_vars(exists("y", atom("P", Var(2)))) == [2]


def test_signature_validation():
    with pytest.raises(FolError):
        Signature((("f", 1), ("f", 2)), ())
    with pytest.raises(FolError):
        Signature((), (("P", -1),))
    assert signature_of(Quant("ex", atom("R", App("c", ()), Var(0)))) == Signature((("c", 0),), (("R", 2),))
