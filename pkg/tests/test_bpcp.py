import random
from itertools import product

import pytest

from folmt.bpcp import (
    EQ, SIG_BPCP, axioms, build_model, derives, encode, extract_solution, instance,
    model_elements, parse_instance, solve,
)
from folmt.errors import ModelMalformed, ParseError
from folmt.search import Unsat, fsat_on_domain
from folmt.semantics import DEFAULT_ENV, reinterpret, satisfies
from folmt.syntax import BOT, Bin, Quant, free_vars, syms


def bfs_derivable(R, limit):
    """All derivable pairs with total length <= limit, by forward closure."""
    pairs = set(p for p in R.pairs if len(p[0]) + len(p[1]) <= limit)
    frontier = list(pairs)
    while frontier:
        nxt = []
        for u, v in frontier:
            for s, t in R.pairs:
                p = (s + u, t + v)
                if len(p[0]) + len(p[1]) <= limit and p not in pairs:
                    pairs.add(p)
                    nxt.append(p)
        frontier = nxt
    return pairs


def rand_instance(rng, npairs=3, maxlen=3):
    bits = lambda: "".join(rng.choice("01") for _ in range(rng.randint(0, maxlen)))
    return instance(*[(bits(), bits()) for _ in range(rng.randint(1, npairs))])


def test_parse_instance():
    assert parse_instance("1 1").pairs == (("1", "1"),)
    assert parse_instance("- 0\n").pairs == (("", "0"),)
    with pytest.raises(ParseError):
        parse_instance("1 2")
    with pytest.raises(ParseError):
        parse_instance("1")
    assert parse_instance("# comment\n\n10 1\n10 1\n").pairs == (("10", "1"),)


def test_derives_examples():
    R = instance(("1", "1"))
    assert derives(R, "1", "1")
    assert derives(R, "11", "11")
    assert not derives(instance(("1", "0")), "1", "1")


def test_derives_matches_forward_closure():
    rng = random.Random(30)
    strings = [""] + ["".join(b) for n in range(1, 6) for b in product("01", repeat=n)]
    for _ in range(40):
        R = rand_instance(rng)
        closure = bfs_derivable(R, 10)
        for s in strings:
            for t in strings:
                if len(s) + len(t) <= 10:
                    assert derives(R, s, t) == ((s, t) in closure), (R, s, t)


def test_solve_examples():
    assert solve(instance(("1", "1")), 4) == "1"
    assert solve(instance(("1", "11"), ("11", "1")), 4) == "111"
    assert solve(instance(("1", "0")), 8) is None


def test_solve_is_shortest():
    rng = random.Random(31)
    for _ in range(60):
        R = rand_instance(rng)
        s = solve(R, 5)
        if s is not None:
            assert derives(R, s, s)
            shorter = [x for x in bfs_derivable(R, 2 * len(s)) if x[0] == x[1] and len(x[0]) < len(s)]
            assert not shorter


def test_encode_shape():
    R = instance(("1", "1"))
    sig, phi = encode(R)
    assert sig == SIG_BPCP
    assert free_vars(phi) == []
    fs, ps = syms(phi)
    assert set(fs) == {"star", "e", "f_tt", "f_ff"} and set(ps) == {"P", "prec", "eq"}
    rng = random.Random(32)
    for _ in range(20):
        R = rand_instance(rng, npairs=4)
        assert free_vars(encode(R)[1]) == []
        body = axioms(R)["inv"].body.body.right
        branches = []
        for _ in range(len(R) - 1):
            branches.append(body.left)
            body = body.right
        branches.append(body)
        # each branch: base case "or" the existential step case
        assert all(isinstance(b, Bin) and b.op == "or" and isinstance(b.right, Quant) for b in branches)


def test_empty_instance():
    R = instance()
    body = axioms(R)["inv"].body.body
    assert body.right == BOT
    sig, phi = encode(R)
    for k in (1, 2):
        assert isinstance(fsat_on_domain(phi, k, sig, equality=EQ), Unsat)


def test_build_model_examples():
    R = instance(("1", "1"))
    m = build_model(R, 1)
    elems = model_elements(1)
    assert m.size == 4 and elems == [None, "", "0", "1"]
    ix = {s: i for i, s in enumerate(elems)}
    assert (ix["1"], ix["1"]) in m.rels["P"]
    assert (ix[""], ix["1"]) in m.rels["prec"]
    assert (ix["1"], ix["1"]) not in m.rels["prec"]
    assert m.rels[EQ] == {(i, i) for i in range(4)}
    assert satisfies(m, DEFAULT_ENV, encode(R)[1])
    assert build_model(R, 3).size == 16


def test_extract_examples():
    R = instance(("1", "1"))
    s = extract_solution(R, build_model(R, 1))
    assert derives(R, s, s)
    R = instance(("1", "11"), ("11", "1"))
    s = extract_solution(R, build_model(R, 3))
    assert derives(R, s, s)


def test_extract_malformed():
    R = instance(("1", "1"))
    m = build_model(R, 1)
    broken = reinterpret(m, SIG_BPCP, rels={"P": [(2, 2)]})
    with pytest.raises(ModelMalformed):
        extract_solution(R, broken)
    with pytest.raises(ModelMalformed):
        extract_solution(R, reinterpret(m, SIG_BPCP, rels={"P": []}))


def test_witness_model_round_trip_on_random_corpus():
    rng = random.Random(33)
    done = 0
    while done < 15:
        R = rand_instance(rng)
        s = solve(R, 4)
        if s is None:
            continue
        done += 1
        m = build_model(R, len(s))
        assert satisfies(m, DEFAULT_ENV, encode(R)[1])
        stats = {}
        out = extract_solution(R, m, stats=stats)
        assert derives(R, out, out)
        assert stats["steps"] <= m.size ** 2
