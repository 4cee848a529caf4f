import pytest

from folmt.cli import main
from folmt.syntax import Name, Signature, atom, conj, exists, neg, parse_problem, print_problem

SIG_P = Signature((), (("P", 1),))
SAT_AT_2 = exists("x", exists("y", conj(atom("P", Name("x")), neg(atom("P", Name("y"))))))
SIG_R = Signature((), (("R", 2),))
ASYM = exists("x", exists("y", conj(atom("R", Name("x"), Name("y")), neg(atom("R", Name("y"), Name("x"))))))


@pytest.fixture
def problem(tmp_path):
    path = tmp_path / "f.sexp"
    path.write_text(print_problem(SIG_P, SAT_AT_2))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out.strip().splitlines()
    return code, out


def test_parse_roundtrip(capsys, problem):
    code, out = run(capsys, "parse", "--formula", problem)
    assert code == 0 and out[-1] == "OK"


def test_fsat_emits_model_that_reverifies(capsys, tmp_path, problem):
    model = tmp_path / "m.sexp"
    code, out = run(capsys, "fsat", "--formula", problem, "--max-domain", 3, "--emit-model", model)
    assert code == 0 and out[-1] == "SAT k=2"
    code, out = run(capsys, "eval", "--model", model, "--formula", problem)
    assert code == 0 and out[-1] == "TRUE"


def test_fsat_fixed_unsat_and_unknown(capsys, problem):
    assert run(capsys, "fsat-fixed", "--formula", problem, "--domain-size", 1)[1][-1] == "UNSAT"
    assert run(capsys, "fsat", "--formula", problem, "--max-domain", 1)[1][-1] == "UNKNOWN bound=1"


def test_output_is_deterministic(capsys, problem):
    a = run(capsys, "fsat", "--formula", problem, "--max-domain", 3)
    b = run(capsys, "fsat", "--formula", problem, "--max-domain", 3)
    assert a == b


def test_monadic(capsys, problem):
    code, out = run(capsys, "monadic", "--formula", problem)
    assert code == 0 and out[-1] == "SAT k=2"


def test_bpcp_solve_and_encode(capsys, tmp_path):
    inst = tmp_path / "r.txt"
    inst.write_text("1 1\n")
    assert run(capsys, "bpcp", "solve", "--instance", inst, "--max-len", 4) == (0, ["SOLVED 1"])
    inst.write_text("1 0\n")
    assert run(capsys, "bpcp", "solve", "--instance", inst, "--max-len", 4)[1][-1] == "NOSOLUTION bound=4"
    enc = tmp_path / "enc.sexp"
    assert run(capsys, "bpcp", "encode", "--instance", inst, "--out", enc) == (0, ["ENCODED"])
    sig, _ = parse_problem(enc.read_text())
    assert ("eq", 2) in sig.rels


def test_bpcp_model_then_extract(capsys, tmp_path):
    inst = tmp_path / "r.txt"
    inst.write_text("1 1\n")
    model = tmp_path / "m.sexp"
    code, out = run(capsys, "bpcp", "model", "--instance", inst, "--n", 1, "--out", model)
    assert code == 0 and out[-1] == "MODEL size=4"
    assert run(capsys, "bpcp", "extract", "--instance", inst, "--model", model) == (0, ["SOLVED 1"])


def test_reduce_discrete_to_binary(capsys, tmp_path):
    src = tmp_path / "f.sexp"
    src.write_text(print_problem(SIG_R, ASYM))
    dst = tmp_path / "g.sexp"
    code, out = run(capsys, "reduce", "--chain", "discrete-to-binary", "--in", src, "--out", dst, "--trace")
    assert code == 0
    assert len(out) == 8 and out[-1] == "REDUCED stages=7"
    sig, _ = parse_problem(dst.read_text())
    assert sig == Signature((), (("mem", 2),))


def test_quotient(capsys, tmp_path, problem):
    model = tmp_path / "m.sexp"
    model.write_text("(model (size 3) (rel P (0) (1)))")
    code, out = run(capsys, "quotient", "--model", model, "--formula", problem)
    assert code == 0 and out[-1] == "CLASSES 2"


@pytest.mark.parametrize("argv", [
    ["fsat", "--formula", "/nonexistent.sexp"],
    ["bogus-verb"],
    ["--jobs", "0", "parse", "--formula", "x"],
    ["reduce", "--chain", "no-such-stage", "--in", "IN", "--out", "OUT"],
    ["bpcp", "extract", "--instance", "IN"],
])
def test_errors_exit_2(capsys, tmp_path, problem, argv):
    argv = [str(problem) if a == "IN" else str(tmp_path / "o") if a == "OUT" else a for a in argv]
    assert main(argv) == 2


def test_malformed_inputs_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.sexp"
    bad.write_text("(formula (P x")
    assert main(["parse", "--formula", str(bad)]) == 2
    inst = tmp_path / "r.txt"
    inst.write_text("1 2\n")
    assert main(["bpcp", "solve", "--instance", str(inst)]) == 2
