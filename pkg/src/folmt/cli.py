"""Command line interface.

The last line printed is always the verdict.  Exit status is 2 for input or
validation errors and 0 otherwise, whatever the logical answer.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from folmt import bpcp, search
from folmt.errors import FolError
from folmt.quotient import quotient_model
from folmt.reductions import run_chain
from folmt.semantics import DEFAULT_ENV, parse_env, parse_model, print_env, print_model, satisfies
from folmt.syntax import parse_problem, parse_signature, print_problem, size


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _emit_sat(v, args) -> None:
    if isinstance(v, search.Sat):
        if getattr(args, "emit_model", None):
            _write(args.emit_model, print_model(v.model))
            print(f"model written to {args.emit_model}")
        else:
            print(print_model(v.model), end="")
        if v.env != DEFAULT_ENV:
            print(print_env(v.env))
    print(v)


def cmd_parse(args) -> None:
    sig, phi = parse_problem(_read(args.formula))
    print(print_problem(sig, phi), end="")
    print("OK")


def cmd_eval(args) -> None:
    sig, phi = parse_problem(_read(args.formula))
    model = parse_model(_read(args.model), sig)
    env = parse_env(_read(args.env)) if args.env else DEFAULT_ENV
    print("TRUE" if satisfies(model, env, phi) else "FALSE")


def cmd_fsat(args) -> None:
    sig, phi = parse_problem(_read(args.formula))
    _emit_sat(search.fsat_bounded(phi, args.max_domain, sig, equality=args.equality, jobs=args.jobs), args)


def cmd_fsat_fixed(args) -> None:
    sig, phi = parse_problem(_read(args.formula))
    _emit_sat(search.fsat_on_domain(phi, args.domain_size, sig, equality=args.equality), args)


def cmd_monadic(args) -> None:
    sig, phi = parse_problem(_read(args.formula))
    _emit_sat(search.monadic_decide(phi, sig, cap=args.cap), args)


def cmd_reduce(args) -> None:
    sig, phi = parse_problem(_read(getattr(args, "in")))
    target = parse_signature(_read(args.target)) if args.target else None
    chain = [c.strip() for c in args.chain.split(",") if c.strip()]
    res = run_chain(sig, phi, chain, target)
    _write(args.out, print_problem(res.out_sig, res.out_formula))
    leaves = _leaves(res)
    for rec, st in zip(res.trace, leaves):
        print(f"{rec}  [size {size(st.out_formula)}]" if args.trace else rec)
    print(f"REDUCED stages={len(res.trace)}")


def _leaves(res):
    if not res.stages:
        return [res]
    return [x for st in res.stages for x in _leaves(st)]


def cmd_bpcp(args) -> None:
    R = bpcp.parse_instance(_read(args.instance))
    if args.action == "solve":
        s = bpcp.solve(R, args.max_len)
        print(f"SOLVED {s or '-'}" if s is not None else f"NOSOLUTION bound={args.max_len}")
    elif args.action == "encode":
        sig, phi = bpcp.encode(R)
        text = print_problem(sig, phi)
        if args.out:
            _write(args.out, text)
        else:
            print(text, end="")
        print("ENCODED")
    elif args.action == "model":
        model = bpcp.build_model(R, args.n)
        if args.out:
            _write(args.out, print_model(model))
        else:
            print(print_model(model), end="")
        print(f"MODEL size={model.size}")
    else:
        model = parse_model(_read(args.model), bpcp.SIG_BPCP)
        s = bpcp.extract_solution(R, model)
        print(f"SOLVED {s or '-'}")


def cmd_quotient(args) -> None:
    sig, phi = parse_problem(_read(args.formula))
    model = parse_model(_read(args.model), sig)
    q, classes = quotient_model(model, phi)
    for x in range(model.size):
        print(f"{x} -> {classes.c[x]}")
    text = print_model(q)
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    print(f"CLASSES {classes.count}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="folmt", description="Finite model toolkit for first-order logic.")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes for bounded search (default: $FOLMT_JOBS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="parse and re-print a problem file")
    s.add_argument("--formula", required=True)
    s.set_defaults(fn=cmd_parse)

    s = sub.add_parser("eval", help="evaluate a formula in a model")
    s.add_argument("--model", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--env")
    s.set_defaults(fn=cmd_eval)

    for name, fn in (("fsat", cmd_fsat), ("fsat-fixed", cmd_fsat_fixed)):
        s = sub.add_parser(name, help="bounded model search" if name == "fsat" else "search one domain size")
        s.add_argument("--formula", required=True)
        if name == "fsat":
            s.add_argument("--max-domain", type=int, default=search.DEFAULT_KMAX)
        else:
            s.add_argument("--domain-size", type=int, required=True)
        s.add_argument("--equality", help="binary relation to read as identity")
        s.add_argument("--emit-model")
        s.set_defaults(fn=fn)

    s = sub.add_parser("monadic", help="decide a formula whose symbols have arity <= 1")
    s.add_argument("--formula", required=True)
    s.add_argument("--cap", type=int, default=search.MONADIC_CAP)
    s.add_argument("--emit-model")
    s.set_defaults(fn=cmd_monadic)

    s = sub.add_parser("reduce", help="apply a chain of reductions")
    s.add_argument("--chain", required=True)
    s.add_argument("--in", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--target", help="signature file for the embed stage")
    s.add_argument("--trace", action="store_true", help="also show output formula sizes")
    s.set_defaults(fn=cmd_reduce)

    s = sub.add_parser("bpcp", help="binary Post correspondence tools")
    s.add_argument("action", choices=["solve", "encode", "model", "extract"])
    s.add_argument("--instance", required=True)
    s.add_argument("--max-len", type=int, default=8)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--model")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_bpcp)

    s = sub.add_parser("quotient", help="minimise a model by indistinguishability")
    s.add_argument("--model", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_quotient)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if args.jobs is not None:
        if args.jobs < 1:
            print("error: --jobs must be at least 1", file=sys.stderr)
            return 2
        os.environ["FOLMT_JOBS"] = str(args.jobs)
    if args.command == "bpcp" and args.action == "extract" and not args.model:
        print("error: bpcp extract needs --model", file=sys.stderr)
        return 2
    try:
        args.fn(args)
    except (FolError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
