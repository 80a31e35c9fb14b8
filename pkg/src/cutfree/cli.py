"""Command line interface.

Exit status: 0 affirmative or valid, 1 negative or refuted, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arith, derivation, dlat, models, psc, semilattice
from .cut import CutError, Transformer
from .derivation import DerivationError
from .preorder import Preorder, PreorderError, parse_preorder, print_preorder
from .search import SearchLimit
from .syntax import (
    FreeVariableError,
    ParseError,
    Prime,
    conjuncts,
    free_vars,
    parse_sequent,
    parse_term,
    print_sequent,
    print_term,
    subterms,
)

OK, NO, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _generators(terms, bound: int) -> set:
    gens = set()
    for t in terms:
        for u in subterms(t, bound):
            if isinstance(u, Prime) and not free_vars(u):
                gens.add(print_term(u))
    return gens


def _preorder(args, terms) -> Preorder:
    """The ``--preorder`` file, or the discrete preorder on the generators in ``terms``."""
    if args.preorder:
        return parse_preorder(_read(args.preorder))
    return Preorder.discrete(_generators(terms, getattr(args, "bound", 1) or 1))


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_obj(args, obj: dict, lines: list) -> None:
    if args.format == "json":
        _emit(args, json.dumps(obj, ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    else:
        _emit(args, "\n".join(lines) + "\n")


def _emit_derivation(args, d) -> None:
    if args.format == "json" or (args.output and args.output.endswith(".json")):
        _emit(args, derivation.dumps(d))
    else:
        _emit(args, derivation.format_tree(d) + "\n")


def _bound_of(d, given):
    if given is not None:
        return given
    for node in d.nodes():
        if node.family is not None:
            return node.family.bound
    return 2


def _derivation_terms(d) -> list:
    return [t for node in d.nodes() for t in node.conclusion.terms()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_decide(args) -> int:
    s = parse_sequent(args.sequent)
    p = _preorder(args, s.terms())
    ok = psc.decide_psc(p, s, args.bound)
    _emit_obj(
        args,
        {"sequent": print_sequent(s), "bound": args.bound, "derivable": ok},
        [f"{'derivable' if ok else 'not derivable'}: {print_sequent(s)}"],
    )
    return OK if ok else NO


def cmd_prove(args) -> int:
    s = parse_sequent(args.sequent)
    p = _preorder(args, s.terms())
    d = psc.prove_psc(p, s, args.bound)
    if d is None:
        sys.stderr.write(f"not derivable: {print_sequent(s)}\n")
        return NO
    _emit_derivation(args, d)
    return OK


def _load_derivation(path: str):
    try:
        return derivation.loads(_read(path))
    except (json.JSONDecodeError, ParseError, DerivationError, ValueError) as e:
        raise UsageError(f"{path}: {e}") from None


def _base_for(args, ds):
    if args.calculus == "n":
        return arith.N_BASE
    terms = [t for d in ds for t in _derivation_terms(d)]
    if args.preorder:
        return parse_preorder(_read(args.preorder)).closure
    return Preorder.discrete(_generators(terms, 1)).closure


def cmd_check(args) -> int:
    d = _load_derivation(args.derivation)
    bound = _bound_of(d, args.bound)
    base = _base_for(args, [d])
    problems = derivation.check_derivation(base, d, bound, allow_j=args.calculus == "n")
    _emit_obj(
        args,
        {
            "sequent": print_sequent(d.conclusion),
            "bound": bound,
            "valid": not problems,
            "problems": [str(p) for p in problems],
        },
        [f"valid: {print_sequent(d.conclusion)}"] if not problems else [str(p) for p in problems],
    )
    return NO if problems else OK


def cmd_cutelim(args) -> int:
    d1 = _load_derivation(args.left)
    d2 = _load_derivation(args.right)
    bound = args.bound if args.bound is not None else _bound_of(d1, _bound_of(d2, None))
    base = _base_for(args, [d1, d2])
    allow_j = args.calculus == "n"
    for name, d in ((args.left, d1), (args.right, d2)):
        problems = derivation.check_derivation(base, d, bound, allow_j)
        if problems:
            raise UsageError(f"{name} does not check: {problems[0]}")
    out = Transformer(base, bound, allow_j=allow_j).cut(d1, d2)
    _emit_derivation(args, out)
    return OK


def _split(query: str):
    if "|-" not in query:
        raise UsageError("query must have the form 'LEFT |- RIGHT'")
    left, right = query.split("|-", 1)
    return left.strip(), right.strip()


def cmd_free_sl(args) -> int:
    if args.query is None:
        p = _preorder(args, [])
        n = semilattice.enumerate_free_sl(p)
        _emit_obj(args, {"preorder": print_preorder(p), "elements": n}, [f"elements: {n}"])
        return OK
    left, right = _split(args.query)
    lt, rt = parse_term(left), parse_term(right)
    p = _preorder(args, [lt, rt])
    ok = semilattice.decide_sl(p, conjuncts(lt), conjuncts(rt))
    _emit_obj(args, {"query": args.query, "holds": ok}, [f"{'holds' if ok else 'fails'}: {args.query}"])
    return OK if ok else NO


def cmd_free_dl(args) -> int:
    if args.query is None:
        p = _preorder(args, [])
        n = dlat.enumerate_free_dl(p)
        _emit_obj(args, {"preorder": print_preorder(p), "elements": n}, [f"elements: {n}"])
        return OK
    left, right = _split(args.query)
    s, t = dlat.parse_dlterm(left), dlat.parse_dlterm(right)
    p = _preorder(args, [s, t])
    ok = dlat.decide_dl(p, s, t)
    _emit_obj(args, {"query": args.query, "holds": ok}, [f"{'holds' if ok else 'fails'}: {args.query}"])
    return OK if ok else NO


def cmd_nt_decide(args) -> int:
    s = parse_sequent(args.sequent, allow_free=True)
    prover = arith.n_prover(args.bound)
    d = prover.prove(s)
    ok = d is not None
    obj = {"sequent": print_sequent(s), "bound": args.bound, "derivable": ok}
    lines = [f"{'derivable' if ok else 'not derivable'}: {print_sequent(s)}"]
    if ok and args.show:
        obj["derivation"] = derivation.to_json_obj(d)
        lines.append(derivation.format_tree(d))
    _emit_obj(args, obj, lines)
    return OK if ok else NO


def cmd_nt_consistency(args) -> int:
    r = arith.consistency_check(args.bound, args.depth, representative=not args.all_primes)
    obj = {
        "bound": r.bound,
        "depth": r.depth,
        "consistent": r.consistent,
        "complete": r.complete,
        "universe_size": r.universe_size,
        "prime_count": r.full_prime_count,
        "primes_used": r.representative_primes,
        "queries": r.queries,
        "goals_explored": r.goals_explored,
        "witness": r.witness,
        "notes": r.notes,
    }
    if args.format == "json":
        _emit(args, json.dumps(obj, indent=1, sort_keys=True) + "\n")
    else:
        _emit(args, "\n".join(r.lines()) + "\n")
    return OK if r.consistent else NO


def cmd_models(args) -> int:
    ms = models.enumerate_psc(args.max_size, include_trivial=args.include_trivial)
    if args.sequent is None:
        if args.format == "json":
            obj = [
                {
                    "carrier": list(m.names),
                    "meet": m.meet.tolist(),
                    "pcomp": m.pcomp.tolist(),
                    "bottom": m.bottom,
                    "top": m.top,
                }
                for m in ms
            ]
            _emit(args, json.dumps(obj, indent=1) + "\n")
        else:
            _emit(args, "\n".join(models.print_model(m) for m in ms))
        return OK
    s = parse_sequent(args.sequent)
    p = _preorder(args, s.terms())
    hit = models.countermodel(ms, p, s, args.bound)
    if hit is None:
        _emit_obj(
            args,
            {"sequent": print_sequent(s), "refuted": False, "models": len(ms)},
            [f"valid in all {len(ms)} models: {print_sequent(s)}"],
        )
        return OK
    m, asg = hit
    named = {g: m.names[v] for g, v in sorted(asg.items())}
    _emit_obj(
        args,
        {"sequent": print_sequent(s), "refuted": True, "model": models.print_model(m), "assignment": named},
        [f"refuted: {print_sequent(s)}", models.print_model(m).rstrip(), "assignment: "
         + ", ".join(f"{g} = {v}" for g, v in named.items())],
    )
    return NO


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cutfree", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("-o", "--output", help="write the result to this file")
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--preorder", help="preorder file (default: discrete on the generators used)")
    bnd = argparse.ArgumentParser(add_help=False)
    bnd.add_argument("--bound", type=_positive, default=2, help="numerals 1..B for omega rules")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", parents=[common, pre, bnd], help="decide a sequent")
    p.add_argument("sequent")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("prove", parents=[common, pre, bnd], help="print a cut-free derivation")
    p.add_argument("sequent")
    p.set_defaults(func=cmd_prove)

    for name, func, files in (
        ("check", cmd_check, ("derivation",)),
        ("cutelim", cmd_cutelim, ("left", "right")),
    ):
        p = sub.add_parser(name, parents=[common, pre])
        for f in files:
            p.add_argument(f, help="derivation JSON file ('-' for stdin)")
        p.add_argument("--bound", type=_positive, default=None, help="default: from the derivation")
        p.add_argument("--calculus", choices=("psc", "n"), default="psc")
        p.set_defaults(func=func)

    for name, func in (("free-sl", cmd_free_sl), ("free-dl", cmd_free_dl)):
        p = sub.add_parser(name, parents=[common, pre])
        p.add_argument("query", nargs="?", help="'LEFT |- RIGHT'; omit to count elements")
        p.set_defaults(func=func)

    p = sub.add_parser("nt-decide", parents=[common, bnd], help="decide a sequent of calculus N")
    p.add_argument("sequent")
    p.add_argument("--show", action="store_true", help="include the derivation")
    p.set_defaults(func=cmd_nt_decide)

    p = sub.add_parser("nt-consistency", parents=[common, bnd], help="consistency harness for N")
    p.add_argument("--depth", type=int, choices=(0, 1, 2), default=2)
    p.add_argument("--all-primes", action="store_true", help="skip the representative reduction")
    p.set_defaults(func=cmd_nt_consistency)

    p = sub.add_parser("models", parents=[common, pre, bnd], help="list models or refute a sequent")
    p.add_argument("sequent", nargs="?")
    p.add_argument("--max-size", type=int, choices=(1, 2, 3, 4, 5), default=4)
    p.add_argument("--include-trivial", action="store_true")
    p.set_defaults(func=cmd_models)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code not in (0, None) else OK
    try:
        return args.func(args)
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
    except (
        UsageError,
        PreorderError,
        DerivationError,
        CutError,
        FreeVariableError,
        models.ModelError,
        arith.CalculusNError,
        dlat.DLTermError,
        SearchLimit,
    ) as e:
        sys.stderr.write(f"error: {e}\n")
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
