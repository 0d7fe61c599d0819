"""Batch command-line surface.  Every subcommand prints one JSON
document to stdout (stable key order, version field included) and
communicates success through the exit code:

    0  success / verified / target found
    1  verification failed or search target not reached
    2  invalid input
    3  resource cap exceeded

Set UNITRI_THREADS to cap BLAS worker threads (0 = library default).
"""

from __future__ import annotations

import argparse
import json
import os
import sys


def _configure_threads():
    want = os.environ.get("UNITRI_THREADS")
    if want and want != "0":
        for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, want)


_configure_threads()

from . import __version__  # noqa: E402
from .errors import CapExceeded, UnitriError  # noqa: E402


def _emit(payload):
    payload = {"version": __version__, **payload}
    print(json.dumps(payload, indent=2))


def _named_word(name):
    from .words import (build_two_gen_word, build_w, from_sexpr, word_c5,
                        word_c10, word_c21_triple)
    if name.startswith("("):
        return from_sexpr(name)
    fixed = {"c5": word_c5, "c10": word_c10,
             "c21": lambda: word_c21_triple()[0],
             "c21p": lambda: word_c21_triple()[1],
             "c21pp": lambda: word_c21_triple()[2]}
    if name in fixed:
        return fixed[name]()
    kind, _, arg = name.partition(":")
    if kind == "two-gen" and arg:
        return build_two_gen_word(int(arg))
    if kind == "three-gen" and arg:
        return build_w(int(arg))
    raise ValueError(
        f"unknown word {name!r} (use c5, c10, c21, c21p, c21pp, "
        f"two-gen:D, three-gen:D, or an s-expression)")


def _cmd_construct(args):
    from .constructions import three_gen_triple, two_gen_pair
    from .rings import ring_from_spec
    from .serialize import witness_to_json
    ring = ring_from_spec(args.ring)
    if args.family == "three-gen":
        rst = tuple(int(x) for x in args.rst.split(","))
        if len(rst) != 3:
            raise ValueError("--rst wants r,s,t")
        wit = three_gen_triple(args.d, ring, rst)
    else:
        wit = two_gen_pair(args.d, ring, variant=args.variant)
    obj = witness_to_json(wit)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")
    _emit({"witness": obj})
    return 0


def _cmd_verify(args):
    from .serialize import verify_witness
    with open(args.witness) as fh:
        obj = json.load(fh)
    failures = verify_witness(obj)
    _emit({"verified": not failures, "failures": failures,
           "kind": obj.get("kind"), "d": obj.get("d"), "n": obj.get("n")})
    return 0 if not failures else 1


def _cmd_expand(args):
    from .symbolic import entry_poly
    word = _named_word(args.word)
    i, j = (int(x) for x in args.entry.split(","))
    poly = entry_poly(word, args.n, i, j, cap=args.cap)
    terms = poly.to_text().splitlines() if not poly.is_zero() else []
    _emit({"word": args.word, "n": args.n, "entry": [i, j],
           "nterms": len(terms), "terms": terms})
    return 0


def _cmd_coeff(args):
    from .rings import Monomial
    from .symbolic import monomial_coefficient
    word = _named_word(args.word)
    mono = Monomial.parse(args.monomial)
    n = args.n if args.n else word.weight + 1
    coeff = monomial_coefficient(word, n, mono, cap=args.cap)
    _emit({"word": args.word, "monomial": str(mono), "coefficient": coeff})
    return 0


def _cmd_search(args):
    from .explorer import search_pairs
    from .serialize import report_to_json
    include = ()
    if args.include_witness:
        from .serialize import matrix_from_json
        with open(args.include_witness) as fh:
            obj = json.load(fh)
        mats = [matrix_from_json(m) for m in obj["matrices"]]
        include = [tuple(mats[:2])]
    rep = search_pairs(args.n, args.p, mode=args.mode, samples=args.samples,
                       target_depth=args.target, seed=args.seed,
                       include=include)
    _emit({"report": report_to_json(rep)})
    return 0 if rep.found() else 1


def _cmd_series(args):
    from .explorer import closure, derived_series
    from .serialize import matrix_from_json
    with open(args.gens) as fh:
        objs = json.load(fh)
    gens = [matrix_from_json(o) for o in objs]
    for g in gens:
        if g.ring.kind != "fp" or g.ring.p != args.p:
            raise ValueError(f"generator ring does not match --p {args.p}")
    series = derived_series(closure(gens, cap=args.cap), cap=args.cap)
    _emit({"n": gens[0].n, "p": args.p,
           "orders": [G.order for G in series],
           "derived_length": len(series) - 1})
    return 0


def _cmd_proportion(args):
    from .constructions import proportion_good
    frac = proportion_good(args.N)
    _emit({"N": args.N, "num": frac.numerator, "den": frac.denominator})
    return 0


def _parser():
    top = argparse.ArgumentParser(
        prog="unitri",
        description="exact constructions of small-generator subgroups of "
                    "U_n with maximal derived length")
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a certified witness")
    c.add_argument("family", choices=["three-gen", "two-gen"])
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--ring", default="int", help="fp:p or int (default int)")
    c.add_argument("--rst", default="1,0,0",
                   help="base exponents r,s,t (three-gen only)")
    c.add_argument("--variant", type=int, default=0,
                   help="triple member for two-gen d >= 5 (0, 1, 2)")
    c.add_argument("--out", help="also write the witness JSON to a file")
    c.set_defaults(run=_cmd_construct)

    v = sub.add_parser("verify", help="re-verify a witness file")
    v.add_argument("--witness", required=True)
    v.set_defaults(run=_cmd_verify)

    e = sub.add_parser("expand", help="expand an entry polynomial")
    e.add_argument("--word", required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--entry", required=True, help="i,j (1-based)")
    e.add_argument("--cap", type=int, default=None)
    e.set_defaults(run=_cmd_expand)

    k = sub.add_parser("coeff", help="coefficient of a monomial")
    k.add_argument("--word", required=True)
    k.add_argument("--monomial", required=True, help="e.g. aabab or aabab@1")
    k.add_argument("--n", type=int, default=None)
    k.add_argument("--cap", type=int, default=None)
    k.set_defaults(run=_cmd_coeff)

    s = sub.add_parser("search", help="pair search for a derived length")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--mode", choices=["exhaustive", "random"],
                   default="random")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--target", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--include-witness",
                   help="witness file whose pair is checked first")
    s.set_defaults(run=_cmd_search)

    d = sub.add_parser("series", help="derived series of a closure")
    d.add_argument("--gens", required=True, help="JSON list of matrices")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--cap", type=int, default=2**20)
    d.set_defaults(run=_cmd_series)

    pr = sub.add_parser("proportion", help="proportion of good dimensions")
    pr.add_argument("--N", type=int, required=True)
    pr.set_defaults(run=_cmd_proportion)
    return top


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return args.run(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except (UnitriError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
