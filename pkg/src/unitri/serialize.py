"""JSON interchange for matrices, construction witnesses, and search
reports.  Values are decimal strings, indices 1-based; a witness file
contains everything an independent implementation needs to re-verify
the construction."""

from __future__ import annotations

import json

from .constructions import PairWitness, TripleWitness
from .errors import Mismatch
from .matrices import UnipotentMatrix, transvection
from .rings import Monomial, ring_from_json, ring_to_json
from .words import evaluate, from_sexpr, substitute, to_sexpr


def matrix_to_json(mat):
    entries = [[i, j, str(v)] for (i, j), v in mat.strict_upper_items()]
    return {"n": mat.n, "ring": ring_to_json(mat.ring), "entries": entries}


def matrix_from_json(obj):
    ring = ring_from_json(obj["ring"])
    entries = {(i, j): int(v) for i, j, v in obj["entries"]}
    return UnipotentMatrix.from_entries(obj["n"], ring, entries)


def witness_to_json(wit):
    if isinstance(wit, TripleWitness):
        return {
            "kind": "triple",
            "d": wit.d,
            "n": wit.n,
            "ring": ring_to_json(wit.A.ring),
            "matrices": [matrix_to_json(m) for m in wit.matrices],
            "word": to_sexpr(wit.w),
            "monomial": None,
            "sign": 1,
            "base_exponents": list(wit.base_exponents),
        }
    if isinstance(wit, PairWitness):
        return {
            "kind": "pair",
            "d": wit.d,
            "n": wit.n,
            "ring": ring_to_json(wit.A.ring),
            "matrices": [matrix_to_json(m) for m in wit.matrices],
            "word": to_sexpr(wit.word),
            "monomial": str(wit.tracked_monomial),
            "sign": wit.sign,
        }
    raise Mismatch(f"not a witness: {wit!r}")


_ROTATE = {"x1": "x2", "x2": "x3", "x3": "x1"}


def verify_witness(obj):
    """Independent re-check of a witness JSON object; returns a list of
    failure descriptions (empty = verified).  Shares only the matrix
    kernel with the builders."""
    failures = []
    ring = ring_from_json(obj["ring"])
    mats = [matrix_from_json(m) for m in obj["matrices"]]
    word = from_sexpr(obj["word"])
    n = obj["n"]
    for m in mats:
        if m.n != n:
            return [f"matrix dimension {m.n} != n = {n}"]
    if obj["kind"] == "triple":
        a, b, c = mats
        if evaluate(word, {"x1": a, "x2": b, "x3": c}) != transvection(
                n, 1, n, ring):
            failures.append("w(A,B,C) != X_{1,n}")
        ident = UnipotentMatrix.identity(n, ring)
        rot = substitute(word, _ROTATE)  # w(B,C,A) as a word in (A,B,C)
        if evaluate(rot, {"x1": a, "x2": b, "x3": c}) != ident:
            failures.append("w(B,C,A) != I")
        if evaluate(substitute(rot, _ROTATE), {"x1": a, "x2": b, "x3": c}) \
                != ident:
            failures.append("w(C,A,B) != I")
    elif obj["kind"] == "pair":
        a, b = mats
        mono = Monomial.parse(obj["monomial"])
        sign = obj["sign"]
        if sign not in (1, -1):
            failures.append(f"sign {sign} not +-1")
        if a.superdiagonal() != tuple(
                1 if c == "a" else 0 for c in mono.flags):
            failures.append("A superdiagonal does not match the monomial")
        if b.superdiagonal() != tuple(
                1 if c == "b" else 0 for c in mono.flags):
            failures.append("B superdiagonal does not match the monomial")
        if word.weight != n - 1 or word.depth < obj["d"] - 1:
            failures.append("word certificates do not match d, n")
        if evaluate(word, {"a": a, "b": b}) != transvection(
                n, 1, n, ring, value=sign):
            failures.append("word evaluation != X_{1,n}^sign")
    else:
        failures.append(f"unknown witness kind {obj['kind']!r}")
    return failures


def report_to_json(rep):
    return {
        "n": rep.n,
        "p": rep.p,
        "mode": rep.mode,
        "samples": rep.samples,
        "seed": rep.seed,
        "target_depth": rep.target_depth,
        "max_derived_length": rep.max_derived_length,
        "witness": (None if rep.witness is None
                    else [matrix_to_json(m) for m in rep.witness]),
        "note": rep.note,
    }


def dump(obj, fh=None):
    text = json.dumps(obj, indent=2, sort_keys=False)
    if fh is None:
        return text
    fh.write(text + "\n")
