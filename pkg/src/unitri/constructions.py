"""Certified generator sets of maximal derived length: the
three-generator triples for every d, the two-generator pairs for
d = 3..12 with their tracked monomials, and the exact proportion of
dimensions admitting a maximal-length 2-generated subgroup.

Every builder re-verifies its witness by independent evaluation before
returning; a failure raises ConstructionBug and means the code is
wrong, not the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .errors import ConstructionBug, DistinctnessViolated, SingularBaseCase, Unsupported
from .matrices import UnipotentMatrix, lift_pi, transvection
from .rings import ZZ, Monomial, solve_circulant
from .words import (
    Word,
    build_two_gen_word,
    build_w,
    build_w_triple,
    evaluate,
    evaluate_many,
)

# Tracked monomials of the base constructions, oracle-verified against
# full expansion of the corresponding top-right entry polynomials
# (see tests): coefficient of M5 in c5 is -1, of M10 in c10 is +1, and
# of M21/M21P/M21PP in the weight-21 triple is -1/+1/-1.
M5 = "aabab"
M10 = "bbaab" + "aabba"
M21 = "aaabba" + "aabba" + M10
M21P = "aabbba" + "aabba" + M10
M21PP = "bbbaab" + "aabba" + M10


# ---------------------------------------------------------------------------
# Three-generator triples (the corner-homomorphism recursion)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TripleWitness:
    d: int
    n: int
    A: UnipotentMatrix
    B: UnipotentMatrix
    C: UnipotentMatrix
    w: Word
    base_exponents: tuple

    @property
    def matrices(self):
        return (self.A, self.B, self.C)


_X_CYCLE = {"x1": "x3", "x2": "x1", "x3": "x2"}


def _verify_triple(wit):
    n, ring = wit.n, wit.A.ring
    assignment = {"x1": wit.A, "x2": wit.B, "x3": wit.C}
    # w(B,C,A) and w(C,A,B) equal (w o sigma^2)(A,B,C) and
    # (w o sigma)(A,B,C); evaluating the rotated words in one session
    # reuses all the shared subtree values
    w0, w1, w2 = build_w_triple(wit.d, wit.base_exponents)
    ident = UnipotentMatrix.identity(n, ring)
    checks = zip(
        evaluate_many([w0, w2, w1], assignment),
        [transvection(n, 1, n, ring), ident, ident],
    )
    for got, want in checks:
        if got != want:
            raise ConstructionBug(
                f"triple witness failed re-verification at d={wit.d}"
            )
    if wit.w.depth < wit.d - 1:
        raise ConstructionBug(f"depth certificate {wit.w.depth} < {wit.d - 1}")


def three_gen_triple(d, ring=ZZ, base_exponents=(1, 0, 0)):
    """Generators (A, B, C) of a subgroup of U_n, n = 2^(d-1)+1, with
    derived length d, together with the word w of depth d-1 satisfying
    w(A,B,C) = X_{1,n} and cyclically w(B,C,A) = w(C,A,B) = I."""
    if d < 1:
        raise Unsupported(f"d = {d} < 1")
    r, s, t = base_exponents
    p = ring.p if ring.kind == "fp" else 0
    ea, eb, ec = solve_circulant(r, s, t, p)
    if p == 0:
        # over Z the base matrices need integer exponents
        if any(x.denominator != 1 for x in (ea, eb, ec)):
            raise SingularBaseCase(
                f"base {base_exponents} has no integral solution over Z"
            )
        ea, eb, ec = int(ea), int(eb), int(ec)
    mats = [
        UnipotentMatrix.from_entries(2, ring, {(1, 2): e}) for e in (ea, eb, ec)
    ]
    for _ in range(d - 1):
        a, b, c = mats
        mats = [lift_pi(a, b), lift_pi(b, c), lift_pi(c, a)]
    w = build_w(d, base_exponents)
    wit = TripleWitness(d, 2 ** (d - 1) + 1, *mats, w, tuple(base_exponents))
    _verify_triple(wit)
    return wit


# ---------------------------------------------------------------------------
# Monomial bookkeeping for the two-generator recursion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialTriple:
    """The three tracked monomials at a level of the cyclic recursion,
    each a certified summand of the top-right entry of its word, with
    the certifying sign (its coefficient)."""

    level: int
    monos: tuple  # three (Monomial, sign) pairs

    @property
    def alpha_counts(self):
        return tuple(m.alpha_count() for m, _ in self.monos)


def _check_distinct(trip):
    counts = trip.alpha_counts
    if len({c % 3 for c in counts}) != 3:
        raise DistinctnessViolated(
            f"alpha counts {counts} not distinct mod 3 at level {trip.level}"
        )
    return trip


def monomial_recursion(level, steps=None):
    """The monomial triple after `steps` applications of the cyclic rule
    (m, m', m'') -> (m' psi(m''), m'' psi(m), m psi(m')), starting from
    the weight-21 triple.  Signs multiply; pairwise distinctness of the
    alpha counts mod 3 is checked at every level, since it is what
    certifies each new monomial as a genuine summand."""
    if steps is None:
        steps = level - 5
    if level != 5 + steps or steps < 0:
        raise Unsupported(f"need level = 5 + steps >= 5, got {level}, {steps}")
    trip = _check_distinct(MonomialTriple(5, (
        (Monomial.parse(M21), -1),
        (Monomial.parse(M21P), +1),
        (Monomial.parse(M21PP), -1),
    )))
    for _ in range(steps):
        (m, cs), (mp, cps), (mpp, cpps) = trip.monos
        w = m.degree
        trip = _check_distinct(MonomialTriple(trip.level + 1, (
            (Monomial(1, mp.flags + mpp.flags), cps * cpps),
            (Monomial(1, mpp.flags + m.flags), cpps * cs),
            (Monomial(1, m.flags + mp.flags), cs * cps),
        )))
        assert trip.monos[0][0].degree == 2 * w
    return trip


# ---------------------------------------------------------------------------
# Two-generator pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairWitness:
    d: int
    n: int
    A: UnipotentMatrix
    B: UnipotentMatrix
    word: Word
    tracked_monomial: Monomial
    sign: int

    @property
    def matrices(self):
        return (self.A, self.B)


def _pair_matrices(mono, ring):
    """0/1-superdiagonal matrices reading off the tracked monomial:
    A carries the alpha subscripts, B the beta subscripts."""
    n = mono.degree + 1
    a = UnipotentMatrix.from_entries(
        n, ring, {(i, i + 1): 1 for i in mono.subscripts("a")})
    b = UnipotentMatrix.from_entries(
        n, ring, {(i, i + 1): 1 for i in mono.subscripts("b")})
    return a, b


def _verify_pair(wit):
    n, ring = wit.n, wit.A.ring
    got = evaluate(wit.word, {"a": wit.A, "b": wit.B})
    want = transvection(n, 1, n, ring, value=wit.sign)
    if got != want:
        raise ConstructionBug(f"pair witness failed re-verification at d={wit.d}")
    if wit.word.depth < wit.d - 1 or wit.word.weight != n - 1:
        raise ConstructionBug(
            f"certificates (depth {wit.word.depth}, weight {wit.word.weight}) "
            f"wrong for d={wit.d}, n={n}"
        )


def two_gen_pair(d, ring=ZZ, variant=0):
    """Generators (A, B) of a 2-generated subgroup of U_n of derived
    length d, n = 6, 11, 22, then 21*2^(d-5)+1, with the evaluated word
    and tracked monomial.  `variant` selects a primed triple member for
    d >= 5; the designated output is variant 0."""
    if not 3 <= d <= 12:
        raise Unsupported(f"d = {d} outside [3, 12]")
    if d == 3:
        mono, sign = Monomial.parse(M5), -1
    elif d == 4:
        mono, sign = Monomial.parse(M10), +1
    else:
        mono, sign = monomial_recursion(d).monos[variant]
    word = build_two_gen_word(d, variant if d >= 5 else 0)
    a, b = _pair_matrices(mono, ring)
    wit = PairWitness(d, mono.degree + 1, a, b, word, mono, sign)
    _verify_pair(wit)
    return wit


# ---------------------------------------------------------------------------
# Proportion of good dimensions
# ---------------------------------------------------------------------------

def proportion_good(N):
    """Exact fraction of n <= N admitting a 2-generated subgroup of U_n
    of maximal derived length, i.e. with 32n > 21*2^ceil(log2 n).
    Integer arithmetic throughout."""
    if N < 1:
        raise Unsupported(f"N = {N} < 1")
    good = 0
    d = 0
    lo = 1  # current dyadic block is (lo, 2^d] except d=0 -> {1}
    while lo <= N:
        hi = min(1 << d, N)
        # n in the block is good iff 32n > 21*2^d iff n > 21*2^d // 32
        threshold = (21 << d) >> 5
        start = max(lo, threshold + 1)
        if hi >= start:
            good += hi - start + 1
        lo = (1 << d) + 1
        d += 1
    return Fraction(good, N)
