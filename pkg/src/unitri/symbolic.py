"""Symbolic expansion oracle: entries of word values at the generic
superdiagonal pair are exact integer multilinear polynomials; this
module expands them, reads off monomial coefficients, and verifies
multiplication-lemma applications together with their hypotheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .errors import BadIndex, BadOrder, HypothesisViolated, NotASummand, NotHomogeneous
from .matrices import UnipotentMatrix
from .rings import (
    Monomial,
    MultilinearPoly,
    PolyRing,
    get_term_cap,
    set_term_cap,
)
from .words import Comm, Gen, Inv, Prod, evaluate

POLY = PolyRing()


@dataclass(frozen=True)
class SymbolicPair:
    """A, B in U_n over the polynomial ring with superdiagonals
    (alpha_1..alpha_{n-1}) and (beta_1..beta_{n-1}), zeros above."""

    n: int
    A: UnipotentMatrix
    B: UnipotentMatrix


@cache
def symbolic_pair(n):
    a_entries = {(i, i + 1): MultilinearPoly.variable(i, "a")
                 for i in range(1, n)}
    b_entries = {(i, i + 1): MultilinearPoly.variable(i, "b")
                 for i in range(1, n)}
    return SymbolicPair(
        n,
        UnipotentMatrix.from_entries(n, POLY, a_entries),
        UnipotentMatrix.from_entries(n, POLY, b_entries),
    )


@cache
def _symbolic_value(w, n):
    pair = symbolic_pair(n)
    return evaluate(w, {"a": pair.A, "b": pair.B})


_FLAG = {"a": "a", "b": "b"}
_top_memo = {}


def top_entry(w):
    """The entry at distance weight(w), i.e. the (1, 1 + weight) entry
    of the word value, by the exact coset-calculus recursion.

    For U in gamma_r and V in gamma_s the (1, 1+r+s) entry of [U, V] is
    exactly U_{1,1+r} V_{1+r,1+r+s} - V_{1,1+s} U_{1+s,1+r+s}: writing
    U = I + N, V = I + M one has [U,V] - I = U^-1 V^-1 (NM - MN), and
    the correction factor cannot lower the corner entry.  Entries at
    distance equal to the weight are shift-invariant, so the recursion
    closes over top entries alone.  This is exact, not just modulo
    gamma_{r+s+1}.
    """
    got = _top_memo.get(id(w))
    if got is not None:
        return got[1]
    if isinstance(w, Gen):
        flag = _FLAG.get(w.name)
        if flag is None:
            raise BadIndex(f"generic pair has generators a, b; got {w.name}")
        out = MultilinearPoly.variable(1, flag)
    elif isinstance(w, Inv):
        out = top_entry(w.body) * -1
    elif isinstance(w, Prod):
        # at distance min(weights) only the lighter factor contributes;
        # on a tie the corners add
        wl, wr = w.left.weight, w.right.weight
        if wl < wr:
            out = top_entry(w.left)
        elif wr < wl:
            out = top_entry(w.right)
        else:
            out = top_entry(w.left) + top_entry(w.right)
    else:
        r, s = w.left.weight, w.right.weight
        pu, pv = top_entry(w.left), top_entry(w.right)
        out = pu * pv.shift(r) + (pv * pu.shift(s)) * -1
    _top_memo[id(w)] = (w, out)
    return out


def entry_poly(w, n, i, j, cap=None):
    """The (i, j) entry of the word value at the generic pair, as an
    exact MultilinearPoly with consecutive support [i, j-1].  Entries at
    distance weight(w) use the corner recursion; the rest fall back to
    full matrix evaluation at dimension j - i + 1."""
    if not (1 <= i < j <= n):
        raise BadIndex(f"need 1 <= i < j <= n, got ({i},{j}), n={n}")
    old = set_term_cap(cap) if cap is not None else None
    try:
        if j - i == w.weight and w.alphabet <= {"a", "b"}:
            if cap is None:
                return top_entry(w).shift(i - 1)
            # a cap must see the actual products, not memo hits
            global _top_memo
            saved, _top_memo = _top_memo, {}
            try:
                return top_entry(w).shift(i - 1)
            finally:
                _top_memo = saved
        # entries of unipotent word values only involve the block
        # [i..j], so evaluate at the minimal dimension and shift
        value = _symbolic_value(w, j - i + 1)
    finally:
        if old is not None:
            set_term_cap(old)
    v = value.entry(1, j - i + 1)
    if isinstance(v, int):
        assert v == 0
        return MultilinearPoly.zero(i, j - 1)
    assert (v.lo, v.hi) == (1, j - i), "entry support must be [1, j-i]"
    return v.shift(i - 1)


def monomial_coefficient(w, n, m, cap=None):
    """Coefficient of m in the top-right entry polynomial."""
    if (m.lo, m.hi) != (1, w.weight) or n != w.weight + 1:
        raise BadIndex(
            f"monomial support [{m.lo},{m.hi}] must be [1,{w.weight}] "
            f"with n = {w.weight + 1}"
        )
    return entry_poly(w, n, 1, n, cap=cap).coefficient(m)


@dataclass(frozen=True)
class MultiplicationWitness:
    monomial: Monomial
    coefficient: int
    confirmed: bool  # full expansion of the commutator was within cap


def multiplication_lemma_check(w, wp, m, mp, cap=None):
    """Verify one multiplication-lemma application: given summands m of
    [w]_{1,1+r} and m' of [w']_{1,1+s} with r >= s, check that no
    summand of [w']_{1,1+s} divides m, and return m * shift_r(m') as a
    certified summand of [[w, w']]_{1,1+r+s}."""
    r, s = w.weight, wp.weight
    if r < s:
        raise BadOrder(f"weight(w) = {r} < weight(w') = {s}")
    pw = entry_poly(w, r + 1, 1, r + 1, cap=cap)
    cm = pw.coefficient(m)
    if cm == 0:
        raise NotASummand(f"{m} is not a summand of the top entry of {w!r}")
    pwp = entry_poly(wp, s + 1, 1, s + 1, cap=cap)
    cmp_ = pwp.coefficient(mp)
    if cmp_ == 0:
        raise NotASummand(f"{mp} is not a summand of the top entry of {wp!r}")
    # a degree-s summand q divides the degree-r monomial m iff q equals
    # the first s choices of m
    prefix = m.mask & ((1 << s) - 1)
    for q, _ in pwp.monomials():
        if q.mask == prefix:
            raise HypothesisViolated(q)
    witness = Monomial(1, m.flags + mp.flags)
    expected = cm * cmp_
    confirmed = False
    try:
        comm_poly = entry_poly(Comm(w, wp), r + s + 1, 1, r + s + 1, cap=cap)
        actual = comm_poly.coefficient(witness)
        if actual != expected:
            raise AssertionError(
                f"multiplication lemma misfire: {actual} != {expected}"
            )
        confirmed = True
    except Exception as exc:
        from .errors import CapExceeded
        if not isinstance(exc, CapExceeded):
            raise
    return MultiplicationWitness(witness, expected, confirmed)


def alpha_count_homogeneous(w, n, cap=None):
    """Common alpha count of all summands of the top-right entry, or
    raise NotHomogeneous with a violating pair.  Returns None for the
    zero polynomial."""
    poly = entry_poly(w, n, 1, n, cap=cap)
    if poly.is_zero():
        return None
    count = None
    first = None
    for mono, _ in poly.monomials():
        c = mono.alpha_count()
        if count is None:
            count, first = c, mono
        elif c != count:
            raise NotHomogeneous(first, mono)
    return count
