import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from unitri.errors import CapExceeded, IntervalMismatch, SingularBaseCase
from unitri.rings import (
    ZZ,
    Fp,
    Monomial,
    MultilinearPoly,
    ring_from_json,
    ring_from_spec,
    ring_to_json,
    set_term_cap,
    solve_circulant,
)


def test_monomial_basics():
    m = Monomial.parse("aabab@1")
    assert (m.lo, m.hi, m.degree) == (1, 5, 5)
    assert m.alpha_count() == 3
    assert m.subscripts("a") == [1, 2, 4]
    assert m.subscripts("b") == [3, 5]
    assert str(m) == "aabab@1"
    assert Monomial.parse("aabab") == m  # @1 implied
    assert m.shift(6).subscripts("b") == [9, 11]


def test_monomial_mask_roundtrip():
    m = Monomial(3, "babba")
    assert Monomial.from_mask(3, 5, m.mask) == m


def _poly(lo, flags_coeffs):
    out = None
    for flags, c in flags_coeffs:
        p = MultilinearPoly.from_monomial(Monomial(lo, flags), c)
        out = p if out is None else out + p
    return out


def test_poly_add_mul():
    p = _poly(1, [("ab", 2), ("ba", -1)])
    q = _poly(3, [("a", 1), ("b", 5)])
    r = p * q  # adjacent intervals concatenate
    assert r.coefficient(Monomial(1, "aba")) == 2
    assert r.coefficient(Monomial(1, "abb")) == 10
    assert r.coefficient(Monomial(1, "bab")) == -5
    assert (r.lo, r.hi) == (1, 3)
    # either order of adjacency
    assert q * p == r


def test_poly_interval_errors():
    p = _poly(1, [("ab", 1)])
    q = _poly(4, [("ab", 1)])
    with pytest.raises(IntervalMismatch):
        _ = p + q
    with pytest.raises(IntervalMismatch):
        _ = p * q  # gap between 2 and 4


def test_poly_eval01():
    p = _poly(1, [("aabab", -1), ("aabba", 1)])
    ones = [(1, "a"), (2, "a"), (3, "b"), (4, "a"), (5, "b")]
    assert p.eval01(ones) == -1


def test_poly_text_roundtrip():
    p = _poly(2, [("abba", 7), ("baba", -3)])
    assert MultilinearPoly.from_text(p.to_text()) == p


def test_term_cap():
    old = set_term_cap(4)
    try:
        p = _poly(1, [("a", 1), ("b", 1)])
        q = _poly(2, [("a", 1), ("b", 1)])
        r = _poly(3, [("a", 1), ("b", 1)])
        with pytest.raises(CapExceeded):
            _ = (p * q) * r  # 8 terms > 4
    finally:
        set_term_cap(old)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(-5, 5)), max_size=6),
       st.lists(st.tuples(st.integers(0, 7), st.integers(-5, 5)), max_size=6))
def test_poly_ring_laws(ta, tb):
    def mk(ts):
        p = MultilinearPoly.zero(1, 3)
        for mask, c in ts:
            p = p + MultilinearPoly.from_monomial(
                Monomial.from_mask(1, 3, mask), c)
        return p
    p, q = mk(ta), mk(tb)
    assert p + q == q + p
    s = MultilinearPoly.from_monomial(Monomial(4, "ab"))
    assert (p + q) * s == p * s + q * s


def test_solve_circulant():
    assert solve_circulant(1, 0, 0, 0) == (1, 0, 0)
    assert solve_circulant(1, 1, 0, 5) == (3, 3, 2)
    a, b, c = solve_circulant(2, 1, 0, 0)
    assert (a, b, c) == (Fraction(4, 9), Fraction(1, 9), Fraction(-2, 9))
    assert 2 * a + b == 1
    with pytest.raises(SingularBaseCase):
        solve_circulant(1, 1, 1, 0)  # r^3+s^3+t^3-3rst = 0
    with pytest.raises(SingularBaseCase):
        solve_circulant(1, 1, 0, 2)  # det = 2 vanishes mod 2


def test_ring_specs():
    assert ring_from_spec("int") is ZZ
    assert ring_from_spec("fp:7") == Fp(7)
    with pytest.raises(Exception):
        Fp(6)  # not prime
    for ring in (ZZ, Fp(3)):
        assert ring_from_json(ring_to_json(ring)) == ring
