import numpy as np
import pytest

from unitri.errors import BadDimension, BadIndex, LevelOverflow, Mismatch
from unitri.matrices import (
    CosetPattern,
    UnipotentMatrix,
    commutator,
    coset_commutator,
    gamma_index,
    invert,
    lift_pi,
    multiply,
    power,
    project_pi,
    random_unipotent,
    transvection,
)
from unitri.rings import ZZ, Fp, PolyRing

RINGS = [Fp(2), Fp(3), Fp(5), ZZ]


def test_transvection_relations():
    for ring in RINGS:
        x12 = transvection(4, 1, 2, ring)
        x23 = transvection(4, 2, 3, ring)
        assert commutator(x12, x23) == transvection(4, 1, 3, ring)
        # disjoint transvections commute
        x34 = transvection(4, 3, 4, ring)
        assert commutator(x12, x34) == UnipotentMatrix.identity(4, ring)


def test_entry_indexing():
    m = transvection(3, 1, 3, ZZ, value=7)
    assert m.entry(1, 3) == 7
    assert m.entry(2, 2) == 1
    assert m.entry(3, 1) == 0
    with pytest.raises(BadIndex):
        m.entry(0, 1)
    with pytest.raises(BadIndex):
        transvection(3, 2, 2, ZZ)


def test_group_laws_randomized():
    rng = np.random.default_rng(11)
    for ring in RINGS:
        for _ in range(10):
            n = int(rng.integers(2, 7))
            a = random_unipotent(n, ring, rng)
            b = random_unipotent(n, ring, rng)
            c = random_unipotent(n, ring, rng)
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
            assert multiply(a, invert(a)) == UnipotentMatrix.identity(n, ring)
            assert multiply(invert(a), a) == UnipotentMatrix.identity(n, ring)


def test_power():
    x = transvection(5, 1, 2, ZZ)
    y = transvection(5, 2, 3, ZZ, value=2)
    m = multiply(x, y)
    acc = UnipotentMatrix.identity(5, ZZ)
    for e in range(5):
        assert power(m, e) == acc
        acc = multiply(acc, m)
    assert power(m, -2) == invert(power(m, 2))


def test_mismatched_operands():
    with pytest.raises(Mismatch):
        multiply(transvection(3, 1, 2, ZZ), transvection(4, 1, 2, ZZ))
    with pytest.raises(Mismatch):
        multiply(transvection(3, 1, 2, ZZ), transvection(3, 1, 2, Fp(2)))


def test_gamma_index():
    assert gamma_index(UnipotentMatrix.identity(4, ZZ)) == 4
    assert gamma_index(transvection(6, 2, 5, ZZ)) == 3
    assert gamma_index(transvection(6, 1, 2, ZZ)) == 1


def test_project_lift_roundtrip():
    rng = np.random.default_rng(5)
    for ring in (Fp(3), ZZ):
        a = random_unipotent(3, ring, rng)
        b = random_unipotent(3, ring, rng)
        lam, rho = project_pi(lift_pi(a, b))
        assert (lam, rho) == (a, b)
    with pytest.raises(BadDimension):
        project_pi(UnipotentMatrix.identity(4, ZZ))


def test_int64_overflow_fallback():
    # entries near 2^40: one product certifies in int64, the square
    # overflows into the object path; both must agree with exact ints
    big = 1 << 40
    a = UnipotentMatrix.from_entries(3, ZZ, {(1, 2): big, (2, 3): big})
    sq = multiply(a, a)
    assert sq.entry(1, 3) == big * big
    assert sq.entry(1, 2) == 2 * big
    quad = multiply(sq, sq)
    assert quad.entry(1, 3) == 6 * big * big


def test_poly_ring_matmul_against_int():
    # evaluate a symbolic product at an integer point and compare with
    # the direct integer product
    from unitri.rings import Monomial, MultilinearPoly
    poly = PolyRing()
    n = 4
    a = UnipotentMatrix.from_entries(
        n, poly, {(i, i + 1): MultilinearPoly.variable(i, "a")
                  for i in range(1, n)})
    b = UnipotentMatrix.from_entries(
        n, poly, {(i, i + 1): MultilinearPoly.variable(i, "b")
                  for i in range(1, n)})
    symb = multiply(multiply(invert(a), b), a)
    point = {1: "a", 2: "b", 3: "a"}
    ones = list(point.items())
    ai = UnipotentMatrix.from_entries(
        n, ZZ, {(i, i + 1): 1 if point[i] == "a" else 0 for i in range(1, n)})
    bi = UnipotentMatrix.from_entries(
        n, ZZ, {(i, i + 1): 1 if point[i] == "b" else 0 for i in range(1, n)})
    conc = multiply(multiply(invert(ai), bi), ai)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = symb.entry(i, j)
            want = conc.entry(i, j)
            if isinstance(v, int):
                assert v == want
            else:
                full = [(s, point.get(s, "a")) for s in range(v.lo, v.hi + 1)]
                assert v.eval01(full) == want


def test_coset_pattern_validation():
    with pytest.raises(LevelOverflow):
        CosetPattern(4, 4, ())
    with pytest.raises(Mismatch):
        CosetPattern(4, 2, (1,))
    s = CosetPattern(5, 2, (1, 0, 2))
    assert s.representative(ZZ).entry(3, 5) == 2
    with pytest.raises(LevelOverflow):
        coset_commutator(CosetPattern(5, 2, (1, 0, 2)),
                         CosetPattern(5, 3, (1, 1)), ZZ)


def test_coset_commutator_small():
    # [X_{1,2}, X_{2,3}] = X_{1,3}: patterns (1,0) level 1 and (0,1)
    s = CosetPattern(3, 1, (1, 0))
    t = CosetPattern(3, 1, (0, 1))
    out = coset_commutator(s, t, ZZ)
    assert out.r == 2 and out.tau == (1,)


def test_coset_oracle_equivalence_randomized():
    rng = np.random.default_rng(17)
    for _ in range(200):
        n = int(rng.integers(3, 9))
        ring = [Fp(2), Fp(3), Fp(5), ZZ][int(rng.integers(0, 4))]
        r = int(rng.integers(1, n - 1))
        s_lev = int(rng.integers(1, n - r))
        def tau(level):
            if ring.kind == "fp":
                return tuple(int(rng.integers(0, ring.p))
                             for _ in range(n - level))
            return tuple(int(rng.integers(-4, 5)) for _ in range(n - level))
        sp = CosetPattern(n, r, tau(r))
        tp = CosetPattern(n, s_lev, tau(s_lev))
        want = coset_commutator(sp, tp, ring)
        got = commutator(sp.representative(ring), tp.representative(ring))
        diag = tuple(got.entry(i, i + want.r) for i in range(1, n - want.r + 1))
        assert diag == want.tau
