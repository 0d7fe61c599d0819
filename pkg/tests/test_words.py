import pytest

from unitri.errors import BadSubstitution, Mismatch, TooShort, Unsupported
from unitri.matrices import (
    UnipotentMatrix,
    invert,
    multiply,
    power,
    transvection,
)
from unitri.rings import ZZ, Fp
from unitri.words import (
    Comm,
    Gen,
    Inv,
    Prod,
    build_two_gen_word,
    build_w,
    build_w_triple,
    evaluate,
    evaluate_many,
    from_sexpr,
    gen_power,
    left_normed,
    substitute,
    to_sexpr,
    two_gen_word_triple,
    word_c5,
    word_c10,
    word_c21_triple,
)


def test_certificates_of_families():
    assert (word_c5().weight, word_c5().depth) == (5, 2)
    assert (word_c10().weight, word_c10().depth) == (10, 3)
    for w in word_c21_triple():
        assert (w.weight, w.depth) == (21, 4)
    for d in range(3, 10):
        w = build_two_gen_word(d)
        assert w.weight == (21 * 2 ** (d - 5) if d >= 5 else (5, 10)[d - 3])
        assert w.depth >= d - 1
    for d in range(1, 8):
        w = build_w(d)
        assert w.weight == 2 ** (d - 1)
        assert w.depth == d - 1
    with pytest.raises(Unsupported):
        build_two_gen_word(2)
    with pytest.raises(Unsupported):
        build_two_gen_word(13)


def test_left_normed():
    w = left_normed("baa")
    assert w == Comm(Comm(Gen("b"), Gen("a")), Gen("a"))
    with pytest.raises(TooShort):
        left_normed("b")


def test_structural_equality():
    assert Comm(Gen("a"), Gen("b")) == Comm(Gen("a"), Gen("b"))
    assert Comm(Gen("a"), Gen("b")) != Comm(Gen("b"), Gen("a"))
    assert hash(word_c5()) == hash(Comm(left_normed("baa"), left_normed("ba")))


def test_substitute():
    w = Comm(Gen("x1"), Gen("x2"))
    assert substitute(w, {"x1": "x2", "x2": "x1"}) == Comm(Gen("x2"), Gen("x1"))
    with pytest.raises(BadSubstitution):
        substitute(w, {"x1": "x2"})


def test_sexpr_roundtrip():
    assert to_sexpr(word_c5()) == "(comm (comm b a a) (comm b a))"
    for w in [word_c5(), word_c10(), build_w(3),
              Prod(Inv(Gen("a")), gen_power("b", 3))]:
        assert from_sexpr(to_sexpr(w)) == w
    with pytest.raises(ValueError):
        from_sexpr("(comm a)")
    with pytest.raises(ValueError):
        from_sexpr("(frob a b)")


def test_evaluate_simple():
    for ring in (ZZ, Fp(3)):
        a = transvection(3, 1, 2, ring)
        b = transvection(3, 2, 3, ring)
        got = evaluate(Comm(Gen("a"), Gen("b")), {"a": a, "b": b})
        assert got == transvection(3, 1, 3, ring)
        assert evaluate(Inv(Gen("a")), {"a": a}) == invert(a)
        assert evaluate(Prod(Gen("a"), Gen("b")), {"a": a, "b": b}) \
            == multiply(a, b)


def test_evaluate_validation():
    a = transvection(3, 1, 2, ZZ)
    with pytest.raises(Mismatch):
        evaluate(Comm(Gen("a"), Gen("b")), {"a": a})
    with pytest.raises(Mismatch):
        evaluate(Gen("a"), {"a": a, "b": transvection(4, 1, 2, ZZ)})


def test_u6_word_identities():
    # A = X12 X56, B = X23 X34^-1 X45; two identities in U_6(Z)
    # exactly over the integers
    A = multiply(transvection(6, 1, 2, ZZ), transvection(6, 5, 6, ZZ))
    B = multiply(
        multiply(transvection(6, 2, 3, ZZ),
                 invert(transvection(6, 3, 4, ZZ))),
        transvection(6, 4, 5, ZZ))
    asn = {"a": A, "b": B}
    w1 = Comm(left_normed("bab"), left_normed("ba"))
    assert evaluate(w1, asn) == power(transvection(6, 1, 6, ZZ), 2)
    w2 = Comm(left_normed("baa"), left_normed("ba"))
    assert evaluate(w2, asn) == UnipotentMatrix.identity(6, ZZ)


def test_build_w_triple_sharing():
    w0, w1, w2 = build_w_triple(4)
    assert w1 is substitute(w0, {"x1": "x3", "x2": "x1", "x3": "x2"}) \
        or w1 == substitute(w0, {"x1": "x3", "x2": "x1", "x3": "x2"})
    assert w0.left is w2.right  # shared subtree, not a copy


def test_evaluate_many_shares_session():
    a = transvection(4, 1, 2, Fp(5))
    b = transvection(4, 2, 3, Fp(5))
    w = Comm(Gen("a"), Gen("b"))
    r1, r2 = evaluate_many([w, Comm(w, Gen("a"))], {"a": a, "b": b})
    assert r1 == transvection(4, 1, 3, Fp(5))
    assert r2 == UnipotentMatrix.identity(4, Fp(5))


def test_two_gen_triple_recursion():
    u, up, upp = two_gen_word_triple(6)
    c21, c21p, c21pp = word_c21_triple()
    assert u == Comm(c21p, c21pp)
    assert up == Comm(c21pp, c21)
    assert upp == Comm(c21, c21p)
