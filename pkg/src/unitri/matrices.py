"""The unipotent upper-triangular group U_n over a pluggable coefficient
ring: transvections, exact products/inverses/commutators, the lower
central filtration, the corner homomorphism and its zero-fill lift, and
the level-pattern coset calculus.

Representation: a full n x n numpy array with unit diagonal and zeros
below.  Small prime fields use an int64 array (with a float64 BLAS
product when provably exact); the integers keep an exact object array
alongside an int64 mirror that is trusted only while an entrywise
float64 bound certifies that no overflow occurred.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, BadIndex, LevelOverflow, Mismatch
from .rings import Fp, IntRing, MultilinearPoly, PolyRing, Ring, ZZ

_I64_LIMIT = 2**62
_SMALL_FP = 2**20


def _fp_small(ring):
    return ring.kind == "fp" and ring.p <= _SMALL_FP


def _obj_identity(n):
    m = np.zeros((n, n), dtype=object)
    for i in range(n):
        m[i, i] = 1
    return m


def _to_object(a):
    return np.array(a.tolist(), dtype=object)


class UnipotentMatrix:
    """Immutable element of U_n over `ring`."""

    __slots__ = ("n", "ring", "_m", "_i64", "_bound", "_key")

    def __init__(self, n, ring, mat, _i64=None, _bound=None):
        self.n = n
        self.ring = ring
        self._m = mat
        self._i64 = _i64
        self._bound = _bound
        self._key = None

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n, ring):
        if _fp_small(ring):
            return cls(n, ring, np.eye(n, dtype=np.int64))
        if ring.kind == "int":
            m = _obj_identity(n)
            return cls(n, ring, m, np.eye(n, dtype=np.int64),
                       np.eye(n, dtype=np.float64))
        return cls(n, ring, _obj_identity(n))

    @classmethod
    def from_entries(cls, n, ring, entries):
        """Build from {(i, j): value} over the strict upper triangle,
        1-based indices."""
        ident = cls.identity(n, ring)
        if _fp_small(ring):
            m = ident._m.copy()
            for (i, j), v in entries.items():
                _check_pos(n, i, j)
                m[i - 1, j - 1] = v % ring.p
            return cls(n, ring, m)
        m = ident._m.copy()
        for (i, j), v in entries.items():
            _check_pos(n, i, j)
            if ring.kind == "fp":
                v = v % ring.p
            m[i - 1, j - 1] = v
        if ring.kind == "int":
            return cls._wrap_int(n, m)
        return cls(n, ring, m)

    @classmethod
    def _wrap_int(cls, n, obj_mat, i64=None, bound=None):
        """Attach the int64/bound mirror when entries are small enough."""
        if i64 is None:
            try:
                flat = [int(x) for row in obj_mat for x in row]
            except (TypeError, ValueError):
                flat = None
            if flat is not None and all(abs(x) < _I64_LIMIT for x in flat):
                i64 = np.array(flat, dtype=np.int64).reshape(n, n)
                bound = np.abs(i64).astype(np.float64)
        return cls(n, ZZ, obj_mat, i64, bound)

    # -- entry access -------------------------------------------------

    def entry(self, i, j):
        """1-based entry; diagonal is 1, below-diagonal 0."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise BadIndex(f"({i},{j}) outside 1..{self.n}")
        m = self._m if self._m is not None else _materialize_int(self)
        v = m[i - 1, j - 1]
        return int(v) if isinstance(v, np.integer) else v

    def strict_upper_items(self):
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                v = self.entry(i, j)
                if not _is_zero_entry(v):
                    yield (i, j), v

    def superdiagonal(self):
        return tuple(self.entry(i, i + 1) for i in range(1, self.n))

    def is_identity(self):
        return not any(True for _ in self.strict_upper_items())

    # -- hash / equality ----------------------------------------------

    def _canon(self):
        if self._key is None:
            m = self._m if self._m is not None else _materialize_int(self)
            vals = []
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    v = m[i, j]
                    if isinstance(v, np.integer):
                        v = int(v)
                    elif isinstance(v, MultilinearPoly) and v.is_zero():
                        v = 0
                    vals.append(v)
            self._key = tuple(vals)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, UnipotentMatrix):
            return NotImplemented
        return (self.n == other.n and self.ring == other.ring
                and self._canon() == other._canon())

    def __hash__(self):
        return hash((self.n, self.ring, self._canon()))

    def __repr__(self):
        ent = dict(self.strict_upper_items())
        return f"UnipotentMatrix(n={self.n}, ring={self.ring!r}, {ent})"


def _is_zero_entry(v):
    if isinstance(v, MultilinearPoly):
        return v.is_zero()
    return v == 0


def _check_pos(n, i, j):
    if not (1 <= i < j <= n):
        raise BadIndex(f"need 1 <= i < j <= n, got (i,j)=({i},{j}), n={n}")


def _check_compat(a, b):
    if a.n != b.n or a.ring != b.ring:
        raise Mismatch(
            f"n={a.n}/{b.n}, ring={a.ring!r}/{b.ring!r}"
        )


# ---------------------------------------------------------------------------
# Construction ops
# ---------------------------------------------------------------------------

def transvection(n, i, j, ring=ZZ, value=1):
    """X_{i,j}^value: the identity with `value` at position (i, j)."""
    _check_pos(n, i, j)
    return UnipotentMatrix.from_entries(n, ring, {(i, j): ring.from_int(value)})


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def multiply(a, b):
    _check_compat(a, b)
    n, ring = a.n, a.ring
    if _fp_small(ring):
        return UnipotentMatrix(n, ring, _fp_matmul(a._m, b._m, n, ring.p))
    if ring.kind == "int":
        if a._i64 is not None and b._i64 is not None:
            cb = (a._bound @ b._bound) * (1.0 + 1e-9)
            if cb.max() < _I64_LIMIT:
                c64 = a._i64 @ b._i64
                return UnipotentMatrix(n, ring, None, c64, cb)
        am = _materialize_int(a)
        bm = _materialize_int(b)
        return UnipotentMatrix._wrap_int(n, np.dot(am, bm))
    if ring.kind == "poly":
        return UnipotentMatrix(n, ring, _poly_matmul(a._m, b._m, n))
    c = np.dot(a._m, b._m)
    if ring.kind == "fp":
        c = c % ring.p
    return UnipotentMatrix(n, ring, c)


def _fp_matmul(am, bm, n, p):
    if n * (p - 1) ** 2 < 2**53:
        c = (am.astype(np.float64) @ bm.astype(np.float64)) % p
        return c.astype(np.int64)
    if n * (p - 1) ** 2 < _I64_LIMIT:
        return (am @ bm) % p
    # accumulate in safe chunks of the inner index
    chunk = max(1, int(_I64_LIMIT // ((p - 1) ** 2 + 1)))
    c = np.zeros((n, n), dtype=np.int64)
    for k0 in range(0, n, chunk):
        c = (c + am[:, k0:k0 + chunk] @ bm[k0:k0 + chunk, :]) % p
    return c


def _acc_terms(acc, terms, off):
    """acc += terms with choice bits offset by `off` subscripts."""
    get = acc.get
    for m, c in terms.items():
        mm = m << off
        v = get(mm, 0) + c
        if v:
            acc[mm] = v
        else:
            del acc[mm]


def _acc_product(acc, pa, pb, off, cap):
    """acc += pa * shift(pb) where pb's support starts `off` subscripts
    after pa's; in-place accumulation keeps the matmul linear in the
    number of term products."""
    get = acc.get
    bterms = pb.terms
    for ma, ca in pa.terms.items():
        for mb, cb in bterms.items():
            mm = ma | (mb << off)
            v = get(mm, 0) + ca * cb
            if v:
                acc[mm] = v
            else:
                del acc[mm]
    if len(acc) > cap:
        from .errors import CapExceeded
        raise CapExceeded(f"{len(acc)} terms exceeds cap {cap}")


def _poly_matmul(am, bm, n):
    from .rings import get_term_cap
    cap = get_term_cap()
    out = _obj_identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            acc = {}
            va = am[i, j]
            if not _is_zero_entry(va):
                _acc_terms(acc, va.terms, 0)
            vb = bm[i, j]
            if not _is_zero_entry(vb):
                _acc_terms(acc, vb.terms, 0)
            for k in range(i + 1, j):
                pa = am[i, k]
                if _is_zero_entry(pa):
                    continue
                pb = bm[k, j]
                if _is_zero_entry(pb):
                    continue
                _acc_product(acc, pa, pb, k - i, cap)
            if acc:
                out[i, j] = MultilinearPoly(i + 1, j, acc)
    return out


def _poly_invert(am, n):
    """Back-substitution B[i,j] = -sum_{i<k<=j} A[i,k] B[k,j]."""
    from .rings import get_term_cap
    cap = get_term_cap()
    out = _obj_identity(n)
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            acc = {}
            va = am[i, j]
            if not _is_zero_entry(va):
                _acc_terms(acc, va.terms, 0)
            for k in range(i + 1, j):
                pa = am[i, k]
                if _is_zero_entry(pa):
                    continue
                pb = out[k, j]
                if _is_zero_entry(pb):
                    continue
                _acc_product(acc, pa, pb, k - i, cap)
            if acc:
                out[i, j] = MultilinearPoly(i + 1, j,
                                            {m: -c for m, c in acc.items()})
    return out


def _materialize_int(a):
    """Object array view of an integer-ring matrix."""
    if a._m is None:
        a._m = _to_object(a._i64)
    return a._m


# ---------------------------------------------------------------------------
# Inverse and commutator
# ---------------------------------------------------------------------------

def invert(a):
    """Exact inverse; unipotent matrices are invertible over any ring."""
    n, ring = a.n, a.ring
    if _fp_small(ring):
        # Newton iteration X <- X(2I - AX); error squares, N nilpotent
        p = ring.p
        x = np.eye(n, dtype=np.int64)
        two_i = (2 * np.eye(n, dtype=np.int64)) % p
        steps = max(1, (n - 1).bit_length())
        for _ in range(steps):
            t = (two_i - _fp_matmul(a._m, x, n, p)) % p
            x = _fp_matmul(x, t, n, p)
        return UnipotentMatrix(n, ring, x)
    if ring.kind == "poly":
        return UnipotentMatrix(n, ring, _poly_invert(a._m, n))
    # generic back-substitution: B[i,j] = -sum_{i<k<=j} A[i,k] B[k,j]
    if ring.kind == "int":
        m = _materialize_int(a)
    else:
        m = a._m
    b = _obj_identity(n)
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            s = 0
            for k in range(i + 1, j + 1):
                av = m[i, k]
                bv = b[k, j]
                if _is_zero_entry(av) or _is_zero_entry(bv):
                    continue
                s = av * bv + s
            if not _is_zero_entry(s):
                b[i, j] = ring.neg(s) if ring.kind == "fp" else -s
    if ring.kind == "int":
        return UnipotentMatrix._wrap_int(n, b)
    return UnipotentMatrix(n, ring, b)


def commutator(a, b):
    """[a, b] = a^-1 b^-1 a b."""
    _check_compat(a, b)
    return multiply(multiply(multiply(invert(a), invert(b)), a), b)


def power(a, e):
    """a^e for any integer e."""
    if e < 0:
        return power(invert(a), -e)
    acc = UnipotentMatrix.identity(a.n, a.ring)
    base = a
    while e:
        if e & 1:
            acc = multiply(acc, base)
        e >>= 1
        if e:
            base = multiply(base, base)
    return acc


# ---------------------------------------------------------------------------
# Lower central filtration, corner homomorphism
# ---------------------------------------------------------------------------

def gamma_index(a):
    """Largest k <= n with a in gamma_k(U_n); identity gives n."""
    n = a.n
    for k in range(1, n):
        for i in range(1, n - k + 1):
            if not _is_zero_entry(a.entry(i, i + k)):
                return k
    return n


def project_pi(a):
    """Corner homomorphism U_{2n-1} -> U_n x U_n (upper-left and
    lower-right blocks)."""
    if a.n % 2 == 0 or a.n < 3:
        raise BadDimension(f"dimension {a.n} is not 2n-1 with n >= 2")
    m = (a.n + 1) // 2
    lam = a._m[:m, :m] if a._m is not None else None
    rho = a._m[m - 1:, m - 1:] if a._m is not None else None
    if a.ring.kind == "int":
        mm = _materialize_int(a)
        lam, rho = mm[:m, :m], mm[m - 1:, m - 1:]
        return (UnipotentMatrix._wrap_int(m, lam.copy()),
                UnipotentMatrix._wrap_int(m, rho.copy()))
    return (UnipotentMatrix(m, a.ring, lam.copy()),
            UnipotentMatrix(m, a.ring, rho.copy()))


def lift_pi(left, right):
    """The unique preimage under the corner homomorphism whose free
    top-right block is all zeros."""
    _check_compat(left, right)
    m = left.n
    n = 2 * m - 1
    out = UnipotentMatrix.identity(n, left.ring)
    mat = out._m.copy()
    lm = _materialize_int(left) if left.ring.kind == "int" else left._m
    rm = _materialize_int(right) if right.ring.kind == "int" else right._m
    mat[:m, :m] = lm
    mat[m - 1:, m - 1:] = rm
    if left.ring.kind == "int":
        return UnipotentMatrix._wrap_int(n, mat)
    return UnipotentMatrix(n, left.ring, mat)


# ---------------------------------------------------------------------------
# Coset-pattern calculus (level-r diagonals modulo gamma_{r+1})
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetPattern:
    """The coset of gamma_{r+1}(U_n) whose members vanish at distances
    1..r-1 and carry tau on the distance-r diagonal."""

    n: int
    r: int
    tau: tuple

    def __post_init__(self):
        if not (1 <= self.r < self.n):
            raise LevelOverflow(f"level {self.r} outside [1, {self.n - 1}]")
        if len(self.tau) != self.n - self.r:
            raise Mismatch(
                f"tau length {len(self.tau)} != n - r = {self.n - self.r}"
            )

    def representative(self, ring):
        """The zero-fill member of the coset."""
        entries = {}
        for i, v in enumerate(self.tau, start=1):
            if not _is_zero_entry(v):
                entries[(i, i + self.r)] = v
        return UnipotentMatrix.from_entries(self.n, ring, entries)


def coset_commutator(s, t, ring):
    """Level-(r+s) pattern of [S, T] per the coset calculus:
    tau'_i = alpha_i beta_{i+r} - alpha_{i+s} beta_i."""
    if s.n != t.n:
        raise Mismatch(f"n={s.n} vs {t.n}")
    r, lev_s = s.r, t.r
    if r + lev_s >= s.n:
        raise LevelOverflow(f"r+s = {r + lev_s} >= n = {s.n}")
    alpha, beta = s.tau, t.tau
    out = []
    for i in range(1, s.n - r - lev_s + 1):
        first = ring.mul(alpha[i - 1], beta[i + r - 1])
        second = ring.mul(alpha[i + lev_s - 1], beta[i - 1])
        out.append(ring.sub(first, second))
    return CosetPattern(s.n, r + lev_s, tuple(out))


# ---------------------------------------------------------------------------
# Randomized elements (tests and the pair search)
# ---------------------------------------------------------------------------

def random_unipotent(n, ring, rng, level=1):
    """Uniform entries at distances >= level (F_p), or small ints (ZZ)."""
    entries = {}
    for i in range(1, n + 1):
        for j in range(i + level, n + 1):
            if ring.kind == "fp":
                entries[(i, j)] = int(rng.integers(0, ring.p))
            else:
                entries[(i, j)] = int(rng.integers(-3, 4))
    return UnipotentMatrix.from_entries(n, ring, entries)
