"""Coefficient rings: prime fields, integers, and the multilinear
polynomial ring in the superdiagonal variables.

Monomials are products of variables ``alpha_i`` / ``beta_i`` with one
variable per subscript over a consecutive subscript interval.  A choice
pattern is packed into an int: bit ``k`` corresponds to subscript
``lo + k`` and is 0 for alpha, 1 for beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CapExceeded,
    IncompleteAssignment,
    IntervalMismatch,
    SingularBaseCase,
)

ALPHA = "a"
BETA = "b"

DEFAULT_TERM_CAP = 2**22

_term_cap = DEFAULT_TERM_CAP


def set_term_cap(cap):
    """Set the global polynomial term cap; returns the previous value."""
    global _term_cap
    old = _term_cap
    _term_cap = cap
    return old


def get_term_cap():
    return _term_cap


@dataclass(frozen=True)
class Monomial:
    """A multilinear monomial with consecutive support [lo, hi]."""

    lo: int
    flags: str  # string over 'a'/'b', one char per subscript lo..hi

    def __post_init__(self):
        if self.lo < 1:
            raise ValueError("subscripts are 1-based")
        if not self.flags or any(c not in (ALPHA, BETA) for c in self.flags):
            raise ValueError(f"bad flag string {self.flags!r}")

    @property
    def hi(self):
        return self.lo + len(self.flags) - 1

    @property
    def degree(self):
        return len(self.flags)

    @property
    def mask(self):
        m = 0
        for k, c in enumerate(self.flags):
            if c == BETA:
                m |= 1 << k
        return m

    @classmethod
    def from_mask(cls, lo, width, mask):
        flags = "".join(BETA if (mask >> k) & 1 else ALPHA for k in range(width))
        return cls(lo, flags)

    def alpha_count(self):
        return self.flags.count(ALPHA)

    def shift(self, r):
        return Monomial(self.lo + r, self.flags)

    def subscripts(self, flag):
        """Subscripts carrying the given flag ('a' or 'b')."""
        return [self.lo + k for k, c in enumerate(self.flags) if c == flag]

    def __str__(self):
        return f"{self.flags}@{self.lo}"

    @classmethod
    def parse(cls, text):
        """Parse 'aabab@1' (the '@lo' part defaults to 1)."""
        if "@" in text:
            flags, lo = text.split("@")
            return cls(int(lo), flags)
        return cls(1, text)


class MultilinearPoly:
    """Integer-coefficient sum of multilinear monomials sharing one
    consecutive support interval.

    The zero polynomial keeps its interval tag so adjacency checks work
    on vanishing sub-results.
    """

    __slots__ = ("lo", "hi", "terms")

    def __init__(self, lo, hi, terms=None):
        if hi < lo - 1 or lo < 1:
            raise ValueError(f"bad interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.terms = {} if terms is None else terms  # mask -> nonzero coeff

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, lo, hi):
        return cls(lo, hi)

    @classmethod
    def from_monomial(cls, mono, coeff=1):
        if coeff == 0:
            return cls.zero(mono.lo, mono.hi)
        return cls(mono.lo, mono.hi, {mono.mask: coeff})

    @classmethod
    def variable(cls, subscript, flag):
        return cls.from_monomial(Monomial(subscript, flag))

    # -- structure ----------------------------------------------------

    @property
    def width(self):
        return self.hi - self.lo + 1

    def is_zero(self):
        return not self.terms

    def monomials(self):
        """Iterate (Monomial, coeff) pairs in mask order."""
        w = self.width
        for mask in sorted(self.terms):
            yield Monomial.from_mask(self.lo, w, mask), self.terms[mask]

    def coefficient(self, mono):
        if (mono.lo, mono.hi) != (self.lo, self.hi):
            return 0
        return self.terms.get(mono.mask, 0)

    # -- arithmetic ---------------------------------------------------

    def _check_same_interval(self, other):
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise IntervalMismatch(
                f"[{self.lo},{self.hi}] vs [{other.lo},{other.hi}]"
            )

    def __add__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self
            return NotImplemented
        self._check_same_interval(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return MultilinearPoly(self.lo, self.hi, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MultilinearPoly(
            self.lo, self.hi, {m: -c for m, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return 0
            return MultilinearPoly(
                self.lo, self.hi, {m: c * other for m, c in self.terms.items()}
            )
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        # adjacent supports in either order; result covers the union
        if self.hi + 1 == other.lo:
            left, right = self, other
        elif other.hi + 1 == self.lo:
            left, right = other, self
        else:
            raise IntervalMismatch(
                f"[{self.lo},{self.hi}] * [{other.lo},{other.hi}] not adjacent"
            )
        shift = left.width
        out = {}
        get = out.get
        for ma, ca in left.terms.items():
            for mb, cb in right.terms.items():
                m = ma | (mb << shift)
                s = get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        if len(out) > _term_cap:
            raise CapExceeded(f"{len(out)} terms exceeds cap {_term_cap}")
        return MultilinearPoly(left.lo, right.hi, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return other == 0 and not self.terms
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.lo, self.hi, frozenset(self.terms.items())))

    # -- operations from the coset / multiplication calculus ----------

    def shift(self, r):
        """Add r to every subscript (the shift map on polynomials)."""
        if r < 0:
            raise ValueError("shift must be nonnegative")
        return MultilinearPoly(self.lo + r, self.hi + r, dict(self.terms))

    def eval01(self, ones):
        """Evaluate at a 0/1 assignment given as (subscript, flag) pairs
        naming the variables set to 1; exactly one flag per subscript of
        the interval is required."""
        seen = {}
        for sub, flag in ones:
            if sub in seen:
                raise IncompleteAssignment(f"subscript {sub} assigned twice")
            seen[sub] = flag
        mask = 0
        for k in range(self.width):
            sub = self.lo + k
            if sub not in seen:
                raise IncompleteAssignment(f"subscript {sub} unassigned")
            if seen[sub] == BETA:
                mask |= 1 << k
        return self.terms.get(mask, 0)

    # -- text form ----------------------------------------------------

    def to_text(self):
        """One term per line, 'coef*flags@lo' (e.g. '-1*aabab@1')."""
        lines = []
        for mono, coeff in self.monomials():
            lines.append(f"{coeff:+d}*{mono}".replace("+", "", 1)
                         if coeff > 0 else f"{coeff}*{mono}")
        if not lines:
            return f"0@[{self.lo},{self.hi}]"
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text):
        text = text.strip()
        if text.startswith("0@["):
            lo, hi = text[3:-1].split(",")
            return cls.zero(int(lo), int(hi))
        poly = None
        for line in text.splitlines():
            coeff, mono = line.strip().split("*")
            term = cls.from_monomial(Monomial.parse(mono), int(coeff))
            poly = term if poly is None else poly + term
        return poly

    def __repr__(self):
        if self.is_zero():
            return f"MultilinearPoly.zero({self.lo}, {self.hi})"
        return "MultilinearPoly<" + "; ".join(
            f"{c}*{m}" for m, c in self.monomials()
        ) + ">"


def poly_mul(p, q):
    """Product of adjacent-interval polynomials (zero operands allowed)."""
    return p * q if not (p.is_zero() or q.is_zero()) else _zero_product(p, q)


def _zero_product(p, q):
    if p.hi + 1 == q.lo:
        return MultilinearPoly.zero(p.lo, q.hi)
    if q.hi + 1 == p.lo:
        return MultilinearPoly.zero(q.lo, p.hi)
    raise IntervalMismatch(
        f"[{p.lo},{p.hi}] * [{q.lo},{q.hi}] not adjacent"
    )


def poly_shift(p, r):
    return p.shift(r)


def poly_eval01(p, ones):
    return p.eval01(ones)


# ---------------------------------------------------------------------------
# Coefficient rings for matrix entries
# ---------------------------------------------------------------------------

MAX_PRIME = 2**31


class Ring:
    """Coefficient ring tag with the scalar helpers matrices need."""

    kind = None

    def mul(self, a, b):
        return a * b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def from_int(self, k):
        return k

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))


class Fp(Ring):
    """Prime field F_p, p an odd-or-even prime below 2^31; elements are
    plain ints reduced to [0, p)."""

    kind = "fp"

    def __init__(self, p):
        if not (2 <= p < MAX_PRIME) or not _is_prime(p):
            raise ValueError(f"p={p} must be a prime below 2^31")
        self.p = p

    def mul(self, a, b):
        return (a * b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def from_int(self, k):
        return k % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def __repr__(self):
        return f"Fp({self.p})"


class IntRing(Ring):
    """Unbounded signed integers."""

    kind = "int"

    def __repr__(self):
        return "IntRing()"


class PolyRing(Ring):
    """Multilinear polynomials in the alpha/beta variables; elements are
    MultilinearPoly values (plain int 0 doubles as the contextual zero)."""

    kind = "poly"

    def from_int(self, k):
        if k == 0:
            return 0
        raise ValueError("nonzero integer constants have no interval tag")

    def __repr__(self):
        return "PolyRing()"


ZZ = IntRing()
QQ_MARKER = 0  # solve_circulant(p=0) means rationals


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
        if q * q > n:
            return True
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def ring_from_spec(spec):
    """Parse a ring spec string 'fp:p' or 'int'."""
    if spec == "int":
        return ZZ
    if spec.startswith("fp:"):
        return Fp(int(spec.split(":", 1)[1]))
    raise ValueError(f"bad ring spec {spec!r}")


def ring_to_json(ring):
    if ring.kind == "fp":
        return {"kind": "fp", "p": ring.p}
    if ring.kind == "int":
        return {"kind": "int"}
    raise ValueError(f"ring {ring!r} has no JSON form")


def ring_from_json(obj):
    if obj["kind"] == "fp":
        return Fp(obj["p"])
    if obj["kind"] == "int":
        return ZZ
    raise ValueError(f"bad ring JSON {obj!r}")


# ---------------------------------------------------------------------------
# Circulant solver for the general recursion base case
# ---------------------------------------------------------------------------

def solve_circulant(r, s, t, p=0):
    """Solve the circulant system

        r*a + s*b + t*c = 1
        t*a + r*b + s*c = 0
        s*a + t*b + r*c = 0

    over F_p (p prime) or over the rationals (p = 0).  The system is
    solvable iff r^3 + s^3 + t^3 - 3rst is nonzero in the target field.
    """
    det = r**3 + s**3 + t**3 - 3 * r * s * t
    # Cramer: replace each column of circ(r,s,t) by (1,0,0)^T
    da = r * r - s * t
    db = s * s - r * t
    dc = t * t - r * s
    if p == 0:
        if det == 0:
            raise SingularBaseCase(f"r^3+s^3+t^3-3rst = 0 for {(r, s, t)}")
        return (Fraction(da, det), Fraction(db, det), Fraction(dc, det))
    field = Fp(p)
    if det % p == 0:
        raise SingularBaseCase(
            f"r^3+s^3+t^3-3rst = 0 in F_{p} for {(r, s, t)}"
        )
    inv = field.inv(det % p)
    return (da * inv % p, db * inv % p, dc * inv % p)
