"""Free-group word ASTs with weight and derived-depth certificates,
substitution, memoized evaluation into matrix groups, and the word
families used by the constructions (the three-generator recursion, the
left-normed commutators, the weight-5/10/21 two-generator words and
their cyclic extension).

Weight is a lower-central certificate (the word lies in gamma_weight of
the free group); depth is a derived-series certificate.  Both are exact
for the built families.
"""

from __future__ import annotations

from functools import cache

from .errors import BadSubstitution, Mismatch, TooShort, Unsupported
from .matrices import invert, multiply


class Word:
    """Immutable word node; subtrees are shared, evaluation memoizes on
    node identity."""

    __slots__ = ("weight", "depth", "alphabet", "_hash")

    def _structural(self):
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Word):
            return NotImplemented
        return self._structural() == other._structural()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._structural())
        return self._hash

    def __repr__(self):
        return to_sexpr(self)


class Gen(Word):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self.weight = 1
        self.depth = 0
        self.alphabet = frozenset([name])
        self._hash = None

    def _structural(self):
        return ("gen", self.name)


class Inv(Word):
    __slots__ = ("body",)

    def __init__(self, body):
        self.body = body
        self.weight = body.weight
        self.depth = body.depth
        self.alphabet = body.alphabet
        self._hash = None

    def _structural(self):
        return ("inv", self.body._structural())


class Prod(Word):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.weight = min(left.weight, right.weight)
        self.depth = min(left.depth, right.depth)
        self.alphabet = left.alphabet | right.alphabet
        self._hash = None

    def _structural(self):
        return ("prod", self.left._structural(), self.right._structural())


class Comm(Word):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.weight = left.weight + right.weight
        self.depth = min(left.depth, right.depth) + 1
        self.alphabet = left.alphabet | right.alphabet
        self._hash = None

    def _structural(self):
        return ("comm", self.left._structural(), self.right._structural())


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def left_normed(names):
    """[n1, n2, ..., nk] nesting leftward: [[n1, n2], n3] ..."""
    names = list(names)
    if len(names) < 2:
        raise TooShort(f"need at least 2 names, got {names}")
    w = Comm(Gen(names[0]), Gen(names[1]))
    for name in names[2:]:
        w = Comm(w, Gen(name))
    return w


def gen_power(name, e):
    """name^e as a word (e may be negative)."""
    g = Gen(name)
    if e < 0:
        g = Inv(g)
        e = -e
    if e == 0:
        raise ValueError("zero power has no word form here")
    w = g
    for _ in range(e - 1):
        w = Prod(w, g)
    return w


def substitute(w, perm):
    """Rename generators by a total map name -> name."""
    missing = w.alphabet - set(perm)
    if missing:
        raise BadSubstitution(f"map misses generators {sorted(missing)}")
    memo = {}

    def go(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Gen):
            out = Gen(perm[node.name])
        elif isinstance(node, Inv):
            out = Inv(go(node.body))
        elif isinstance(node, Prod):
            out = Prod(go(node.left), go(node.right))
        else:
            out = Comm(go(node.left), go(node.right))
        memo[id(node)] = out
        return out

    return go(w)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(w, assignment):
    """Homomorphic image of the word; sub-word values (and their
    inverses) are memoized per evaluation session, so shared subtrees
    evaluate once."""
    return evaluate_many([w], assignment)[0]


def evaluate_many(words, assignment):
    """Evaluate several words in one memo session (shared subtrees
    across the words evaluate once)."""
    mats = list(assignment.values())
    if not mats:
        raise Mismatch("empty assignment")
    n, ring = mats[0].n, mats[0].ring
    for m in mats:
        if m.n != n or m.ring != ring:
            raise Mismatch("assignment matrices disagree in n or ring")
    for w in words:
        missing = w.alphabet - set(assignment)
        if missing:
            raise Mismatch(f"assignment misses generators {sorted(missing)}")

    vals = {}
    invs = {}

    def val(node):
        got = vals.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Gen):
            out = assignment[node.name]
        elif isinstance(node, Inv):
            out = inv(node.body)
        elif isinstance(node, Prod):
            out = multiply(val(node.left), val(node.right))
        else:
            out = multiply(
                multiply(multiply(inv(node.left), inv(node.right)),
                         val(node.left)),
                val(node.right),
            )
        vals[id(node)] = out
        return out

    def inv(node):
        got = invs.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Gen):
            out = invert(assignment[node.name])
        elif isinstance(node, Inv):
            out = val(node.body)
        elif isinstance(node, Prod):
            out = multiply(inv(node.right), inv(node.left))
        else:
            # [u, v]^-1 = v^-1 u^-1 v u
            out = multiply(
                multiply(multiply(inv(node.right), inv(node.left)),
                         val(node.right)),
                val(node.left),
            )
        invs[id(node)] = out
        return out

    return [val(w) for w in words]


# ---------------------------------------------------------------------------
# The three-generator word family
# ---------------------------------------------------------------------------

_CYCLE = {"x1": "x3", "x2": "x1", "x3": "x2"}


@cache
def build_w_triple(d, exponents=(1, 0, 0)):
    """(w, w∘σ, w∘σ²) for the cyclic rotation σ: x1→x3, x2→x1, x3→x2.
    The recursion w' = [w, w∘σ] rotates to (w∘σ)' = [w∘σ, w∘σ²] and
    (w∘σ²)' = [w∘σ², w], so the three rotations are built together with
    fully shared subtrees (3 nodes per level instead of 2^d)."""
    if d < 1:
        raise Unsupported(f"d = {d} < 1")
    r, s, t = exponents
    parts = [(name, e) for name, e in zip(("x1", "x2", "x3"), (r, s, t)) if e]
    if not parts:
        raise Unsupported("all base exponents zero")
    w = gen_power(*parts[0])
    for name, e in parts[1:]:
        w = Prod(w, gen_power(name, e))
    w1 = substitute(w, _CYCLE)
    w2 = substitute(w1, _CYCLE)
    triple = (w, w1, w2)
    for _ in range(d - 1):
        u0, u1, u2 = triple
        triple = (Comm(u0, u1), Comm(u1, u2), Comm(u2, u0))
    return triple


def build_w(d, exponents=(1, 0, 0)):
    """The word w for n = 2^(d-1) + 1: base case x1^r x2^s x3^t, then
    w' = [w(x1,x2,x3), w(x3,x1,x2)] at each step."""
    return build_w_triple(d, tuple(exponents))[0]


# ---------------------------------------------------------------------------
# The two-generator word family
# ---------------------------------------------------------------------------

MAX_TWO_GEN_D = 12


@cache
def word_c5():
    return Comm(left_normed("baa"), left_normed("ba"))


@cache
def word_c10():
    return Comm(Comm(left_normed("bab"), left_normed("ba")), word_c5())


@cache
def word_c21_triple():
    """(c21, c21', c21''): the three weight-21 words, differing in the
    innermost left-normed factor (baaa / baab / babb)."""
    c5, c10 = word_c5(), word_c10()
    out = []
    for inner in ("baaa", "baab", "babb"):
        head = Comm(left_normed(inner), left_normed("ba"))
        out.append(Comm(Comm(head, c5), c10))
    return tuple(out)


@cache
def two_gen_word_triple(d):
    """The designated word triple at level d >= 5 under the cyclic rule
    (u, u', u'') -> ([u', u''], [u'', u], [u, u'])."""
    if d == 5:
        return word_c21_triple()
    u, up, upp = two_gen_word_triple(d - 1)
    return (Comm(up, upp), Comm(upp, u), Comm(u, up))


def build_two_gen_word(d, variant=0):
    """The two-generator word of weight n-1 for n = 6, 11, 22, then
    21 * 2^(d-5) + 1; `variant` picks a primed member for d >= 5."""
    if not (3 <= d <= MAX_TWO_GEN_D):
        raise Unsupported(f"d = {d} outside [3, {MAX_TWO_GEN_D}]")
    if d == 3:
        return word_c5()
    if d == 4:
        return word_c10()
    return two_gen_word_triple(d)[variant]


# ---------------------------------------------------------------------------
# S-expression serialization
# ---------------------------------------------------------------------------

def _left_spine_gens(w):
    """Generator names of a pure left-normed commutator, else None."""
    names = []
    node = w
    while isinstance(node, Comm):
        if not isinstance(node.right, Gen):
            return None
        names.append(node.right.name)
        node = node.left
    if not isinstance(node, Gen):
        return None
    names.append(node.name)
    return list(reversed(names))


def to_sexpr(w):
    if isinstance(w, Gen):
        return w.name
    if isinstance(w, Inv):
        return f"(inv {to_sexpr(w.body)})"
    if isinstance(w, Prod):
        return f"(prod {to_sexpr(w.left)} {to_sexpr(w.right)})"
    names = _left_spine_gens(w)
    if names is not None:
        return "(comm " + " ".join(names) + ")"
    return f"(comm {to_sexpr(w.left)} {to_sexpr(w.right)})"


def _tokenize(text):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def from_sexpr(text):
    tokens = _tokenize(text)
    pos = 0

    def parse():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ValueError("unexpected ')'")
        if tok != "(":
            return Gen(tok)
        head = tokens[pos]
        pos += 1
        args = []
        while tokens[pos] != ")":
            args.append(parse())
        pos += 1
        if head == "inv":
            if len(args) != 1:
                raise ValueError("(inv ...) takes one argument")
            return Inv(args[0])
        if head == "prod":
            if len(args) < 2:
                raise ValueError("(prod ...) takes >= 2 arguments")
            w = args[0]
            for a in args[1:]:
                w = Prod(w, a)
            return w
        if head == "comm":
            if len(args) < 2:
                raise ValueError("(comm ...) takes >= 2 arguments")
            w = Comm(args[0], args[1])
            for a in args[2:]:
                w = Comm(w, a)
            return w
        raise ValueError(f"unknown head {head!r}")

    w = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens in s-expression")
    return w
