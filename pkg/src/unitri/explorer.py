"""Finite brute-force layer over U_n(F_p): subgroup closure, derived
and lower central series, orders, and the exhaustive/randomized pair
searches probing the nonexistence side of the boundary theorems at
desk scale.

Closure enumerates elements outright (batched numpy, capped).  The
pair search instead computes derived lengths through an induced
generating sequence along the position filtration of U_n, which stays
cheap even when <x, y> itself is far too large to enumerate; the two
routes are cross-checked in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapExceeded, Mismatch, NeedsRandomMode, Unsupported
from .matrices import UnipotentMatrix, random_unipotent
from .rings import Fp

DEFAULT_CAP = 2**20

_BATCH = 1 << 14


def _as_arr(mat):
    if mat.ring.kind != "fp":
        raise Unsupported("explorer works over F_p only")
    return np.ascontiguousarray(mat._m, dtype=np.int64)


def _mat(n, p, arr):
    return UnipotentMatrix(n, Fp(p), np.array(arr, dtype=np.int64))


def _packer(n, p):
    """Vectorized strict-upper base-p packer; keys are int64 when the
    digit count allows, bytes otherwise."""
    iu = np.triu_indices(n, 1)
    m = len(iu[0])
    if p ** m < 2**63:
        weights = (p ** np.arange(m)).astype(np.int64)

        def pack(batch):
            return list((batch[:, iu[0], iu[1]] * weights).sum(axis=1))
    else:
        def pack(batch):
            flat = np.ascontiguousarray(batch[:, iu[0], iu[1]], dtype=np.int16)
            return [row.tobytes() for row in flat]
    return pack


def _batch_inv(arr, p):
    """Inverses of a stack of unipotent matrices mod p by Newton
    iteration (exact: converges in ceil(log2 n) doublings)."""
    n = arr.shape[-1]
    eye = np.eye(n, dtype=np.int64)
    x = (2 * eye - arr) % p
    for _ in range((n - 1).bit_length()):
        x = (x @ (2 * eye - (arr @ x) % p)) % p
    return x


@dataclass(frozen=True)
class FiniteSubgroup:
    n: int
    p: int
    generators: tuple
    _arr: np.ndarray = field(repr=False)  # (order, n, n) int64
    _keys: frozenset = field(repr=False)

    @property
    def order(self):
        return self._arr.shape[0]

    def is_trivial(self):
        return self.order == 1

    @cached_property
    def elements(self):
        return frozenset(
            _mat(self.n, self.p, self._arr[k]) for k in range(self.order)
        )

    def __contains__(self, mat):
        pack = _packer(self.n, self.p)
        return pack(_as_arr(mat)[None])[0] in self._keys

    def __repr__(self):
        return (f"FiniteSubgroup(n={self.n}, p={self.p}, "
                f"order={self.order}, gens={len(self.generators)})")


def _close_arrays(n, p, gen_arrs, cap):
    """Worklist closure under right multiplication by the generators
    (sufficient for a finite group of invertible elements)."""
    pack = _packer(n, p)
    if gen_arrs:
        gens = np.stack(gen_arrs)
    else:
        gens = np.eye(n, dtype=np.int64)[None]
    seen = {}
    chunks = []

    def absorb(batch):
        fresh = []
        for k, key in enumerate(pack(batch)):
            if key not in seen:
                seen[key] = len(seen)
                fresh.append(batch[k])
        if fresh:
            chunks.append(np.stack(fresh))
            if len(seen) > cap:
                raise CapExceeded(f"closure exceeded cap {cap}")
            return chunks[-1]
        return None

    frontier = absorb(np.concatenate([np.eye(n, dtype=np.int64)[None], gens]))
    while frontier is not None:
        new = []
        for k in range(0, frontier.shape[0], _BATCH):
            block = frontier[k:k + _BATCH]
            prods = np.einsum("fij,gjk->fgik", block, gens) % p
            got = absorb(prods.reshape(-1, n, n))
            if got is not None:
                new.append(got)
        frontier = np.concatenate(new) if new else None
    return np.concatenate(chunks), frozenset(seen)


def closure(gens, cap=DEFAULT_CAP):
    """The subgroup generated by `gens`, fully enumerated."""
    if not gens:
        raise Mismatch("need at least one generator (use the identity)")
    n = gens[0].n
    ring = gens[0].ring
    for g in gens:
        if g.n != n or g.ring != ring:
            raise Mismatch("generators disagree in n or ring")
    if ring.kind != "fp":
        raise Unsupported("closure works over F_p only")
    p = ring.p
    arr, keys = _close_arrays(n, p, [_as_arr(g) for g in gens], cap)
    return FiniteSubgroup(n, p, tuple(gens), arr, keys)


def subgroup_order(gens, cap=DEFAULT_CAP):
    return closure(gens, cap).order


def _span(n, p, cand_arrs, cap):
    """Subgroup generated by the candidates, with a reduced generating
    set (each kept candidate is outside the span of the previous)."""
    pack = _packer(n, p)
    gens = []
    arr, keys = _close_arrays(n, p, [], cap)
    for c in cand_arrs:
        if pack(c[None])[0] not in keys:
            gens.append(c)
            arr, keys = _close_arrays(n, p, gens, cap)
    return gens, arr, keys


def _gen_commutators(elem_arr, gen_arrs, p):
    """[g, x] for every element g and generator x, deduplicated."""
    if not gen_arrs:
        return []
    n = elem_arr.shape[-1]
    inv_elems = _batch_inv(elem_arr, p)
    out = []
    seen = set()
    pack = _packer(n, p)
    for x in gen_arrs:
        xi = _batch_inv(x[None], p)[0]
        # g^-1 x^-1 g x batched over g
        c = ((inv_elems @ xi) % p @ elem_arr) % p @ x % p
        for k, key in enumerate(pack(c)):
            if key not in seen:
                seen.add(key)
                out.append(c[k])
    return out


def derived_subgroup(G, cap=DEFAULT_CAP):
    """G' as a FiniteSubgroup.  Uses the element-times-generator
    commutator set: with S = {[g, x] : g in G, x a generator}, the
    identity [g, x]^h = [gh, x][h, x]^-1 shows <S> is normal in G, and
    G/<S> is abelian, so <S> = G'."""
    gen_arrs = [_as_arr(g) for g in G.generators]
    cands = _gen_commutators(G._arr, gen_arrs, G.p)
    gens, arr, keys = _span(G.n, G.p, cands, cap)
    return FiniteSubgroup(
        G.n, G.p, tuple(_mat(G.n, G.p, g) for g in gens), arr, keys)


def derived_series(G, cap=DEFAULT_CAP):
    """G = G^(0) >= G^(1) >= ... down to (and including) the trivial
    group."""
    series = [G]
    while not series[-1].is_trivial():
        series.append(derived_subgroup(series[-1], cap))
    return series


def derived_length(G, cap=DEFAULT_CAP):
    return len(derived_series(G, cap)) - 1


def lower_central_series(G, cap=DEFAULT_CAP):
    """G = gamma_1 >= gamma_2 >= ... down to the trivial group;
    gamma_{k+1} = [gamma_k, G] computed as the G-normal closure of the
    element-times-generator commutators."""
    pack = _packer(G.n, G.p)
    gen_arrs = [_as_arr(g) for g in G.generators]
    inv_gens = [_batch_inv(x[None], G.p)[0] for x in gen_arrs]
    series = [G]
    while not series[-1].is_trivial():
        cands = _gen_commutators(series[-1]._arr, gen_arrs, G.p)
        gens, arr, keys = _span(G.n, G.p, cands, cap)
        # normal closure in G: conjugate the reduced generators until
        # stable
        queue = list(gens)
        while queue:
            h = queue.pop()
            for x, xi in zip(gen_arrs, inv_gens):
                c = (xi @ h % G.p) @ x % G.p
                if pack(c[None])[0] not in keys:
                    gens.append(c)
                    arr, keys = _close_arrays(G.n, G.p, gens, cap)
                    queue.append(c)
        series.append(FiniteSubgroup(
            G.n, G.p, tuple(_mat(G.n, G.p, g) for g in gens), arr, keys))
    return series


# ---------------------------------------------------------------------------
# Induced generating sequences along the position filtration
# ---------------------------------------------------------------------------

def _positions(n):
    """Strict-upper positions ordered by (distance, row); each suffix
    of this order spans a subgroup normal in U_n, refining the lower
    central series."""
    return [(i, i + d) for d in range(1, n) for i in range(1, n - d + 1)]


class _IGS:
    """Echelonized generating sequence for a subgroup of U_n(F_p):
    one normalized generator per leading position.  Closing the table
    under pairwise commutators and p-th powers makes sifting an exact
    membership test (the leaders form a polycyclic sequence along the
    position chain), so |group| = p^len(table)."""

    def __init__(self, n, p):
        self.n = n
        self.p = p
        self.pos = _positions(n)
        self.eye = np.eye(n, dtype=np.int64)
        self.table = {}  # position index -> normalized generator

    def _leading(self, x):
        for t, (i, j) in enumerate(self.pos):
            if x[i - 1, j - 1] % self.p:
                return t
        return None

    def _inv(self, x):
        return _batch_inv(x[None], self.p)[0]

    def _power(self, x, e):
        out = self.eye
        b = x
        while e:
            if e & 1:
                out = out @ b % self.p
            b = b @ b % self.p
            e >>= 1
        return out

    def sift(self, x):
        """Reduce x through the table; returns None if x is in the
        span, else (leading index, residue)."""
        x = x % self.p
        while True:
            t = self._leading(x)
            if t is None:
                return None
            g = self.table.get(t)
            if g is None:
                return t, x
            i, j = self.pos[t]
            c = int(x[i - 1, j - 1])
            # both lie in the suffix subgroup at t, so leading
            # coefficients add under multiplication
            x = self._power(g, self.p - c) @ x % self.p

    def close(self, seeds):
        queue = list(seeds)
        while queue:
            got = self.sift(queue.pop())
            if got is None:
                continue
            t, x = got
            i, j = self.pos[t]
            e = pow(int(x[i - 1, j - 1]), -1, self.p)
            x = self._power(x, e)  # normalize leading coefficient to 1
            others = list(self.table.values())
            self.table[t] = x
            xi = self._inv(x)
            queue.append(self._power(x, self.p))
            for h in others:
                queue.append((xi @ self._inv(h) % self.p @ x % self.p)
                             @ h % self.p)

    def order(self):
        return self.p ** len(self.table)


def igs_from_gens(n, p, gen_arrs):
    igs = _IGS(n, p)
    igs.close(gen_arrs)
    return igs


def igs_derived_length(n, p, gen_arrs):
    """Derived length of <gens> without enumerating elements: iterate
    H -> H' where H' is generated by the pairwise commutators of H's
    table, closed under commutation with H's table (this makes H'
    normal in H with abelian quotient, hence exactly the derived
    subgroup)."""
    igs = igs_from_gens(n, p, gen_arrs)
    length = 0
    while igs.table:
        parent = list(igs.table.values())
        inv_parent = [igs._inv(h) for h in parent]
        child = _IGS(n, p)
        seeds = []
        for a, ai in zip(parent, inv_parent):
            for b, bi in zip(parent, inv_parent):
                seeds.append(ai @ bi % p @ a % p @ b % p)
        child.close(seeds)
        # normality under the parent
        stable = False
        while not stable:
            stable = True
            for g in list(child.table.values()):
                gi = child._inv(g)
                for h, hi in zip(parent, inv_parent):
                    got = child.sift(gi @ hi % p @ g % p @ h % p)
                    if got is not None:
                        child.close([got[1]])
                        stable = False
        igs = child
        length += 1
    return length


# ---------------------------------------------------------------------------
# Pair search
# ---------------------------------------------------------------------------

EXHAUSTIVE_LIMIT = 2**26


@dataclass(frozen=True)
class SearchReport:
    n: int
    p: int
    mode: str
    samples: int
    seed: int
    target_depth: int
    max_derived_length: int
    witness: tuple | None  # (A, B) reaching the target, if any
    note: str = "sampled evidence, not a proof"

    def found(self):
        return self.witness is not None


def _all_unipotent_arrays(n, p):
    iu = np.triu_indices(n, 1)
    m = len(iu[0])
    out = np.tile(np.eye(n, dtype=np.int64), (p**m, 1, 1))
    for k in range(p**m):
        digits = k
        for q in range(m):
            out[k, iu[0][q], iu[1][q]] = digits % p
            digits //= p
    return out


def search_pairs(n, p, mode="random", samples=1000, target_depth=None,
                 seed=0, include=(), force_exhaustive=False):
    """Examine generator pairs of U_n(F_p) and report the maximum
    derived length found (and a witness pair reaching target_depth, if
    any).  `include` pairs are checked first; random sampling is
    deterministic given the seed and independent of worker count (each
    sample uses rng seeded by (seed, index))."""
    if target_depth is None:
        target_depth = max(1, (n - 1).bit_length())
    best = 0
    witness = None
    examined = 0

    def consider(xa, ya):
        nonlocal best, witness, examined
        examined += 1
        length = igs_derived_length(n, p, [xa, ya])
        if length > best:
            best = length
        if length >= target_depth and witness is None:
            witness = (_mat(n, p, xa), _mat(n, p, ya))

    for a, b in include:
        consider(_as_arr(a), _as_arr(b))

    if mode == "exhaustive":
        space = p ** (n * (n - 1))
        if space > EXHAUSTIVE_LIMIT and not force_exhaustive:
            raise NeedsRandomMode(
                f"pair space {space} exceeds {EXHAUSTIVE_LIMIT}")
        elems = _all_unipotent_arrays(n, p)
        for x in elems:
            for y in elems:
                consider(x, y)
    elif mode == "random":
        ring = Fp(p)
        for k in range(samples):
            rng = np.random.default_rng((seed, k))
            x = random_unipotent(n, ring, rng)
            y = random_unipotent(n, ring, rng)
            consider(_as_arr(x), _as_arr(y))
    else:
        raise Unsupported(f"mode {mode!r}")

    return SearchReport(n, p, mode, examined, seed, target_depth,
                        best, witness)
