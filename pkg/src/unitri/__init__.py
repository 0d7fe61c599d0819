"""Exact constructions, certificates, and desk-scale searches for
small-generator subgroups of the unipotent upper-triangular groups U_n
with maximal derived length."""

__version__ = "0.1.0"

from .constructions import (
    MonomialTriple,
    PairWitness,
    TripleWitness,
    monomial_recursion,
    proportion_good,
    three_gen_triple,
    two_gen_pair,
)
from .errors import UnitriError
from .explorer import (
    FiniteSubgroup,
    SearchReport,
    closure,
    derived_length,
    derived_series,
    lower_central_series,
    search_pairs,
    subgroup_order,
)
from .matrices import (
    UnipotentMatrix,
    commutator,
    gamma_index,
    invert,
    multiply,
    power,
    transvection,
)
from .rings import ZZ, Fp, Monomial, MultilinearPoly, solve_circulant
from .symbolic import (
    alpha_count_homogeneous,
    entry_poly,
    monomial_coefficient,
    multiplication_lemma_check,
)
from .words import (
    Comm,
    Gen,
    Inv,
    Prod,
    build_two_gen_word,
    build_w,
    evaluate,
    from_sexpr,
    left_normed,
    substitute,
    to_sexpr,
    word_c5,
    word_c10,
    word_c21_triple,
)

__all__ = [name for name in dir() if not name.startswith("_")]
