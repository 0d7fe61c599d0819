"""Exception hierarchy shared by all unitri modules."""


class UnitriError(Exception):
    """Base class for all library errors."""


class IntervalMismatch(UnitriError):
    """Polynomial supports are not adjacent / equal where required."""


class IncompleteAssignment(UnitriError):
    """A 0/1 evaluation did not assign exactly one flag per subscript."""


class SingularBaseCase(UnitriError):
    """r^3 + s^3 + t^3 - 3rst vanishes in the target field."""


class BadIndex(UnitriError):
    """Matrix position outside the strict upper triangle."""


class Mismatch(UnitriError):
    """Operands disagree in dimension or coefficient ring."""


class BadDimension(UnitriError):
    """Corner projection requires an odd dimension 2n-1, n >= 2."""


class LevelOverflow(UnitriError):
    """Coset commutator level r+s reached or exceeded n."""


class TooShort(UnitriError):
    """Left-normed commutator needs at least two generator names."""


class BadSubstitution(UnitriError):
    """Renaming map does not cover the word's alphabet."""


class Unsupported(UnitriError):
    """Parameter outside the supported range (resource guard)."""


class CapExceeded(UnitriError):
    """A configured resource cap (term count, closure size) was hit."""


class HypothesisViolated(UnitriError):
    """Multiplication-lemma hypothesis fails; carries a witness divisor."""

    def __init__(self, divisor):
        super().__init__(f"monomial summand {divisor} divides the tracked monomial")
        self.divisor = divisor


class BadOrder(UnitriError):
    """Multiplication lemma requires weight(w) >= weight(w')."""


class NotASummand(UnitriError):
    """Monomial has zero coefficient where a summand was required."""


class NotHomogeneous(UnitriError):
    """Entry polynomial has terms with different alpha counts."""

    def __init__(self, mono1, mono2):
        super().__init__(f"alpha counts differ: {mono1} vs {mono2}")
        self.pair = (mono1, mono2)


class DistinctnessViolated(UnitriError):
    """Monomial triple lost pairwise-distinct alpha counts mod 3."""


class ConstructionBug(UnitriError):
    """A certified construction failed its own re-verification."""


class NeedsRandomMode(UnitriError):
    """Exhaustive pair space too large; use random sampling."""
