"""Exception types shared across the package."""


class RefdepError(Exception):
    """Base class for all library errors."""


class ValidationError(RefdepError):
    """A dataset or parameter file failed an invariant check."""


class EmptyChoice(ValidationError):
    pass


class ChoiceOutsideMenu(ValidationError):
    pass


class DuplicateMenu(ValidationError):
    pass


class MixedPayloadKinds(ValidationError):
    pass


class UnobservedMenu(RefdepError):
    pass


class UnionUnobserved(RefdepError):
    pass


class UnknownAlternative(RefdepError):
    pass


class UnknownLottery(UnknownAlternative):
    pass


class UnknownFixture(RefdepError):
    pass


class PrizeSetMismatch(RefdepError):
    pass


class NotIncreasing(RefdepError):
    pass


class NotATriangle(RefdepError):
    pass


class NonHereditaryPsi(RefdepError):
    pass


class EmptyPsi(RefdepError):
    """The admissible-reference set of a menu came out empty.

    This signals an internal inconsistency of the risk orders, not bad
    user data; it should be unreachable.
    """


class NotSubsetClosed(RefdepError):
    pass


class UniverseTooLarge(RefdepError):
    pass


class MultiValuedChoice(RefdepError):
    pass


class SynthesisFailed(RefdepError):
    """The reference-order pruning recursion got stuck on partial data."""


class AxiomFails(RefdepError):
    """A fitter's precondition axiom battery found violations.

    Carries the witness list so callers can report which axiom broke.
    """

    def __init__(self, axiom, witnesses):
        self.axiom = axiom
        self.witnesses = list(witnesses)
        super().__init__(f"{axiom}: {len(self.witnesses)} violation(s)")


class InfeasibleFit(RefdepError):
    """No parameterization certifies the dataset at the attempted precision."""

    def __init__(self, detail=""):
        self.detail = detail
        super().__init__(detail or "no feasible parameterization")
