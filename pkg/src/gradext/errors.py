"""Exception types shared across the package."""


class GradextError(Exception):
    pass


class DimensionMismatch(GradextError):
    pass


class ModulusMismatch(GradextError):
    pass


class AlgebraMismatch(GradextError):
    pass


class ValidationError(GradextError):
    """Raised for malformed objects; ``pointer`` is a JSON pointer when known."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class ParseError(ValidationError):
    pass


class NotAutomorphism(GradextError):
    pass


class NotHomomorphism(GradextError):
    pass


class ContextAxiomViolation(GradextError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class NotIdempotent(GradextError):
    pass


class NotHomogeneous(GradextError):
    pass


class InfiniteDimensional(GradextError):
    pass


class NotAdmissible(GradextError):
    pass


class UnboundedSupport(GradextError):
    pass


class NotStronglyGraded(GradextError):
    pass


class NotProjectiveOneSided(GradextError):
    pass


class NotAlgebraMorphism(GradextError):
    pass


class UnknownClaim(GradextError):
    pass


class BudgetExceeded(GradextError):
    """A search was refused or abandoned; ``estimate`` is the predicted work."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
