"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class UnicoverError(Exception):
    exit_code = 1


class ContractViolation(UnicoverError, ValueError):
    """A precondition of an operation was not met by the caller."""

    exit_code = 2


class SchemaError(UnicoverError):
    """Input JSON does not describe a well-formed simplicial set or field."""

    exit_code = 3


class NotConnected(UnicoverError):
    exit_code = 4

    def __init__(self, vertex):
        super().__init__(f"1-skeleton is not connected: vertex {vertex!r} is unreachable")
        self.vertex = vertex


class GroupTooLargeOrInfinite(UnicoverError):
    exit_code = 5


class NilpotencyFailure(UnicoverError):
    """The perturbation series did not vanish within the iteration cap."""

    exit_code = 6

    def __init__(self, generator, degree, max_iter):
        super().__init__(
            f"(h . delta)^k did not vanish on generator {generator!r} "
            f"(degree {degree}) within {max_iter} iterations"
        )
        self.generator = generator
        self.degree = degree
        self.max_iter = max_iter


class NotEffective(UnicoverError):
    """Homology was requested on a complex without a finite basis."""

    exit_code = 6


class CoverNotEffective(UnicoverError):
    exit_code = 6


class Unsupported(UnicoverError):
    exit_code = 7


class OracleMismatch(UnicoverError):
    exit_code = 8


class TwistingViolation(UnicoverError):
    exit_code = 9

    def __init__(self, simplex, detail=""):
        msg = f"twisting identity fails on {simplex!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.simplex = simplex


class NotSurjective(UnicoverError):
    exit_code = 9


class InadmissibleField(UnicoverError):
    exit_code = 10


class ReductionAxiomError(UnicoverError):
    """A constructed reduction failed one of its defining identities (a bug)."""

    exit_code = 70


class LiftFailure(UnicoverError):
    exit_code = 70
