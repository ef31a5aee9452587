"""Exception hierarchy shared across the package."""


class KummerlabError(Exception):
    """Base class for all package errors."""


class OverflowGuardError(KummerlabError):
    """Modulus exceeds the supported 2^63 range."""


class ModulusMismatchError(KummerlabError):
    """Operands live over different moduli."""


class NonInvertibleError(KummerlabError):
    """A matrix (or generator) has non-unit determinant."""


class GroupTooLargeError(KummerlabError):
    """Group closure exceeded the configured element cap."""


class CohomologyCapError(KummerlabError):
    """Group is too large for the cohomology solver."""


class ConvergenceDomainError(KummerlabError):
    """Argument outside the convergence domain of a p-adic series."""


class HypothesisError(KummerlabError):
    """A verification was invoked on an instance violating its hypotheses.

    Kept distinct from an actual containment/claim failure so that misuse
    is never reported as a falsified statement.
    """


class InconsistentGroupError(KummerlabError):
    """Input group data violates a structural invariant (e.g. non-integral
    fiber ratios)."""


class DescriptorError(KummerlabError):
    """Malformed or invalid JSON descriptor."""
