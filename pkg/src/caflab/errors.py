"""Exception types shared across the package."""


class CaflabError(Exception):
    """Base class for all package errors."""


class BadLengthError(CaflabError):
    """A sequence has the wrong length for the given sizes."""


class BadCategoryError(CaflabError):
    """A category index is outside [0, rho)."""


class NotSurjectiveError(CaflabError):
    """An assignment misses at least one category."""

    def __init__(self, missing, message=None):
        self.missing = sorted(missing)
        super().__init__(message or f"categories never assigned: {self.missing}")


class BudgetExceededError(CaflabError):
    """The requested computation is larger than the configured budget."""

    def __init__(self, estimate, budget, what="candidates"):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{what}: {estimate:,} exceeds budget {budget:,}")


class NoWitnessError(CaflabError):
    """No category vector maps the object to the requested category."""


class PreconditionError(CaflabError):
    """A caller-side precondition does not hold."""


class NotABijectionError(CaflabError):
    """The unanimity map p -> alpha_x(p,...,p) is not a bijection."""


class VerificationError(CaflabError):
    """The pivotal extraction could not confirm its result."""


class HypothesisError(CaflabError):
    """Parameters violate the hypotheses of the requested claim."""


class SchemaError(CaflabError):
    """A CAF document does not match the expected schema."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
