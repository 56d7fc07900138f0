"""Exception hierarchy shared by all modules."""


class PrimeModuliError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(PrimeModuliError, ValueError):
    """Input violates a documented precondition."""


class ResourceCapError(PrimeModuliError):
    """A configured enumeration or pair budget was exhausted."""


class NotAForestError(InvalidInputError):
    pass


class MarkingConflictError(InvalidInputError):
    pass


class ValenceError(InvalidInputError):
    pass


class RelationViolationError(PrimeModuliError):
    """A ring map sends a source relation to a non-zero element."""

    def __init__(self, relation, image):
        super().__init__(f"relation {relation} maps to non-zero {image}")
        self.relation = relation
        self.image = image


class NonInvariantError(PrimeModuliError):
    def __init__(self, expression, group_index):
        super().__init__(f"{expression} is not fixed by group element #{group_index}")
        self.expression = expression
        self.group_index = group_index


class SpanGapError(PrimeModuliError):
    def __init__(self, degree, spanned, expected):
        super().__init__(
            f"degree {degree}: generators span {spanned} of {expected} invariant dimensions"
        )
        self.degree = degree
        self.spanned = spanned
        self.expected = expected


class IntertwiningError(PrimeModuliError):
    pass


class FactorDataError(PrimeModuliError):
    """Prime-factor data for n > 0 is missing or cannot support the request."""


class ExcludedCaseError(InvalidInputError):
    """The requested (g, n) is excluded by the theory (e.g. g=1, n=0)."""
