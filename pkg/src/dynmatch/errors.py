"""Exception hierarchy shared across the solver."""


class DynmatchError(Exception):
    """Base class for all library errors."""


class UnknownAgent(DynmatchError):
    """An agent name does not belong to the economy."""


class NotAvailable(DynmatchError):
    """The agent is not available to match at the requested period."""


class InvalidHistory(DynmatchError):
    """A matching prefix violates feasibility or irreversibility."""


class NotAContinuation(DynmatchError):
    """The matching does not extend the given history/economy."""


class SizeLimitExceeded(DynmatchError):
    """Exhaustive enumeration exceeded the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"enumeration exceeded the cap of {cap} matchings")
        self.cap = cap


class TiesPresent(DynmatchError):
    """Deferred acceptance requires strict preferences after truncation."""


class LoneWolfViolation(DynmatchError):
    """Two stable matchings of one static economy leave different agents unmatched."""


class NotACandidate(DynmatchError):
    """Consistency was queried at a matching outside the candidate set."""


class EmptyFixedPoint(DynmatchError):
    """The continuation-value iteration converged to an empty conjecture set.

    The underlying theory guarantees nonemptiness, so this signals an
    implementation bug rather than a property of the input.
    """


class EmptyContinuationSolutions(DynmatchError):
    """A continuation economy has no solutions while building candidates."""


class BadMatchingSpec(DynmatchError):
    """A textual matching description could not be parsed or validated."""


class DslError(DynmatchError):
    """Base class for economy-file errors; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DslSyntaxError(DslError):
    pass


class DuplicateAgent(DslError):
    pass


class UnknownPartner(DslError):
    pass


class BadRational(DslError):
    pass


class ArrivalOutOfRange(DslError):
    pass


class OrdinalViolation(DynmatchError):
    """An ordinal annotation is not honored by the cardinal utilities."""

    def __init__(self, owner: str, first, second, lhs, rhs):
        super().__init__(
            f"ordinal list of {owner}: entry {first} (value {lhs}) does not "
            f"strictly beat entry {second} (value {rhs})"
        )
        self.owner = owner
        self.first = first
        self.second = second
        self.lhs = lhs
        self.rhs = rhs
