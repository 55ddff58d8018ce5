"""Exception types shared across the toolkit."""


class LubkitError(Exception):
    """Base class for all toolkit errors."""


class CycleError(LubkitError):
    """Transitive closure of the input pairs would break antisymmetry."""


class BoundExceeded(LubkitError):
    """A requested enumeration exceeds the configured size bound."""


class LubMismatch(LubkitError):
    """A designated natural set does not have the claimed lub."""

    def __init__(self, members, claimed, actual):
        self.members = members
        self.claimed = claimed
        self.actual = actual
        super().__init__(
            f"set {sorted(members)} has lub {actual!r}, not {claimed!r}"
        )


class NotDirected(LubkitError):
    """A natural set in directed mode is not directed."""


class EmptySetWithoutBottom(LubkitError):
    """The empty set can only be natural when the order has a least element."""


class ModeMismatch(LubkitError):
    """Operation is undefined for the mode of the given structure."""


class NotInCarrier(LubkitError):
    """A function is not an element of the function-space carrier."""


class NotDirectedPoset(LubkitError):
    """The index order is not directed as a set."""


class NotContinuous(LubkitError):
    """A supplied map is not continuous; carries the offending index."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"map #{index} is not continuous")


class ParseError(LubkitError):
    """Syntax error in a .lub file; carries 1-based line number."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")
