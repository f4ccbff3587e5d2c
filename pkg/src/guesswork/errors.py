"""Exception hierarchy; every domain failure derives from ``GuessworkError``."""


class GuessworkError(ValueError):
    pass


class InputError(GuessworkError):
    """Malformed or out-of-range input."""


class ArityError(GuessworkError):
    """Partition, noise alphabet and distribution sizes disagree."""


class TiesPresentError(GuessworkError):
    """Posterior terms are not pairwise distinct, so a count cannot be certified."""


class CapExceededError(GuessworkError):
    """Exhaustive search requested above its configured size cap."""


class ConditionError(GuessworkError):
    """A precondition of the requested algorithm does not hold."""
