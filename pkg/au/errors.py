class AUError(Exception):
    pass


class MalformedPoint(AUError, ValueError):
    pass


class MalformedGenerator(AUError, ValueError):
    pass


class MalformedFragment(AUError, ValueError):
    pass


class EmptyOpen(AUError):
    pass


class SamePoint(AUError):
    pass


class EmptySystem(AUError):
    pass


class ProductivityViolation(AUError):
    """An enumerated set failed to produce fresh elements within its budget."""


class IllFormedSelector(AUError):
    pass


class BadSchedule(AUError):
    pass


class TransversalDeficit(AUError):
    """Some column carries fewer transversal cells than the fiber bound."""

    def __init__(self, columns: list[int]):
        self.columns = columns
        super().__init__(f"Transversal deficit in columns {columns}")


class VerificationFailure(AUError):
    pass
