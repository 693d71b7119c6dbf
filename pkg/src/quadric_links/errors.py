"""Exception types shared across modules.

The CLI maps them onto exit codes: input problems exit 1, refused
computations exit 2, invariant violations exit 3.
"""


class QuadricLinksError(Exception):
    pass


class InvalidInput(QuadricLinksError, ValueError):
    pass


class RefusedComputation(QuadricLinksError):
    pass


class InvariantViolation(QuadricLinksError, AssertionError):
    pass


class InadmissibleConfiguration(InvalidInput):
    pass


class InvalidFlip(InvalidInput):
    def __init__(self, condition: str, message: str):
        super().__init__(message)
        self.condition = condition


class NonGenericPath(InvalidInput):
    pass


class InadmissibleEndpoint(InvalidInput):
    pass
