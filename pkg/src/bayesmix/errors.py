class BayesmixError(Exception):
    """Base exception for all bayesmix errors."""


class InvalidParameterError(BayesmixError):
    def __init__(self, name: str, detail: str) -> None:
        self.name = name
        self.detail = detail
        super().__init__(f"Invalid parameter '{name}': {detail}")


class DomainError(BayesmixError):
    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(detail)


class FactorizationError(BayesmixError):
    def __init__(self, what: str) -> None:
        self.what = what
        super().__init__(
            f"Cholesky factorization failed for {what}: matrix is not positive definite"
        )


class NumericalError(BayesmixError):
    def __init__(self, detail: str, observation: int | None = None) -> None:
        self.detail = detail
        self.observation = observation
        suffix = f" (observation {observation + 1})" if observation is not None else ""
        super().__init__(f"{detail}{suffix}")


class InvalidDataError(BayesmixError):
    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(detail)


class DataIngestionError(BayesmixError):
    def __init__(self, path: str, detail: str) -> None:
        self.path = path
        self.detail = detail
        super().__init__(f"Cannot read {path}: {detail}")


class DegeneratePriorError(BayesmixError):
    def __init__(self, detail: str, column: str | None = None) -> None:
        self.column = column
        self.detail = detail
        super().__init__(detail)


class ConfigurationError(BayesmixError):
    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(detail)


class PreconditionError(BayesmixError):
    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(detail)


class SamplerError(BayesmixError):
    def __init__(self, iteration: int, step: str, reason: str) -> None:
        self.iteration = iteration
        self.step = step
        self.reason = reason
        super().__init__(f"Sampler failed at iteration {iteration} in {step}: {reason}")


class EmptySelectionError(BayesmixError):
    def __init__(self, k_plus: int) -> None:
        self.k_plus = k_plus
        super().__init__(f"No sweep has exactly {k_plus} filled components")


class IdentificationError(BayesmixError):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Identification failed: {reason}")


class PartitionMismatchError(BayesmixError):
    def __init__(self, expected: int, actual: int) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"Partitions differ in length: {expected} != {actual}")
