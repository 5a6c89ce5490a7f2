from bayesmix.errors import (
    BayesmixError,
    ConfigurationError,
    DataIngestionError,
    DegeneratePriorError,
    EmptySelectionError,
    FactorizationError,
    IdentificationError,
    InvalidDataError,
    InvalidParameterError,
    NumericalError,
    PartitionMismatchError,
    SamplerError,
)

# Most specific class first
EXIT_CODES: list[tuple[type[BayesmixError], int]] = [
    (DataIngestionError, 2),
    (InvalidDataError, 2),
    (PartitionMismatchError, 2),
    (DegeneratePriorError, 2),
    (ConfigurationError, 3),
    (InvalidParameterError, 3),
    (SamplerError, 4),
    (NumericalError, 4),
    (FactorizationError, 4),
    (EmptySelectionError, 5),
    (IdentificationError, 5),
]


def exit_code_for(exc: BayesmixError) -> int:
    for exc_type, code in EXIT_CODES:
        if isinstance(exc, exc_type):
            return code
    return 1
