"""Exception and warning classes shared across the package."""


class DetourChoiceError(Exception):
    """Base class for all errors raised by detour_choice."""


class SchemaError(DetourChoiceError):
    """Input file does not match the expected column layout."""


class ParseError(DetourChoiceError):
    """A cell could not be parsed; message carries the row number."""


class ValidationError(DetourChoiceError):
    """A record violates a domain invariant."""


class EmptyDatasetError(DetourChoiceError):
    def __init__(self, msg="empty dataset"):
        super().__init__(msg)


class SpecificationError(DetourChoiceError):
    """Model specification is inconsistent with the data or parameters."""


class DataError(DetourChoiceError):
    """Non-finite attribute values reached the likelihood."""


class DegenerateChoiceSetError(DetourChoiceError):
    """A choice set holds fewer than two alternatives."""


class UndefinedCellError(DetourChoiceError):
    """An MPE cell has no contributing observations."""


class ConfigError(DetourChoiceError):
    """Run configuration is malformed or contains unknown keys."""


class SeparationWarning(UserWarning):
    """A coefficient drifted to implausibly large magnitude during estimation."""


class RangeWarning(UserWarning):
    """A stated survey value lies outside the instrument's option range."""


class GridBoundaryWarning(UserWarning):
    """The grid search optimum sits on the boundary of the searched box."""


class IdentificationWarning(UserWarning):
    """Some coefficients are not separately identified by the design."""
