"""Exception hierarchy. CLI exit codes map onto the three branches:
usage errors exit 1, data errors exit 2, numerical errors exit 3."""


class SleepLensError(Exception):
    pass


class UsageError(SleepLensError):
    exit_code = 1


class DataError(SleepLensError):
    exit_code = 2


class NumericalError(SleepLensError):
    exit_code = 3


# --- data-shaped failures -------------------------------------------------

class ParseError(DataError):
    """Malformed binary input; carries the byte offset where parsing failed."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class StructuralError(DataError):
    pass


class LabelError(DataError):
    pass


class AlignmentError(DataError):
    pass


class SplitError(DataError):
    pass


class SpectralError(DataError):
    pass


class BandError(DataError):
    pass


class CatalogError(DataError):
    pass


class SelectionError(DataError):
    pass


class DimensionError(DataError):
    pass


class ProvenanceError(DataError):
    pass


class EvaluationError(DataError):
    pass


class AttributionError(DataError):
    pass


class SizeError(DataError):
    pass


class ReportError(DataError):
    pass


# --- numerical failures ---------------------------------------------------

class SingularityError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass


class TrainingError(NumericalError):
    pass
