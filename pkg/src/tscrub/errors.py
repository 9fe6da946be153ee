"""Exception types raised by the cleaning pipeline and its stages."""


class CleaningError(Exception):
    """Base class for all errors raised by this package."""


# --- timestamp format / parsing ---

class UnknownComponent(CleaningError):
    """Format spec contains a character outside {y, m, d, H, M, S}."""


class DuplicateComponent(CleaningError):
    """Format spec repeats a component."""


class MissingDateComponent(CleaningError):
    """Format spec lacks one of y, m, d."""


class BadTimeOrder(CleaningError):
    """Time components out of H->M->S prefix order (e.g. seconds without minutes)."""


class FieldCountMismatch(CleaningError):
    """Digit runs in the text cannot be assigned to the format's components."""


class OutOfRangeField(CleaningError):
    """A parsed field is outside its calendar range (month 13, Feb 30, hour 25, ...)."""


class NoOrderParsesAnything(CleaningError):
    """Every candidate format order failed on every row."""


# --- ingest ---

class IoError(CleaningError):
    """File or folder could not be read."""


class RaggedRows(CleaningError):
    """CSV rows disagree with the header on field count."""


class EmptyFile(CleaningError):
    """CSV has no header row."""


class NoSuchColumn(CleaningError):
    """A named time/value column does not exist in the table."""


# --- timeline repair ---

class TooFewPoints(CleaningError):
    """Fewer than two distinct instants; no interval can be inferred."""


class NoPositiveDifference(CleaningError):
    """No positive gap between consecutive instants."""


class OffGridTimestamp(CleaningError):
    """An instant is not on start + k * interval for the inferred interval."""


# --- imputation ---

class AllMissing(CleaningError):
    """Every value is absent; nothing to impute from."""


class TooFewObserved(CleaningError):
    """Not enough observed values to fit the state-space model."""


class NonFiniteLikelihood(CleaningError):
    """Model fitting produced a non-finite log-likelihood."""


class DuplicateId(CleaningError):
    """A method with this id is already registered."""


class ContractViolation(CleaningError):
    """An imputation method broke its contract (length, gaps, or observed values)."""


class ChildFailed(CleaningError):
    """External imputation command exited nonzero or could not be run."""


# --- benchmark ---

class FractionTooSmall(CleaningError):
    """Simulated-missing fraction masks zero positions."""


class CannotPlaceBlocks(CleaningError):
    """Gave up placing non-overlapping missing blocks after repeated rejections."""


class SegmentTooShort(CleaningError):
    """Longest gap-free segment is too short to benchmark on."""


# --- anomaly ---

class SeriesTooShort(CleaningError):
    """Series too short for period inference or decomposition."""


# --- windows ---

class BadSpec(CleaningError):
    """Window interval specification is malformed."""


# --- change log / revert ---

class UnknownChangeId(CleaningError):
    """Revert referenced a change id that is not in the log."""


class IrreversibleChange(CleaningError):
    """Revert referenced a structural change that cannot be undone."""
