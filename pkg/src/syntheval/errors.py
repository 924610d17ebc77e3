"""Exception types shared across the package.

The split matters to the command line front end: data problems and
validation problems map to different exit codes than plain I/O failures.
"""


class SynthEvalError(Exception):
    """Base class for all errors raised by this package."""


class DataError(SynthEvalError):
    """Malformed input data: ragged rows, missing values, bad kinds."""


class ValidationError(SynthEvalError):
    """Inconsistent evaluation setup: mismatched tables, bad config."""
