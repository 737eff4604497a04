"""Exception hierarchy.

Each error class carries the process exit code the CLI maps it to:
1 no data present, 2 invalid input, 3 capacity or truncation.
"""


class StegError(Exception):
    exit_code = 2


class InvalidInput(StegError):
    """Missing file, unusable argument, or an output path equal to an input."""


class KeyOutOfRange(InvalidInput):
    pass


class InvalidMarker(InvalidInput):
    pass


class MarkerCollision(InvalidInput):
    pass


class MalformedContainer(InvalidInput):
    pass


class NotABmp(InvalidInput):
    pass


class FormatMismatch(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class EmptyInput(InvalidInput):
    pass


class UnsupportedRecordVersion(InvalidInput):
    pass


class NoDataPresent(StegError):
    exit_code = 1

    def __init__(self, message="no data present in the image"):
        super().__init__(message)


class TruncatedRecord(StegError):
    exit_code = 3


class CapacityExceeded(StegError):
    exit_code = 3
