"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class TensorAuditError(Exception):
    exit_code = 1
    kind = "error"


class ArgumentError(TensorAuditError, ValueError):
    """Invalid argument: bad mode, shape mismatch, out-of-range dims."""

    exit_code = 1
    kind = "usage"


class DataError(TensorAuditError, ValueError):
    """Input data unusable: non-finite values, empty corpora, degenerate spectra."""

    exit_code = 2
    kind = "data"


class FormatError(DataError):
    """Malformed tensor or image file."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class NumericalError(TensorAuditError, ArithmeticError):
    """Solver breakdown. Carries the iteration index and factor name when known."""

    exit_code = 3
    kind = "numerical"

    def __init__(self, message, iteration=None, factor=None):
        parts = [message]
        if factor is not None:
            parts.append(f"factor={factor}")
        if iteration is not None:
            parts.append(f"iteration={iteration}")
        super().__init__("; ".join(parts))
        self.iteration = iteration
        self.factor = factor
