"""
Exception hierarchy for qsynth
CLI exit codes are derived from these classes (see qsynth.cli.commands)
"""

from typing import Optional


class QSynthError(Exception):
    """Base class for all engine errors"""


class InputError(QSynthError, ValueError):
    """Malformed user input: circuit text, permutation text, bad arguments"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{where}: {message}"
        super().__init__(message)


class DatabaseFormatError(InputError):
    """A database file failed to parse or a record failed re-verification"""

    def __init__(self, message: str, record: Optional[int] = None, line: Optional[int] = None):
        self.record = record
        if record is not None:
            message = f"record {record}: {message}"
        super().__init__(message, line=line)


class BoundExceededError(QSynthError):
    """The target's minimum cost is above the requested bound"""

    def __init__(self, target, bound: int, reason: str = ''):
        self.target = target
        self.bound = bound
        message = f"no realization of {target} with cost <= {bound}"
        if reason:
            message = f"{message} ({reason})"
        super().__init__(message)


class BudgetExceededError(QSynthError):
    """
    Breadth-first search ran past its memory ceiling

    The partial database (layers 0..last_layer) and the layer statistics
    gathered so far travel with the exception.
    """

    def __init__(self, last_layer: int, database=None, layers=None, needed_bytes: int = 0,
                 ceiling_bytes: int = 0):
        self.last_layer = last_layer
        self.database = database
        self.layers = layers or []
        self.needed_bytes = needed_bytes
        self.ceiling_bytes = ceiling_bytes
        super().__init__(
            f"memory ceiling of {ceiling_bytes // (1024 * 1024)} MB exceeded while expanding "
            f"layer {last_layer + 1} (needed ~{needed_bytes // (1024 * 1024)} MB); "
            f"last completed layer is {last_layer}"
        )


class VerificationError(QSynthError):
    """A synthesized circuit did not re-evaluate to its target"""
