"""Exception types shared across the toolkit.

Everything raised on bad user input derives from :class:`PolicyLensError`
so the CLI can map it to exit code 2 in one place.
"""

from __future__ import annotations


class PolicyLensError(Exception):
    """Base class for all input/contract errors raised by this package."""


# -- corpus ---------------------------------------------------------------

class MalformedRecord(PolicyLensError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class UnknownLabel(PolicyLensError):
    def __init__(self, name: str):
        super().__init__(f"unknown label: {name!r}")
        self.name = name


class DuplicateId(PolicyLensError):
    def __init__(self, id_: str):
        super().__init__(f"duplicate id: {id_!r}")
        self.id = id_


class SpanOutOfBounds(PolicyLensError):
    def __init__(self, statement_id: str, reason: str = ""):
        msg = f"statement {statement_id!r} span out of bounds"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.statement_id = statement_id


class NoSentences(PolicyLensError):
    """Readability scoring needs at least one terminated sentence."""


class NoWords(PolicyLensError):
    """Readability scoring needs at least one word."""


# -- vectorize ------------------------------------------------------------

class EmptyTrainingSet(PolicyLensError):
    """Fitting or training was handed zero instances."""


class EmptyFile(PolicyLensError):
    """An input file that must have content was empty."""


class InconsistentDimension(PolicyLensError):
    def __init__(self, line_no: int, expected: int, got: int):
        super().__init__(
            f"line {line_no}: expected {expected} vector entries, got {got}"
        )
        self.line_no = line_no


class MalformedFloat(PolicyLensError):
    def __init__(self, line_no: int, token: str):
        super().__init__(f"line {line_no}: not a float: {token!r}")
        self.line_no = line_no


class ZeroVector(PolicyLensError):
    """Cosine similarity is undefined for a zero vector."""


class DimensionMismatch(PolicyLensError):
    def __init__(self, expected: int, got: int, what: str = "vector"):
        super().__init__(f"{what} dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


# -- evaluation -----------------------------------------------------------

class InsufficientData(PolicyLensError):
    def __init__(self, n: int, k: int):
        super().__init__(f"cannot split {n} instances into {k} folds")
        self.n = n
        self.k = k


class LengthMismatch(PolicyLensError):
    def __init__(self, n_gold: int, n_pred: int):
        super().__init__(f"gold has {n_gold} instances, predictions have {n_pred}")


class EmptyInput(PolicyLensError):
    """Metrics over zero instances are undefined."""
