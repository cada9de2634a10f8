class OptcutError(Exception):
    """Base class for all errors raised by optcut."""


class InvalidCutIndexError(OptcutError, ValueError):
    pass


class UndefinedMetricError(OptcutError, ValueError):
    pass


class CapacityError(OptcutError):
    """A solver or histogram would exceed its configured size limit."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class NumericError(OptcutError, ArithmeticError):
    pass


class ParseError(OptcutError, ValueError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column
