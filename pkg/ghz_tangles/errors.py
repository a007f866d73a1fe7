from enum import IntEnum


class ExitCode(IntEnum):
    OK = 0
    VIOLATION = 1
    USAGE = 2
    NUMERIC = 3


class TangleError(Exception):
    """Base class of all errors raised by ghz-tangles."""


class InvalidStateError(TangleError, ValueError):
    """Zero, non-finite, wrongly sized or unnormalized state data."""


class InvalidSupportError(InvalidStateError):
    """A density matrix has weight outside the span of |0...0> and |1...1>."""


class ArityError(TangleError, ValueError):
    """The number of parties does not match what the operation needs."""


class DomainError(TangleError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class DegenerateParameterError(DomainError):
    """GHZ-class parameters with a vanishing normalization denominator."""


class DegenerateBranchError(DomainError):
    """Tangle tuples on the t = 0 branch that the inversion formulas exclude."""


class SizeError(TangleError, ValueError):
    """Qubit counts beyond the supported ceilings."""


class UnsupportedRankError(TangleError, ValueError):
    """Mixed states of rank above two where only the rank-two formulas exist."""


class UnsupportedParityError(TangleError, ValueError):
    """Mixed tangles on an odd number of parties."""


class ClassExitError(TangleError, ValueError):
    """A singular local operator moves the state out of the GHZ class."""


class InconsistentTanglesError(TangleError, ValueError):
    """Tangles that no single-party spectrum can produce."""


class IncompatibleMarginalsError(TangleError, ValueError):
    """Single-party eigenvalues that no pure 3-qubit state can produce."""


class ParseError(TangleError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, position: int = 0) -> None:
        """Malformed input file."""
        super().__init__(f"{message} (line {line}, column {column}, char {position})")
        self.line = line
        self.column = column
        self.position = position


class UsageError(TangleError, ValueError):
    """Unknown suite or constraint names and similar command-line mistakes."""


class NumericContractError(TangleError, ArithmeticError):
    """Numerical input that breaks a contract, e.g. a non-Hermitian matrix."""


class ConsistencyError(TangleError, ArithmeticError):
    """An identity that must hold exactly is violated beyond tolerance."""


class NumericFailure(TangleError, ArithmeticError):
    def __init__(self, message: str, residual: float) -> None:
        """An iterative or search procedure did not reach its target."""
        super().__init__(f"{message} (best residual {residual:.3e})")
        self.residual = residual


def exit_code_for(error: BaseException) -> ExitCode:
    """Map an exception to the exit status of the command line tool."""
    if isinstance(error, (NumericFailure, NumericContractError, ConsistencyError)):
        return ExitCode.NUMERIC
    return ExitCode.USAGE
