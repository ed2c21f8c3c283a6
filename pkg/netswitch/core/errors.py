"""
Error types for NetSwitch
Every error carries the exit code the command line reports for it
"""


class NetSwitchError(Exception):
    """Base class for all NetSwitch failures"""

    exit_code = 1

    def __init__(self, message, **details):
        """
        Initialize the error

        Args:
            message (str): Human readable description
            **details: Extra diagnostic values kept on the instance
        """
        super().__init__(message)
        self.message = message
        self.details = details


class ParseError(NetSwitchError):
    """Malformed input file or configuration"""

    exit_code = 2

    def __init__(self, message, path=None, line=None, **details):
        """
        Initialize the parse error

        Args:
            message (str): What went wrong
            path (str, optional): File being read
            line (int, optional): 1-based line number of the offending entry
        """
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(location + message, **details)
        self.path = path
        self.line = line


class PreconditionError(NetSwitchError):
    """An operation was called on inputs outside its domain"""

    exit_code = 3


class NetworkError(PreconditionError):
    """Invalid network weights"""


class NonCommutingError(PreconditionError):
    """The two networks do not commute within tolerance"""


class DegenerateSpectrumError(PreconditionError):
    """Repeated eigenvalues where distinct ones are required"""


class NoRealLogarithmError(PreconditionError):
    """The matrix has no principal real logarithm"""


class NonUniqueMaximumError(PreconditionError):
    """More than one eigenvalue attains the spectral abscissa; use general_condition"""


class ImprovementConditionError(PreconditionError):
    """Switching cannot improve resilience, so no bound applies"""


class IncompatiblePatternError(PreconditionError):
    """The sparsity pattern admits no nontrivial commuting network"""


class PatternNotFoundError(PreconditionError):
    """No rank-deficient initial pattern was found within the attempt budget"""


class InfeasibleProgramError(PreconditionError):
    """A linear program built by the design pipeline turned out infeasible"""


class NumericalError(NetSwitchError):
    """A numerical kernel failed or produced unusable output"""

    exit_code = 4


class EigenSolverError(NumericalError):
    """The eigenvalue solver did not converge"""


class MatrixOverflowError(NumericalError):
    """Matrix entries exceeded the floating point range"""


class IterationLimitError(NumericalError):
    """The simplex method hit its iteration cap"""

    def __init__(self, message, best=None, **details):
        """
        Initialize the iteration limit error

        Args:
            message (str): What went wrong
            best (LPSolution, optional): Last basic solution reached
        """
        super().__init__(message, **details)
        self.best = best


class SolverFailure(NumericalError):
    """An optimization stage failed with no usable result"""
