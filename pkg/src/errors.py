"""Exception hierarchy for amoeba computations"""

from typing import Optional


class AmoebaError(Exception):
    """Base class for all errors raised by the package"""

    exit_code = 1


class UsageError(AmoebaError):
    """Bad command-line usage (names the offending flag)"""

    exit_code = 2

    def __init__(self, message: str, flag: Optional[str] = None):
        self.flag = flag
        super().__init__(f"{flag}: {message}" if flag else message)


class PreconditionError(AmoebaError):
    """A numeric precondition of an operation does not hold"""

    exit_code = 3


class InvalidSpec(PreconditionError):
    """Malformed affine space description"""


class AllConstantsZero(PreconditionError):
    """Every constant b_j vanishes, so the space carries a C*-action"""

    def __init__(self):
        super().__init__("all constants b_j are zero; the space is not generic")


class ZeroRowCoefficient(PreconditionError):
    """The pivot row has a vanishing linear coefficient"""

    def __init__(self, row: int, index: int):
        self.row = row
        self.index = index
        super().__init__(f"pivot row {row} has a_{{{row},{index}}} = 0; cannot translate by a")


class DimensionMismatch(PreconditionError):
    """Vector length does not match the space dimensions"""


class OffTorus(PreconditionError):
    """A coordinate vanishes, so the point leaves the complex torus"""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"coordinate {index} is zero; point is off the torus")


class UndefinedArgument(PreconditionError):
    """Argument of a vanishing affine form was requested"""

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"f_{row + 1}(t) = 0; argument undefined")


class NotSquareCase(PreconditionError):
    """Operation requires m = k"""

    def __init__(self, k: int, m: int):
        super().__init__(f"operation requires m = k, got k={k}, m={m}")


class NotOnSpace(PreconditionError):
    """Point does not lie on the affine space"""


class NotReal(PreconditionError):
    """Operation requires a real affine space"""

    def __init__(self):
        super().__init__("space is not real: coefficient ratios are not projectively real")


class NotALine(PreconditionError):
    """Operation requires k = 1"""

    def __init__(self, k: int):
        super().__init__(f"operation requires a line (k = 1), got k={k}")


class ZeroConstant(PreconditionError):
    """A row used by the line quadrics has b_j = 0"""

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} has zero constant term")


class DimensionTooLarge(PreconditionError):
    """Torus grid search requested in too many variables"""


class NonGeneric(PreconditionError):
    """Space is critical almost everywhere (e.g. a linear space through the origin)"""


class UnknownColumn(PreconditionError):
    """A requested column is missing from a point cloud"""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"unknown column '{column}'")


class NumericalInconsistency(PreconditionError):
    """A closed-form expansion disagreed with direct evaluation"""


class IoError(AmoebaError):
    """Reading or writing a file failed"""

    exit_code = 4
