"""
Error types for the agfft encoder
Every failure raised by the library derives from AgfftError
"""

from typing import Optional


class AgfftError(Exception):
    """Base class for all library errors"""


class ValidationError(AgfftError):
    """Bad parameters, descriptors or input files (CLI exit code 2)"""


# field

class DivisionByZero(AgfftError, ZeroDivisionError):
    """Inversion of the zero element"""


class InvalidModulus(ValidationError):
    """Modulus is not an irreducible polynomial of the requested degree"""


class NoSuchRoot(ValidationError):
    """No element of the requested multiplicative order exists"""


class InvalidSubfield(ValidationError):
    """Subfield degree does not divide the extension degree"""


class NotAnMthPower(AgfftError):
    """Element has no m-th root in the field"""


class ZeroInput(AgfftError):
    """Zero passed where a unit is required"""


class KernelDefect(ValidationError):
    """Linearized polynomial does not split over the field"""


class NotSmooth(ValidationError):
    """Integer has a prime factor above the smoothness bound"""

    def __init__(self, witness: int, n: Optional[int] = None, bound: Optional[int] = None):
        self.witness = witness
        self.n = n
        self.bound = bound
        message = f"prime factor {witness} exceeds smoothness bound"
        if n is not None:
            message = f"{n} has prime factor {witness} exceeding bound {bound}"
        super().__init__(message)


class DegreeTooLarge(ValidationError):
    """Polynomial degree does not fit the evaluation domain"""


# tower / curves

class DescriptorError(ValidationError):
    """Extension descriptor fails its structural checks"""


class FiberDefect(AgfftError):
    """Generated fiber point does not satisfy the curve equation"""


class EmptyPointSet(ValidationError):
    """No base place splits completely"""


class BadKappa(ValidationError):
    """Curve parameter kappa is not a usable prime power"""


class BadTowerHeight(ValidationError):
    """Tower height outside 2 <= n <= kappa/2"""


# rroch

class DimensionMismatch(AgfftError):
    """Basis size disagrees with the Riemann-Roch count"""


class LengthMismatch(ValidationError):
    """Vector length does not match the code parameters"""


class UnsupportedBase(ValidationError):
    """Descriptor shape outside the supported rational and tower bases"""


# encoder / oracle

class PlanMismatch(AgfftError):
    """Function or codeword does not belong to this plan"""


class SingularFiber(AgfftError):
    """Fiber Vandermonde matrix is not invertible"""


class NotInCode(AgfftError):
    """Word is not a codeword of the planned code"""


class RankDefect(AgfftError):
    """Generator matrix rank is below the code dimension"""


class NotCoprime(ValidationError):
    """Semigroup generators share a common factor"""


class InputFormatError(ValidationError):
    """Malformed message or codeword file"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
