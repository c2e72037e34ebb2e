"""Exception and warning types shared across the package.

Everything numeric derives from MvfError so callers (and the CLI) can
distinguish precondition/numerical failures from usage errors.
"""


class MvfError(Exception):
    """Base class for numeric and precondition failures."""


class NotSymmetric(MvfError):
    pass


class NotSPD(MvfError):
    pass


class NotSkewSymmetric(MvfError):
    pass


class LogBranchFailure(MvfError):
    """Principal matrix logarithm undefined: an eigenvalue sits at -1.

    Carries ``interval`` when raised while building a piecewise curve, so the
    caller knows which sample pair needs densifying or re-parameterizing.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class SingularInput(MvfError):
    pass


class ZeroPrincipalMinor(MvfError):
    def __init__(self, index, message=None):
        super().__init__(message or f"leading principal minor {index} vanishes")
        self.index = index

    def __str__(self):
        return f"ZeroPrincipalMinor({self.index})"


class NonPositiveDeterminant(MvfError):
    pass


class DegreeMismatch(MvfError):
    pass


class NonPositiveSample(MvfError):
    def __init__(self, index, message=None):
        super().__init__(message or f"sample {index} is not positive")
        self.index = index


class SignPatternViolation(MvfError):
    def __init__(self, sample_index, position, message=None):
        super().__init__(
            message
            or f"diagonal position {position} changes sign at sample {sample_index}"
        )
        self.sample_index = sample_index
        self.position = position


class ZeroDiagonal(MvfError):
    pass


class SignVectorMismatch(MvfError):
    def __init__(self, first, second, message=None):
        super().__init__(
            message
            or f"samples {first} and {second} have different principal minor signs"
        )
        self.first = first
        self.second = second


class ClassViolation(MvfError):
    pass


class SelfCheckError(MvfError):
    """An internal consistency cross-check failed after a computation."""


class SampleFileError(Exception):
    """Malformed sample file or configuration. A usage error, not numeric."""


class DegenerateSpectrum(UserWarning):
    """Eigenvalue gap below resolution: sorted spectral factors are unstable."""
