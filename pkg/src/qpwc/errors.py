"""Exception types shared across the package."""


class QpwcError(Exception):
    """Base class for all package-specific errors."""


class SignatureMismatch(QpwcError, ValueError):
    """Operands live on differently shaped tensor-product spaces."""


class NonHermitianError(QpwcError, ValueError):
    """An operation required a Hermitian operator and did not get one."""


class CommensurabilityError(QpwcError, ValueError):
    """A frequency or grid offset does not sit on the clock's lattice."""


class AsymmetricGridError(QpwcError, ValueError):
    """The clock's tick grid is not symmetric about zero."""


class UndefinedRelativeState(QpwcError, ValueError):
    """Conditioning on a clock tick with zero amplitude."""


class NoClockSignal(QpwcError, RuntimeError):
    """The descriptors carry no clock dependence, so no shift is recoverable."""


class NoMatch(QpwcError, RuntimeError):
    """No candidate shift reproduces the target descriptors."""


class UnknownCheck(QpwcError, KeyError):
    """A check id was requested that the registry does not define."""
