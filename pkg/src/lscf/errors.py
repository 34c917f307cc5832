"""Exception types shared across the package."""


class LscfError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatch(LscfError):
    """Two operands live over different prime fields."""


class DivisionByZero(LscfError, ZeroDivisionError):
    """Division by the zero polynomial or the zero series."""


class OutOfDomain(LscfError):
    """Input falls outside an operation's domain (e.g. norm >= 1, degree < 1)."""


class CapExceeded(LscfError):
    """An enumeration or search would exceed its configured cap."""


class PrecisionExhausted(LscfError):
    """A certified answer cannot be produced from the known coefficients."""


class NotMember(LscfError):
    """Element is not a member of the digit source in question."""


class DegenerateWindow(LscfError):
    """Too few data points to fit a growth envelope."""


class InsufficientArgmax(LscfError):
    """The density profile has fewer argmax points than requested."""


class InfeasibleWindow(LscfError):
    """A degree window holds no sparse-subset element."""


class PlanViolation(LscfError):
    """An insertion plan's invariants fail, or a sequence does not match a plan."""


class NoDivergence(LscfError):
    """Two digit sequences agree through the whole comparison horizon."""


class SearchExhausted(LscfError):
    """A bounded parameter search ended without a witness."""
