"""Exception types shared across the package.

Every failure mode that callers are expected to catch has its own class so
that the pipeline can distinguish "this l is inconclusive" from "the engine
is broken".
"""


class HplusError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatch(HplusError):
    """Two ring elements or ideals with incompatible ring shapes."""


class ZeroPolynomial(HplusError):
    """Leading term requested of the zero element."""


class NotSubideal(HplusError):
    """Quotient order requested for J not contained in I."""


class OracleMismatch(HplusError):
    """The two independent ideal engines disagree; signals an engine bug."""


class SearchExhausted(HplusError):
    """Prime search hit its ceiling before finding enough witnesses."""


class NotInSubgroup(HplusError):
    """Discrete log requested for an element outside the order-M subgroup."""


class DegenerateUnit(HplusError):
    """A (1 - zeta...) factor vanished mod r; the witness is corrupted."""


class PrecisionInsufficient(HplusError):
    """A floating-point check lost all significant digits."""


class RoundingAmbiguous(HplusError):
    """A coefficient is too far from every integer to round confidently."""


class FactorizationIncomplete(HplusError):
    """The annihilator generator does not fit the supported norm patterns."""


class DivisionFailed(HplusError):
    """Exact polynomial division left a nonzero remainder."""


class BudgetExhausted(HplusError):
    """Ran out of Frobenius primes before the ideal chain stabilized."""


class MCapReached(HplusError):
    """Power-of-l escalation hit the configured cap without stabilizing."""
