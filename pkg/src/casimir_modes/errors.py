"""Exception and warning types shared by all engines."""


class CasimirError(Exception):
    """Base class for engine errors."""

    code = "engine_error"


class NonConvergence(CasimirError):
    code = "non_convergence"


class BoundaryZero(CasimirError):
    code = "boundary_zero"


class DomainError(CasimirError, ValueError):
    code = "domain_error"


class PoleHit(CasimirError):
    code = "pole_hit"


class CountMismatch(CasimirError):
    code = "count_mismatch"


class SumRuleViolation(CasimirError):
    code = "sum_rule_violation"


class StrongCouplingError(CasimirError):
    code = "strong_coupling"


class GeometryError(CasimirError, ValueError):
    code = "geometry_error"


class ContinuationWarning(UserWarning):
    """Raised as a warning when a permittivity is continued below the real axis."""


class AccuracyDegraded(UserWarning):
    """Oscillatory cancellation limited the attainable accuracy."""
