"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad physics input: dimensions, parameter ranges, variant mismatches."""


class IntegrationError(RuntimeError):
    """Time integration failed to meet its accuracy guard (e.g. norm drift)."""
