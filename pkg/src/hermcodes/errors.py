class BudgetError(RuntimeError):
    """A requested enumeration or table exceeds its configured budget."""


class GeometryError(AssertionError):
    """An incidence count took a value that the geometry forbids."""
