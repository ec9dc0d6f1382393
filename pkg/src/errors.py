class BoundaryIntegralError(ValueError):
    """Base class for every failure raised by the solver library."""


class GeometryError(BoundaryIntegralError):
    """Invalid curve or domain (degenerate, self-intersecting, misplaced holes)."""


class KernelError(BoundaryIntegralError):
    """Kernel evaluated at coincident points."""


class OperatorError(BoundaryIntegralError):
    """Operator assembled or composed with inconsistent inputs."""


class SolverError(BoundaryIntegralError):
    """Linear system could not be solved or its data violates a solvability condition."""


class EvaluationError(BoundaryIntegralError):
    """Field evaluated outside the domain or with a mismatched solution."""


class ManufacturedCaseError(BoundaryIntegralError):
    """Unknown manufactured solution or a singularity inside the domain."""


class OracleError(BoundaryIntegralError):
    """Brute-force quadrature did not converge between resolutions."""


class ConfigError(BoundaryIntegralError):
    """Case configuration could not be parsed or validated."""
