class ContractViolation(ValueError):
    """Inputs break a dimension, Hermiticity or normalization contract."""


class ParameterError(ValueError):
    """Channel or protocol parameter out of its admissible range."""


class DomainError(ValueError):
    """Operation requested outside the parameter region where it is defined."""


class PostSelectionError(RuntimeError):
    """Post-selection has (numerically) zero success probability."""
