"""Exception hierarchy shared by every polycell subpackage."""

from __future__ import annotations


class PolycellError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PolycellError, ValueError):
    """An argument lies outside the domain of the operation."""


class ContractError(PolycellError, ValueError):
    """Shapes, arities or required state do not match the calling contract."""


class NumericError(PolycellError):
    """Base for numerical failures (convergence, overflow, divergence)."""


class SaturationError(NumericError):
    """An exponent in a kinetic expression would overflow."""


class ConvergenceError(NumericError):
    """An iterative solver hit its iteration cap or could not bracket a root."""


class LimitingCurrentError(NumericError, DomainError):
    """Current density at or above the mass-transport limit."""


class StarvationError(NumericError):
    """Reactant consumption exceeds the supplied flow."""

    def __init__(self, species: str, supplied: float, consumed: float):
        self.species = species
        self.supplied = supplied
        self.consumed = consumed
        super().__init__(
            f"{species} starvation: consumption {consumed:.6g} kg/s exceeds supply {supplied:.6g} kg/s"
        )


class RankError(NumericError):
    """Least-squares design matrix is rank deficient."""


class DegenerateFeatureError(DomainError):
    """A feature column is constant and cannot be min-max scaled."""


class DivergenceError(NumericError):
    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"training diverged at epoch {epoch} (loss={loss!r})")


class EvaluationError(NumericError):
    def __init__(self, index: int, genes, values):
        self.index = index
        super().__init__(f"non-finite objective for individual {index} at genes {tuple(genes)}: {tuple(values)}")


class ConfigError(PolycellError):
    """Invalid, unknown or unparsable run configuration."""
