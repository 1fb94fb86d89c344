"""Data modelling: design grids, the MLP surrogate and quadratic response surfaces."""

from polycell.surrogate.data import (
    Dataset,
    Objective,
    Scaler,
    denormalize,
    design_grid,
    normalize,
    read_dataset,
    sample,
)
from polycell.surrogate.mlp import (
    MLP,
    MLPConfig,
    OptimizerKind,
    TrainConfig,
    mlp_forward,
    mlp_gradients,
    mlp_init,
    mlp_train,
)
from polycell.surrogate.rsm import (
    QuadraticSurface,
    evaluate_surface,
    fit_quadratic,
    grid_argmax,
    paper_surface,
)

__all__ = [
    "Dataset",
    "Objective",
    "Scaler",
    "denormalize",
    "design_grid",
    "normalize",
    "read_dataset",
    "sample",
    "MLP",
    "MLPConfig",
    "OptimizerKind",
    "TrainConfig",
    "mlp_forward",
    "mlp_gradients",
    "mlp_init",
    "mlp_train",
    "QuadraticSurface",
    "evaluate_surface",
    "fit_quadratic",
    "grid_argmax",
    "paper_surface",
]
