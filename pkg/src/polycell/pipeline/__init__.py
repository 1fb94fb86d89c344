"""Batch pipeline: configuration, artifact bookkeeping and the command line."""

from polycell.pipeline.config import ObjectiveSource, RunConfig, load_config, parse_config
from polycell.pipeline.runner import fit, optimize, paper_opt, pipeline, polarize, sweep, train

__all__ = [
    "ObjectiveSource",
    "RunConfig",
    "load_config",
    "parse_config",
    "sweep",
    "train",
    "fit",
    "optimize",
    "paper_opt",
    "polarize",
    "pipeline",
]
