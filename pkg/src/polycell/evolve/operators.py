"""Real-coded variation and selection operators.

All randomness comes from the numpy ``Generator`` passed in, so a run is
reproducible from a single seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from polycell.errors import DomainError


@dataclass(frozen=True)
class Bounds:
    p_min: float = 1.0
    p_max: float = 5.0
    t_min: float = 50.0
    t_max: float = 90.0

    def __post_init__(self):
        if not (self.p_min < self.p_max and self.t_min < self.t_max):
            raise DomainError(f"bounds must satisfy min < max, got {self}")

    @property
    def lower(self) -> np.ndarray:
        return np.array([self.p_min, self.t_min])

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.p_max, self.t_max])

    def contains(self, genes) -> bool:
        g = np.asarray(genes, dtype=float)
        return bool(np.all(g >= self.lower) and np.all(g <= self.upper))


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 200
    generations: int = 200
    seed: int = 1
    crossover_probability: float = 0.9
    sbx_index: float = 15.0
    mutation_probability: float | None = None  # None -> 1 / number of variables
    mutation_index: float = 20.0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise DomainError("population_size must be even and >= 4")
        if self.generations < 1:
            raise DomainError("generations must be >= 1")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise DomainError("crossover_probability must lie in [0, 1]")
        if self.mutation_probability is not None and not 0.0 <= self.mutation_probability <= 1.0:
            raise DomainError("mutation_probability must lie in [0, 1]")
        if self.sbx_index < 0 or self.mutation_index < 0:
            raise DomainError("distribution indices must be non-negative")

    def mutation_rate(self, n_vars: int = 2) -> float:
        return 1.0 / n_vars if self.mutation_probability is None else self.mutation_probability


def init_population(bounds: Bounds, config: GAConfig, rng: np.random.Generator) -> np.ndarray:
    """Uniform genes in the box, shape (population_size, 2)."""
    lower, upper = bounds.lower, bounds.upper
    genes = lower + rng.random((config.population_size, 2)) * (upper - lower)
    return np.clip(genes, lower, upper)


def crowded_better(rank_a: int, crowd_a: float, rank_b: int, crowd_b: float) -> bool:
    """Crowded comparison: lower rank, then larger crowding; ties keep a."""
    if rank_a != rank_b:
        return rank_a < rank_b
    return crowd_a >= crowd_b


def tournament_select(rank: np.ndarray, crowding: np.ndarray, rng: np.random.Generator) -> int:
    """Binary tournament; draws two indices with replacement."""
    a, b = (int(i) for i in rng.integers(0, len(rank), size=2))
    return a if crowded_better(rank[a], crowding[a], rank[b], crowding[b]) else b


def sbx_crossover(
    parent1: np.ndarray,
    parent2: np.ndarray,
    bounds: Bounds,
    config: GAConfig,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover applied to every gene, then clipped.

    Draws one uniform for the crossover decision and, when crossing, one per
    gene. The spread factor is symmetric, so before clipping the children's
    sum equals the parents' sum gene by gene.
    """
    p1 = np.asarray(parent1, dtype=float)
    p2 = np.asarray(parent2, dtype=float)
    if rng.random() >= config.crossover_probability:
        return p1.copy(), p2.copy()
    c1, c2 = sbx_children(p1, p2, rng.random(len(p1)), config.sbx_index)
    return np.clip(c1, bounds.lower, bounds.upper), np.clip(c2, bounds.lower, bounds.upper)


def sbx_children(p1: np.ndarray, p2: np.ndarray, u: np.ndarray, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Unclipped SBX children for uniforms `u`."""
    expo = 1.0 / (eta + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** expo, (1.0 / (2.0 * (1.0 - u))) ** expo)
    mean = 0.5 * (p1 + p2)
    half = 0.5 * beta * (p1 - p2)
    return mean + half, mean - half


def polynomial_mutation(
    genes: np.ndarray,
    bounds: Bounds,
    config: GAConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Bounded polynomial mutation.

    For each gene one uniform decides whether it mutates; a mutating gene
    draws a second uniform for the perturbation. The perturbation's support
    is [lower, upper], so a gene on a bound can only move inward.
    """
    x = np.array(genes, dtype=float)
    lower, upper = bounds.lower, bounds.upper
    rate = config.mutation_rate(len(x))
    eta = config.mutation_index
    expo = 1.0 / (eta + 1.0)
    for k in range(len(x)):
        if rng.random() >= rate:
            continue
        u = rng.random()
        width = upper[k] - lower[k]
        d1 = (x[k] - lower[k]) / width
        d2 = (upper[k] - x[k]) / width
        if u < 0.5:
            val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)
            dq = val**expo - 1.0
        else:
            val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
            dq = 1.0 - val**expo
        x[k] = min(max(x[k] + dq * width, lower[k]), upper[k])
    return x
