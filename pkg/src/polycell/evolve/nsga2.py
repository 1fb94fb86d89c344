"""Elitist NSGA-II over (P, T): maximise production power, minimise consumption.

Random stream: one PCG64 generator seeded with ``GAConfig.seed``. Draw order
per run: initial genes (row-major), then per generation and per offspring
pair: tournament for parent 1 (2 integers), tournament for parent 2
(2 integers), crossover (1 uniform, plus 1 per gene when crossing), mutation
of child 1 then child 2 (1 uniform per gene, plus 1 when it mutates).
"""

from __future__ import annotations

import io
import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from polycell.errors import ContractError, EvaluationError
from polycell.evolve.operators import (
    Bounds,
    GAConfig,
    init_population,
    polynomial_mutation,
    sbx_crossover,
    tournament_select,
)
from polycell.evolve.sorting import crowding_distance, fast_nondominated_sort
from polycell.surrogate.data import fmt

GENERATOR = "numpy.random.PCG64"
FRONT_HEADER = ("pressure_atm", "temperature_c", "p_pro_w", "p_cons_w", "ratio")

Evaluator = Callable[[float, float], float]


@dataclass(frozen=True)
class ObjectiveSpec:
    """Production (maximised) and consumption (minimised) evaluators of (P, T).

    With ``vectorized=True`` each evaluator is called once on whole gene
    columns instead of per individual.
    """

    production: Evaluator
    consumption: Evaluator
    vectorized: bool = False


@dataclass
class Population:
    genes: np.ndarray
    objectives: np.ndarray | None = None
    rank: np.ndarray | None = None
    crowding: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.genes)


@dataclass(frozen=True)
class Individual:
    genes: tuple[float, float]
    objectives: tuple[float, float]
    rank: int = 0
    crowding: float = math.inf

    @property
    def pressure(self) -> float:
        return self.genes[0]

    @property
    def temperature(self) -> float:
        return self.genes[1]

    @property
    def production(self) -> float:
        return -self.objectives[0]

    @property
    def consumption(self) -> float:
        return self.objectives[1]

    @property
    def ratio(self) -> float:
        p = self.production
        return self.consumption / p if p > 0 else math.inf


@dataclass(frozen=True)
class ParetoResult:
    members: tuple[Individual, ...]
    best_f1_history: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.members:
            raise ContractError("Pareto result must contain at least one member")

    @property
    def max_production(self) -> Individual:
        return min(self.members, key=lambda m: (-m.production, m.pressure, m.temperature))

    @property
    def min_consumption(self) -> Individual:
        return min(self.members, key=lambda m: (m.consumption, m.pressure, m.temperature))

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        """(P, T, P_pro, P_cons, ratio) sorted by descending production."""
        ordered = sorted(self.members, key=lambda m: (-m.production, m.pressure, m.temperature))
        return [(m.pressure, m.temperature, m.production, m.consumption, m.ratio) for m in ordered]


def evaluate(population: Population, objectives: ObjectiveSpec, executor: Executor | None = None) -> Population:
    """Fill objectives as (-production, consumption).

    With an executor, individuals are evaluated concurrently but results are
    collected in index order.
    """
    genes = population.genes
    if objectives.vectorized:
        pro = np.asarray(objectives.production(genes[:, 0], genes[:, 1]), dtype=float)
        con = np.asarray(objectives.consumption(genes[:, 0], genes[:, 1]), dtype=float)
        pro = np.broadcast_to(pro, (len(genes),))
        con = np.broadcast_to(con, (len(genes),))
    else:
        def one(g):
            return objectives.production(float(g[0]), float(g[1])), objectives.consumption(float(g[0]), float(g[1]))

        pairs = list(executor.map(one, genes)) if executor is not None else [one(g) for g in genes]
        pro = np.array([p for p, _ in pairs], dtype=float)
        con = np.array([c for _, c in pairs], dtype=float)
    f = np.column_stack([-pro, con])
    bad = np.flatnonzero(~np.isfinite(f).all(axis=1))
    if bad.size:
        i = int(bad[0])
        raise EvaluationError(i, genes[i], (pro[i], con[i]))
    population.objectives = f
    return population


def assign_rank_and_crowding(population: Population) -> list[list[int]]:
    fronts, rank = fast_nondominated_sort(population.objectives)
    crowd = np.zeros(len(population))
    for front in fronts:
        crowd[front] = crowding_distance(population.objectives[front])
    population.rank = rank
    population.crowding = crowd
    return fronts


def environmental_selection(combined: Population, size: int) -> Population:
    """(mu + lambda) truncation: whole fronts first, then by descending crowding."""
    fronts = assign_rank_and_crowding(combined)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= size:
            chosen.extend(front)
            continue
        front = np.asarray(front)
        order = np.argsort(-combined.crowding[front], kind="stable")
        chosen.extend(front[order[: size - len(chosen)]].tolist())
        break
    idx = np.asarray(chosen)
    return Population(
        combined.genes[idx].copy(),
        combined.objectives[idx].copy(),
        combined.rank[idx].copy(),
        combined.crowding[idx].copy(),
    )


def make_offspring(population: Population, bounds: Bounds, config: GAConfig, rng: np.random.Generator) -> np.ndarray:
    children = np.empty_like(population.genes)
    for k in range(0, len(population), 2):
        a = tournament_select(population.rank, population.crowding, rng)
        b = tournament_select(population.rank, population.crowding, rng)
        c1, c2 = sbx_crossover(population.genes[a], population.genes[b], bounds, config, rng)
        children[k] = polynomial_mutation(c1, bounds, config, rng)
        children[k + 1] = polynomial_mutation(c2, bounds, config, rng)
    return children


def run(
    objectives: ObjectiveSpec,
    bounds: Bounds = Bounds(),
    config: GAConfig = GAConfig(),
    executor: Executor | None = None,
) -> ParetoResult:
    """Run NSGA-II for a fixed number of generations and return the final first front."""
    rng = np.random.default_rng(config.seed)
    pop = evaluate(Population(init_population(bounds, config, rng)), objectives, executor)
    assign_rank_and_crowding(pop)
    history = [float(pop.objectives[:, 0].min())]
    for _ in range(config.generations):
        kids = evaluate(Population(make_offspring(pop, bounds, config, rng)), objectives, executor)
        combined = Population(
            np.vstack([pop.genes, kids.genes]),
            np.vstack([pop.objectives, kids.objectives]),
        )
        pop = environmental_selection(combined, config.population_size)
        history.append(float(pop.objectives[:, 0].min()))
    return _result(pop, history)


def _result(pop: Population, history: Sequence[float]) -> ParetoResult:
    first = np.flatnonzero(pop.rank == 0)
    _, unique_idx = np.unique(pop.genes[first], axis=0, return_index=True)
    members = tuple(
        Individual(
            (float(pop.genes[i, 0]), float(pop.genes[i, 1])),
            (float(pop.objectives[i, 0]), float(pop.objectives[i, 1])),
            0,
            float(pop.crowding[i]),
        )
        for i in first[np.sort(unique_idx)]
    )
    return ParetoResult(members, tuple(history))


def front_report(result: ParetoResult) -> dict:
    """Extremes and consumption/production ratios of a front."""
    if not result.members:
        raise ContractError("empty front")
    ratios = [m.ratio for m in result.members]
    best = result.max_production
    low = result.min_consumption

    def point(m: Individual) -> dict:
        return {
            "pressure_atm": m.pressure,
            "temperature_c": m.temperature,
            "p_pro_w": m.production,
            "p_cons_w": m.consumption,
            "ratio": m.ratio,
        }

    return {
        "size": len(result.members),
        "max_production": point(best),
        "min_consumption": point(low),
        "mean_ratio": math.fsum(ratios) / len(ratios),
        "ratio_at_max_production": best.ratio,
    }


def front_to_csv(result: ParetoResult) -> str:
    buf = io.StringIO()
    buf.write(",".join(FRONT_HEADER) + "\n")
    for row in result.rows():
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()
