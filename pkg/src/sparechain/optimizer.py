"""Spare-strategy optimization.

A mixed-integer genetic algorithm searches the six-variable strategy
space (five integers plus the continuous parking altitude) for the lowest
annual cost subject to a launch-capacity constraint and a constellation
fill-rate requirement. The ground-only baseline has just two variables
and is solved exactly by enumeration. A sweep utility reruns both per
failure rate to map the savings of the orbital echelon.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chain import (
    H_PARKING_BOUNDS_KM,
    K_Q_BOUNDS,
    K_S_BOUNDS,
    N_PARKING_BOUNDS,
    Q_PLANE_BOUNDS,
    S_PLANE_BOUNDS,
    ConstellationConfig,
    LaunchParams,
    SatelliteParams,
    SpareStrategy,
    evaluate_inplane_only,
    evaluate_strategy,
)
from .costs import CostBreakdown, CostParams, tessac, tessac_inplane_only
from .inventory import SQPolicy
from .orbits import WGS84, CircularOrbit, EarthConstants, hohmann_transfer

PENALTY_SCALE = 1e6
ERROR_PENALTY = 1e9


@dataclass(frozen=True)
class VariableBounds:
    """Search bounds per design variable; must fit the strategy type bounds."""

    n_parking: tuple[int, int] = N_PARKING_BOUNDS
    h_parking_km: tuple[float, float] = H_PARKING_BOUNDS_KM
    q_plane: tuple[int, int] = Q_PLANE_BOUNDS
    s_plane: tuple[int, int] = S_PLANE_BOUNDS
    k_q_parking: tuple[int, int] = K_Q_BOUNDS
    k_s_parking: tuple[int, int] = K_S_BOUNDS

    def __post_init__(self) -> None:
        outer = {
            "n_parking": N_PARKING_BOUNDS,
            "h_parking_km": H_PARKING_BOUNDS_KM,
            "q_plane": Q_PLANE_BOUNDS,
            "s_plane": S_PLANE_BOUNDS,
            "k_q_parking": K_Q_BOUNDS,
            "k_s_parking": K_S_BOUNDS,
        }
        for name, (outer_lo, outer_hi) in outer.items():
            lo, hi = getattr(self, name)
            if lo > hi or lo < outer_lo or hi > outer_hi:
                raise ValueError(
                    f"{name} bounds ({lo}, {hi}) must be ordered and within "
                    f"({outer_lo}, {outer_hi})"
                )


@dataclass(frozen=True)
class GAParams:
    """Genetic-algorithm hyperparameters."""

    population: int = 60
    generations: int = 150
    elitism: int = 2
    tournament_size: int = 3
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    mutation_sigma_km: float = 30.0
    restarts: int = 5

    def __post_init__(self) -> None:
        if self.population < 2 or self.generations < 1 or self.restarts < 1:
            raise ValueError("population >= 2, generations >= 1, restarts >= 1 required")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must be smaller than the population")
        if self.tournament_size < 1:
            raise ValueError("tournament size must be >= 1")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass(frozen=True)
class OptimizationProblem:
    """Everything a strategy search needs besides the seed."""

    constellation: ConstellationConfig
    launch: LaunchParams
    costs: CostParams
    satellite: SatelliteParams
    rho_target: float = 0.95
    bounds: VariableBounds = VariableBounds()
    ga: GAParams = GAParams()
    consts: EarthConstants = WGS84

    def __post_init__(self) -> None:
        if not 0.0 < self.rho_target < 1.0:
            raise ValueError(f"fill-rate target must be in (0, 1), got {self.rho_target}")


@dataclass(frozen=True)
class FitnessResult:
    """Objective and constraint view of one candidate."""

    tessac: float | None
    feasible: bool
    capacity_violation: float
    fillrate_violation: float
    penalized: float
    fill_rate_product: float | None
    cost: CostBreakdown | None


def fitness(candidate: SpareStrategy, prob: OptimizationProblem) -> FitnessResult:
    """Evaluate one candidate: annual cost plus normalized constraint slacks.

    Infeasible candidates carry an additive penalty proportional to the
    violation so the search still senses direction; candidates the model
    cannot evaluate at all get a flat maximal penalty.
    """
    try:
        metrics = evaluate_strategy(prob.constellation, candidate, prob.launch, prob.consts)
        transfer = hohmann_transfer(
            CircularOrbit(candidate.h_parking_km, prob.constellation.inclination_deg),
            CircularOrbit(prob.constellation.h_plane_km, prob.constellation.inclination_deg),
            prob.satellite.m_dry_kg,
            prob.satellite.v_exhaust_km_s,
            prob.consts,
        )
        cost = tessac(prob.constellation, candidate, metrics, transfer, prob.costs, prob.launch)
    except ValueError:
        return FitnessResult(
            tessac=None,
            feasible=False,
            capacity_violation=math.nan,
            fillrate_violation=math.nan,
            penalized=ERROR_PENALTY,
            fill_rate_product=None,
            cost=None,
        )
    product = (
        metrics.rho_plane**prob.constellation.n_plane
        * metrics.rho_parking**candidate.n_parking
    )
    cap = prob.launch.cap_launch
    capacity_violation = max(0.0, (candidate.q_parking - cap) / cap)
    fillrate_violation = max(0.0, (prob.rho_target - product) / prob.rho_target)
    feasible = capacity_violation == 0.0 and fillrate_violation == 0.0
    penalized = cost.tessac + PENALTY_SCALE * (capacity_violation + fillrate_violation)
    return FitnessResult(
        tessac=cost.tessac,
        feasible=feasible,
        capacity_violation=capacity_violation,
        fillrate_violation=fillrate_violation,
        penalized=penalized,
        fill_rate_product=product,
        cost=cost,
    )


@dataclass(frozen=True)
class OptimizationResult:
    """Best strategy found, or an explicit infeasibility marker."""

    feasible: bool
    best_strategy: SpareStrategy | None
    best_cost: float | None
    breakdown: CostBreakdown | None
    fill_rate_product: float | None
    q_parking: int | None
    trace: tuple[tuple[int, int, float, float], ...]  # restart, generation, best, mean
    seed: int


# Genomes are plain lists [n_parking, h_parking, q, s, k_q, k_s]; only
# h_parking is real-valued.
_INT_GENES = (0, 2, 3, 4, 5)
_H_GENE = 1


def _genome_bounds(b: VariableBounds) -> list[tuple[float, float]]:
    return [
        b.n_parking,
        b.h_parking_km,
        b.q_plane,
        b.s_plane,
        b.k_q_parking,
        b.k_s_parking,
    ]


def _to_strategy(genome: list) -> SpareStrategy:
    return SpareStrategy(
        n_parking=int(genome[0]),
        h_parking_km=float(genome[1]),
        q_plane=int(genome[2]),
        s_plane=int(genome[3]),
        k_q_parking=int(genome[4]),
        k_s_parking=int(genome[5]),
    )


def _random_genome(rng, bounds: list[tuple[float, float]]) -> list:
    genome = []
    for g, (lo, hi) in enumerate(bounds):
        if g == _H_GENE:
            genome.append(float(rng.uniform(lo, hi)))
        else:
            genome.append(int(rng.integers(int(lo), int(hi) + 1)))
    return genome


def _mutate(genome: list, rng, bounds: list[tuple[float, float]], ga: GAParams) -> None:
    for g, (lo, hi) in enumerate(bounds):
        if rng.random() >= ga.mutation_rate:
            continue
        if g == _H_GENE:
            genome[g] = float(min(max(genome[g] + rng.normal(0.0, ga.mutation_sigma_km), lo), hi))
        else:
            genome[g] = int(rng.integers(int(lo), int(hi) + 1))


def _crossover(a: list, b: list, rng, ga: GAParams) -> tuple[list, list]:
    child_a, child_b = list(a), list(b)
    if rng.random() < ga.crossover_rate:
        for g in range(len(a)):
            if rng.random() < 0.5:
                child_a[g], child_b[g] = child_b[g], child_a[g]
    return child_a, child_b


def _sort_key(genome: list, fit: FitnessResult) -> tuple:
    # Lexicographic genome order breaks exact fitness ties deterministically.
    return (fit.penalized, tuple(genome))


def optimize(
    prob: OptimizationProblem,
    seed: int,
    seed_candidates: Sequence[SpareStrategy] = (),
) -> OptimizationResult:
    """Genetic search over the full strategy space.

    Runs the configured number of independent restarts (restart r draws
    its stream from SeedSequence(seed, spawn_key=(r,))) and returns the
    best feasible candidate found, with exact ties broken toward the
    lexicographically smallest variable vector. ``seed_candidates`` are
    injected into every restart's initial population.

    Returns:
        OptimizationResult; ``feasible`` is False when no candidate ever
        satisfied both constraints.
    """
    ga = prob.ga
    bounds = _genome_bounds(prob.bounds)
    cache: dict[tuple, FitnessResult] = {}

    def evaluate(genome: list) -> FitnessResult:
        key = tuple(genome)
        hit = cache.get(key)
        if hit is None:
            hit = fitness(_to_strategy(genome), prob)
            cache[key] = hit
        return hit

    injected = [list(s.as_vector()) for s in seed_candidates]
    trace: list[tuple[int, int, float, float]] = []
    best_genome: list | None = None
    best_fit: FitnessResult | None = None

    for restart in range(ga.restarts):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(restart,))))
        population = [_random_genome(rng, bounds) for _ in range(ga.population)]
        for slot, genome in enumerate(injected[: ga.population]):
            population[slot] = list(genome)

        for generation in range(ga.generations):
            fits = [evaluate(g) for g in population]
            order = sorted(range(ga.population), key=lambda i: _sort_key(population[i], fits[i]))
            gen_best = fits[order[0]]
            trace.append(
                (
                    restart,
                    generation,
                    gen_best.penalized,
                    float(np.mean([f.penalized for f in fits])),
                )
            )
            candidate_key = _sort_key(population[order[0]], gen_best)
            if best_fit is None or candidate_key < _sort_key(best_genome, best_fit):
                best_genome = list(population[order[0]])
                best_fit = gen_best

            if generation == ga.generations - 1:
                break
            next_population = [list(population[i]) for i in order[: ga.elitism]]
            while len(next_population) < ga.population:
                parents = []
                for _ in range(2):
                    idxs = rng.integers(0, ga.population, size=ga.tournament_size)
                    winner = min(idxs, key=lambda i: _sort_key(population[i], fits[i]))
                    parents.append(population[winner])
                child_a, child_b = _crossover(parents[0], parents[1], rng, ga)
                _mutate(child_a, rng, bounds, ga)
                _mutate(child_b, rng, bounds, ga)
                next_population.append(child_a)
                if len(next_population) < ga.population:
                    next_population.append(child_b)
            population = next_population

    assert best_genome is not None and best_fit is not None
    if not best_fit.feasible:
        return OptimizationResult(
            feasible=False,
            best_strategy=None,
            best_cost=None,
            breakdown=None,
            fill_rate_product=None,
            q_parking=None,
            trace=tuple(trace),
            seed=seed,
        )
    strategy = _to_strategy(best_genome)
    return OptimizationResult(
        feasible=True,
        best_strategy=strategy,
        best_cost=best_fit.cost.tessac,
        breakdown=best_fit.cost,
        fill_rate_product=best_fit.fill_rate_product,
        q_parking=strategy.q_parking,
        trace=tuple(trace),
        seed=seed,
    )


@dataclass(frozen=True)
class InplaneOptimizationResult:
    """Exact optimum of the ground-to-plane baseline."""

    feasible: bool
    best_policy: SQPolicy | None
    best_cost: float | None
    fill_rate_product: float | None


def optimize_inplane_only(
    prob: OptimizationProblem, seed: int = 0, s_max: int = 20
) -> InplaneOptimizationResult:
    """Exhaustive baseline search over order quantity and reorder point.

    The space is tiny (Q up to the launch capacity, s up to ``s_max``),
    so the optimum is exact and the seed is accepted only for interface
    symmetry with the genetic search.
    """
    del seed
    cfg, lp = prob.constellation, prob.launch
    best: tuple[float, int, int] | None = None
    best_product: float | None = None
    for q in range(1, lp.cap_launch + 1):
        for s in range(0, s_max + 1):
            policy = SQPolicy(reorder_point_s=s, order_quantity_q=q)
            metrics = evaluate_inplane_only(cfg, policy, lp)
            product = metrics.rho_plane**cfg.n_plane
            if product < prob.rho_target:
                continue
            cost = tessac_inplane_only(cfg, policy, metrics, prob.costs, lp)
            key = (cost.tessac, q, s)
            if best is None or key < best:
                best = key
                best_product = product
    if best is None:
        return InplaneOptimizationResult(
            feasible=False, best_policy=None, best_cost=None, fill_rate_product=None
        )
    return InplaneOptimizationResult(
        feasible=True,
        best_policy=SQPolicy(reorder_point_s=best[2], order_quantity_q=best[1]),
        best_cost=best[0],
        fill_rate_product=best_product,
    )


@dataclass(frozen=True)
class SweepPoint:
    """Both optima and the relative savings at one failure rate."""

    lambda_sat_per_year: float
    tessac_multi: float | None
    tessac_inplane: float | None
    savings_pct: float | None
    best_strategy: SpareStrategy | None
    best_policy: SQPolicy | None
    error: str | None = None


def sensitivity_sweep(
    prob: OptimizationProblem, failure_rates: Sequence[float], seed: int = 0
) -> list[SweepPoint]:
    """Optimize both strategies across failure rates and report the savings.

    Rate index i derives its search seed from SeedSequence(seed,
    spawn_key=(i,)). A failure at one rate is recorded in that point and
    the sweep continues.
    """
    points: list[SweepPoint] = []
    for i, rate in enumerate(failure_rates):
        sub_seed = int(np.random.SeedSequence(seed, spawn_key=(i,)).generate_state(1, np.uint64)[0])
        cfg = dataclasses.replace(prob.constellation, lambda_sat_per_year=rate)
        sub_prob = dataclasses.replace(prob, constellation=cfg)
        try:
            multi = optimize(sub_prob, sub_seed)
            base = optimize_inplane_only(sub_prob)
            if not multi.feasible or not base.feasible:
                raise ValueError("no feasible strategy at this rate")
            savings = (base.best_cost - multi.best_cost) / base.best_cost * 100.0
            points.append(
                SweepPoint(
                    lambda_sat_per_year=rate,
                    tessac_multi=multi.best_cost,
                    tessac_inplane=base.best_cost,
                    savings_pct=savings,
                    best_strategy=multi.best_strategy,
                    best_policy=base.best_policy,
                )
            )
        except ValueError as exc:
            points.append(
                SweepPoint(
                    lambda_sat_per_year=rate,
                    tessac_multi=None,
                    tessac_inplane=None,
                    savings_pct=None,
                    best_strategy=None,
                    best_policy=None,
                    error=str(exc),
                )
            )
    return points
