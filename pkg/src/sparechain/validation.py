"""Accuracy study of the analytical model against the simulator.

Builds a Latin-hypercube sample of test constellations, sizes the reorder
points of each to meet a fill-rate requirement, then compares five
analytic outputs (both mean stocks, both fill rates, and the annual cost)
with simulated estimates as relative percentage errors. Also fits the
exponential launch-gap model from a list of historical launch dates.
"""

from __future__ import annotations

import dataclasses
import statistics
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .chain import (
    ConstellationConfig,
    LaunchParams,
    SatelliteParams,
    SpareStrategy,
    evaluate_strategy,
    leadtime_expected_shortage,
    parking_availability,
    parking_demand_rate,
    parking_leadtime,
    plane_demand_rate,
    plane_leadtime,
)
from .costs import CostParams, tessac
from .inventory import fill_rate
from .orbits import WGS84, CircularOrbit, EarthConstants, hohmann_transfer
from .simulator import SimConfig, SimulationResult, run_batch

# Fixed study parameters: prices, rocket, satellite, and the fill-rate
# requirement both echelons are sized against.
DEFAULT_COST_PARAMS = CostParams(
    p_sat_musd=0.5,
    p_holding_musd_per_sat_year=0.5,
    p_launch_full_musd=47.6,
    p_launch_unit_musd=10.0,
    eps_maneuvering_musd_per_kg=0.001,
)
DEFAULT_SATELLITE = SatelliteParams(m_dry_kg=150.0, v_exhaust_km_s=2.16)
DEFAULT_CAP_LAUNCH = 34
RHO_REQUIREMENT = 0.95

OUTPUT_NAMES = (
    "mean_stock_plane",
    "mean_stock_parking",
    "rho_plane",
    "rho_parking",
    "tessac",
)


@dataclass(frozen=True)
class ParameterRange:
    """Closed sampling interval, optionally restricted to integers."""

    lo: float
    hi: float
    integer: bool = False

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"lower bound {self.lo} above upper bound {self.hi}")


@dataclass(frozen=True)
class TradeSpace:
    """Sampling bounds of the eleven varied study parameters."""

    pt_launch_days: ParameterRange = ParameterRange(30.0, 120.0)
    h_plane_km: ParameterRange = ParameterRange(1000.0, 2000.0)
    h_parking_km: ParameterRange = ParameterRange(700.0, 1000.0)
    inclination_deg: ParameterRange = ParameterRange(30.0, 70.0)
    lambda_sat_per_year: ParameterRange = ParameterRange(0.001, 0.1)
    mu_launch_days: ParameterRange = ParameterRange(30.0, 90.0)
    n_plane: ParameterRange = ParameterRange(20, 40, integer=True)
    n_parking: ParameterRange = ParameterRange(1, 20, integer=True)
    n_sats: ParameterRange = ParameterRange(20, 60, integer=True)
    q_plane: ParameterRange = ParameterRange(1, 10, integer=True)
    k_q_parking: ParameterRange = ParameterRange(1, 10, integer=True)

    def items(self) -> list[tuple[str, ParameterRange]]:
        return [(f.name, getattr(self, f.name)) for f in dataclasses.fields(self)]


def lhs_sample(space: TradeSpace, n: int, seed: int) -> list[dict[str, float | int]]:
    """Latin hypercube sample of ``n`` cases over the trade space.

    One draw per stratum per dimension, paired by random permutations.
    Integer dimensions are rounded to the nearest in-bounds integer, which
    can collide; colliding sample sets are redrawn up to 10 times and then
    accepted as-is.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    dims = space.items()
    for _ in range(11):
        cases: list[dict[str, float | int]] = [dict() for _ in range(n)]
        for name, rng_spec in dims:
            perm = rng.permutation(n)
            u = rng.random(n)
            for i in range(n):
                x = rng_spec.lo + (rng_spec.hi - rng_spec.lo) * (perm[i] + u[i]) / n
                if rng_spec.integer:
                    xi = int(round(x))
                    xi = min(max(xi, int(rng_spec.lo)), int(rng_spec.hi))
                    cases[i][name] = xi
                else:
                    cases[i][name] = float(x)
        signatures = {tuple(sorted(c.items())) for c in cases}
        if len(signatures) == n:
            break
    return cases


class SizingInfeasibleError(ValueError):
    """No reorder point within bounds meets the fill-rate requirement."""


def size_reorder_points(
    cfg: ConstellationConfig,
    strategy: SpareStrategy,
    lp: LaunchParams,
    rho_requirement: float = RHO_REQUIREMENT,
    consts: EarthConstants = WGS84,
) -> tuple[int, int]:
    """Smallest reorder points meeting the per-echelon fill-rate requirements.

    The parking echelon is sized first because its availability shapes the
    plane lead times. Each echelon must satisfy
    (fill rate)^(number of locations) >= rho_requirement.

    Returns:
        (s_plane, k_s_parking).

    Raises:
        SizingInfeasibleError: If no value within bounds suffices.
    """
    lam_parking = parking_demand_rate(cfg, strategy)
    park_lt = parking_leadtime(lp)
    k_s_sized = None
    for k_s in range(1, 11):
        es = leadtime_expected_shortage(k_s, lam_parking, park_lt)
        rho = fill_rate(es, strategy.k_q_parking)
        if rho**strategy.n_parking >= rho_requirement:
            k_s_sized = k_s
            es_sized = es
            break
    if k_s_sized is None:
        raise SizingInfeasibleError(
            f"no parking reorder point in [1, 10] reaches "
            f"{rho_requirement} with k_q={strategy.k_q_parking}"
        )

    p_av = parking_availability(es_sized, strategy.k_q_parking)
    trial = dataclasses.replace(strategy, k_s_parking=k_s_sized)
    plane_lt = plane_leadtime(trial, cfg, p_av, consts)
    lam_plane = plane_demand_rate(cfg)
    for s in range(1, 11):
        es = leadtime_expected_shortage(s, lam_plane, plane_lt)
        rho = fill_rate(es, strategy.q_plane)
        if rho**cfg.n_plane >= rho_requirement:
            return s, k_s_sized
    raise SizingInfeasibleError(
        f"no plane reorder point in [1, 10] reaches {rho_requirement} "
        f"with q={strategy.q_plane}"
    )


def relative_error(sim_value: float, model_value: float) -> float:
    """|sim - model| / sim in percent.

    Raises:
        ValueError: If the simulated reference is zero.
    """
    if sim_value == 0.0:
        raise ValueError("relative error undefined for a zero simulated value")
    return abs(sim_value - model_value) / abs(sim_value) * 100.0


@dataclass(frozen=True)
class CaseOutcome:
    """One study case: parameters, sizing, and per-output errors."""

    index: int
    params: dict[str, float | int]
    feasible: bool
    s_plane: int | None = None
    k_s_parking: int | None = None
    model_values: dict[str, float] | None = None
    sim_values: dict[str, float] | None = None
    errors_pct: dict[str, float] | None = None
    reason: str | None = None


@dataclass(frozen=True)
class ErrorReport:
    """Study-level aggregation of the per-case relative errors."""

    cases: tuple[CaseOutcome, ...]
    averaged_errors_pct: dict[str, float]
    infeasible_count: int


def _case_seed(master_seed: int, index: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(1, index))
    return int(ss.generate_state(1, np.uint64)[0])


def run_validation(
    space: TradeSpace,
    n: int,
    *,
    replications: int = 100,
    horizon_years: float = 15.0,
    warmup_years: float = 1.0,
    seed: int = 0,
    jobs: int | None = None,
    simulate_fn: Callable[[SimConfig, int | None], SimulationResult] | None = None,
) -> ErrorReport:
    """Run the full model-vs-simulation accuracy study.

    Each sampled case is sized to the fill-rate requirement, evaluated
    analytically, then simulated; the five outputs are compared as
    relative percentage errors and averaged over feasible cases.

    Args:
        space: Sampling bounds.
        n: Number of cases.
        replications: Simulation replications per case.
        horizon_years: Simulated horizon per replication.
        warmup_years: Discarded start-up span per replication.
        seed: Master seed; the sampler uses it directly and case i
            simulates with a seed derived via spawn key (1, i).
        jobs: Worker threads for the simulator.
        simulate_fn: Replacement for the simulation step (testing hook);
            must accept (SimConfig, jobs) and return aggregate metrics.

    Returns:
        ErrorReport with per-case outcomes and averaged errors.
    """
    simulate = simulate_fn if simulate_fn is not None else run_batch
    cases = lhs_sample(space, n, seed)
    outcomes: list[CaseOutcome] = []
    for i, params in enumerate(cases):
        outcomes.append(
            _run_case(
                i,
                params,
                replications=replications,
                horizon_years=horizon_years,
                warmup_years=warmup_years,
                seed=_case_seed(seed, i),
                jobs=jobs,
                simulate=simulate,
            )
        )
    feasible = [o for o in outcomes if o.feasible]
    averaged = {
        name: statistics.fmean(o.errors_pct[name] for o in feasible)
        for name in OUTPUT_NAMES
    } if feasible else {name: float("nan") for name in OUTPUT_NAMES}
    return ErrorReport(
        cases=tuple(outcomes),
        averaged_errors_pct=averaged,
        infeasible_count=len(outcomes) - len(feasible),
    )


def _run_case(
    index: int,
    params: dict[str, float | int],
    *,
    replications: int,
    horizon_years: float,
    warmup_years: float,
    seed: int,
    jobs: int | None,
    simulate: Callable[[SimConfig, int | None], SimulationResult],
) -> CaseOutcome:
    cfg = ConstellationConfig(
        h_plane_km=float(params["h_plane_km"]),
        inclination_deg=float(params["inclination_deg"]),
        n_plane=int(params["n_plane"]),
        n_sats=int(params["n_sats"]),
        lambda_sat_per_year=float(params["lambda_sat_per_year"]),
    )
    lp = LaunchParams(
        mu_launch_days=float(params["mu_launch_days"]),
        pt_launch_days=float(params["pt_launch_days"]),
        cap_launch=DEFAULT_CAP_LAUNCH,
    )
    try:
        strategy = SpareStrategy(
            n_parking=int(params["n_parking"]),
            h_parking_km=float(params["h_parking_km"]),
            q_plane=int(params["q_plane"]),
            s_plane=1,
            k_q_parking=int(params["k_q_parking"]),
            k_s_parking=1,
        )
        s_plane, k_s = size_reorder_points(cfg, strategy, lp)
        strategy = dataclasses.replace(strategy, s_plane=s_plane, k_s_parking=k_s)
        metrics = evaluate_strategy(cfg, strategy, lp)
        transfer = hohmann_transfer(
            CircularOrbit(strategy.h_parking_km, cfg.inclination_deg),
            CircularOrbit(cfg.h_plane_km, cfg.inclination_deg),
            DEFAULT_SATELLITE.m_dry_kg,
            DEFAULT_SATELLITE.v_exhaust_km_s,
        )
        cost = tessac(cfg, strategy, metrics, transfer, DEFAULT_COST_PARAMS, lp)
    except (SizingInfeasibleError, ValueError) as exc:
        return CaseOutcome(index=index, params=params, feasible=False, reason=str(exc))

    sim_config = SimConfig(
        constellation=cfg,
        strategy=strategy,
        launch=lp,
        costs=DEFAULT_COST_PARAMS,
        satellite=DEFAULT_SATELLITE,
        horizon_years=horizon_years,
        replications=replications,
        seed=seed,
        warmup_years=warmup_years,
    )
    sim = simulate(sim_config, jobs)
    model_values = {
        "mean_stock_plane": metrics.mean_stock_plane,
        "mean_stock_parking": metrics.mean_stock_parking_batches,
        "rho_plane": metrics.rho_plane,
        "rho_parking": metrics.rho_parking,
        "tessac": cost.tessac,
    }
    sim_values = {
        "mean_stock_plane": sim.mean_stock_plane,
        "mean_stock_parking": sim.mean_stock_parking_batches,
        "rho_plane": sim.rho_plane,
        "rho_parking": sim.rho_parking,
        "tessac": sim.tessac,
    }
    errors = {
        name: relative_error(sim_values[name], model_values[name])
        for name in OUTPUT_NAMES
    }
    return CaseOutcome(
        index=index,
        params=params,
        feasible=True,
        s_plane=strategy.s_plane,
        k_s_parking=strategy.k_s_parking,
        model_values=model_values,
        sim_values=sim_values,
        errors_pct=errors,
    )


def fit_launch_gaps(dates: Sequence[date | datetime]) -> float:
    """Maximum-likelihood mean of exponential gaps between launches.

    For exponential interarrivals the MLE is exactly the sample mean of
    the successive gaps, in days.

    Raises:
        ValueError: On fewer than two dates or an unsorted sequence.
    """
    if len(dates) < 2:
        raise ValueError("need at least two launch dates")
    gaps = []
    for earlier, later in zip(dates[:-1], dates[1:]):
        gap_days = (later - earlier).total_seconds() / 86400.0
        if gap_days < 0:
            raise ValueError("launch dates must be sorted ascending")
        gaps.append(gap_days)
    return statistics.fmean(gaps)


def read_launch_dates(path: str | Path) -> list[date]:
    """Read one ISO date per line; a single non-date header line is skipped."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"no dates in {path}")
    try:
        date.fromisoformat(lines[0])
    except ValueError:
        lines = lines[1:]
    return [date.fromisoformat(ln) for ln in lines]
