"""Discrete-event Monte Carlo of the spare supply chain.

Event-driven counterpart of the analytical chain model, used to measure
its accuracy. Satellites fail as a Poisson process per plane; planes and
parking orbits run (s,Q) policies with at most one order outstanding per
location; transfers depart from the parking orbit that reaches nodal
alignment soonest among those with stock, and ground resupply arrives
after a fixed processing time plus an exponential launch-window wait.

Randomness comes from a counter-based Philox generator. Replication i of
a batch draws its stream from SeedSequence(master_seed, spawn_key=(i,)),
so batches are reproducible across platforms and worker counts. Within a
replication the draw order is: failure interarrival, failed plane index,
then one launch delay per ground order.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chain import ConstellationConfig, LaunchParams, SatelliteParams, SpareStrategy, plane_demand_rate
from .costs import CostParams, launch_price
from .orbits import WGS84, CircularOrbit, EarthConstants, hohmann_transfer, raan_drift_rate

_TWO_PI = 2.0 * math.pi

# Event kinds, ordered only for heap tie-breaking stability.
_FAILURE = 0
_PARKING_ARRIVAL = 1
_PLANE_ARRIVAL = 2


@dataclass(frozen=True)
class SimConfig:
    """Complete input of a simulation study."""

    constellation: ConstellationConfig
    strategy: SpareStrategy
    launch: LaunchParams
    costs: CostParams
    satellite: SatelliteParams
    horizon_years: float = 15.0
    replications: int = 100
    seed: int = 0
    warmup_years: float = 1.0
    capture_events: bool = False
    consts: EarthConstants = WGS84

    def __post_init__(self) -> None:
        if self.horizon_years <= 0:
            raise ValueError("horizon must be positive")
        if not 0.0 <= self.warmup_years < self.horizon_years:
            raise ValueError("warm-up must be nonnegative and shorter than the horizon")
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class ReplicationResult:
    """Outputs and bookkeeping of a single replication.

    Metric fields are averages over the post-warm-up window; counter
    fields marked _window likewise, the rest cover the whole horizon.
    """

    mean_stock_plane: float
    mean_stock_parking_batches: float
    rho_plane: float
    rho_parking: float
    tessac: float
    failures: int
    failures_window: int
    served: int
    backorders_end: int
    plane_orders: int
    transfers: int
    plane_arrivals: int
    ground_orders: int
    ground_arrivals: int
    ground_arrivals_window: int
    transfers_window: int
    initial_on_hand: int
    final_on_hand: int
    final_in_transit: int
    plane_leadtimes: tuple[float, ...]
    events: tuple[tuple[float, str, int, int], ...] | None


@dataclass(frozen=True)
class SimulationResult:
    """Across-replication means and standard errors."""

    replications: int
    mean_stock_plane: float
    se_stock_plane: float
    mean_stock_parking_batches: float
    se_stock_parking: float
    rho_plane: float
    se_rho_plane: float
    rho_parking: float
    se_rho_parking: float
    tessac: float
    se_tessac: float
    per_replication: tuple[ReplicationResult, ...]


def _alignment_wait_days(theta: float, omega: float, relative_rate: float) -> float:
    """Days until a parking plane at phase theta reaches RAAN omega."""
    if relative_rate < 0.0:
        gap = (theta - omega) % _TWO_PI
    else:
        gap = (omega - theta) % _TWO_PI
    return gap / abs(relative_rate)


def run_replication(sc: SimConfig, seed: int) -> ReplicationResult:
    """Run one replication with its own random stream."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return _run_with_rng(sc, rng)


def _run_with_rng(sc: SimConfig, rng) -> ReplicationResult:
    cfg, st, lp = sc.constellation, sc.strategy, sc.launch
    n_plane, n_park = cfg.n_plane, st.n_parking
    q_plane, s_plane = st.q_plane, st.s_plane
    k_q, k_s = st.k_q_parking, st.k_s_parking
    q_parking = st.q_parking

    horizon = sc.horizon_years * cfg.n_days_per_year
    warmup = sc.warmup_years * cfg.n_days_per_year
    window = horizon - warmup

    lam_plane = plane_demand_rate(cfg)
    merged_rate = lam_plane * n_plane

    parking_orbit = CircularOrbit(st.h_parking_km, cfg.inclination_deg)
    plane_orbit = CircularOrbit(cfg.h_plane_km, cfg.inclination_deg)
    relative = raan_drift_rate(parking_orbit, sc.consts) - raan_drift_rate(plane_orbit, sc.consts)
    if relative == 0.0:
        raise ValueError("zero relative drift rate: transfers never depart")
    transfer = hohmann_transfer(
        parking_orbit, plane_orbit, sc.satellite.m_dry_kg, sc.satellite.v_exhaust_km_s, sc.consts
    )
    tof = transfer.time_of_flight_days

    plane_raan = [_TWO_PI * j / n_plane for j in range(n_plane)]
    parking_phase0 = [_TWO_PI * p / n_park for p in range(n_park)]

    plane_stock = [s_plane + q_plane] * n_plane
    plane_backorders = [0] * n_plane
    plane_in_transit = [False] * n_plane
    parking_stock = [k_s + k_q] * n_park
    parking_in_transit = [False] * n_park
    waiting_orders: deque[int] = deque()

    initial_on_hand = n_plane * (s_plane + q_plane) + n_park * (k_s + k_q) * q_plane

    agg_plane = float(sum(plane_stock))
    agg_park = float(sum(parking_stock))
    int_plane = 0.0
    int_park = 0.0
    last_t = 0.0

    failures = failures_window = served = 0
    backorder_events_window = 0
    plane_orders = transfers = plane_arrivals = 0
    plane_cycles_window = transfers_window = 0
    ground_orders = ground_arrivals = ground_arrivals_window = 0
    parking_cycles_window = parking_backorders_window = 0
    leadtimes: list[float] = []
    events: list[tuple[float, str, int, int]] | None = [] if sc.capture_events else None

    heap: list[tuple[float, int, int, int]] = []
    seq = 0

    def push(t: float, kind: int, loc: int) -> None:
        nonlocal seq
        heapq.heappush(heap, (t, seq, kind, loc))
        seq += 1

    def log(t: float, what: str, loc: int, stock: int) -> None:
        if events is not None:
            events.append((t, what, loc, stock))

    def advance(t: float) -> None:
        nonlocal int_plane, int_park, last_t
        overlap = min(t, horizon) - max(last_t, warmup)
        if overlap > 0.0:
            int_plane += agg_plane * overlap
            int_park += agg_park * overlap
        last_t = t

    def in_window(t: float) -> bool:
        return warmup <= t <= horizon

    def schedule_next_failure(t: float) -> None:
        dt = rng.exponential(1.0 / merged_rate)
        j = int(rng.integers(0, n_plane))
        push(t + dt, _FAILURE, j)

    def parking_wait(p: int, t: float, j: int) -> float:
        theta = parking_phase0[p] + relative * t
        return _alignment_wait_days(theta, plane_raan[j], relative)

    def closest_parking(t: float, j: int, stocked_only: bool) -> int | None:
        best: tuple[float, int] | None = None
        for p in range(n_park):
            if stocked_only and parking_stock[p] < 1:
                continue
            cand = (parking_wait(p, t, j), p)
            if best is None or cand < best:
                best = cand
        return None if best is None else best[1]

    def place_ground_order_if_due(p: int, t: float) -> None:
        nonlocal ground_orders
        if parking_stock[p] <= k_s and not parking_in_transit[p]:
            parking_in_transit[p] = True
            ground_orders += 1
            delay = lp.pt_launch_days + rng.exponential(lp.mu_launch_days)
            push(t + delay, _PARKING_ARRIVAL, p)
            log(t, "ground_order", p, parking_stock[p])

    def assign_transfer(j: int, t: float) -> bool:
        """Send one batch toward plane j from the closest stocked parking."""
        nonlocal agg_park, transfers, transfers_window
        p = closest_parking(t, j, stocked_only=True)
        if p is None:
            return False
        parking_stock[p] -= 1
        agg_park -= 1.0
        wait = parking_wait(p, t, j)
        push(t + wait + tof, _PLANE_ARRIVAL, j)
        transfers += 1
        if in_window(t):
            transfers_window += 1
            leadtimes.append(wait + tof)
        log(t, "transfer_start", p, parking_stock[p])
        place_ground_order_if_due(p, t)
        return True

    def place_plane_order_if_due(j: int, t: float) -> None:
        nonlocal plane_orders, parking_backorders_window
        if plane_stock[j] <= s_plane and not plane_in_transit[j]:
            plane_in_transit[j] = True
            plane_orders += 1
            log(t, "plane_order", j, plane_stock[j])
            # Demand accounting: the order targets the geometrically closest
            # parking orbit; finding it empty is a parking backorder even if
            # another orbit ends up serving the transfer.
            target = closest_parking(t, j, stocked_only=False)
            if parking_stock[target] < 1 and in_window(t):
                parking_backorders_window += 1
            if not assign_transfer(j, t):
                waiting_orders.append(j)
                log(t, "order_queued", j, 0)

    def handle_failure(j: int, t: float) -> None:
        nonlocal agg_plane, failures, failures_window, served, backorder_events_window
        failures += 1
        if in_window(t):
            failures_window += 1
        schedule_next_failure(t)
        if plane_stock[j] > 0:
            plane_stock[j] -= 1
            agg_plane -= 1.0
            served += 1
        else:
            plane_backorders[j] += 1
            if in_window(t):
                backorder_events_window += 1
        log(t, "failure", j, plane_stock[j])
        place_plane_order_if_due(j, t)

    def handle_plane_arrival(j: int, t: float) -> None:
        nonlocal agg_plane, served, plane_arrivals, plane_cycles_window
        plane_arrivals += 1
        if in_window(t):
            plane_cycles_window += 1
        assert plane_in_transit[j], "arrival without an outstanding order"
        plane_in_transit[j] = False
        delivered = q_plane
        backlog = min(delivered, plane_backorders[j])
        plane_backorders[j] -= backlog
        served += backlog
        plane_stock[j] += delivered - backlog
        agg_plane += float(delivered - backlog)
        log(t, "plane_arrival", j, plane_stock[j])
        place_plane_order_if_due(j, t)

    def handle_parking_arrival(p: int, t: float) -> None:
        nonlocal agg_park, ground_arrivals, ground_arrivals_window, parking_cycles_window
        ground_arrivals += 1
        assert parking_in_transit[p], "arrival without an outstanding order"
        parking_in_transit[p] = False
        parking_stock[p] += k_q
        agg_park += float(k_q)
        if in_window(t):
            ground_arrivals_window += 1
            parking_cycles_window += 1
        log(t, "parking_arrival", p, parking_stock[p])
        # Queued plane orders re-pick the closest stocked orbit now.
        while waiting_orders and any(s > 0 for s in parking_stock):
            assign_transfer(waiting_orders.popleft(), t)
        place_ground_order_if_due(p, t)

    if merged_rate > 0.0:
        schedule_next_failure(0.0)

    while heap:
        t, _, kind, loc = heapq.heappop(heap)
        if t > horizon:
            break
        advance(t)
        if kind == _FAILURE:
            handle_failure(loc, t)
        elif kind == _PLANE_ARRIVAL:
            handle_plane_arrival(loc, t)
        else:
            handle_parking_arrival(loc, t)
    advance(horizon)

    final_on_hand = sum(plane_stock) + q_plane * sum(parking_stock)
    final_in_transit = q_parking * (ground_orders - ground_arrivals) + q_plane * (
        transfers - plane_arrivals
    )
    launched = q_parking * ground_orders
    backorders_end = sum(plane_backorders)
    assert final_on_hand + final_in_transit + served == initial_on_hand + launched, (
        "satellite conservation violated"
    )
    assert served + backorders_end == failures, "every failure is served or backordered"

    mean_stock_plane = int_plane / window / n_plane
    mean_stock_park = int_park / window / n_park
    rho_plane = (
        1.0 - (backorder_events_window / plane_cycles_window) / q_plane
        if plane_cycles_window
        else 1.0
    )
    rho_parking = (
        1.0 - (parking_backorders_window / parking_cycles_window) / k_q
        if parking_cycles_window
        else 1.0
    )

    years = window / cfg.n_days_per_year
    manufacturing = sc.costs.p_sat_musd * failures_window / years
    holding = sc.costs.p_holding_musd_per_sat_year * (
        int_plane / window + q_plane * int_park / window
    )
    launch_cost = launch_price(q_parking, sc.costs) * ground_arrivals_window / years
    maneuvering = (
        sc.costs.eps_maneuvering_musd_per_kg
        * transfer.fuel_mass_kg
        * q_plane
        * transfers_window
        / years
    )

    return ReplicationResult(
        mean_stock_plane=mean_stock_plane,
        mean_stock_parking_batches=mean_stock_park,
        rho_plane=rho_plane,
        rho_parking=rho_parking,
        tessac=manufacturing + holding + launch_cost + maneuvering,
        failures=failures,
        failures_window=failures_window,
        served=served,
        backorders_end=backorders_end,
        plane_orders=plane_orders,
        transfers=transfers,
        plane_arrivals=plane_arrivals,
        ground_orders=ground_orders,
        ground_arrivals=ground_arrivals,
        ground_arrivals_window=ground_arrivals_window,
        transfers_window=transfers_window,
        initial_on_hand=initial_on_hand,
        final_on_hand=final_on_hand,
        final_in_transit=final_in_transit,
        plane_leadtimes=tuple(leadtimes),
        events=tuple(events) if events is not None else None,
    )


def replication_seed(master_seed: int, index: int) -> int:
    """Derive the integer seed of replication ``index`` from the master seed."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def run_batch(sc: SimConfig, jobs: int | None = None) -> SimulationResult:
    """Run all replications and aggregate means and standard errors.

    Replications are independent; ``jobs`` only sets the worker count and
    never changes the result, because every replication is a pure function
    of its derived seed and aggregation follows replication order.
    """
    seeds = [replication_seed(sc.seed, i) for i in range(sc.replications)]
    if jobs is not None and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reps = list(pool.map(lambda s: run_replication(sc, s), seeds))
    else:
        reps = [run_replication(sc, s) for s in seeds]

    def mean_se(values: list[float]) -> tuple[float, float]:
        arr = np.asarray(values)
        if len(arr) < 2:
            return float(arr.mean()), 0.0
        return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(len(arr)))

    m_sp, se_sp = mean_se([r.mean_stock_plane for r in reps])
    m_pk, se_pk = mean_se([r.mean_stock_parking_batches for r in reps])
    m_rp, se_rp = mean_se([r.rho_plane for r in reps])
    m_rk, se_rk = mean_se([r.rho_parking for r in reps])
    m_ts, se_ts = mean_se([r.tessac for r in reps])
    return SimulationResult(
        replications=sc.replications,
        mean_stock_plane=m_sp,
        se_stock_plane=se_sp,
        mean_stock_parking_batches=m_pk,
        se_stock_parking=se_pk,
        rho_plane=m_rp,
        se_rho_plane=se_rp,
        rho_parking=m_rk,
        se_rho_parking=se_rk,
        tessac=m_ts,
        se_tessac=se_ts,
        per_replication=tuple(reps),
    )
