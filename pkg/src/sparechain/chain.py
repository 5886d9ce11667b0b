"""Analytical model of the spare-satellite supply chain.

Three echelons: ground manufacturing feeds a ring of parking orbits by
rocket launch, and parking orbits feed the constellation planes by
drift-and-transfer maneuvers. Every stock location runs a continuous-review
(s,Q) policy under Poisson demand; this module derives the demand rates,
lead-time distributions, expected shortages, fill rates, and cycle-average
stocks for both orbital echelons, plus the degenerate variant where planes
are resupplied straight from the ground.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .inventory import SQPolicy, expected_shortage, fill_rate, mean_stock
from .orbits import WGS84, CircularOrbit, EarthConstants, transfer_time

# Quadrature rules are fixed once; integrands are smooth on each piece.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_LAG_NODES, _LAG_WEIGHTS = np.polynomial.laguerre.laggauss(64)

MIXTURE_OF_UNIFORMS = "mixture_of_uniforms"
SHIFTED_EXPONENTIAL = "shifted_exponential"


@dataclass(frozen=True)
class ConstellationConfig:
    """Operational constellation layout and reliability figures.

    Attributes:
        h_plane_km: Altitude of the constellation planes, km.
        inclination_deg: Shared inclination of all planes, degrees.
        n_plane: Number of orbital planes.
        n_sats: Operational satellites per plane.
        lambda_sat_per_year: Failure rate of one satellite, per year.
        n_days_per_year: Days used to annualize rates.
    """

    h_plane_km: float
    inclination_deg: float
    n_plane: int
    n_sats: int
    lambda_sat_per_year: float
    n_days_per_year: float = 365.0

    def __post_init__(self) -> None:
        if self.n_plane < 1:
            raise ValueError(f"n_plane must be >= 1, got {self.n_plane}")
        if self.n_sats < 1:
            raise ValueError(f"n_sats must be >= 1, got {self.n_sats}")
        if self.lambda_sat_per_year < 0:
            raise ValueError("satellite failure rate must be nonnegative")
        if self.n_days_per_year <= 0:
            raise ValueError("days per year must be positive")
        # Delegate altitude and inclination checks.
        CircularOrbit(self.h_plane_km, self.inclination_deg)


# Search-space bounds for a spare strategy; enforced at construction.
N_PARKING_BOUNDS = (1, 20)
H_PARKING_BOUNDS_KM = (700.0, 1000.0)
Q_PLANE_BOUNDS = (1, 10)
S_PLANE_BOUNDS = (1, 10)
K_Q_BOUNDS = (1, 10)
K_S_BOUNDS = (1, 10)


@dataclass(frozen=True)
class SpareStrategy:
    """One complete spare-strategy design point.

    Parking batch sizes are expressed as multiples of the in-plane batch,
    so a parking order of one batch delivers exactly q_plane satellites.

    Attributes:
        n_parking: Number of parking orbits (equally spaced RAANs).
        h_parking_km: Common altitude of the parking orbits, km.
        q_plane: In-plane order quantity, satellites.
        s_plane: In-plane reorder point, satellites.
        k_q_parking: Parking order quantity, in-plane batches.
        k_s_parking: Parking reorder point, in-plane batches.
    """

    n_parking: int
    h_parking_km: float
    q_plane: int
    s_plane: int
    k_q_parking: int
    k_s_parking: int

    def __post_init__(self) -> None:
        checks = (
            ("n_parking", self.n_parking, N_PARKING_BOUNDS),
            ("h_parking_km", self.h_parking_km, H_PARKING_BOUNDS_KM),
            ("q_plane", self.q_plane, Q_PLANE_BOUNDS),
            ("s_plane", self.s_plane, S_PLANE_BOUNDS),
            ("k_q_parking", self.k_q_parking, K_Q_BOUNDS),
            ("k_s_parking", self.k_s_parking, K_S_BOUNDS),
        )
        for name, value, (lo, hi) in checks:
            if not lo <= value <= hi:
                raise ValueError(f"{name}={value} outside [{lo}, {hi}]")

    @property
    def q_parking(self) -> int:
        """Parking order quantity in satellites."""
        return self.k_q_parking * self.q_plane

    @property
    def s_parking(self) -> int:
        """Parking reorder point in satellites."""
        return self.k_s_parking * self.q_plane

    def as_vector(self) -> tuple[int, float, int, int, int, int]:
        return (
            self.n_parking,
            self.h_parking_km,
            self.q_plane,
            self.s_plane,
            self.k_q_parking,
            self.k_s_parking,
        )


@dataclass(frozen=True)
class LaunchParams:
    """Ground-to-parking resupply characteristics.

    Attributes:
        mu_launch_days: Mean wait for the next launch window.
        pt_launch_days: Fixed order processing time before the wait starts.
        cap_launch: Maximum satellites per rocket.
    """

    mu_launch_days: float
    pt_launch_days: float
    cap_launch: int

    def __post_init__(self) -> None:
        if self.mu_launch_days <= 0 or self.pt_launch_days < 0:
            raise ValueError("launch wait must be positive and processing time nonnegative")
        if self.cap_launch < 1:
            raise ValueError(f"launch capacity must be >= 1, got {self.cap_launch}")


@dataclass(frozen=True)
class SatelliteParams:
    """Mass and propulsion figures of one spare satellite."""

    m_dry_kg: float
    v_exhaust_km_s: float

    def __post_init__(self) -> None:
        if self.m_dry_kg <= 0 or self.v_exhaust_km_s <= 0:
            raise ValueError("dry mass and exhaust velocity must be positive")


@dataclass(frozen=True)
class LeadTimeDistribution:
    """Replenishment lead-time law for one echelon.

    Either a weighted mixture of uniform segments (drift-and-transfer from
    whichever parking orbit serves the order) or a shifted exponential
    (processing time plus launch-window wait).

    Attributes:
        kind: MIXTURE_OF_UNIFORMS or SHIFTED_EXPONENTIAL.
        weights: Mixture weights, sum to 1; empty for the exponential kind.
        segments_days: (lo, hi) per uniform segment, ordered, non-overlapping.
        shift_days: Deterministic offset of the exponential kind.
        scale_days: Mean of the exponential part.
        neglected_mass: Probability mass dropped by conditioning the mixture
            on at least one supplier being available (diagnostic).
    """

    kind: str
    weights: tuple[float, ...] = ()
    segments_days: tuple[tuple[float, float], ...] = ()
    shift_days: float = 0.0
    scale_days: float = 0.0
    neglected_mass: float = 0.0

    def __post_init__(self) -> None:
        if self.kind == MIXTURE_OF_UNIFORMS:
            if not self.weights or len(self.weights) != len(self.segments_days):
                raise ValueError("mixture needs matching weights and segments")
            if any(w < 0 for w in self.weights):
                raise ValueError("mixture weights must be nonnegative")
            if abs(sum(self.weights) - 1.0) > 1e-9:
                raise ValueError(f"mixture weights must sum to 1, got {sum(self.weights)}")
            prev_hi = -math.inf
            for lo, hi in self.segments_days:
                if not lo < hi:
                    raise ValueError(f"segment bounds must increase, got ({lo}, {hi})")
                if lo < prev_hi - 1e-12:
                    raise ValueError("segments must not overlap")
                prev_hi = hi
        elif self.kind == SHIFTED_EXPONENTIAL:
            if self.shift_days < 0 or self.scale_days <= 0:
                raise ValueError("shift must be nonnegative and scale positive")
        else:
            raise ValueError(f"unknown lead-time kind: {self.kind!r}")

    @classmethod
    def uniform_mixture(
        cls,
        weights: tuple[float, ...],
        segments_days: tuple[tuple[float, float], ...],
        neglected_mass: float = 0.0,
    ) -> "LeadTimeDistribution":
        return cls(
            kind=MIXTURE_OF_UNIFORMS,
            weights=weights,
            segments_days=segments_days,
            neglected_mass=neglected_mass,
        )

    @classmethod
    def shifted_exponential(cls, shift_days: float, scale_days: float) -> "LeadTimeDistribution":
        return cls(kind=SHIFTED_EXPONENTIAL, shift_days=shift_days, scale_days=scale_days)

    @property
    def mean_days(self) -> float:
        if self.kind == SHIFTED_EXPONENTIAL:
            return self.shift_days + self.scale_days
        return sum(w * (lo + hi) / 2.0 for w, (lo, hi) in zip(self.weights, self.segments_days))


@dataclass(frozen=True)
class PolicyMetrics:
    """Steady-state analytics of one strategy on one constellation.

    Parking quantities are in batches (multiples of q_plane satellites);
    plane quantities are in satellites.
    """

    lambda_plane_per_day: float
    lambda_parking_batches_per_day: float
    p_av: float
    es_plane: float
    es_parking_batches: float
    rho_plane: float
    rho_parking: float
    mean_stock_plane: float
    mean_stock_parking_batches: float
    e_leadtime_plane_days: float
    e_leadtime_parking_days: float
    neglected_supply_mass: float

    def __post_init__(self) -> None:
        for name in ("p_av", "rho_plane", "rho_parking"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} outside [0, 1]")


def plane_demand_rate(cfg: ConstellationConfig) -> float:
    """Spare demand of one plane, satellites/day: n_sats * lambda_sat / days."""
    return cfg.n_sats * cfg.lambda_sat_per_year / cfg.n_days_per_year


def parking_demand_rate(cfg: ConstellationConfig, strategy: SpareStrategy) -> float:
    """Order arrival rate at one parking orbit, batches/day.

    The planes place batch orders at rate lambda_plane / q_plane each;
    pooling the planes and splitting evenly over the parking ring treats
    the pooled stream as Poisson, which is accurate for many planes.
    """
    if cfg.n_plane < 20:
        warnings.warn(
            f"n_plane={cfg.n_plane} < 20: Poisson superposition of plane orders "
            "is a coarse approximation for few planes",
            stacklevel=2,
        )
    per_plane_batches = plane_demand_rate(cfg) / strategy.q_plane
    return cfg.n_plane * per_plane_batches / strategy.n_parking


def parking_leadtime(lp: LaunchParams) -> LeadTimeDistribution:
    """Ground-to-parking lead time: processing shift plus exponential wait."""
    return LeadTimeDistribution.shifted_exponential(
        shift_days=lp.pt_launch_days, scale_days=lp.mu_launch_days
    )


def leadtime_expectation(
    dist: LeadTimeDistribution, integrand: Callable[[np.ndarray], np.ndarray]
) -> float:
    """E[g(T)] for a lead-time law T, by fixed-order Gaussian quadrature.

    Uniform segments use 32-node Gauss-Legendre each; the shifted
    exponential uses 64-node Gauss-Laguerre after absorbing the shift.
    The integrand must be vectorized over numpy arrays.
    """
    if dist.kind == SHIFTED_EXPONENTIAL:
        taus = dist.shift_days + dist.scale_days * _LAG_NODES
        return float(np.dot(_LAG_WEIGHTS, integrand(taus)))
    seg = np.asarray(dist.segments_days, dtype=float)
    mids = 0.5 * (seg[:, 0] + seg[:, 1])
    halfs = 0.5 * (seg[:, 1] - seg[:, 0])
    taus = mids[:, None] + halfs[:, None] * _GL_NODES[None, :]
    per_segment = integrand(taus) @ _GL_WEIGHTS / 2.0
    return float(np.dot(np.asarray(dist.weights), per_segment))


def leadtime_expected_shortage(s: int, rate_per_day: float, dist: LeadTimeDistribution) -> float:
    """Expected backorders per cycle with demand Poisson(rate * T) mixed over T."""
    if rate_per_day < 0:
        raise ValueError("demand rate must be nonnegative")
    if rate_per_day == 0.0:
        return 0.0
    return leadtime_expectation(dist, lambda tau: expected_shortage(s, rate_per_day * tau))


def parking_expected_shortage(
    strategy: SpareStrategy, lp: LaunchParams, lambda_parking: float
) -> float:
    """Expected backordered batches per cycle at one parking orbit."""
    return leadtime_expected_shortage(strategy.k_s_parking, lambda_parking, parking_leadtime(lp))


def parking_availability(es_parking: float, k_q: int) -> float:
    """Probability that an arriving order finds the parking orbit stocked.

    Equals the parking fill rate 1 - ES/k_Q.

    Raises:
        ValueError: If the expected shortage is outside [0, k_q].
    """
    if not 0.0 <= es_parking <= k_q:
        raise ValueError(
            f"expected shortage {es_parking} outside [0, {k_q}]: "
            "availability undefined for this policy"
        )
    return 1.0 - es_parking / k_q


def supply_probabilities_raw(p_av: float, n_parking: int) -> list[float]:
    """Probability that the i-th closest parking orbit serves an order.

    Sums, over the number of available orbits k, the chance that the i-th
    closest is available and all closer ones are not. The list sums to
    1 - (1 - p_av)^n, the chance of any supplier at all.
    """
    if not 0.0 < p_av <= 1.0:
        raise ValueError(f"availability must be in (0, 1], got {p_av}")
    if n_parking < 1:
        raise ValueError(f"n_parking must be >= 1, got {n_parking}")
    probs = []
    for i in range(1, n_parking + 1):
        total = 0.0
        for k in range(1, n_parking - i + 2):
            total += (
                math.comb(n_parking - i, k - 1)
                * p_av**k
                * (1.0 - p_av) ** (n_parking - k)
            )
        probs.append(total)
    return probs


def supply_probabilities(p_av: float, n_parking: int) -> list[float]:
    """Supplier-rank probabilities conditioned on at least one being available.

    The raw probabilities leave out the all-stocked-out case; dividing by
    1 - (1 - p_av)^n makes them a proper distribution over ranks.
    """
    raw = supply_probabilities_raw(p_av, n_parking)
    norm = 1.0 - (1.0 - p_av) ** n_parking
    return [p / norm for p in raw]


def plane_leadtime(
    strategy: SpareStrategy,
    cfg: ConstellationConfig,
    p_av: float,
    consts: EarthConstants = WGS84,
) -> LeadTimeDistribution:
    """Parking-to-plane lead-time law.

    The i-th closest parking orbit sits between (i-1) and i ring spacings
    of nodal separation, uniformly for a randomly timed order, so each rank
    contributes one uniform segment of drift-plus-flight times.
    """
    parking = CircularOrbit(strategy.h_parking_km, cfg.inclination_deg)
    plane = CircularOrbit(cfg.h_plane_km, cfg.inclination_deg)
    spacing = 2.0 * math.pi / strategy.n_parking
    bounds = [
        transfer_time(i * spacing, parking, plane, consts)
        for i in range(strategy.n_parking + 1)
    ]
    segments = tuple(zip(bounds[:-1], bounds[1:]))
    weights = tuple(supply_probabilities(p_av, strategy.n_parking))
    neglected = (1.0 - p_av) ** strategy.n_parking
    return LeadTimeDistribution.uniform_mixture(weights, segments, neglected_mass=neglected)


def plane_expected_shortage(
    strategy: SpareStrategy, cfg: ConstellationConfig, leadtime: LeadTimeDistribution
) -> float:
    """Expected backordered satellites per cycle at one plane."""
    return leadtime_expected_shortage(strategy.s_plane, plane_demand_rate(cfg), leadtime)


def plane_fill_rate(es_plane: float, strategy: SpareStrategy) -> float:
    return fill_rate(es_plane, strategy.q_plane)


def parking_fill_rate(es_parking: float, strategy: SpareStrategy) -> float:
    return fill_rate(es_parking, strategy.k_q_parking)


def plane_mean_stock(
    strategy: SpareStrategy, cfg: ConstellationConfig, leadtime: LeadTimeDistribution
) -> float:
    """Cycle-average satellites on hand at one plane."""
    policy = SQPolicy(strategy.s_plane, strategy.q_plane)
    return mean_stock(policy, plane_demand_rate(cfg) * leadtime.mean_days)


def parking_mean_stock(
    strategy: SpareStrategy, lambda_parking: float, leadtime: LeadTimeDistribution
) -> float:
    """Cycle-average batches on hand at one parking orbit."""
    policy = SQPolicy(strategy.k_s_parking, strategy.k_q_parking)
    return mean_stock(policy, lambda_parking * leadtime.mean_days)


def evaluate_strategy(
    cfg: ConstellationConfig,
    strategy: SpareStrategy,
    lp: LaunchParams,
    consts: EarthConstants = WGS84,
) -> PolicyMetrics:
    """Full feed-forward evaluation of one strategy.

    Order of computation: plane demand, parking demand, parking lead
    time / shortage / availability, supplier-rank weights, plane lead
    time / shortage, then fill rates and stocks for both echelons.

    Raises:
        ValueError: If the parking orbit is not below the constellation, or
            the policy is so undersized that availability is undefined.
    """
    if strategy.h_parking_km >= cfg.h_plane_km:
        raise ValueError(
            f"parking altitude {strategy.h_parking_km} km must be below "
            f"plane altitude {cfg.h_plane_km} km"
        )
    lam_plane = plane_demand_rate(cfg)
    lam_parking = parking_demand_rate(cfg, strategy)

    park_lt = parking_leadtime(lp)
    es_parking = leadtime_expected_shortage(strategy.k_s_parking, lam_parking, park_lt)
    p_av = parking_availability(es_parking, strategy.k_q_parking)
    if p_av == 0.0:
        raise ValueError("parking availability is zero: no supplier rank distribution")

    plane_lt = plane_leadtime(strategy, cfg, p_av, consts)
    es_plane = leadtime_expected_shortage(strategy.s_plane, lam_plane, plane_lt)

    return PolicyMetrics(
        lambda_plane_per_day=lam_plane,
        lambda_parking_batches_per_day=lam_parking,
        p_av=p_av,
        es_plane=es_plane,
        es_parking_batches=es_parking,
        rho_plane=plane_fill_rate(es_plane, strategy),
        rho_parking=parking_fill_rate(es_parking, strategy),
        mean_stock_plane=plane_mean_stock(strategy, cfg, plane_lt),
        mean_stock_parking_batches=parking_mean_stock(strategy, lam_parking, park_lt),
        e_leadtime_plane_days=plane_lt.mean_days,
        e_leadtime_parking_days=park_lt.mean_days,
        neglected_supply_mass=plane_lt.neglected_mass,
    )


def evaluate_inplane_only(
    cfg: ConstellationConfig, policy: SQPolicy, lp: LaunchParams
) -> PolicyMetrics:
    """Evaluate the baseline strategy with no parking echelon.

    Planes order straight from the ground, so the plane lead time is the
    launch law itself. Parking fields are reported as an ideal pass-through
    (availability 1, no stock).

    Raises:
        ValueError: If the order quantity exceeds the launch capacity.
    """
    if policy.order_quantity_q > lp.cap_launch:
        raise ValueError(
            f"order quantity {policy.order_quantity_q} exceeds launch "
            f"capacity {lp.cap_launch}"
        )
    lam_plane = plane_demand_rate(cfg)
    lt = parking_leadtime(lp)
    es = leadtime_expected_shortage(policy.reorder_point_s, lam_plane, lt)
    return PolicyMetrics(
        lambda_plane_per_day=lam_plane,
        lambda_parking_batches_per_day=0.0,
        p_av=1.0,
        es_plane=es,
        es_parking_batches=0.0,
        rho_plane=fill_rate(es, policy.order_quantity_q),
        rho_parking=1.0,
        mean_stock_plane=mean_stock(policy, lam_plane * lt.mean_days),
        mean_stock_parking_batches=0.0,
        e_leadtime_plane_days=lt.mean_days,
        e_leadtime_parking_days=0.0,
        neglected_supply_mass=0.0,
    )
