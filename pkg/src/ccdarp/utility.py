"""Rider utilities, fares, and the logit acceptance test.

A request is acceptable when the service beats the rider's private option
with probability at least ``confidence``; with logistic taste noise of
scale ``s`` that collapses to a deterministic threshold on the mean
utility gap:

    accept  <=>  (private - offered) <= -s * ln(p / (1 - p))

Utilities are linear: the private option pays a time coefficient on the
direct ride plus a fare coefficient on the private trip cost; the offered
service pays fare, in-vehicle time, and schedule deviation (late pickup
for inbound riders, early arrival for outbound ones).

Monetary time coefficients are stored per minute; ``ClassParams.from_hourly``
converts the conventional per-hour figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from .instance import Request

FLAT = "flat"
DISTANCE = "distance"
ZONE = "zone"

# built-in defaults: value of time $10.6/h, schedule deviation $21.2/h,
# 10 utility units per currency unit
DEFAULT_BETA_T_HOURLY = 10.6
DEFAULT_BETA_S_HOURLY = 21.2
DEFAULT_BETA_F = 10.0
DEFAULT_SCALE = 10.0
DEFAULT_CONFIDENCE = 0.95
DEFAULT_FLAT_FARE = 20.0
FEASIBILITY_TOL = 1e-6


@dataclass(frozen=True)
class ClassParams:
    """Behavioral coefficients for one passenger class (per-minute units)."""

    class_id: str
    beta_time: float
    beta_sched: float
    beta_fare: float
    scale: float
    confidence: float

    def __post_init__(self):
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must be in (0, 1), got {self.confidence}")
        if self.scale <= 0.0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if min(self.beta_time, self.beta_sched, self.beta_fare) < 0.0:
            raise ValueError("negative taste coefficients")

    @classmethod
    def from_hourly(cls, class_id: str, beta_time_hourly: float,
                    beta_sched_hourly: float, beta_fare: float,
                    scale: float, confidence: float) -> "ClassParams":
        return cls(str(class_id), beta_time_hourly / 60.0, beta_sched_hourly / 60.0,
                   beta_fare, scale, confidence)

    @property
    def beta_time_hourly(self) -> float:
        return self.beta_time * 60.0

    @property
    def beta_sched_hourly(self) -> float:
        return self.beta_sched * 60.0


@dataclass(frozen=True)
class FareStructure:
    """Flat, distance-proportional, or zone-pair fares.

    ``distance_rate`` and ``zone_base`` are keyed by class id; ``zone_factor``
    is keyed by (pickup_zone, dropoff_zone) and defaults to 1 for missing
    pairs or unzoned requests.
    """

    variant: str = FLAT
    flat_fare: float = DEFAULT_FLAT_FARE
    distance_rate: Mapping[str, float] = field(default_factory=dict)
    zone_base: Mapping[str, float] = field(default_factory=dict)
    zone_factor: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in (FLAT, DISTANCE, ZONE):
            raise ValueError(f"unknown fare variant {self.variant!r}")

    @classmethod
    def flat(cls, fare: float) -> "FareStructure":
        return cls(variant=FLAT, flat_fare=fare)

    @classmethod
    def per_distance(cls, rates: Mapping[str, float]) -> "FareStructure":
        return cls(variant=DISTANCE, distance_rate=dict(rates))

    @classmethod
    def zonal(cls, base: Mapping[str, float],
              factor: Mapping[tuple[str, str], float] | None = None) -> "FareStructure":
        return cls(variant=ZONE, zone_base=dict(base), zone_factor=dict(factor or {}))


def fare_of(request: Request, fares: FareStructure) -> float:
    """Per-person fare for a request; revenue is fare times load."""
    if fares.variant == FLAT:
        return float(fares.flat_fare)
    if fares.variant == DISTANCE:
        try:
            rate = fares.distance_rate[request.class_id]
        except KeyError:
            raise ValueError(f"no distance rate for class {request.class_id!r}") from None
        return float(rate) * request.direct_distance
    try:
        base = fares.zone_base[request.class_id]
    except KeyError:
        raise ValueError(f"no zone base fare for class {request.class_id!r}") from None
    factor = 1.0
    if request.pickup_zone is not None and request.dropoff_zone is not None:
        factor = float(fares.zone_factor.get(
            (request.pickup_zone, request.dropoff_zone), 1.0))
    return float(base) * factor


@dataclass(frozen=True)
class ServiceOutcome:
    """What the rider experiences on a given schedule."""

    ride_time: float
    schedule_delay: float
    fare: float


@dataclass(frozen=True)
class ChanceModel:
    """Per-class parameters plus the fare structure and feasibility slack."""

    classes: Mapping[str, ClassParams]
    fares: FareStructure | None = None
    tol: float = FEASIBILITY_TOL

    def params_for(self, request: Request) -> ClassParams:
        try:
            return self.classes[request.class_id]
        except KeyError:
            raise ValueError(f"request {request.index}: unknown class "
                             f"{request.class_id!r}") from None

    def with_fares(self, fares: FareStructure | None) -> "ChanceModel":
        if fares is None:
            if self.fares is None:
                raise ValueError("no fare structure configured")
            return self
        return replace(self, fares=fares)

    @classmethod
    def default(cls, fares: FareStructure | None = None) -> "ChanceModel":
        params = ClassParams.from_hourly("1", DEFAULT_BETA_T_HOURLY,
                                         DEFAULT_BETA_S_HOURLY, DEFAULT_BETA_F,
                                         DEFAULT_SCALE, DEFAULT_CONFIDENCE)
        return cls({"1": params}, fares or FareStructure.flat(DEFAULT_FLAT_FARE))


def private_utility(cp: ClassParams, direct_time: float, private_cost: float) -> float:
    """Utility of the rider's own option: direct ride at private cost."""
    return -cp.beta_time * direct_time - cp.beta_fare * private_cost


def drt_utility(cp: ClassParams, outcome: ServiceOutcome) -> float:
    """Utility of the offered service for a scheduled outcome."""
    return (-cp.beta_fare * outcome.fare
            - cp.beta_time * outcome.ride_time
            - cp.beta_sched * outcome.schedule_delay)


def chance_threshold(cp: ClassParams) -> float:
    """Largest acceptable mean utility gap (private minus offered)."""
    return -cp.scale * math.log(cp.confidence / (1.0 - cp.confidence))


def chance_feasible(cp: ClassParams, v_private: float, v_offered: float,
                    tol: float = FEASIBILITY_TOL) -> bool:
    """Acceptance test on mean utilities; tol absorbs scheduling noise."""
    return (v_private - v_offered) <= chance_threshold(cp) + tol


def utility_bounds(cp: ClassParams, fare: float, direct_time: float,
                   max_ride_time: float, max_delay: float) -> tuple[float, float]:
    """(worst, best) offered utility over feasible schedules.

    Best case rides direct with zero deviation; worst case rides the cap
    with the full window's deviation.
    """
    best = -cp.beta_fare * fare - cp.beta_time * direct_time
    worst = (-cp.beta_fare * fare - cp.beta_time * max_ride_time
             - cp.beta_sched * max_delay)
    return worst, best


def deactivation_slack(cp: ClassParams, v_private: float, v_worst: float) -> float:
    """Smallest big-M that switches the acceptance constraint off.

    The violated side peaks at the worst offered utility; a negative value
    means the constraint holds even when inactive, so it clamps to 0.
    """
    return max(0.0, v_private - v_worst - chance_threshold(cp))


# ---------------------------------------------------------------------------
# parameter files


def parse_params(doc: Mapping) -> tuple[ChanceModel, dict]:
    """Read the parameter-file JSON; returns the model and heuristic extras."""
    classes = {}
    for entry in doc.get("classes", []):
        cp = ClassParams.from_hourly(
            class_id=str(entry.get("class_id", "1")),
            beta_time_hourly=float(entry.get("beta_T_per_hour", DEFAULT_BETA_T_HOURLY)),
            beta_sched_hourly=float(entry.get("beta_S_per_hour", DEFAULT_BETA_S_HOURLY)),
            beta_fare=float(entry.get("beta_F", DEFAULT_BETA_F)),
            scale=float(entry.get("s", DEFAULT_SCALE)),
            confidence=float(entry.get("p", DEFAULT_CONFIDENCE)),
        )
        classes[cp.class_id] = cp
    if not classes:
        classes = dict(ChanceModel.default().classes)

    fares = parse_fares(doc.get("fare")) if doc.get("fare") else None
    tol = float(doc.get("tolerance", FEASIBILITY_TOL))
    extras = {k: float(doc[k]) for k in ("omega", "delta") if k in doc}
    if "rng_seed" in doc and doc["rng_seed"] is not None:
        extras["rng_seed"] = int(doc["rng_seed"])
    return ChanceModel(classes, fares, tol), extras


def parse_fares(doc: Mapping) -> FareStructure:
    variant = doc.get("variant", FLAT)
    if variant == FLAT:
        return FareStructure.flat(float(doc.get("f", DEFAULT_FLAT_FARE)))
    if variant == DISTANCE:
        rates = {str(k): float(v) for k, v in doc.get("alpha", {}).items()}
        if not rates:
            raise ValueError("distance fares need an 'alpha' rate per class")
        return FareStructure.per_distance(rates)
    if variant == ZONE:
        base = {str(k): float(v) for k, v in doc.get("base", {}).items()}
        if not base:
            raise ValueError("zone fares need a 'base' fare per class")
        factor = {}
        for key, value in doc.get("theta", {}).items():
            parts = str(key).split(":")
            if len(parts) != 2:
                raise ValueError(f"zone factor key {key!r} is not 'from:to'")
            factor[(parts[0], parts[1])] = float(value)
        return FareStructure.zonal(base, factor)
    raise ValueError(f"unknown fare variant {variant!r}")
