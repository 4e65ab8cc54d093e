"""Behavioral-model unit tests against hand-computed values."""

import math

import pytest

from ccdarp.utility import (ChanceModel, ClassParams, FareStructure,
                            ServiceOutcome, chance_feasible, chance_threshold,
                            deactivation_slack, drt_utility, fare_of,
                            parse_fares, parse_params, private_utility,
                            utility_bounds)
from ccdarp.instance import Request


def default_params() -> ClassParams:
    return ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 10.0, 0.95)


def make_request(direct=30.0, private=10.0, class_id="1", zones=(None, None)):
    return Request(index=1, direction="inbound", load=1, class_id=class_id,
                   private_cost=private, direct_distance=direct,
                   pickup_zone=zones[0], dropoff_zone=zones[1])


def test_hourly_conversion():
    cp = default_params()
    # 10.6 $/h and 21.2 $/h, stored per minute
    assert cp.beta_time == pytest.approx(10.6 / 60.0, abs=1e-15)
    assert cp.beta_sched == pytest.approx(21.2 / 60.0, abs=1e-15)
    assert cp.beta_time_hourly == pytest.approx(10.6)
    assert cp.beta_sched_hourly == pytest.approx(21.2)


def test_params_validation():
    with pytest.raises(ValueError):
        ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 10.0, 1.0)
    with pytest.raises(ValueError):
        ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 10.0, 0.0)
    with pytest.raises(ValueError):
        ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 0.0, 0.95)
    with pytest.raises(ValueError):
        ClassParams.from_hourly("1", -1.0, 21.2, 10.0, 10.0, 0.95)


def test_threshold_frozen_values():
    # -10 * ln(0.95 / 0.05) = -10 * ln(19)
    assert chance_threshold(default_params()) == pytest.approx(
        -29.444389791664392, abs=1e-9)
    cp = ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 1.0, 0.8)
    # -ln(0.8 / 0.2) = -ln(4)
    assert chance_threshold(cp) == pytest.approx(-1.3862943611198906, abs=1e-12)
    # indifferent rider: p = 0.5 means no margin at all
    cp = ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 10.0, 0.5)
    assert chance_threshold(cp) == pytest.approx(0.0, abs=1e-12)


def test_threshold_scale_homogeneity():
    base = ClassParams.from_hourly("1", 10.6, 21.2, 10.0, 1.0, 0.9)
    for s in (0.5, 2.0, 10.0, 50.0):
        scaled = ClassParams.from_hourly("1", 10.6, 21.2, 10.0, s, 0.9)
        assert chance_threshold(scaled) == pytest.approx(
            s * chance_threshold(base), rel=1e-12)


def test_threshold_monotone_in_confidence():
    grid = [0.55, 0.7, 0.8, 0.9, 0.95, 0.99]
    values = [chance_threshold(ClassParams.from_hourly("1", 10.6, 21.2, 10.0,
                                                       10.0, p))
              for p in grid]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_private_utility_frozen():
    # -10.6/60 * 30 - 10 * 10 = -5.3 - 100
    assert private_utility(default_params(), 30.0, 10.0) == pytest.approx(
        -105.3, abs=1e-12)


def test_drt_utility_frozen():
    # -10 * 20 - 10.6/60 * 40 - 0 = -200 - 7.0666...
    out = ServiceOutcome(ride_time=40.0, schedule_delay=0.0, fare=20.0)
    assert drt_utility(default_params(), out) == pytest.approx(
        -207.06666666666666, abs=1e-10)
    # delay term: 21.2/60 * 15 = 5.3
    out = ServiceOutcome(ride_time=40.0, schedule_delay=15.0, fare=20.0)
    assert drt_utility(default_params(), out) == pytest.approx(
        -212.36666666666666, abs=1e-10)


def test_utility_bounds_frozen():
    # best = -200 - 5.3, worst = -200 - 7.95 - 5.3
    worst, best = utility_bounds(default_params(), fare=20.0, direct_time=30.0,
                                 max_ride_time=45.0, max_delay=15.0)
    assert best == pytest.approx(-205.3, abs=1e-10)
    assert worst == pytest.approx(-213.25, abs=1e-10)
    assert worst <= best


def test_deactivation_slack_frozen():
    cp = default_params()
    # gap of 100 plus the 29.444... margin
    assert deactivation_slack(cp, -100.0, -200.0) == pytest.approx(
        129.44438979166438, abs=1e-9)
    # already satisfied while inactive: clamps at zero
    assert deactivation_slack(cp, -200.0, -100.0) == 0.0


def test_deactivation_slack_is_minimal():
    cp = default_params()
    v_hat, v_worst = -100.0, -200.0
    w = deactivation_slack(cp, v_hat, v_worst)
    thr = chance_threshold(cp)
    # at the worst offered utility the inactive constraint binds exactly
    assert v_worst == pytest.approx(v_hat - thr - w, abs=1e-9)


def test_chance_feasible_boundary():
    cp = default_params()
    thr = chance_threshold(cp)
    v_hat = -100.0
    assert chance_feasible(cp, v_hat, v_hat - thr)
    assert chance_feasible(cp, v_hat, v_hat - thr - 1e-7)  # inside tol
    assert not chance_feasible(cp, v_hat, v_hat - thr - 1e-3)
    assert chance_feasible(cp, v_hat, v_hat - thr + 5.0)


def test_fare_structures():
    flat = FareStructure.flat(20.0)
    assert fare_of(make_request(), flat) == 20.0

    dist = FareStructure.per_distance({"1": 1.5})
    assert fare_of(make_request(direct=12.0), dist) == pytest.approx(18.0)
    with pytest.raises(ValueError):
        fare_of(make_request(class_id="2"), dist)

    zonal = FareStructure.zonal({"1": 10.0}, {("west", "east"): 1.4})
    assert fare_of(make_request(zones=("west", "east")), zonal) == pytest.approx(14.0)
    assert fare_of(make_request(zones=("east", "west")), zonal) == pytest.approx(10.0)
    assert fare_of(make_request(), zonal) == pytest.approx(10.0)
    with pytest.raises(ValueError):
        fare_of(make_request(class_id="9", zones=("west", "east")), zonal)


def test_chance_model_accessors():
    model = ChanceModel.default()
    assert model.params_for(make_request()).class_id == "1"
    with pytest.raises(ValueError):
        model.params_for(make_request(class_id="vip"))
    assert model.with_fares(None) is model
    bare = ChanceModel(model.classes, None)
    with pytest.raises(ValueError):
        bare.with_fares(None)
    swapped = model.with_fares(FareStructure.flat(12.0))
    assert swapped.fares.flat_fare == 12.0
    assert model.fares.flat_fare == 20.0


def test_parse_params_full():
    doc = {
        "classes": [
            {"class_id": "a", "beta_T_per_hour": 9.0, "beta_S_per_hour": 18.0,
             "beta_F": 8.0, "s": 2.0, "p": 0.9},
            {"class_id": "b"},
        ],
        "fare": {"variant": "flat", "f": 25.0},
        "tolerance": 1e-5,
        "omega": 0.2, "delta": 0.05, "rng_seed": 7,
    }
    model, extras = parse_params(doc)
    assert set(model.classes) == {"a", "b"}
    assert model.classes["a"].beta_time == pytest.approx(9.0 / 60.0)
    assert model.classes["a"].scale == 2.0
    assert model.classes["b"].confidence == 0.95  # default fills gaps
    assert model.fares.flat_fare == 25.0
    assert model.tol == 1e-5
    assert extras == {"omega": 0.2, "delta": 0.05, "rng_seed": 7}


def test_parse_params_empty_doc_gives_defaults():
    model, extras = parse_params({})
    assert set(model.classes) == {"1"}
    assert model.fares is None
    assert extras == {}


def test_parse_fares_variants():
    assert parse_fares({"variant": "flat", "f": 11.0}).flat_fare == 11.0
    dist = parse_fares({"variant": "distance", "alpha": {"1": 2.0}})
    assert dist.distance_rate == {"1": 2.0}
    zone = parse_fares({"variant": "zone", "base": {"1": 9.0},
                        "theta": {"w:e": 1.2}})
    assert zone.zone_factor == {("w", "e"): 1.2}
    with pytest.raises(ValueError):
        parse_fares({"variant": "distance"})
    with pytest.raises(ValueError):
        parse_fares({"variant": "zone", "base": {"1": 9.0},
                     "theta": {"nocolon": 1.2}})
    with pytest.raises(ValueError):
        parse_fares({"variant": "mystery"})
