"""Scheduling kernel and route operation tests.

The frozen start times below are worked out by hand from the three-step
rule: earliest-start forward pass, then whole no-idle blocks move later
when the riders aboard gain, then the vehicle leaves the depot as late as
the first stop allows.
"""

import math
import random

import numpy as np
import pytest

from ccdarp.instance import parse_cordeau, synthetic_instance
from ccdarp.schedule import (Infeasible, Route, build_schedule, check_feasible,
                             context_for, empty_route, empty_solution,
                             insertion_candidates, objective, recompute_totals,
                             remove_request, route_outcomes, schedule_sequence,
                             solution_from_json, solution_to_json, try_insert)
from ccdarp.utility import ChanceModel, FareStructure

from conftest import tiny_instance, tiny_model

OUTBOUND_TOY = """\
1 1 480 3 30
0 0.000 0.000 0 0 0 480
1 5.000 0.000 0 1 0 480
2 15.000 0.000 0 -1 100 140
3 0.000 0.000 0 0 0 480
"""

INBOUND_TOY = """\
1 1 480 3 30
0 0.000 0.000 0 0 0 480
1 5.000 0.000 0 1 100 140
2 15.000 0.000 0 -1 0 480
3 0.000 0.000 0 0 0 480
"""


def test_outbound_block_shifts_frozen():
    # forward pass gives [0, 5, 100, 115]; the pickup block slides 85 to
    # meet the dropoff window riding direct, the dropoff block slides 20
    # until the ride-time cap binds, and the vehicle leaves the depot late
    inst = parse_cordeau(OUTBOUND_TOY, name="toy-out")
    model = ChanceModel.default()
    route = build_schedule([0, 1, 2, 3], inst, model)
    assert route.starts == pytest.approx([85.0, 90.0, 120.0, 135.0])
    assert route.starts_earliest == pytest.approx([0.0, 5.0, 100.0, 115.0])
    assert route.cost == pytest.approx(30.0)
    out = route_outcomes(route, inst, model)
    assert out[1].ride_time == pytest.approx(30.0)
    assert out[1].schedule_delay == pytest.approx(20.0)
    assert out[1].fare == 20.0


def test_inbound_no_shift_frozen():
    # one no-idle block holding the whole request: moving it later only
    # grows the pickup deviation, so it stays at the earliest schedule
    inst = parse_cordeau(INBOUND_TOY, name="toy-in")
    model = ChanceModel.default()
    route = build_schedule([0, 1, 2, 3], inst, model)
    assert route.starts == pytest.approx([95.0, 100.0, 110.0, 125.0])
    out = route_outcomes(route, inst, model)
    assert out[1].ride_time == pytest.approx(10.0)
    assert out[1].schedule_delay == pytest.approx(0.0)


def test_schedule_without_chance_skips_shifts():
    inst = parse_cordeau(INBOUND_TOY, name="toy-in")
    route = build_schedule([0, 1, 2, 3], inst, None)
    # no behavioral model: plain earliest-start schedule, late depot leave
    assert route.starts == pytest.approx([95.0, 100.0, 110.0, 125.0])
    # the outbound toy only becomes ride-feasible through the block shifts
    out = parse_cordeau(OUTBOUND_TOY, name="toy-out")
    bad = schedule_sequence([0, 1, 2, 3], context_for(out, None))
    assert isinstance(bad, Infeasible) and bad.reason == "ride time"


def test_schedule_rejections():
    inst = parse_cordeau(OUTBOUND_TOY, name="toy-out")
    model = ChanceModel.default()
    ctx = context_for(inst, model)

    bad = schedule_sequence([0, 1, 3], ctx)
    assert isinstance(bad, Infeasible) and bad.reason == "pairing"
    assert not bad  # Infeasible is falsy
    assert isinstance(schedule_sequence([1, 2, 3], ctx), Infeasible)
    assert isinstance(schedule_sequence([0, 2, 1, 3], ctx), Infeasible)

    # fare above the private option by more than the margin: rejected
    pricey = ChanceModel.default(FareStructure.flat(30.0))
    bad = schedule_sequence([0, 1, 2, 3], context_for(inst, pricey))
    assert isinstance(bad, Infeasible) and bad.reason == "chance constraint"

    # dropoff window cannot be reached in time
    late = parse_cordeau(OUTBOUND_TOY.replace("100 140", "5 8"), name="late")
    bad = schedule_sequence([0, 1, 2, 3], context_for(late, model))
    assert isinstance(bad, Infeasible) and bad.reason == "time window"

    # ride cap smaller than the direct ride
    tight = parse_cordeau(OUTBOUND_TOY.replace("480 3 30", "480 3 9"),
                          name="tight")
    bad = schedule_sequence([0, 1, 2, 3], context_for(tight, None))
    assert isinstance(bad, Infeasible) and bad.reason == "ride time"

    # route duration cap
    slow = parse_cordeau(OUTBOUND_TOY.replace("1 1 480 3 30", "1 1 20 3 30"),
                         name="slow")
    bad = schedule_sequence([0, 1, 2, 3], context_for(slow, None))
    assert isinstance(bad, Infeasible) and bad.reason == "route duration"

    # capacity
    heavy = parse_cordeau(
        OUTBOUND_TOY.replace("0 1 0 480", "0 4 0 480")
        .replace("0 -1 100 140", "0 -4 100 140"), name="heavy")
    bad = schedule_sequence([0, 1, 2, 3], context_for(heavy, None))
    assert isinstance(bad, Infeasible) and bad.reason == "capacity"


def test_build_schedule_validation():
    inst = parse_cordeau(OUTBOUND_TOY, name="toy-out")
    with pytest.raises(ValueError):
        build_schedule([0, 1, 1, 2, 3], inst)
    with pytest.raises(ValueError):
        build_schedule([0, 9, 3], inst)
    with pytest.raises(ValueError):
        build_schedule([0, 1, 0, 2, 3], inst)


def test_insertion_candidate_counts():
    inst = synthetic_instance(3, 1, seed=1)
    ctx = context_for(inst, None)
    route = empty_route(inst, 0, ctx)
    assert insertion_candidates(route) == [(1, 1)]
    # one request aboard (4 stops): 3 + 2 + 1 slots
    r1 = inst.requests[0]
    route = try_insert(route, r1, inst, ctx=ctx).route
    assert len(insertion_candidates(route)) == 6
    # 6 stops: sum over pickup slots 1..5 of the drop slots at or after
    assert len(insertion_candidates(Route(0, [0] * 5 + [7], [0] * 6, [0] * 6,
                                          [0] * 6, 0.0))) == 15


def exhaustive_insert(route, r, inst, ctx):
    """Reference insertion: try every slot pair through the full kernel."""
    n = ctx.n
    pick, drop = r.index, n + r.index
    best = None
    for p, dpos in insertion_candidates(route):
        seq = (route.stops[:p] + [pick] + route.stops[p:dpos] + [drop]
               + route.stops[dpos:])
        res = schedule_sequence(seq, ctx)
        if isinstance(res, Infeasible):
            continue
        key = (res[3] - route.cost, p, dpos)
        if best is None or key < best:
            best = key
    return best


def test_try_insert_matches_exhaustive_scan():
    # the pruned scan must pick the same slot pair as the full enumeration
    model = tiny_model()
    checked = inserted = 0
    for seed in range(60):
        inst = tiny_instance(seed)
        ctx = context_for(inst, model)
        rng = random.Random(seed)
        routes = [empty_route(inst, k, ctx)
                  for k in range(inst.fleet.vehicle_count)]
        order = list(inst.requests)
        rng.shuffle(order)
        for r in order:
            k = rng.randrange(len(routes))
            fast = try_insert(routes[k], r, inst, ctx=ctx)
            slow = exhaustive_insert(routes[k], r, inst, ctx)
            checked += 1
            if slow is None:
                assert fast is None
                continue
            assert fast is not None
            assert (fast.delta_cost, fast.pickup_pos, fast.drop_pos) == \
                pytest.approx(slow)
            if rng.random() < 0.7:
                routes[k] = fast.route
                inserted += 1
    assert checked > 150 and inserted > 50


def first_insertable(model, seeds=range(30)):
    """First (instance, ctx, empty route, request, insertion) that works."""
    for seed in seeds:
        inst = tiny_instance(seed)
        ctx = context_for(inst, model)
        route = empty_route(inst, 0, ctx)
        for r in inst.requests:
            res = try_insert(route, r, inst, ctx=ctx)
            if res is not None:
                return inst, ctx, route, r, res
    raise AssertionError("no insertable request in the fixture pool")


def test_insert_remove_round_trip():
    model = tiny_model()
    inst, ctx, route, r, res = first_insertable(model)
    assert res.delta_cost >= -1e-9  # euclidean costs: detours never pay
    back = remove_request(res.route, r, inst, ctx=ctx)
    assert back.stops == route.stops
    assert back.cost == pytest.approx(route.cost)
    with pytest.raises(ValueError):
        try_insert(res.route, r, inst, ctx=ctx)
    with pytest.raises(ValueError):
        remove_request(route, r, inst, ctx=ctx)


def test_objective_and_totals():
    model = tiny_model()
    inst, ctx, _, r, res = first_insertable(model)
    sol = empty_solution(inst)
    assert sol.profit == 0.0
    sol.routes[0] = res.route
    sol.accepted[r.index - 1] = 1
    recompute_totals(sol, inst, model)
    assert sol.revenue == pytest.approx(30.0 * r.load)
    assert sol.routing_cost == pytest.approx(res.route.cost)
    assert objective(sol, inst, model) == pytest.approx(sol.profit)


def build_served_solution(inst, model):
    ctx = context_for(inst, model)
    sol = empty_solution(inst)
    for r in inst.requests:
        for k in range(inst.fleet.vehicle_count):
            res = try_insert(sol.routes[k], r, inst, ctx=ctx)
            if res is not None:
                sol.routes[k] = res.route
                sol.accepted[r.index - 1] = 1
                break
    recompute_totals(sol, inst, model)
    return sol


def test_check_feasible_accepts_and_rejects():
    model = tiny_model()
    inst = tiny_instance(13)
    sol = build_served_solution(inst, model)
    assert sol.served, "fixture should serve someone"
    assert check_feasible(sol, inst, model).ok

    # service before the window opens
    broken = solution_from_json(solution_to_json(sol, inst, model), inst)
    rt = next(rt for rt in broken.routes if not rt.empty)
    rt.starts[1] = inst.nodes[rt.stops[1]].earliest - 5.0
    assert not check_feasible(broken, inst, model).ok

    # claimed revenue out of sync with the acceptance vector
    broken = solution_from_json(solution_to_json(sol, inst, model), inst)
    broken.revenue += 1.0
    assert not check_feasible(broken, inst, model).ok

    # accepted flag without any visit
    broken = solution_from_json(solution_to_json(sol, inst, model), inst)
    victim = broken.served[0]
    rt = next(rt for rt in broken.routes
              if victim in rt.requests_aboard(inst.n))
    drop_list = [(v, s, ld) for v, s, ld in
                 zip(rt.stops, rt.starts, rt.loads)
                 if v not in (victim, inst.n + victim)]
    rt.stops, rt.starts, rt.loads = (list(x) for x in zip(*drop_list))
    report = check_feasible(broken, inst, model)
    assert not report.ok

    # visited but not accepted
    broken = solution_from_json(solution_to_json(sol, inst, model), inst)
    broken.accepted[broken.served[0] - 1] = 0
    recompute_totals(broken, inst, model)
    assert not check_feasible(broken, inst, model).ok


def test_check_feasible_flags_capacity_and_duplicates():
    model = tiny_model()
    inst = tiny_instance(13)
    sol = build_served_solution(inst, model)
    victim = sol.served[0]

    broken = solution_from_json(solution_to_json(sol, inst, model), inst)
    spare = next(rt for rt in broken.routes if rt.empty)
    src = next(rt for rt in broken.routes
               if victim in rt.requests_aboard(inst.n))
    spare.stops = list(src.stops)
    spare.starts = list(src.starts)
    spare.loads = list(src.loads)
    report = check_feasible(broken, inst, model)
    assert any("visited" in e or "twice" in e or "duplicate" in e
               for e in report.errors), report.errors


def test_solution_json_round_trip():
    model = tiny_model()
    inst = tiny_instance(21)
    sol = build_served_solution(inst, model)
    doc = solution_to_json(sol, inst, model)
    again = solution_from_json(doc, inst)
    assert again.accepted == sol.accepted
    assert again.revenue == pytest.approx(sol.revenue)
    assert again.routing_cost == pytest.approx(sol.routing_cost)
    assert [rt.stops for rt in again.routes] == [rt.stops for rt in sol.routes]
    assert check_feasible(again, inst, model).ok
    # per-request outcomes present exactly for the served
    for entry in doc["requests"]:
        if entry["y"]:
            assert entry["ride_time"] is not None
        else:
            assert entry["ride_time"] is None


def test_context_cache_identity():
    inst = tiny_instance(2)
    model = tiny_model()
    assert context_for(inst, model) is context_for(inst, model)
    assert context_for(inst, None) is not context_for(inst, model)
