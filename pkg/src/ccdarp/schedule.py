"""Route scheduling and solution bookkeeping.

The deterministic scheduling rule, applied to a fixed stop sequence:

1. forward pass: every stop starts at ``max(window_open, arrival)``;
2. the vehicle leaves the depot as late as the first stop allows;
3. per contiguous block of stops with no idle time between them, a uniform
   forward shift of either 0 or the largest safe amount is applied,
   whichever gives the riders aboard the higher summed utility (inbound
   riders prefer no shift, outbound riders prefer the full one).  The safe
   amount respects every window in the block, the idle gap to the next
   block, the route duration cap, and ride-time caps of riders straddling
   the block boundary.

Feasibility of a sequence then means: windows and capacity hold, route
duration and ride times are within the fleet limits, and every rider
aboard passes the acceptance test under the resulting schedule.  A
mutation that breaks a previously accepted rider's acceptance test is
infeasible; callers must drop the move, not the rider.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence
from weakref import WeakKeyDictionary

from .instance import INBOUND, Instance, Request
from .utility import (ChanceModel, FareStructure, ServiceOutcome, FEASIBILITY_TOL,
                      chance_feasible, chance_threshold, drt_utility, fare_of,
                      private_utility)

IMPROVE_EPS = 1e-9  # a move must beat the incumbent by this much


@dataclass
class Infeasible:
    """Why a sequence cannot be scheduled; ``node`` is the first offender."""

    reason: str
    node: int | None = None

    def __bool__(self) -> bool:
        return False


@dataclass
class Route:
    vehicle: int
    stops: list[int]
    starts: list[float]
    starts_earliest: list[float]
    loads: list[int]
    cost: float

    @property
    def empty(self) -> bool:
        return len(self.stops) == 2

    def requests_aboard(self, n: int) -> list[int]:
        return sorted(v for v in self.stops if 1 <= v <= n)

    def position_of(self, node: int) -> int:
        return self.stops.index(node)


@dataclass
class InsertionResult:
    route: Route
    delta_cost: float
    pickup_pos: int
    drop_pos: int


@dataclass
class Solution:
    routes: list[Route]
    accepted: list[int]
    revenue: float
    routing_cost: float
    trace: list[dict] = field(default_factory=list)

    @property
    def profit(self) -> float:
        return self.revenue - self.routing_cost

    @property
    def served(self) -> list[int]:
        return [i + 1 for i, y in enumerate(self.accepted) if y]

    @property
    def pool(self) -> list[int]:
        return [i + 1 for i, y in enumerate(self.accepted) if not y]


@dataclass
class FeasibilityReport:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class EvalContext:
    """Instance + behavioral model flattened into plain lists.

    Python-level scheduling is the hot path of the whole package, so node
    and request attributes live in parallel lists and the per-rider
    acceptance test is reduced to ``gap_const + beta_t*ride + beta_s*delay
    <= threshold``.
    """

    __slots__ = ("inst", "chance", "n", "end", "cap", "duration_cap", "ride_cap",
                 "tol", "e", "l", "d", "q", "t", "c", "gap_const", "beta_t",
                 "beta_s", "thr", "v_time", "v_sched", "inbound", "fare",
                 "direct", "has_chance")

    def __init__(self, inst: Instance, chance: ChanceModel | None = None,
                 fares: FareStructure | None = None):
        if chance is not None:
            chance = chance.with_fares(fares)
        self.inst = inst
        self.chance = chance
        n = inst.n
        self.n = n
        self.end = 2 * n + 1
        self.cap = inst.fleet.capacity
        self.duration_cap = inst.fleet.max_route_duration
        self.ride_cap = inst.fleet.max_ride_time
        self.tol = chance.tol if chance is not None else FEASIBILITY_TOL
        self.e = [v.earliest for v in inst.nodes]
        self.l = [v.latest for v in inst.nodes]
        self.d = [v.service for v in inst.nodes]
        self.q = [v.load for v in inst.nodes]
        self.t = inst.travel_time.tolist()
        self.c = inst.travel_cost.tolist()
        self.direct = [0.0] * (n + 1)
        self.inbound = [True] * (n + 1)
        self.fare = [0.0] * (n + 1)
        self.gap_const = [0.0] * (n + 1)
        self.beta_t = [0.0] * (n + 1)
        self.beta_s = [0.0] * (n + 1)
        self.thr = [0.0] * (n + 1)
        self.v_time = [0.0] * (n + 1)
        self.v_sched = [0.0] * (n + 1)
        self.has_chance = chance is not None
        for r in inst.requests:
            i = r.index
            self.direct[i] = self.t[i][n + i]
            self.inbound[i] = r.direction == INBOUND
            if chance is None:
                continue
            cp = chance.params_for(r)
            fare = fare_of(r, chance.fares)
            self.fare[i] = fare
            self.beta_t[i] = cp.beta_time
            self.beta_s[i] = cp.beta_sched
            self.thr[i] = chance_threshold(cp)
            # gap = private - offered = gap_const + beta_t*ride + beta_s*delay
            self.gap_const[i] = (cp.beta_fare * (fare - r.private_cost)
                                 - cp.beta_time * self.direct[i])
            self.v_time[i] = cp.beta_time
            self.v_sched[i] = cp.beta_sched


_CTX_CACHE: "WeakKeyDictionary[Instance, list]" = WeakKeyDictionary()


def context_for(inst: Instance, chance: ChanceModel | None,
                fares: FareStructure | None = None) -> EvalContext:
    entries = _CTX_CACHE.setdefault(inst, [])
    for known_chance, known_fares, ctx in entries:
        if known_chance is chance and known_fares is fares:
            return ctx
    ctx = EvalContext(inst, chance, fares)
    entries.append((chance, fares, ctx))
    if len(entries) > 8:
        del entries[0]
    return ctx


def schedule_sequence(seq: Sequence[int], ctx: EvalContext):
    """Apply the scheduling rule to a stop sequence.

    Returns ``(starts, starts_earliest, loads, cost)`` or ``Infeasible``.
    """
    m = len(seq)
    if m < 2 or seq[0] != 0 or seq[-1] != ctx.end:
        return Infeasible("sequence must run depot to depot", None)
    e, l, d, q, t = ctx.e, ctx.l, ctx.d, ctx.q, ctx.t
    tol = ctx.tol

    starts = [0.0] * m
    loads = [0] * m
    starts[0] = e[0]
    prev = 0
    prev_start = e[0]
    run = 0
    for j in range(1, m):
        v = seq[j]
        arrival = prev_start + d[prev] + t[prev][v]
        begin = arrival if arrival > e[v] else e[v]
        if begin > l[v] + tol:
            return Infeasible("time window", v)
        run += q[v]
        if run > ctx.cap:
            return Infeasible("capacity", v)
        if run < 0:
            return Infeasible("pairing", v)
        starts[j] = begin
        loads[j] = run
        prev = v
        prev_start = begin
    earliest = starts[:]

    n = ctx.n
    pick_pos = {}
    drop_pos = {}
    for j in range(1, m - 1):
        v = seq[j]
        if v <= n:
            pick_pos[v] = j
        else:
            drop_pos[v - n] = j

    if ctx.has_chance and m > 2:
        _apply_block_shifts(seq, starts, pick_pos, drop_pos, ctx)

    if m > 2:
        starts[0] = max(e[0], starts[1] - d[0] - t[0][seq[1]])

    duration = starts[-1] - starts[0]
    if duration > ctx.duration_cap + tol:
        return Infeasible("route duration", ctx.end)

    for i, pj in pick_pos.items():
        dj = drop_pos.get(i)
        if dj is None:
            return Infeasible("pairing", i)
        ride = starts[dj] - starts[pj] - d[i]
        if ride > ctx.ride_cap + tol or ride < ctx.direct[i] - tol:
            return Infeasible("ride time", i)
        if ctx.has_chance:
            delay = starts[pj] - e[i] if ctx.inbound[i] else l[n + i] - starts[dj]
            gap = ctx.gap_const[i] + ctx.beta_t[i] * ride + ctx.beta_s[i] * delay
            if gap > ctx.thr[i] + tol:
                return Infeasible("chance constraint", i)

    cost = 0.0
    prev = seq[0]
    for j in range(1, m):
        cost += ctx.c[prev][seq[j]]
        prev = seq[j]
    return starts, earliest, loads, cost


def _apply_block_shifts(seq, starts, pick_pos, drop_pos, ctx) -> None:
    """Shift whole no-idle blocks forward when the riders aboard gain."""
    e, l, d, t = ctx.e, ctx.l, ctx.d, ctx.t
    m = len(seq)
    blocks = []
    a = 1
    for j in range(2, m):
        arrival = starts[j - 1] + d[seq[j - 1]] + t[seq[j - 1]][seq[j]]
        if starts[j] > arrival + 1e-9:
            blocks.append((a, j - 1))
            a = j
    blocks.append((a, m - 1))

    n = ctx.n
    for a, b in blocks:
        slack = min(l[seq[j]] - starts[j] for j in range(a, b + 1))
        if b < m - 1:
            arrival_next = starts[b] + d[seq[b]] + t[seq[b]][seq[b + 1]]
            slack = min(slack, starts[b + 1] - arrival_next)
        elif a > 1:
            depart = starts[1] - d[0] - t[0][seq[1]]
            slack = min(slack, ctx.duration_cap - (starts[m - 1] - depart))
        gain = 0.0
        for j in range(a, b + 1):
            v = seq[j]
            if v >= ctx.end:
                continue
            if v > n:  # dropoff in block
                i = v - n
                pj = pick_pos.get(i)
                if pj is not None and pj >= a:  # whole request rides in the block
                    gain += ctx.v_sched[i] if not ctx.inbound[i] else -ctx.v_sched[i]
                else:
                    if pj is not None:
                        ride = starts[j] - starts[pj] - d[i]
                        slack = min(slack, ctx.ride_cap - ride)
                    gain += (ctx.v_sched[i] - ctx.v_time[i]) if not ctx.inbound[i] \
                        else -ctx.v_time[i]
            else:
                i = v
                dj = drop_pos.get(i)
                if dj is None or dj > b:  # dropoff waits beyond the block
                    if dj is not None:
                        ride = starts[dj] - starts[j] - d[i]
                        slack = min(slack, ride - ctx.direct[i])
                    gain += ctx.v_time[i] if not ctx.inbound[i] \
                        else ctx.v_time[i] - ctx.v_sched[i]
        if slack > 1e-9 and gain > 1e-12:
            for j in range(a, b + 1):
                starts[j] += slack


def build_schedule(seq: Sequence[int], inst: Instance,
                   chance: ChanceModel | None = None,
                   fares: FareStructure | None = None,
                   vehicle: int = 0):
    """Schedule a depot-to-depot stop sequence into a Route.

    Returns the Route, or an :class:`Infeasible` naming the first violated
    constraint.  Without a chance model only time/load feasibility is
    enforced and no block shifts are applied.
    """
    ctx = context_for(inst, chance, fares)
    seq = list(seq)
    if len(seq) != len(set(seq)):
        raise ValueError("duplicated node in stop sequence")
    if any(v < 0 or v > ctx.end for v in seq):
        raise ValueError("unknown node in stop sequence")
    if 0 in seq[1:] or ctx.end in seq[:-1]:
        raise ValueError("depot node inside the stop sequence")
    res = schedule_sequence(list(seq), ctx)
    if isinstance(res, Infeasible):
        return res
    starts, earliest, loads, cost = res
    return Route(vehicle, list(seq), starts, earliest, loads, cost)


def insertion_candidates(route: Route) -> list[tuple[int, int]]:
    """All (pickup, dropoff) position pairs for inserting one request."""
    m = len(route.stops)
    return [(p, dpos) for p in range(1, m) for dpos in range(p, m)]


def _suffix_latest(route: Route, ctx: EvalContext) -> list[float]:
    """Latest start per position keeping the downstream windows alive."""
    stops, m = route.stops, len(route.stops)
    latest = [0.0] * m
    latest[m - 1] = ctx.l[stops[m - 1]]
    for j in range(m - 2, -1, -1):
        v = stops[j]
        latest[j] = min(ctx.l[v],
                        latest[j + 1] - ctx.d[v] - ctx.t[v][stops[j + 1]])
    return latest


def try_insert(route: Route, r: Request, inst: Instance,
               chance: ChanceModel | None = None,
               fares: FareStructure | None = None,
               ctx: EvalContext | None = None) -> InsertionResult | None:
    """Cheapest feasible insertion of ``r`` into one route, if any.

    Scans every position pair; candidates that cannot meet a window,
    capacity, or downstream latest-start bound are discarded before the
    full scheduling rule runs.  Ties break on the lowest pickup position,
    then the lowest dropoff position.
    """
    if ctx is None:
        ctx = context_for(inst, chance, fares)
    n = ctx.n
    pick, drop = r.index, n + r.index
    if pick in route.stops:
        raise ValueError(f"request {r.index} is already on vehicle {route.vehicle}")
    load = r.load
    if load > ctx.cap:
        return None

    stops = route.stops
    earliest = route.starts_earliest
    loads = route.loads
    m = len(stops)
    e, l, d, t = ctx.e, ctx.l, ctx.d, ctx.t
    tol = ctx.tol
    latest_ok = _suffix_latest(route, ctx)

    best = None
    best_key = None
    for p in range(1, m):
        prev = stops[p - 1]
        arrival = earliest[p - 1] + d[prev] + t[prev][pick]
        pick_start = arrival if arrival > e[pick] else e[pick]
        if pick_start > l[pick] + tol:
            continue
        if loads[p - 1] + load > ctx.cap:
            continue
        span_node = pick
        span_start = pick_start
        for dpos in range(p, m):
            if dpos > p:
                # the old stop at dpos-1 joins the carried span
                v = stops[dpos - 1]
                arr = span_start + d[span_node] + t[span_node][v]
                begin = arr if arr > e[v] else e[v]
                if begin > l[v] + tol:
                    break
                if loads[dpos - 1] + load > ctx.cap:
                    break
                span_node, span_start = v, begin
            arr_drop = span_start + d[span_node] + t[span_node][drop]
            drop_start = arr_drop if arr_drop > e[drop] else e[drop]
            if drop_start > l[drop] + tol:
                continue
            resume = drop_start + d[drop] + t[drop][stops[dpos]]
            if resume > latest_ok[dpos] + tol:
                continue
            new_seq = stops[:p] + [pick] + stops[p:dpos] + [drop] + stops[dpos:]
            res = schedule_sequence(new_seq, ctx)
            if isinstance(res, Infeasible):
                continue
            starts, early, new_loads, cost = res
            key = (cost - route.cost, p, dpos)
            if best_key is None or key < best_key:
                best_key = key
                best = InsertionResult(
                    Route(route.vehicle, new_seq, starts, early, new_loads, cost),
                    cost - route.cost, p, dpos)
    return best


def remove_request(route: Route, r: Request, inst: Instance,
                   chance: ChanceModel | None = None,
                   fares: FareStructure | None = None,
                   ctx: EvalContext | None = None):
    """Route without ``r``, rescheduled; Infeasible if the rest breaks."""
    if ctx is None:
        ctx = context_for(inst, chance, fares)
    pick, drop = r.index, ctx.n + r.index
    if pick not in route.stops or drop not in route.stops:
        raise ValueError(f"request {r.index} is not on vehicle {route.vehicle}")
    new_seq = [v for v in route.stops if v != pick and v != drop]
    res = schedule_sequence(new_seq, ctx)
    if isinstance(res, Infeasible):
        return res
    starts, early, loads, cost = res
    return Route(route.vehicle, new_seq, starts, early, loads, cost)


def empty_route(inst: Instance, vehicle: int,
                ctx: EvalContext | None = None) -> Route:
    ctx = ctx or context_for(inst, None)
    res = schedule_sequence([0, ctx.end], ctx)
    starts, early, loads, cost = res
    return Route(vehicle, [0, ctx.end], starts, early, loads, cost)


def empty_solution(inst: Instance) -> Solution:
    routes = [empty_route(inst, k) for k in range(inst.fleet.vehicle_count)]
    cost = sum(rt.cost for rt in routes)
    return Solution(routes, [0] * inst.n, 0.0, cost)


def recompute_totals(sol: Solution, inst: Instance, chance: ChanceModel,
                     fares: FareStructure | None = None) -> Solution:
    """Refresh revenue/cost from the routes and acceptance vector."""
    model = chance.with_fares(fares)
    revenue = sum(fare_of(r, model.fares) * r.load
                  for r in inst.requests if sol.accepted[r.index - 1])
    cost = sum(rt.cost for rt in sol.routes)
    sol.revenue = revenue
    sol.routing_cost = cost
    return sol


def objective(sol: Solution, inst: Instance, chance: ChanceModel,
              fares: FareStructure | None = None) -> float:
    """Profit: per-person fares of accepted requests minus routing cost."""
    model = chance.with_fares(fares)
    revenue = sum(fare_of(r, model.fares) * r.load
                  for r in inst.requests if sol.accepted[r.index - 1])
    return revenue - sum(rt.cost for rt in sol.routes)


def route_outcomes(route: Route, inst: Instance, chance: ChanceModel,
                   fares: FareStructure | None = None) -> dict[int, ServiceOutcome]:
    """Scheduled outcome per request aboard the route."""
    model = chance.with_fares(fares)
    n = inst.n
    pos = {v: j for j, v in enumerate(route.stops)}
    out = {}
    for i in route.requests_aboard(n):
        r = inst.requests[i - 1]
        pj, dj = pos[i], pos[n + i]
        ride = route.starts[dj] - route.starts[pj] - inst.nodes[i].service
        if r.direction == INBOUND:
            delay = route.starts[pj] - inst.nodes[i].earliest
        else:
            delay = inst.nodes[n + i].latest - route.starts[dj]
        out[i] = ServiceOutcome(ride, delay, fare_of(r, model.fares))
    return out


def check_feasible(sol: Solution, inst: Instance, chance: ChanceModel,
                   fares: FareStructure | None = None) -> FeasibilityReport:
    """Re-verify a solution from its stored stops and start times.

    Written as literal constraint re-derivation, independent of the
    scheduling kernel: arrivals, loads, ride times, and the acceptance
    inequality are recomputed from scratch.
    """
    model = chance.with_fares(fares)
    rep = FeasibilityReport()
    err = rep.errors.append
    n = inst.n
    end = 2 * n + 1
    tol = model.tol
    t = inst.travel_time
    fleet = inst.fleet

    if len(sol.accepted) != n:
        err(f"acceptance vector has {len(sol.accepted)} entries for n={n}")
        return rep

    seen_vehicles = set()
    visits: dict[int, int] = {}
    served_by: dict[int, int] = {}
    for rt in sol.routes:
        if rt.vehicle in seen_vehicles:
            err(f"vehicle {rt.vehicle} appears twice")
        seen_vehicles.add(rt.vehicle)
        stops = rt.stops
        if len(stops) < 2 or stops[0] != 0 or stops[-1] != end:
            err(f"vehicle {rt.vehicle}: route must run depot to depot")
            continue
        if len(stops) != len(rt.starts):
            err(f"vehicle {rt.vehicle}: {len(rt.starts)} starts for {len(stops)} stops")
            continue
        load = 0
        pos: dict[int, int] = {}
        for j, v in enumerate(stops):
            node = inst.nodes[v]
            if j > 0 and (v <= 0 or v >= end) and j != len(stops) - 1:
                err(f"vehicle {rt.vehicle}: depot {v} inside the route")
            if 1 <= v <= 2 * n:
                if v in visits:
                    err(f"node {v} visited more than once")
                visits[v] = rt.vehicle
                pos[v] = j
            B = rt.starts[j]
            if B < node.earliest - tol or B > node.latest + tol:
                err(f"vehicle {rt.vehicle}: start {B:.6f} outside window "
                    f"[{node.earliest}, {node.latest}] at node {v}")
            if j > 0:
                u = stops[j - 1]
                arrival = rt.starts[j - 1] + inst.nodes[u].service + float(t[u][v])
                if B < arrival - tol:
                    err(f"vehicle {rt.vehicle}: node {v} starts {B:.6f} before "
                        f"arrival {arrival:.6f}")
            load += node.load
            if load > fleet.capacity:
                err(f"vehicle {rt.vehicle}: load {load} over capacity at node {v}")
            if load < 0:
                err(f"vehicle {rt.vehicle}: negative load at node {v}")
        if load != 0:
            err(f"vehicle {rt.vehicle}: route ends carrying {load}")
        duration = rt.starts[-1] - rt.starts[0]
        if duration > fleet.max_route_duration + tol:
            err(f"vehicle {rt.vehicle}: duration {duration:.6f} over "
                f"{fleet.max_route_duration}")
        for i in list(pos):
            if not 1 <= i <= n:
                continue
            if n + i not in pos:
                err(f"request {i}: pickup without dropoff on vehicle {rt.vehicle}")
                continue
            if pos[n + i] < pos[i]:
                err(f"request {i}: dropoff precedes pickup")
            served_by[i] = rt.vehicle
            r = inst.requests[i - 1]
            cp = model.params_for(r)
            ride = rt.starts[pos[n + i]] - rt.starts[pos[i]] - inst.nodes[i].service
            direct = inst.direct_time(i)
            if ride < direct - tol:
                err(f"request {i}: ride {ride:.6f} below direct time {direct:.6f}")
            if ride > fleet.max_ride_time + tol:
                err(f"request {i}: ride {ride:.6f} over cap {fleet.max_ride_time}")
            if r.direction == INBOUND:
                delay = rt.starts[pos[i]] - inst.nodes[i].earliest
            else:
                delay = inst.nodes[n + i].latest - rt.starts[pos[n + i]]
            fare = fare_of(r, model.fares)
            v_hat = private_utility(cp, direct, r.private_cost)
            v_drt = drt_utility(cp, ServiceOutcome(ride, delay, fare))
            if not chance_feasible(cp, v_hat, v_drt, tol):
                err(f"request {i}: acceptance gap {v_hat - v_drt:.6f} over "
                    f"threshold {chance_threshold(cp):.6f}")

    for v, k in visits.items():
        i = v if v <= n else v - n
        if not sol.accepted[i - 1]:
            err(f"request {i} visited on vehicle {k} but marked rejected")
    for r in inst.requests:
        if sol.accepted[r.index - 1] and r.index not in served_by:
            err(f"request {r.index} marked accepted but never visited")

    revenue = sum(fare_of(r, model.fares) * r.load
                  for r in inst.requests if sol.accepted[r.index - 1])
    cost = sum(rt.cost for rt in sol.routes)
    if abs(revenue - sol.revenue) > 1e-6:
        err(f"stored revenue {sol.revenue} != recomputed {revenue}")
    if abs(cost - sol.routing_cost) > 1e-6:
        err(f"stored routing cost {sol.routing_cost} != recomputed {cost}")
    for rt in sol.routes:
        arc_cost = 0.0
        for j in range(len(rt.stops) - 1):
            arc_cost += float(inst.travel_cost[rt.stops[j]][rt.stops[j + 1]])
        if abs(arc_cost - rt.cost) > 1e-6:
            err(f"vehicle {rt.vehicle}: stored cost {rt.cost} != arcs {arc_cost}")
    if sol.profit != sol.revenue - sol.routing_cost:
        err("profit is not exactly revenue minus routing cost")
    return rep


# ---------------------------------------------------------------------------
# solution serialization


def solution_to_json(sol: Solution, inst: Instance, chance: ChanceModel,
                     fares: FareStructure | None = None) -> dict:
    model = chance.with_fares(fares)
    outcomes: dict[int, ServiceOutcome] = {}
    for rt in sol.routes:
        outcomes.update(route_outcomes(rt, inst, model))
    requests = []
    for r in inst.requests:
        cp = model.params_for(r)
        entry = {"index": r.index, "class_id": r.class_id,
                 "y": int(sol.accepted[r.index - 1]),
                 "fare": fare_of(r, model.fares),
                 "ride_time": None, "schedule_delay": None, "utility_gap": None}
        out = outcomes.get(r.index)
        if out is not None:
            v_hat = private_utility(cp, inst.direct_time(r.index), r.private_cost)
            entry.update(ride_time=out.ride_time, schedule_delay=out.schedule_delay,
                         utility_gap=v_hat - drt_utility(cp, out))
        requests.append(entry)
    return {
        "instance": inst.name,
        "profit": sol.profit,
        "revenue": sol.revenue,
        "routing_cost": sol.routing_cost,
        "accepted": sum(sol.accepted),
        "pool": sol.pool,
        "served": sol.served,
        "routes": [{
            "vehicle": rt.vehicle,
            "cost": rt.cost,
            "stops": [{"node": v, "start": rt.starts[j], "load": rt.loads[j]}
                      for j, v in enumerate(rt.stops)],
        } for rt in sol.routes if not rt.empty],
        "requests": requests,
    }


def solution_from_json(doc: dict, inst: Instance) -> Solution:
    n = inst.n
    accepted = [0] * n
    for i in doc.get("served", []):
        accepted[i - 1] = 1
    routes = []
    used = set()
    for entry in doc.get("routes", []):
        stops = [s["node"] for s in entry["stops"]]
        starts = [float(s["start"]) for s in entry["stops"]]
        loads = []
        run = 0
        for v in stops:
            run += inst.nodes[v].load
            loads.append(run)
        cost = 0.0
        for j in range(len(stops) - 1):
            cost += float(inst.travel_cost[stops[j]][stops[j + 1]])
        routes.append(Route(entry["vehicle"], stops, starts, list(starts), loads, cost))
        used.add(entry["vehicle"])
    for k in range(inst.fleet.vehicle_count):
        if k not in used:
            routes.append(empty_route(inst, k))
    routes.sort(key=lambda rt: rt.vehicle)
    return Solution(routes, accepted,
                    float(doc.get("revenue", 0.0)),
                    float(doc.get("routing_cost", sum(rt.cost for rt in routes))))
