"""Local-search heuristic: construction plus two improvement searches.

Construction sorts requests by effective earliest pickup (outbound
requests borrow ``dropoff_open - direct_time``), seeds each vehicle with
one low-index request, and inserts the rest greedily at globally cheapest
feasible positions; requests with no feasible slot wait in a pool.

Two neighborhoods then alternate until neither improves the profit:

* selection search: best-improvement over ADD (pool request in, at its
  cheapest feasible position anywhere), REM (served request out), and,
  once those hit a fixpoint, SWAP (one out, one in, fleet-wide);
* routing search: per served request, remove and re-insert on a
  different vehicle (falling back to re-insertion on its own vehicle
  when no other vehicle can take it), keeping the accepted set fixed.

All candidate scans run in deterministic order; ties break on the lowest
cost delta, then move kind, then request and vehicle indices.  Insertion
results are cached per (request, vehicle) and invalidated by per-route
revision counters; the swap sweep visits pairs in decreasing
upper-bound-of-gain order and stops as soon as the bound cannot beat the
incumbent move, which on metric cost matrices skips most of the scan
without changing the chosen move.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .instance import Instance, OUTBOUND, Request
from .schedule import (EvalContext, IMPROVE_EPS, Infeasible, InsertionResult,
                       Route, Solution, context_for, empty_route, remove_request,
                       try_insert)
from .utility import ChanceModel, FareStructure, fare_of


@dataclass(frozen=True)
class HeuristicParams:
    """Tuning knobs; defaults follow the published calibration."""

    index_weight: float = 0.1      # weight of centrality vs ride share in G
    swap_threshold: float = 0.03   # adjacent-swap gate in the order pass
    rng_seed: int | None = None    # shuffles exact sort ties only
    improve_eps: float = IMPROVE_EPS


def decentralisation_index(inst: Instance) -> list[float]:
    """Share of total system travel time touching each request's nodes.

    Entry 0 is unused padding; the entries over requests sum to 1.
    """
    n = inst.n
    t = inst.travel_time
    rowsum = t.sum(axis=1)
    raw = [0.0] * (n + 1)
    for i in range(1, n + 1):
        raw[i] = float(rowsum[i] - t[i][n + i] + rowsum[n + i] - t[n + i][i])
    total = sum(raw)
    if total <= 0:
        return [0.0] + [1.0 / n] * n
    return [0.0] + [x / total for x in raw[1:]]


def travel_time_index(inst: Instance) -> list[float]:
    """Direct ride time share per request; entry 0 unused."""
    n = inst.n
    directs = [inst.direct_time(i) for i in range(1, n + 1)]
    total = sum(directs)
    if total <= 0:
        return [0.0] + [1.0 / n] * n
    return [0.0] + [x / total for x in directs]


def general_index(inst: Instance, params: HeuristicParams | None = None) -> list[float]:
    """Blend of peripherality and ride share; small means insert early."""
    w = (params or HeuristicParams()).index_weight
    dec = decentralisation_index(inst)
    tti = travel_time_index(inst)
    return [0.0] + [w * (1.0 - dec[i]) + (1.0 - w) * tti[i]
                    for i in range(1, inst.n + 1)]


def build_insertion_order(inst: Instance,
                          params: HeuristicParams | None = None,
                          vehicles: int | None = None) -> list[int]:
    """Request order for construction; the first ``vehicles`` are seeds.

    Sort by effective earliest pickup, pull the smallest-G requests to the
    front as seeds, then bubble low-G requests toward the front of the
    remainder wherever the gap to the predecessor is at least the
    swap threshold.
    """
    params = params or HeuristicParams()
    k = inst.fleet.vehicle_count if vehicles is None else vehicles
    n = inst.n
    g = general_index(inst, params)

    def effective_earliest(r: Request) -> float:
        if r.direction == OUTBOUND:
            return inst.nodes[n + r.index].earliest - inst.direct_time(r.index)
        return inst.nodes[r.index].earliest

    keyed = sorted(((effective_earliest(r), r.index) for r in inst.requests))
    if params.rng_seed is not None:
        rng = random.Random(params.rng_seed)
        shuffled: list[tuple[float, int]] = []
        group: list[tuple[float, int]] = []
        for item in keyed:
            if group and item[0] != group[0][0]:
                rng.shuffle(group)
                shuffled.extend(group)
                group = []
            group.append(item)
        rng.shuffle(group)
        shuffled.extend(group)
        keyed = shuffled
    order = [i for _, i in keyed]

    seeds = sorted(order, key=lambda i: (g[i], i))[:k]
    seed_set = set(seeds)
    rest = [i for i in order if i not in seed_set]
    for idx in range(1, len(rest)):
        j = idx
        while j >= 1 and g[rest[j - 1]] - g[rest[j]] >= params.swap_threshold:
            rest[j - 1], rest[j] = rest[j], rest[j - 1]
            j -= 1
    return seeds + rest


class _SearchState:
    """Mutable search state with per-(request, vehicle) insertion caches."""

    def __init__(self, inst: Instance, chance: ChanceModel,
                 params: HeuristicParams):
        self.inst = inst
        self.chance = chance
        self.params = params
        self.ctx: EvalContext = context_for(inst, chance)
        self.n = inst.n
        self.fleet = inst.fleet.vehicle_count
        self.routes: list[Route] = [empty_route(inst, k, self.ctx)
                                    for k in range(self.fleet)]
        self.accepted = [0] * self.n
        self.vehicle_of: dict[int, int] = {}
        self.versions = [0] * self.fleet
        self._ins_cache: dict[tuple[int, int], tuple[int, InsertionResult | None]] = {}
        self._rem_cache: dict[int, tuple[int, object]] = {}
        fares = chance.fares
        self.gain_fare = [0.0] * (self.n + 1)
        for r in inst.requests:
            self.gain_fare[r.index] = fare_of(r, fares) * r.load
        self.metric_costs = _costs_are_metric(inst.travel_cost)

    # -- bookkeeping ------------------------------------------------------

    @property
    def pool(self) -> list[int]:
        return [i for i in range(1, self.n + 1) if not self.accepted[i - 1]]

    @property
    def served(self) -> list[int]:
        return [i for i in range(1, self.n + 1) if self.accepted[i - 1]]

    def profit(self) -> float:
        revenue = sum(self.gain_fare[i] for i in self.served)
        return revenue - sum(rt.cost for rt in self.routes)

    def snapshot(self) -> Solution:
        revenue = sum(self.gain_fare[i] for i in self.served)
        cost = sum(rt.cost for rt in self.routes)
        return Solution([_copy_route(rt) for rt in self.routes],
                        list(self.accepted), revenue, cost)

    def load_solution(self, sol: Solution) -> None:
        self.routes = [_copy_route(rt) for rt in sorted(sol.routes,
                                                        key=lambda rt: rt.vehicle)]
        self.accepted = list(sol.accepted)
        self.vehicle_of = {}
        for rt in self.routes:
            for i in rt.requests_aboard(self.n):
                self.vehicle_of[i] = rt.vehicle
        self.versions = [v + 1 for v in self.versions]

    def _set_route(self, route: Route) -> None:
        self.routes[route.vehicle] = route
        self.versions[route.vehicle] += 1

    # -- cached evaluations ------------------------------------------------

    def insertion(self, i: int, k: int) -> InsertionResult | None:
        key = (i, k)
        hit = self._ins_cache.get(key)
        if hit is not None and hit[0] == self.versions[k]:
            return hit[1]
        res = try_insert(self.routes[k], self.inst.requests[i - 1], self.inst,
                         ctx=self.ctx)
        self._ins_cache[key] = (self.versions[k], res)
        return res

    def best_insertion(self, i: int, skip: int | None = None):
        """Cheapest feasible insertion across vehicles: (result, vehicle)."""
        best = None
        best_key = None
        for k in range(self.fleet):
            if k == skip:
                continue
            res = self.insertion(i, k)
            if res is None:
                continue
            key = (res.delta_cost, k)
            if best_key is None or key < best_key:
                best_key, best = key, (res, k)
        return best

    def removal(self, i: int):
        """(rescheduled route without i, cost saving) or None if infeasible."""
        k = self.vehicle_of[i]
        hit = self._rem_cache.get(i)
        if hit is not None and hit[0] == k and hit[1] == self.versions[k]:
            return hit[2]
        res = remove_request(self.routes[k], self.inst.requests[i - 1],
                             self.inst, ctx=self.ctx)
        value = None if isinstance(res, Infeasible) \
            else (res, self.routes[k].cost - res.cost)
        self._rem_cache[i] = (k, self.versions[k], value)
        return value

    # -- move application ---------------------------------------------------

    def apply_add(self, i: int, res: InsertionResult) -> None:
        self._set_route(res.route)
        self.accepted[i - 1] = 1
        self.vehicle_of[i] = res.route.vehicle

    def apply_rem(self, i: int, route: Route) -> None:
        self._set_route(route)
        self.accepted[i - 1] = 0
        del self.vehicle_of[i]


def _copy_route(rt: Route) -> Route:
    return Route(rt.vehicle, list(rt.stops), list(rt.starts),
                 list(rt.starts_earliest), list(rt.loads), rt.cost)


def _costs_are_metric(c: np.ndarray, tol: float = 1e-9) -> bool:
    if c.shape[0] > 260:  # cubic check; beyond this just disable the pruning
        return False
    via = np.min(c[:, :, None] + c[None, :, :], axis=1)
    return bool(np.all(c <= via + tol))


def construct_initial(inst: Instance, chance: ChanceModel,
                      fares: FareStructure | None = None,
                      params: HeuristicParams | None = None) -> Solution:
    """Seeded greedy construction; unplaceable requests stay pooled."""
    params = params or HeuristicParams()
    state = _SearchState(inst, chance.with_fares(fares), params)
    order = build_insertion_order(inst, params, state.fleet)
    seeds = order[:state.fleet]
    rest = order[state.fleet:]

    queue = []
    vehicle = 0
    for i in seeds:
        res = state.insertion(i, vehicle)
        if res is not None:
            state.apply_add(i, res)
            vehicle += 1
        else:
            queue.append(i)  # demoted: competes like any ordinary request
    for i in queue + rest:
        found = state.best_insertion(i)
        if found is not None:
            state.apply_add(i, found[0])
    return state.snapshot()


def _selection_pass(state: _SearchState, eps: float) -> bool:
    """One ADD/REM best-improvement descent; True if anything applied."""
    improved = False
    while True:
        best_key = None
        best_action = None
        for i in state.pool:
            found = state.best_insertion(i)
            if found is None:
                continue
            res, _k = found
            gain = state.gain_fare[i] - res.delta_cost
            key = (-gain, 0, i)
            if best_key is None or key < best_key:
                best_key, best_action = key, ("add", i, res)
        for i in state.served:
            value = state.removal(i)
            if value is None:
                continue
            route, saving = value
            gain = saving - state.gain_fare[i]
            key = (-gain, 1, i)
            if best_key is None or key < best_key:
                best_key, best_action = key, ("rem", i, route)
        if best_key is None or -best_key[0] <= eps:
            return improved
        kind, i, payload = best_action
        if kind == "add":
            state.apply_add(i, payload)
        else:
            state.apply_rem(i, payload)
        improved = True


def _swap_pass(state: _SearchState, eps: float) -> bool:
    """Best-improvement one-out-one-in exchanges; True if anything applied."""
    improved = False
    while True:
        served = state.served
        pool = state.pool
        if not served or not pool:
            return improved
        pairs = []
        removables = {}
        for i in served:
            value = state.removal(i)
            if value is None:
                continue
            removables[i] = value
            base_i = value[1] - state.gain_fare[i]  # saving minus lost fare
            for j in pool:
                pairs.append((-(base_i + state.gain_fare[j]), i, j))
        pairs.sort()

        best_key = None
        best_action = None
        for neg_bound, i, j in pairs:
            bound = -neg_bound
            if best_key is not None and state.metric_costs:
                best_gain = -best_key[0]
                if bound < best_gain:
                    break  # sorted: nothing further can win
                if bound == best_gain and (i, j) >= (best_key[2], best_key[3]):
                    continue
            route_i, saving = removables[i]
            k_i = state.vehicle_of[i]
            options = []
            other = state.best_insertion(j, skip=k_i)
            if other is not None:
                options.append((other[0].delta_cost, other[1], other[0]))
            fresh = try_insert(route_i, state.inst.requests[j - 1], state.inst,
                               ctx=state.ctx)
            if fresh is not None:
                options.append((fresh.delta_cost, k_i, fresh))
            if not options:
                continue
            options.sort(key=lambda item: (item[0], item[1]))
            delta, k_target, res = options[0]
            gain = saving - state.gain_fare[i] + state.gain_fare[j] - delta
            key = (-gain, 2, i, j)
            if best_key is None or key < best_key:
                best_key = key
                best_action = (i, j, route_i, k_target, res)
        if best_key is None or -best_key[0] <= eps:
            return improved
        i, j, route_i, k_target, res = best_action
        state.apply_rem(i, route_i)
        if k_target == route_i.vehicle:
            # re-scan against the committed removal; same deterministic result
            res = try_insert(state.routes[k_target], state.inst.requests[j - 1],
                             state.inst, ctx=state.ctx)
        state.apply_add(j, res)
        improved = True


def ls_selection(sol: Solution, inst: Instance, chance: ChanceModel,
                 fares: FareStructure | None = None,
                 params: HeuristicParams | None = None) -> Solution:
    """Improve the accepted set: ADD/REM to a fixpoint, then SWAP, repeated."""
    params = params or HeuristicParams()
    state = _SearchState(inst, chance.with_fares(fares), params)
    state.load_solution(sol)
    eps = params.improve_eps
    while True:
        changed = _selection_pass(state, eps)
        changed = _swap_pass(state, eps) or changed
        if not changed:
            return state.snapshot()


def ls_routing(sol: Solution, inst: Instance, chance: ChanceModel,
               fares: FareStructure | None = None,
               params: HeuristicParams | None = None) -> Solution:
    """Re-route served requests one at a time; the accepted set is fixed."""
    params = params or HeuristicParams()
    state = _SearchState(inst, chance.with_fares(fares), params)
    state.load_solution(sol)
    eps = params.improve_eps
    while True:
        best_key = None
        best_action = None
        for i in state.served:
            value = state.removal(i)
            if value is None:
                continue
            route_i, saving = value
            k_i = state.vehicle_of[i]
            found = state.best_insertion(i, skip=k_i)
            if found is None:
                # fall back to re-inserting on its own vehicle
                fresh = try_insert(route_i, state.inst.requests[i - 1],
                                   state.inst, ctx=state.ctx)
                if fresh is None:
                    continue
                found = (fresh, k_i)
            res, k_target = found
            gain = saving - res.delta_cost
            key = (-gain, i, k_target)
            if best_key is None or key < best_key:
                best_key, best_action = key, (i, route_i, k_target, res)
        if best_key is None or -best_key[0] <= eps:
            return state.snapshot()
        i, route_i, k_target, res = best_action
        state.apply_rem(i, route_i)
        if k_target == route_i.vehicle:
            res = try_insert(state.routes[k_target], state.inst.requests[i - 1],
                             state.inst, ctx=state.ctx)
        state.apply_add(i, res)


def solve_lsh(inst: Instance, chance: ChanceModel,
              fares: FareStructure | None = None,
              params: HeuristicParams | None = None) -> Solution:
    """Full heuristic: construction, then alternate the two searches.

    The outer loop keeps the new solution only when it strictly improves
    the profit; the returned solution carries a trace row per accepted
    iteration (iteration 0 is the construction).
    """
    model = chance.with_fares(fares)
    params = params or HeuristicParams()
    eps = params.improve_eps
    current = construct_initial(inst, model, params=params)
    trace = [_trace_row(0, current, inst)]
    iteration = 0
    while True:
        iteration += 1
        candidate = ls_selection(current, inst, model, params=params)
        candidate = ls_routing(candidate, inst, model, params=params)
        if candidate.profit > current.profit + eps:
            current = candidate
            trace.append(_trace_row(iteration, current, inst))
        else:
            break
    current.trace = trace
    return current


def _trace_row(iteration: int, sol: Solution, inst: Instance) -> dict:
    by_class: dict[str, int] = {}
    for r in inst.requests:
        by_class.setdefault(r.class_id, 0)
        if sol.accepted[r.index - 1]:
            by_class[r.class_id] += 1
    return {
        "iteration": iteration,
        "profit": sol.profit,
        "served": len(sol.served),
        "revenue": sol.revenue,
        "routing_cost": sol.routing_cost,
        "accepted_by_class": dict(sorted(by_class.items())),
    }
