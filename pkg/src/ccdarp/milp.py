"""Mixed-integer model of the problem, LP-file export, and a tiny exact solver.

The model is the three-index arc formulation: binaries ``x_k_i_j`` pick the
arcs each vehicle drives and ``y_i`` accepts requests; continuous variables
carry service start times, onboard loads, ride times, and the offered
utility per request.  The chance constraint enters linearly: a request may
only be accepted when its offered utility clears the private alternative by
the logit margin, with a per-request big-M that deactivates the row exactly
when the request is rejected.  The only preprocessing applied is variable
bound fixing (self-loops, arcs into the start depot, arcs out of the end
depot).

``export_lp``/``parse_lp`` write and read CPLEX-style LP text; floats are
rendered with ``repr`` so values round-trip exactly.  ``brute_force_exact``
enumerates every accept/assign/sequence combination on deliberately small
instances and shares the scheduling kernel with the heuristic, which makes
it the reference optimum in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import INBOUND, Instance
from .schedule import (Infeasible, Route, Solution, context_for, empty_route,
                       schedule_sequence)
from .utility import (ChanceModel, FareStructure, chance_threshold,
                      deactivation_slack, fare_of, private_utility,
                      utility_bounds)


@dataclass
class Variable:
    name: str
    lower: float
    upper: float
    binary: bool = False
    objective: float = 0.0


@dataclass
class LinearConstraint:
    name: str
    coeffs: dict[str, float]
    sense: str  # "<=", ">=" or "="
    rhs: float


@dataclass
class MilpModel:
    name: str
    variables: list[Variable] = field(default_factory=list)
    constraints: list[LinearConstraint] = field(default_factory=list)
    by_name: dict[str, Variable] = field(default_factory=dict)

    def add_variable(self, name: str, lower: float, upper: float,
                     binary: bool = False, objective: float = 0.0) -> Variable:
        if name in self.by_name:
            raise ValueError(f"duplicate variable {name!r}")
        var = Variable(name, lower, upper, binary, objective)
        self.variables.append(var)
        self.by_name[name] = var
        return var

    def add_constraint(self, name: str, coeffs: dict[str, float], sense: str,
                       rhs: float) -> LinearConstraint:
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"bad sense {sense!r}")
        coeffs = {v: c for v, c in coeffs.items() if c != 0.0}
        for v in coeffs:
            if v not in self.by_name:
                raise ValueError(f"constraint {name!r} uses unknown variable {v!r}")
        row = LinearConstraint(name, coeffs, sense, rhs)
        self.constraints.append(row)
        return row

    @property
    def binary_count(self) -> int:
        return sum(1 for v in self.variables if v.binary)

    @property
    def continuous_count(self) -> int:
        return sum(1 for v in self.variables if not v.binary)


def build_model(inst: Instance, chance: ChanceModel,
                fares: FareStructure | None = None) -> MilpModel:
    """Assemble the full arc-based model for one instance."""
    model_chance = chance.with_fares(fares)
    n = inst.n
    end = 2 * n + 1
    fleet = inst.fleet
    K = fleet.vehicle_count
    cap = fleet.capacity
    t = inst.travel_time
    c = inst.travel_cost
    nodes = inst.nodes
    m = MilpModel(inst.name)

    # arc binaries; self-loops and structurally dead arcs are fixed by bounds
    for k in range(K):
        for i in range(end + 1):
            for j in range(end + 1):
                dead = (i == j) or (j == 0) or (i == end)
                m.add_variable(f"x_{k}_{i}_{j}", 0.0, 0.0 if dead else 1.0,
                               binary=True,
                               objective=-float(c[i][j]) if not dead else 0.0)
    req_fare = {}
    for r in inst.requests:
        req_fare[r.index] = fare_of(r, model_chance.fares)
        m.add_variable(f"y_{r.index}", 0.0, 1.0, binary=True,
                       objective=req_fare[r.index] * r.load)

    for i in range(1, end):
        m.add_variable(f"B_{i}", nodes[i].earliest, nodes[i].latest)
    for k in range(K):
        m.add_variable(f"Bstart_{k}", nodes[0].earliest, nodes[0].latest)
        m.add_variable(f"Bend_{k}", nodes[end].earliest, nodes[end].latest)
    for i in range(1, end):
        q = nodes[i].load
        m.add_variable(f"Q_{i}", max(0.0, float(q)), min(float(cap), cap + q))
    for k in range(K):
        m.add_variable(f"Qstart_{k}", 0.0, 0.0)
        m.add_variable(f"Qend_{k}", 0.0, float(cap))
    for r in inst.requests:
        m.add_variable(f"L_{r.index}", inst.direct_time(r.index),
                       fleet.max_ride_time)
    v_low = {}
    for r in inst.requests:
        cp = model_chance.params_for(r)
        i = r.index
        if r.direction == INBOUND:
            max_delay = nodes[i].latest - nodes[i].earliest
        else:
            max_delay = nodes[n + i].latest - nodes[n + i].earliest
        worst, best = utility_bounds(cp, req_fare[i], inst.direct_time(i),
                                     fleet.max_ride_time, max_delay)
        v_low[i] = worst
        m.add_variable(f"V_{i}", worst, best)

    inner = range(1, end)  # pickup and dropoff nodes

    # each vehicle that visits a pickup also visits the matching dropoff
    for r in inst.requests:
        i = r.index
        for k in range(K):
            coeffs = {f"x_{k}_{i}_{j}": 1.0 for j in range(end + 1) if j != i}
            for j in range(end + 1):
                if j != n + i:
                    coeffs[f"x_{k}_{n + i}_{j}"] = \
                        coeffs.get(f"x_{k}_{n + i}_{j}", 0.0) - 1.0
            m.add_constraint(f"pair_{i}_{k}", coeffs, "=", 0.0)

    # every vehicle leaves the start depot once and reaches the end depot once
    for k in range(K):
        m.add_constraint(f"start_{k}",
                         {f"x_{k}_0_{j}": 1.0 for j in range(1, end + 1)},
                         "=", 1.0)
        m.add_constraint(f"finish_{k}",
                         {f"x_{k}_{i}_{end}": 1.0 for i in range(end)},
                         "=", 1.0)

    # flow conservation at every pickup/dropoff node, per vehicle
    for i in inner:
        for k in range(K):
            coeffs = {f"x_{k}_{j}_{i}": 1.0 for j in range(end) if j != i}
            for j in range(1, end + 1):
                if j != i:
                    coeffs[f"x_{k}_{i}_{j}"] = \
                        coeffs.get(f"x_{k}_{i}_{j}", 0.0) - 1.0
            m.add_constraint(f"flow_{i}_{k}", coeffs, "=", 0.0)

    # a request is accepted exactly when some vehicle leaves its pickup
    for r in inst.requests:
        i = r.index
        coeffs = {f"x_{k}_{i}_{j}": 1.0
                  for k in range(K) for j in range(end + 1) if j != i}
        coeffs[f"y_{i}"] = -1.0
        m.add_constraint(f"select_{i}", coeffs, "=", 0.0)

    # service start propagation along every usable arc
    d0 = nodes[0].service
    for j in inner:
        for k in range(K):
            big = float(max(0.0, nodes[0].latest + d0 + t[0][j] - nodes[j].earliest))
            m.add_constraint(
                f"time0_{j}_{k}",
                {f"B_{j}": 1.0, f"Bstart_{k}": -1.0, f"x_{k}_0_{j}": -big},
                ">=", d0 + float(t[0][j]) - big)
    for i in inner:
        di = nodes[i].service
        for j in inner:
            if j == i:
                continue
            big = float(max(0.0, nodes[i].latest + di + t[i][j] - nodes[j].earliest))
            coeffs = {f"B_{j}": 1.0, f"B_{i}": -1.0}
            for k in range(K):
                coeffs[f"x_{k}_{i}_{j}"] = -big
            m.add_constraint(f"time_{i}_{j}", coeffs, ">=",
                             di + float(t[i][j]) - big)
    for i in range(end):
        di = nodes[i].service
        for k in range(K):
            big = float(max(0.0, nodes[i].latest + di + t[i][end]
                            - nodes[end].earliest))
            coeffs = {f"Bend_{k}": 1.0,
                      (f"Bstart_{k}" if i == 0 else f"B_{i}"): -1.0,
                      f"x_{k}_{i}_{end}": -big}
            m.add_constraint(f"timeend_{i}_{k}", coeffs, ">=",
                             di + float(t[i][end]) - big)

    # onboard load propagation; upper bounds on Q enforce capacity
    for j in inner:
        qj = nodes[j].load
        for k in range(K):
            m.add_constraint(
                f"load0_{j}_{k}",
                {f"Q_{j}": 1.0, f"Qstart_{k}": -1.0, f"x_{k}_0_{j}": -float(cap)},
                ">=", float(qj) - cap)
    for i in inner:
        ub_i = min(float(cap), cap + nodes[i].load)
        for j in inner:
            if j == i:
                continue
            coeffs = {f"Q_{j}": 1.0, f"Q_{i}": -1.0}
            for k in range(K):
                coeffs[f"x_{k}_{i}_{j}"] = -ub_i
            m.add_constraint(f"load_{i}_{j}", coeffs, ">=",
                             float(nodes[j].load) - ub_i)
    for i in range(end):
        for k in range(K):
            coeffs = {f"Qend_{k}": 1.0,
                      (f"Qstart_{k}" if i == 0 else f"Q_{i}"): -1.0,
                      f"x_{k}_{i}_{end}": -float(cap)}
            m.add_constraint(f"loadend_{i}_{k}", coeffs, ">=", -float(cap))

    # ride time definition, route duration, utility level, acceptance gate
    for r in inst.requests:
        i = r.index
        m.add_constraint(f"ride_{i}",
                         {f"L_{i}": 1.0, f"B_{n + i}": -1.0, f"B_{i}": 1.0},
                         "=", -float(nodes[i].service))
    for k in range(K):
        m.add_constraint(f"span_{k}",
                         {f"Bend_{k}": 1.0, f"Bstart_{k}": -1.0},
                         "<=", fleet.max_route_duration)
    for r in inst.requests:
        i = r.index
        cp = model_chance.params_for(r)
        bf, bt, bs = cp.beta_fare, cp.beta_time, cp.beta_sched
        if r.direction == INBOUND:
            coeffs = {f"V_{i}": 1.0, f"L_{i}": bt, f"B_{i}": bs}
            rhs = -bf * req_fare[i] + bs * nodes[i].earliest
        else:
            coeffs = {f"V_{i}": 1.0, f"L_{i}": bt, f"B_{n + i}": -bs}
            rhs = -bf * req_fare[i] - bs * nodes[n + i].latest
        m.add_constraint(f"util_{i}", coeffs, "=", rhs)
    for r in inst.requests:
        i = r.index
        cp = model_chance.params_for(r)
        v_hat = private_utility(cp, inst.direct_time(i), r.private_cost)
        thr = chance_threshold(cp)
        big = deactivation_slack(cp, v_hat, v_low[i])
        m.add_constraint(f"chance_{i}",
                         {f"V_{i}": -1.0, f"y_{i}": big},
                         "<=", big - v_hat + thr)
    return m


# -- LP text ---------------------------------------------------------------


def _num(x: float) -> str:
    return repr(float(x))


def _terms(coeffs: dict[str, float]) -> list[str]:
    out = []
    for name, coef in coeffs.items():
        if coef == 0.0:
            continue
        sign = "-" if coef < 0 else "+"
        out.append(f"{sign} {_num(abs(coef))} {name}")
    return out


def _emit(lines: list[str], head: str, tokens: list[str],
          per_line: int = 8) -> None:
    if not tokens:
        lines.append(f" {head}")
        return
    first = tokens[0]
    if first.startswith("+ "):
        first = first[2:]
    elif first.startswith("- "):
        first = "-" + first[2:]
    tokens = [first] + tokens[1:]
    row = f" {head} " + " ".join(tokens[:per_line])
    lines.append(row)
    for at in range(per_line, len(tokens), per_line):
        lines.append("   " + " ".join(tokens[at:at + per_line]))


def export_lp(model: MilpModel) -> str:
    """Render the model as CPLEX-style LP text.

    The objective and constraint rows keep the model's term order; the
    Bounds and Binaries sections are sorted by variable name so a
    parse/export cycle reproduces the text byte for byte.  Numbers are
    written with ``repr`` and therefore parse back to the exact floats.
    """
    lines = [f"\\ {model.name}", "Maximize"]
    obj = {v.name: v.objective for v in model.variables if v.objective != 0.0}
    _emit(lines, "obj:", _terms(obj))
    lines.append("Subject To")
    for row in model.constraints:
        toks = _terms(row.coeffs)
        if not toks:
            raise ValueError(f"constraint {row.name!r} has no nonzero terms")
        toks.append(row.sense)
        toks.append(_num(row.rhs))
        _emit(lines, f"{row.name}:", toks)
    lines.append("Bounds")
    for var in sorted(model.variables, key=lambda v: v.name):
        if var.binary:
            if var.upper == 0.0:
                lines.append(f" {var.name} = 0")
            continue
        if var.lower == var.upper:
            lines.append(f" {var.name} = {_num(var.lower)}")
        else:
            lines.append(f" {_num(var.lower)} <= {var.name} <= {_num(var.upper)}")
    names = sorted(v.name for v in model.variables if v.binary)
    if names:
        lines.append("Binaries")
        for at in range(0, len(names), 8):
            lines.append(" " + " ".join(names[at:at + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _tokenize(block: str) -> list[str]:
    return block.replace("\n", " ").split()


def parse_lp(text: str) -> MilpModel:
    """Read LP text produced by :func:`export_lp` back into a model.

    This is a deliberately narrow reader for round-trip checks, not a
    general LP parser; it understands exactly the dialect we write.
    """
    sections: dict[str, list[str]] = {}
    current = None
    name = "model"
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("\\"):
            name = stripped[1:].strip() or name
            continue
        key = stripped.lower()
        if key in ("maximize", "minimize", "subject to", "bounds",
                   "binaries", "end"):
            current = key
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ValueError(f"content before any section: {stripped!r}")
        sections[current].append(line)
    if "maximize" not in sections or "subject to" not in sections:
        raise ValueError("missing Maximize or Subject To section")

    model = MilpModel(name)
    binary_names = set(_tokenize("\n".join(sections.get("binaries", []))))

    def ensure(var_name: str) -> Variable:
        var = model.by_name.get(var_name)
        if var is None:
            binary = var_name in binary_names
            var = model.add_variable(var_name, 0.0, 1.0 if binary else 0.0,
                                     binary=binary)
        return var

    def read_linear(tokens: list[str], stop_at_sense: bool):
        coeffs: dict[str, float] = {}
        at = 0
        sign = 1.0
        while at < len(tokens):
            tok = tokens[at]
            if stop_at_sense and tok in ("<=", ">=", "="):
                if at + 1 >= len(tokens):
                    raise ValueError(f"missing right-hand side after {tok!r}")
                return coeffs, tok, float(tokens[at + 1]), at + 2
            if tok == "+":
                sign = 1.0
                at += 1
                continue
            if tok == "-":
                sign = -1.0
                at += 1
                continue
            if tok.startswith("-"):
                sign = -1.0
                tok = tok[1:]
            coef = float(tok)
            if at + 1 >= len(tokens):
                raise ValueError(f"coefficient {tok!r} without a variable")
            var_name = tokens[at + 1]
            ensure(var_name)
            coeffs[var_name] = coeffs.get(var_name, 0.0) + sign * coef
            sign = 1.0
            at += 2
        if stop_at_sense:
            raise ValueError("constraint without relational operator")
        return coeffs, None, 0.0, at

    # variables register in objective order first so a re-export keeps
    # the original term order byte for byte
    obj_tokens = _tokenize("\n".join(sections["maximize"]))
    if not obj_tokens or not obj_tokens[0].endswith(":"):
        raise ValueError("objective must start with a label")
    obj_coeffs, _, _, _ = read_linear(obj_tokens[1:], stop_at_sense=False)
    for var_name, coef in obj_coeffs.items():
        model.by_name[var_name].objective = coef

    row_tokens = _tokenize("\n".join(sections["subject to"]))
    at = 0
    while at < len(row_tokens):
        label = row_tokens[at]
        if not label.endswith(":"):
            raise ValueError(f"expected a constraint label, got {label!r}")
        at += 1
        rest = []
        while at < len(row_tokens) and not row_tokens[at].endswith(":"):
            rest.append(row_tokens[at])
            at += 1
        coeffs, sense, rhs, used = read_linear(rest, stop_at_sense=True)
        if used != len(rest):
            raise ValueError(f"trailing tokens in constraint {label!r}")
        model.add_constraint(label[:-1], coeffs, sense, rhs)

    bounded = set()
    for raw in sections.get("bounds", []):
        toks = raw.split()
        if len(toks) == 3 and toks[1] == "=":
            var = ensure(toks[0])
            var.lower = var.upper = float(toks[2])
        elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
            var = ensure(toks[2])
            var.lower, var.upper = float(toks[0]), float(toks[4])
        else:
            raise ValueError(f"unsupported bounds line: {raw.strip()!r}")
        bounded.add(var.name)
    for var_name in sorted(binary_names):
        ensure(var_name)

    # our exporter writes a bounds line for every continuous variable, so
    # one left at the (0, 0) placeholder marks foreign or truncated text
    for var in model.variables:
        if not var.binary and var.name not in bounded:
            raise ValueError(f"variable {var.name!r} has no bounds line")
    return model


# -- assignments and checking ----------------------------------------------


def solution_assignment(sol: Solution, inst: Instance, chance: ChanceModel,
                        fares: FareStructure | None = None) -> dict[str, float]:
    """Spell a scheduled solution out as a value for every model variable.

    Rejected requests still need in-bounds service times consistent with
    the ride-time and utility rows, so they get a synthetic schedule keeping
    the ride between the direct time and the cap inside both windows.
    """
    model_chance = chance.with_fares(fares)
    n = inst.n
    end = 2 * n + 1
    K = inst.fleet.vehicle_count
    nodes = inst.nodes
    values: dict[str, float] = {}
    for k in range(K):
        for i in range(end + 1):
            for j in range(end + 1):
                values[f"x_{k}_{i}_{j}"] = 0.0

    routes = sorted(sol.routes, key=lambda rt: rt.vehicle)
    if len(routes) != K:
        raise ValueError(f"expected {K} routes, got {len(routes)}")
    start_of: dict[int, float] = {}
    load_of: dict[int, int] = {}
    for rt in routes:
        k = rt.vehicle
        for a in range(len(rt.stops) - 1):
            values[f"x_{k}_{rt.stops[a]}_{rt.stops[a + 1]}"] = 1.0
        values[f"Bstart_{k}"] = rt.starts[0]
        values[f"Bend_{k}"] = rt.starts[-1]
        values[f"Qstart_{k}"] = float(rt.loads[0])
        values[f"Qend_{k}"] = float(rt.loads[-1])
        for pos, v in enumerate(rt.stops[1:-1], start=1):
            start_of[v] = rt.starts[pos]
            load_of[v] = rt.loads[pos]

    for r in inst.requests:
        i = r.index
        cp = model_chance.params_for(r)
        fare = fare_of(r, model_chance.fares)
        served = bool(sol.accepted[i - 1])
        values[f"y_{i}"] = 1.0 if served else 0.0
        if served:
            b_pick, b_drop = start_of[i], start_of[n + i]
            q_pick, q_drop = load_of[i], load_of[n + i]
        else:
            b_pick, b_drop = _idle_times(inst, i)
            q_pick = max(0, nodes[i].load)
            q_drop = max(0, nodes[n + i].load)
        values[f"B_{i}"] = b_pick
        values[f"B_{n + i}"] = b_drop
        values[f"Q_{i}"] = float(q_pick)
        values[f"Q_{n + i}"] = float(q_drop)
        ride = b_drop - b_pick - nodes[i].service
        values[f"L_{i}"] = ride
        if r.direction == INBOUND:
            delay = b_pick - nodes[i].earliest
        else:
            delay = nodes[n + i].latest - b_drop
        values[f"V_{i}"] = (-cp.beta_fare * fare - cp.beta_time * ride
                            - cp.beta_sched * delay)
    return values


def _idle_times(inst: Instance, i: int) -> tuple[float, float]:
    """Window-feasible pickup/dropoff times for a rejected request."""
    n = inst.n
    nodes = inst.nodes
    service = nodes[i].service
    direct = inst.direct_time(i)
    cap = inst.fleet.max_ride_time
    lo = max(nodes[n + i].earliest, nodes[i].earliest + service + direct)
    hi = min(nodes[n + i].latest, nodes[i].latest + service + cap)
    if lo > hi:
        raise ValueError(f"request {i}: no window-consistent idle schedule")
    b_drop = lo
    b_pick = min(nodes[i].latest, max(nodes[i].earliest, b_drop - service - direct))
    if b_drop - b_pick - service > cap:
        b_pick = b_drop - service - cap
    return b_pick, b_drop


def evaluate(model: MilpModel, assignment: dict[str, float],
             tol: float = 1e-6) -> list[str]:
    """All bound, integrality, and constraint violations of an assignment."""
    problems = []
    for var in model.variables:
        value = assignment.get(var.name)
        if value is None:
            problems.append(f"{var.name}: no value assigned")
            continue
        if value < var.lower - tol or value > var.upper + tol:
            problems.append(f"{var.name}: {value} outside "
                            f"[{var.lower}, {var.upper}]")
        if var.binary and abs(value - round(value)) > tol:
            problems.append(f"{var.name}: {value} is not integral")
    for name in assignment:
        if name not in model.by_name:
            problems.append(f"{name}: not a model variable")
    for row in model.constraints:
        total = sum(coef * assignment.get(var, 0.0)
                    for var, coef in row.coeffs.items())
        bad = ((row.sense == "<=" and total > row.rhs + tol)
               or (row.sense == ">=" and total < row.rhs - tol)
               or (row.sense == "=" and abs(total - row.rhs) > tol))
        if bad:
            problems.append(f"{row.name}: {total} {row.sense} {row.rhs} fails")
    return problems


def model_objective(model: MilpModel, assignment: dict[str, float]) -> float:
    return sum(v.objective * assignment.get(v.name, 0.0)
               for v in model.variables if v.objective != 0.0)


# -- exhaustive reference solver --------------------------------------------

BRUTE_FORCE_MAX_REQUESTS = 4
BRUTE_FORCE_MAX_VEHICLES = 2


def brute_force_exact(inst: Instance, chance: ChanceModel,
                      fares: FareStructure | None = None) -> Solution:
    """Provably optimal solution by exhaustive enumeration.

    Every subset of requests, every split over vehicles, and every
    precedence-valid stop order goes through the same scheduling kernel
    the heuristic uses.  The search is factorial, so instances beyond
    4 requests or 2 vehicles are refused outright.
    """
    n = inst.n
    K = inst.fleet.vehicle_count
    if n > BRUTE_FORCE_MAX_REQUESTS or K > BRUTE_FORCE_MAX_VEHICLES:
        raise ValueError(
            f"brute force is limited to {BRUTE_FORCE_MAX_REQUESTS} requests "
            f"and {BRUTE_FORCE_MAX_VEHICLES} vehicles; got n={n}, K={K}")
    model_chance = chance.with_fares(fares)
    ctx = context_for(inst, model_chance)
    fare_gain = {r.index: fare_of(r, model_chance.fares) * r.load
                 for r in inst.requests}
    costs_nonneg = bool((inst.travel_cost >= 0.0).all())

    best_profit = 0.0
    best_routes: list[list[int]] = [[] for _ in range(K)]
    best_subset: tuple[int, ...] = ()

    for mask in range(1 << n):
        subset = [i + 1 for i in range(n) if mask >> i & 1]
        revenue = sum(fare_gain[i] for i in subset)
        if costs_nonneg and revenue <= best_profit:
            continue  # profit cannot exceed revenue when arcs cost money
        for parts in _partitions(subset, K):
            cost = 0.0
            seqs = []
            for part in parts:
                seq_cost = _cheapest_order(part, ctx)
                if seq_cost is None:
                    cost = None
                    break
                seq, part_cost = seq_cost
                seqs.append(seq)
                cost += part_cost
            if cost is None:
                continue
            profit = revenue - cost
            if profit > best_profit + 1e-12:
                best_profit = profit
                best_routes = seqs + [[] for _ in range(K - len(seqs))]
                best_subset = tuple(subset)

    routes = []
    total_cost = 0.0
    for k in range(K):
        inner = best_routes[k] if k < len(best_routes) else []
        if not inner:
            routes.append(empty_route(inst, k, ctx))
            continue
        seq = [0] + inner + [ctx.end]
        starts, early, loads, cost = schedule_sequence(seq, ctx)
        routes.append(Route(k, seq, starts, early, loads, cost))
        total_cost += cost
    accepted = [1 if i in best_subset else 0 for i in range(1, n + 1)]
    revenue = sum(fare_gain[i] for i in best_subset)
    return Solution(routes, accepted, revenue, total_cost)


def _partitions(items: list[int], max_parts: int):
    """Unordered splits of ``items`` into at most ``max_parts`` groups."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for tail in _partitions(rest, max_parts):
        for at in range(len(tail)):
            yield tail[:at] + [[first] + tail[at]] + tail[at + 1:]
        if len(tail) < max_parts:
            yield [[first]] + tail


def _cheapest_order(requests: list[int], ctx) -> tuple[list[int], float] | None:
    """Best feasible stop order serving exactly these requests, if any."""
    n = ctx.n
    best = None
    stack = [([], set(requests), set())]
    while stack:
        seq, waiting, aboard = stack.pop()
        if not waiting and not aboard:
            res = schedule_sequence([0] + seq + [ctx.end], ctx)
            if isinstance(res, Infeasible):
                continue
            cost = res[3]
            if best is None or cost < best[1] - 1e-12:
                best = (list(seq), cost)
            continue
        for i in sorted(waiting, reverse=True):
            stack.append((seq + [i], waiting - {i}, aboard | {i}))
        for i in sorted(aboard, reverse=True):
            stack.append((seq + [n + i], waiting, aboard - {i}))
    return best
