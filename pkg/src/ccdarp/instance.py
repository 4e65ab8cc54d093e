"""Problem instances: node/request data, file formats, generators.

An instance couples a fleet description with ``2n + 2`` nodes: node ``0`` is
the start depot, nodes ``1..n`` are pickups, ``n+1..2n`` the matching
dropoffs, and ``2n+1`` the end depot.  Request ``i`` owns nodes ``i`` and
``n+i``.  Travel time and travel cost are dense ``(2n+2) x (2n+2)`` matrices.

Two external formats are supported:

* the classic benchmark text format: a header line
  ``vehicles requests horizon capacity max_ride_time`` followed by one line
  per node ``id x y service load tw_start tw_end``.  Files that omit the
  final depot line (a common variant) are accepted; the end depot is then a
  copy of node 0.
* trip-record CSVs with columns ``pickup_id, dropoff_id, passengers,
  pickup_time, dropoff_time`` and optional ``pickup_zone, dropoff_zone,
  class_id``.  Times are ``HH:MM:SS`` or minutes from midnight.

A request is *outbound* when only its dropoff window is tighter than the
horizon, *inbound* otherwise (tight pickup wins when both are tight).
"""

from __future__ import annotations

import json
import math
import random
import zlib
from dataclasses import dataclass, field, asdict
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

INBOUND = "inbound"
OUTBOUND = "outbound"


class ParseError(ValueError):
    """Malformed instance file or record set."""


class IngestError(ValueError):
    """Trip-record ingestion cannot produce a usable instance."""


@dataclass(frozen=True)
class Node:
    """One stop location.

    Attributes
    ----------
    index : int
        Position in the node list; 0 and 2n+1 are the depots.
    x, y : float
        Planar coordinates (unused when matrices come from a lookup).
    service : float
        Service duration at the node, minutes.
    load : int
        Demand change when the node is served; +q at pickups, -q at
        dropoffs, 0 at depots.
    earliest, latest : float
        Service may start within [earliest, latest].
    """

    index: int
    x: float
    y: float
    service: float
    load: int
    earliest: float
    latest: float


@dataclass(frozen=True)
class Request:
    """A transport request: pickup node ``index``, dropoff node ``n + index``."""

    index: int
    direction: str
    load: int
    class_id: str
    private_cost: float
    direct_distance: float
    pickup_zone: str | None = None
    dropoff_zone: str | None = None


@dataclass(frozen=True)
class FleetSpec:
    """Homogeneous fleet: size, per-vehicle capacity and route limits."""

    vehicle_count: int
    capacity: int
    max_route_duration: float
    max_ride_time: float


@dataclass(eq=False)
class Instance:
    """Immutable-by-convention problem instance; do not mutate after build.

    Identity-hashed: schedule evaluation caches keyed by instance object.
    Compare via :func:`instance_to_json` when value equality is needed.
    """

    name: str
    nodes: list[Node]
    requests: list[Request]
    travel_time: np.ndarray
    travel_cost: np.ndarray
    fleet: FleetSpec
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.requests)

    @property
    def depot_start(self) -> int:
        return 0

    @property
    def depot_end(self) -> int:
        return 2 * self.n + 1

    def pickup_node(self, i: int) -> int:
        return i

    def dropoff_node(self, i: int) -> int:
        return self.n + i

    def request_of_node(self, v: int) -> tuple[int, bool]:
        """Map node id to (request index, is_pickup). Depots are invalid."""
        if v <= 0 or v >= self.depot_end:
            raise ValueError(f"node {v} belongs to no request")
        return (v, True) if v <= self.n else (v - self.n, False)

    def direct_time(self, i: int) -> float:
        return float(self.travel_time[i][self.n + i])


@dataclass(frozen=True)
class InferredWindow:
    """Pickup window derived for an outbound request; may be degenerate."""

    start: float
    end: float
    degenerate: bool


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors


def _euclid_matrix(nodes: Sequence[Node]) -> np.ndarray:
    xs = np.array([v.x for v in nodes])
    ys = np.array([v.y for v in nodes])
    return np.hypot(xs[:, None] - xs[None, :], ys[:, None] - ys[None, :])


def _classify_direction(pick: Node, drop: Node, horizon: float) -> str:
    pick_tight = (pick.latest - pick.earliest) < horizon
    drop_tight = (drop.latest - drop.earliest) < horizon
    if drop_tight and not pick_tight:
        return OUTBOUND
    return INBOUND


def parse_cordeau(text: str, name: str = "", private_cost_rate: float = 2.5) -> Instance:
    """Parse benchmark text into an Instance with Euclidean time = cost.

    Raises ParseError on malformed headers or lines, wrong node counts,
    or broken pickup/dropoff pairing.
    """
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise ParseError("empty instance file")
    header = rows[0]
    if len(header) != 5:
        raise ParseError(f"header needs 5 fields, got {len(header)}: {header}")
    try:
        vehicles = int(header[0])
        n = int(header[1])
        horizon = float(header[2])
        capacity = int(header[3])
        max_ride = float(header[4])
    except ValueError as exc:
        raise ParseError(f"bad header value: {exc}") from None
    if vehicles < 1 or n < 1:
        raise ParseError(f"need at least 1 vehicle and 1 request, got {vehicles}, {n}")

    body = rows[1:]
    if len(body) == 2 * n + 1:
        body = body + [body[0]]  # end depot omitted: clone node 0
    if len(body) != 2 * n + 2:
        raise ParseError(f"expected {2 * n + 2} node lines for n={n}, got {len(body)}")

    nodes = []
    for line_no, parts in enumerate(body):
        if len(parts) != 7:
            raise ParseError(f"node line {line_no + 2}: need 7 fields, got {len(parts)}")
        try:
            nodes.append(Node(
                index=line_no,
                x=float(parts[1]), y=float(parts[2]),
                service=float(parts[3]), load=int(float(parts[4])),
                earliest=float(parts[5]), latest=float(parts[6]),
            ))
        except ValueError as exc:
            raise ParseError(f"node line {line_no + 2}: {exc}") from None
        declared = int(float(parts[0]))
        expected = 0 if line_no == 2 * n + 1 and declared == 0 else line_no
        if declared != expected and not (line_no == 2 * n + 1 and declared in (0, 2 * n + 1)):
            raise ParseError(f"node line {line_no + 2}: id {declared}, expected {line_no}")
    # the cloned/last depot keeps canonical index
    nodes[-1] = Node(2 * n + 1, nodes[-1].x, nodes[-1].y, nodes[-1].service,
                     nodes[-1].load, nodes[-1].earliest, nodes[-1].latest)

    for i in range(1, n + 1):
        if nodes[i].load <= 0:
            raise ParseError(f"pickup {i}: load must be positive, got {nodes[i].load}")
        if nodes[i].load != -nodes[n + i].load:
            raise ParseError(
                f"request {i}: pickup load {nodes[i].load} != -dropoff load {nodes[n + i].load}")

    t = _euclid_matrix(nodes)
    c = t.copy()
    c[0][2 * n + 1] = 0.0  # idle vehicles incur no cost

    requests = []
    for i in range(1, n + 1):
        direct = float(t[i][n + i])
        requests.append(Request(
            index=i,
            direction=_classify_direction(nodes[i], nodes[n + i], horizon),
            load=nodes[i].load,
            class_id="1",
            private_cost=private_cost_rate * direct,
            direct_distance=direct,
        ))

    fleet = FleetSpec(vehicles, capacity, horizon, max_ride)
    return Instance(name=name or "unnamed", nodes=nodes, requests=requests,
                    travel_time=t, travel_cost=c, fleet=fleet,
                    meta={"source": "cordeau", "private_cost_rate": private_cost_rate})


def format_cordeau(inst: Instance) -> str:
    """Serialize to the benchmark text format (canonical 2n+2 node lines)."""
    f = inst.fleet
    n = (len(inst.nodes) - 2) // 2
    out = [f"{f.vehicle_count} {n} {_fmt_num(f.max_route_duration)} "
           f"{f.capacity} {_fmt_num(f.max_ride_time)}"]
    for v in inst.nodes:
        out.append(f"{v.index} {v.x:.3f} {v.y:.3f} {_fmt_num(v.service)} "
                   f"{v.load} {_fmt_num(v.earliest)} {_fmt_num(v.latest)}")
    return "\n".join(out) + "\n"


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def infer_outbound_pickup_window(drop_earliest: float, drop_latest: float,
                                 direct_time: float, max_ride_time: float,
                                 horizon: float) -> InferredWindow:
    """Latest-arrival pickup window for an outbound request.

    The earliest sensible pickup reaches the dropoff window riding direct;
    the latest still allows the maximum ride. Both ends are clamped to
    [0, horizon]; an empty result is returned flagged, not raised.
    """
    start = min(max(drop_earliest - direct_time, 0.0), horizon)
    end = min(max(drop_latest - max_ride_time, 0.0), horizon)
    return InferredWindow(start, end, degenerate=start > end)


def parse_minutes(value) -> float:
    """Accept minutes-from-midnight numbers or HH:MM[:SS] strings."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ParseError(f"bad time {value!r}")
        try:
            h, m = int(parts[0]), int(parts[1])
            s = float(parts[2]) if len(parts) == 3 else 0.0
        except ValueError:
            raise ParseError(f"bad time {value!r}") from None
        return h * 60.0 + m + s / 60.0
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"bad time {value!r}") from None


@dataclass
class IngestConfig:
    """Knobs for building an instance from trip records.

    travel_time resolves minutes between raw location ids; it may be a
    callable ``(a, b) -> float`` or a mapping ``(a, b) -> float``.  A missing
    pair aborts ingestion.  Odd-numbered requests (1st, 3rd, ...) are
    inbound, even-numbered outbound; the tight window of width
    ``window_width`` sits on the recorded pickup (inbound) or dropoff
    (outbound) time, centered by default (``anchor="start"`` puts the
    recorded time at the window start).
    """

    travel_time: Callable[[object, object], float] | Mapping
    vehicle_count: int
    capacity: int
    max_ride_time: float
    horizon: float | None = None
    max_route_duration: float | None = None
    window_width: float = 15.0
    anchor: str = "center"
    service_duration: float = 0.0
    cost_per_minute: float = 0.1
    depot_cost: float = 2.5
    depot_travel_time: float = 0.0
    private_cost_rate: float = 2.5
    private_cost_base: float = 0.0
    class_of: Callable[[Mapping], str] | None = None
    name: str = "trips"


def _lookup_time(source, a, b) -> float:
    if callable(source):
        value = source(a, b)
    else:
        value = source.get((a, b))
    if value is None:
        raise IngestError(f"no travel time for pair ({a!r}, {b!r})")
    return float(value)


def read_trip_csv(path) -> list[dict]:
    import csv

    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def ingest_trips(records: Iterable[Mapping], cfg: IngestConfig) -> Instance:
    """Build an instance from trip records; rejected rows land in meta."""
    rows = list(records)
    if not rows:
        raise IngestError("no requests: empty record set")

    kept = []
    rejected = []
    for pos, row in enumerate(rows):
        try:
            passengers = int(float(row["passengers"]))
        except (KeyError, ValueError, TypeError):
            rejected.append({"row": pos, "reason": "missing or non-numeric passengers"})
            continue
        if passengers <= 0:
            rejected.append({"row": pos, "reason": f"non-positive passengers {passengers}"})
            continue
        try:
            pick_t = parse_minutes(row["pickup_time"])
            drop_t = parse_minutes(row["dropoff_time"])
        except (KeyError, ParseError):
            rejected.append({"row": pos, "reason": "bad pickup/dropoff time"})
            continue
        kept.append((row, passengers, pick_t, drop_t))
    if not kept:
        raise IngestError("no requests: every record was rejected")

    n = len(kept)
    width = cfg.window_width
    horizon = cfg.horizon
    if horizon is None:
        horizon = math.ceil(max(max(p, d) for _, _, p, d in kept) + width)
    duration_cap = cfg.max_route_duration if cfg.max_route_duration is not None else horizon

    def window(anchor_time: float) -> tuple[float, float]:
        lo = anchor_time - width / 2.0 if cfg.anchor == "center" else anchor_time
        hi = lo + width
        return max(lo, 0.0), min(hi, float(horizon))

    nodes = [Node(0, 0.0, 0.0, 0.0, 0, 0.0, float(horizon))]
    drop_nodes = []
    requests = []
    raw_ids = [None]  # per node: raw location id, depots map to None
    for i, (row, passengers, pick_t, drop_t) in enumerate(kept, start=1):
        inbound = i % 2 == 1
        direct = _lookup_time(cfg.travel_time, row["pickup_id"], row["dropoff_id"])
        if inbound:
            pe, pl = window(pick_t)
            de, dl = 0.0, float(horizon)
        else:
            pe, pl = 0.0, float(horizon)
            de, dl = window(drop_t)
        nodes.append(Node(i, 0.0, 0.0, cfg.service_duration, passengers, pe, pl))
        drop_nodes.append(Node(n + i, 0.0, 0.0, cfg.service_duration, -passengers, de, dl))
        raw_ids.append(row["pickup_id"])
        if cfg.class_of is not None:
            class_id = str(cfg.class_of(row))
        else:
            class_id = str(row.get("class_id") or "1")
        requests.append(Request(
            index=i, direction=INBOUND if inbound else OUTBOUND,
            load=passengers, class_id=class_id,
            private_cost=cfg.private_cost_base + cfg.private_cost_rate * direct,
            direct_distance=direct,
            pickup_zone=_zone(row, "pickup_zone"),
            dropoff_zone=_zone(row, "dropoff_zone"),
        ))
    nodes.extend(drop_nodes)
    nodes.append(Node(2 * n + 1, 0.0, 0.0, 0.0, 0, 0.0, float(horizon)))
    raw_ids.extend(r["dropoff_id"] for r, _, _, _ in kept)
    raw_ids.append(None)

    size = 2 * n + 2
    t = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            if a == b:
                continue
            if raw_ids[a] is None or raw_ids[b] is None:
                t[a][b] = 0.0 if (a == 0 and b == size - 1) else cfg.depot_travel_time
            elif raw_ids[a] == raw_ids[b]:
                t[a][b] = 0.0  # distinct stops at one location
            else:
                t[a][b] = _lookup_time(cfg.travel_time, raw_ids[a], raw_ids[b])
    c = cfg.cost_per_minute * t
    c[0, :] = cfg.depot_cost
    c[:, size - 1] = cfg.depot_cost
    c[0, size - 1] = 0.0
    np.fill_diagonal(c, 0.0)
    c[:, 0] = 0.0
    c[size - 1, :] = 0.0
    c[0, size - 1] = 0.0

    fleet = FleetSpec(cfg.vehicle_count, cfg.capacity, float(duration_cap), cfg.max_ride_time)
    meta = {"source": "trips", "rejected_rows": rejected, "horizon": float(horizon)}
    return Instance(cfg.name, nodes, requests, t, c, fleet, meta)


def _zone(row: Mapping, key: str) -> str | None:
    value = row.get(key)
    if value is None or str(value).strip() == "":
        return None
    return str(value)


def validate_instance(inst: Instance) -> ValidationReport:
    """Structural checks; errors make the instance unusable, warnings don't."""
    rep = ValidationReport()
    n = inst.n
    err = rep.errors.append
    warn = rep.warnings.append

    if len(inst.nodes) != 2 * n + 2:
        err(f"node count {len(inst.nodes)} != {2 * n + 2}")
        return rep
    for pos, v in enumerate(inst.nodes):
        if v.index != pos:
            err(f"node at position {pos} has index {v.index}")
        if v.earliest > v.latest:
            err(f"node {pos}: window [{v.earliest}, {v.latest}] is empty")
        if v.service < 0:
            err(f"node {pos}: negative service duration")
    for d in (0, 2 * n + 1):
        if inst.nodes[d].load != 0 or inst.nodes[d].service != 0:
            err(f"depot node {d} must have zero load and service")
    for r in inst.requests:
        i = r.index
        if inst.nodes[i].load <= 0 or inst.nodes[i].load != -inst.nodes[n + i].load:
            err(f"request {i}: loads {inst.nodes[i].load}/{inst.nodes[n + i].load} unpaired")
        if r.load != inst.nodes[i].load:
            err(f"request {i}: load {r.load} != pickup node load {inst.nodes[i].load}")
        if r.direction not in (INBOUND, OUTBOUND):
            err(f"request {i}: unknown direction {r.direction!r}")
        if r.private_cost < 0:
            warn(f"request {i}: negative private cost")
        if r.load > inst.fleet.capacity:
            warn(f"request {i}: load {r.load} exceeds capacity, can never be served")

    size = 2 * n + 2
    for label, mat in (("travel_time", inst.travel_time), ("travel_cost", inst.travel_cost)):
        if mat.shape != (size, size):
            err(f"{label} shape {mat.shape} != ({size}, {size})")
            return rep
    if (inst.travel_time < 0).any():
        err("negative travel times")
    if np.diagonal(inst.travel_time).any():
        err("travel_time diagonal must be zero")
    if inst.travel_cost[0][2 * n + 1] != 0:
        warn("idle arc (start depot -> end depot) has nonzero cost")

    f = inst.fleet
    if f.vehicle_count < 1 or f.capacity < 1:
        err(f"fleet needs >=1 vehicle and capacity, got {f.vehicle_count}, {f.capacity}")
    if f.max_route_duration <= 0:
        err(f"non-positive route duration limit {f.max_route_duration}")
    directs = [inst.direct_time(i) for i in range(1, n + 1)] or [0.0]
    if f.max_ride_time < max(directs):
        err(f"max ride time {f.max_ride_time} below longest direct ride {max(directs):.3f}")

    tri = _triangle_violations(inst.travel_time)
    if tri:
        warn(f"travel_time violates the triangle inequality on {tri} sampled triples")
    degenerate = []
    for r in inst.requests:
        if r.direction == OUTBOUND:
            drop = inst.nodes[n + r.index]
            win = infer_outbound_pickup_window(drop.earliest, drop.latest,
                                               inst.direct_time(r.index),
                                               f.max_ride_time, f.max_route_duration)
            if win.degenerate:
                degenerate.append(r.index)
    if degenerate:
        # expected whenever direct ride < max ride - window width; not a defect
        rep.info["degenerate_outbound_windows"] = degenerate

    rep.info["horizon"] = f.max_route_duration
    rep.info["requests"] = n
    rep.info["vehicles"] = f.vehicle_count
    rep.info["inbound"] = sum(1 for r in inst.requests if r.direction == INBOUND)
    return rep


def _triangle_violations(t: np.ndarray, limit: int = 2000, tol: float = 1e-9) -> int:
    size = t.shape[0]
    rng = random.Random(0)
    count = 0
    trials = min(limit, size ** 3)
    for _ in range(trials):
        a, b, c = rng.randrange(size), rng.randrange(size), rng.randrange(size)
        if t[a][c] > t[a][b] + t[b][c] + tol:
            count += 1
    return count


# ---------------------------------------------------------------------------
# canonical JSON


def instance_to_json(inst: Instance) -> dict:
    return {
        "meta": dict(inst.meta, name=inst.name),
        "fleet": asdict(inst.fleet),
        "nodes": [asdict(v) for v in inst.nodes],
        "requests": [asdict(r) for r in inst.requests],
        "travel_time": inst.travel_time.tolist(),
        "travel_cost": inst.travel_cost.tolist(),
    }


def instance_from_json(doc: Mapping) -> Instance:
    try:
        meta = dict(doc["meta"])
        name = meta.pop("name", "unnamed")
        fleet = FleetSpec(**doc["fleet"])
        nodes = [Node(**v) for v in doc["nodes"]]
        requests = [Request(**r) for r in doc["requests"]]
        t = np.array(doc["travel_time"], dtype=float)
        c = np.array(doc["travel_cost"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad instance document: {exc}") from None
    return Instance(name, nodes, requests, t, c, fleet, meta)


def save_instance(inst: Instance, path, fmt: str = "json") -> None:
    if fmt not in ("json", "cordeau"):
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        if fmt == "cordeau":
            fh.write(format_cordeau(inst))
        else:
            json.dump(instance_to_json(inst), fh, indent=1, sort_keys=True)
            fh.write("\n")


def load_instance(path) -> Instance:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return instance_from_json(json.loads(text))
    return parse_cordeau(text)


# ---------------------------------------------------------------------------
# generators

BENCHMARK_NAMES = (
    "a2-16", "a2-20", "a2-24", "a3-18", "a3-24", "a3-36", "a4-16", "a4-32",
    "a4-40", "a4-48", "a5-50", "a6-60", "a6-72", "a7-84", "a8-96",
)


def generate_benchmark(name: str, seed: int | None = None,
                       private_cost_rate: float = 2.5) -> Instance:
    """Deterministic benchmark-style instance for a name like ``a3-24``.

    Follows the published recipe: depot at the origin, coordinates uniform
    in [-10, 10]^2 rounded to 3 decimals, unit loads, 3 min service,
    capacity 3, max ride 30, horizon 480; the first half of the requests is
    outbound (tight 15-min dropoff window), the second half inbound (tight
    pickup window); loose windows span the whole horizon.
    """
    try:
        veh_part, n_part = name.lstrip("ab").split("-")
        vehicles, n = int(veh_part), int(n_part)
    except ValueError:
        raise ValueError(f"cannot read fleet/request sizes from name {name!r}") from None
    if seed is None:
        seed = zlib.crc32(name.encode())
    rng = random.Random(seed)
    horizon, width, capacity, max_ride, service = 480.0, 15.0, 3, 30.0, 3.0

    def coord() -> float:
        return round(rng.uniform(-10.0, 10.0), 3)

    nodes = [Node(0, 0.0, 0.0, 0.0, 0, 0.0, horizon)]
    drops = []
    for i in range(1, n + 1):
        px, py, dx, dy = coord(), coord(), coord(), coord()
        anchor = float(rng.randint(60, 420))
        if i <= n // 2:  # outbound: tight dropoff window
            pw, dw = (0.0, horizon), (anchor, anchor + width)
        else:
            pw, dw = (anchor, anchor + width), (0.0, horizon)
        nodes.append(Node(i, px, py, service, 1, pw[0], pw[1]))
        drops.append(Node(n + i, dx, dy, service, -1, dw[0], dw[1]))
    nodes.extend(drops)
    nodes.append(Node(2 * n + 1, 0.0, 0.0, 0.0, 0, 0.0, horizon))

    text = format_cordeau(Instance(
        name, nodes, [], np.zeros((1, 1)), np.zeros((1, 1)),
        FleetSpec(vehicles, capacity, horizon, max_ride)))
    inst = parse_cordeau(text, name=name, private_cost_rate=private_cost_rate)
    inst.meta.update(source="generated", seed=seed)
    return inst


def synthetic_instance(n_requests: int, n_vehicles: int, seed: int, *,
                       capacity: int = 3, horizon: float = 240.0,
                       max_ride_time: float = 45.0, window_width: float = 40.0,
                       service: float = 2.0, max_load: int = 1,
                       box: float = 10.0, private_cost_rate: float = 2.5,
                       class_ids: Sequence[str] = ("1",),
                       zone_split: bool = False) -> Instance:
    """Small random instance for tests and sweeps; Euclidean time = cost."""
    rng = random.Random(seed)
    nodes = [Node(0, 0.0, 0.0, 0.0, 0, 0.0, horizon)]
    drops = []
    meta_dirs = []
    for i in range(1, n_requests + 1):
        load = rng.randint(1, max_load)
        px, py = round(rng.uniform(-box, box), 3), round(rng.uniform(-box, box), 3)
        dx, dy = round(rng.uniform(-box, box), 3), round(rng.uniform(-box, box), 3)
        anchor = rng.uniform(0.15 * horizon, 0.8 * horizon)
        inbound = i % 2 == 1
        meta_dirs.append(inbound)
        if inbound:
            pw, dw = (anchor, anchor + window_width), (0.0, horizon)
        else:
            pw, dw = (0.0, horizon), (anchor, anchor + window_width)
        nodes.append(Node(i, px, py, service, load, round(pw[0], 3), round(pw[1], 3)))
        drops.append(Node(n_requests + i, dx, dy, service, -load,
                          round(dw[0], 3), round(dw[1], 3)))
    nodes.extend(drops)
    nodes.append(Node(2 * n_requests + 1, 0.0, 0.0, 0.0, 0, 0.0, horizon))

    t = _euclid_matrix(nodes)
    c = t.copy()
    c[0][2 * n_requests + 1] = 0.0
    requests = []
    for i in range(1, n_requests + 1):
        direct = float(t[i][n_requests + i])
        requests.append(Request(
            index=i,
            direction=INBOUND if meta_dirs[i - 1] else OUTBOUND,
            load=nodes[i].load,
            class_id=str(class_ids[(i - 1) % len(class_ids)]),
            private_cost=private_cost_rate * direct,
            direct_distance=direct,
            pickup_zone=("west" if nodes[i].x < 0 else "east") if zone_split else None,
            dropoff_zone=("west" if nodes[n_requests + i].x < 0 else "east") if zone_split else None,
        ))
    fleet = FleetSpec(n_vehicles, capacity, horizon, max_ride_time)
    return Instance(f"synthetic-{n_requests}x{n_vehicles}-{seed}", nodes, requests,
                    t, c, fleet, {"source": "synthetic", "seed": seed})
