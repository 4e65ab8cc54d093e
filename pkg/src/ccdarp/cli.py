"""Command line front end.

Subcommands:

* ``solve``      run the heuristic on one instance, emit the solution JSON
* ``sweep``      re-solve along a one-parameter grid, emit a CSV
* ``export-lp``  write the exact model as an LP file
* ``validate``   structural checks on an instance file
* ``convert``    rewrite an instance between the column and JSON formats

Exit codes: 0 on success, 1 when a produced or checked artifact fails its
checks (validation errors, infeasible solution), 2 on usage, parse, or
configuration problems.

Options beat the parameter file, which beats the built-in defaults.  The
``CCDARP_THREADS`` variable caps the worker processes a sweep may use;
sweep data files contain no timing, wall times go to a ``.log`` sidecar so
repeated runs stay byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .heuristic import HeuristicParams, solve_lsh
from .instance import (Instance, IngestError, ParseError, format_cordeau,
                       instance_to_json, load_instance, validate_instance)
from .milp import build_model, export_lp
from .schedule import check_feasible, solution_to_json
from .utility import (ChanceModel, DISTANCE, FLAT, ZONE, FareStructure,
                      parse_params)

SWEEP_AXES = ("p", "s", "f", "alpha", "zone-base", "capacity")


class UsageError(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, IngestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccdarp",
        description="profit-oriented dial-a-ride with acceptance guarantees")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the heuristic on an instance")
    _common_options(solve)
    solve.add_argument("--trace", metavar="FILE",
                       help="write the per-iteration trace CSV here")
    solve.set_defaults(handler=_cmd_solve)

    sweep = sub.add_parser("sweep", help="re-solve along a parameter grid")
    _common_options(sweep)
    sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sweep.add_argument("--grid", required=True,
                       help="comma-separated strictly increasing values")
    sweep.add_argument("--class-id", default=None,
                       help="restrict p/s/alpha/zone-base moves to one class")
    sweep.set_defaults(handler=_cmd_sweep)

    export = sub.add_parser("export-lp", help="write the exact model as LP text")
    _common_options(export)
    export.set_defaults(handler=_cmd_export)

    validate = sub.add_parser("validate", help="check an instance file")
    validate.add_argument("instance")
    validate.set_defaults(handler=_cmd_validate)

    convert = sub.add_parser("convert", help="rewrite an instance file")
    convert.add_argument("instance")
    convert.add_argument("--to", required=True, choices=("json", "cordeau"))
    convert.add_argument("--out", metavar="FILE")
    convert.set_defaults(handler=_cmd_convert)
    return parser


def _common_options(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("instance")
    cmd.add_argument("--params", metavar="FILE",
                     help="JSON parameter file (classes, fare, tolerance)")
    cmd.add_argument("--out", metavar="FILE", help="output path (default stdout)")
    cmd.add_argument("--flat-fare", type=float, default=None,
                     help="override: flat fare for every class")
    cmd.add_argument("--omega", type=float, default=None,
                     help="override: weight of the centrality index")
    cmd.add_argument("--delta", type=float, default=None,
                     help="override: adjacent-swap gate in the insertion order")
    cmd.add_argument("--seed", type=int, default=None,
                     help="override: shuffle seed for tied sort keys")


def _load_setup(args) -> tuple[Instance, ChanceModel, HeuristicParams]:
    inst = load_instance(args.instance)
    extras: dict = {}
    if args.params:
        with open(args.params, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{args.params}: {exc}") from None
        chance, extras = parse_params(doc)
    else:
        chance = ChanceModel.default()
    if chance.fares is None:
        chance = chance.with_fares(FareStructure.flat(
            args.flat_fare if args.flat_fare is not None else 20.0))
    elif args.flat_fare is not None:
        chance = replace(chance, fares=FareStructure.flat(args.flat_fare))

    knobs = HeuristicParams()
    omega = args.omega if args.omega is not None else extras.get("omega")
    delta = args.delta if args.delta is not None else extras.get("delta")
    seed = args.seed if args.seed is not None else extras.get("rng_seed")
    if omega is not None:
        knobs = replace(knobs, index_weight=float(omega))
    if delta is not None:
        knobs = replace(knobs, swap_threshold=float(delta))
    if seed is not None:
        knobs = replace(knobs, rng_seed=int(seed))
    return inst, chance, knobs


def _write_text(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- solve -------------------------------------------------------------------


def _cmd_solve(args) -> int:
    inst, chance, knobs = _load_setup(args)
    sol = solve_lsh(inst, chance, params=knobs)
    report = check_feasible(sol, inst, chance)
    if not report.ok:
        for line in report.errors:
            print(f"check failed: {line}", file=sys.stderr)
        return 1
    doc = solution_to_json(sol, inst, chance)
    _write_text(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            _write_trace(fh, sol.trace, inst)
    return 0


def _trace_columns(inst: Instance) -> list[str]:
    classes = sorted({r.class_id for r in inst.requests})
    return (["iteration", "profit", "served", "revenue", "routing_cost"]
            + [f"accepted_{c}" for c in classes])


def _write_trace(fh, trace: list[dict], inst: Instance) -> None:
    writer = csv.writer(fh)
    columns = _trace_columns(inst)
    writer.writerow(columns)
    for row in trace:
        by_class = row.get("accepted_by_class", {})
        writer.writerow([row["iteration"], repr(row["profit"]), row["served"],
                         repr(row["revenue"]), repr(row["routing_cost"])]
                        + [by_class.get(c, 0) for c in
                           (col[len("accepted_"):] for col in columns[5:])])


# -- sweep -------------------------------------------------------------------


def _parse_grid(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"grid {text!r} has a non-numeric entry") from None
    if not values:
        raise UsageError("grid needs at least one value")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError("grid values must be strictly increasing")
    return values


def _classes_to_touch(chance: ChanceModel, class_id: str | None) -> list[str]:
    if class_id is None:
        return sorted(chance.classes)
    if class_id not in chance.classes:
        raise UsageError(f"unknown class {class_id!r}")
    return [class_id]


def _setup_for_value(inst: Instance, chance: ChanceModel, axis: str,
                     value: float, class_id: str | None):
    """Instance/model pair with one parameter moved to ``value``."""
    if axis == "capacity":
        cap = int(value)
        if cap != value or cap <= 0:
            raise UsageError(f"capacity must be a positive integer, got {value}")
        return replace(inst, fleet=replace(inst.fleet, capacity=cap)), chance
    if axis in ("p", "s"):
        field = "confidence" if axis == "p" else "scale"
        classes = dict(chance.classes)
        for cid in _classes_to_touch(chance, class_id):
            classes[cid] = replace(classes[cid], **{field: value})
        return inst, replace(chance, classes=classes)
    fares = chance.fares
    if axis == "f":
        if fares.variant != FLAT:
            raise UsageError("axis 'f' needs the flat fare variant")
        return inst, replace(chance, fares=replace(fares, flat_fare=value))
    if axis == "alpha":
        if fares.variant != DISTANCE:
            raise UsageError("axis 'alpha' needs the distance fare variant")
        rates = dict(fares.distance_rate)
        for cid in (_classes_to_touch(chance, class_id)
                    if class_id else sorted(rates)):
            rates[cid] = value
        return inst, replace(chance, fares=replace(fares, distance_rate=rates))
    if fares.variant != ZONE:
        raise UsageError("axis 'zone-base' needs the zonal fare variant")
    base = dict(fares.zone_base)
    for cid in (_classes_to_touch(chance, class_id) if class_id else sorted(base)):
        base[cid] = value
    return inst, replace(chance, fares=replace(fares, zone_base=base))


def _worker_count() -> int:
    raw = os.environ.get("CCDARP_THREADS", "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise UsageError(f"CCDARP_THREADS={raw!r} is not an integer") from None
    if count < 1:
        raise UsageError("CCDARP_THREADS must be at least 1")
    return count


def _sweep_point(task) -> tuple[dict, float]:
    inst, chance, knobs, axis, value, class_id = task
    point_inst, point_chance = _setup_for_value(inst, chance, axis, value,
                                                class_id)
    began = time.perf_counter()
    sol = solve_lsh(point_inst, point_chance, params=knobs)
    spent = time.perf_counter() - began
    report = check_feasible(sol, point_inst, point_chance)
    classes = sorted({r.class_id for r in inst.requests})
    row = {
        "axis": axis,
        "value": repr(value),
        "profit": repr(sol.profit),
        "revenue": repr(sol.revenue),
        "routing_cost": repr(sol.routing_cost),
        "served": len(sol.served),
        "vehicles_used": sum(1 for rt in sol.routes if not rt.empty),
        "feasible": int(report.ok),
    }
    for cid in classes:
        row[f"accepted_{cid}"] = sum(
            1 for r in point_inst.requests
            if r.class_id == cid and sol.accepted[r.index - 1])
    return row, spent


def _cmd_sweep(args) -> int:
    inst, chance, knobs = _load_setup(args)
    values = _parse_grid(args.grid)
    if args.axis in ("p",) and any(not 0.0 < v < 1.0 for v in values):
        raise UsageError("axis 'p' values must lie strictly between 0 and 1")
    # fail fast on axis/fare mismatches before any solving starts
    _setup_for_value(inst, chance, args.axis, values[0], args.class_id)

    tasks = [(inst, chance, knobs, args.axis, value, args.class_id)
             for value in values]
    workers = _worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(task) for task in tasks]

    classes = sorted({r.class_id for r in inst.requests})
    columns = (["axis", "value", "profit", "revenue", "routing_cost",
                "served", "vehicles_used", "feasible"]
               + [f"accepted_{c}" for c in classes])
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row, _spent in results:
        writer.writerow(row)
    _write_text(args.out, buffer.getvalue())

    timing = "".join(f"{args.axis}={value}: {spent:.3f}s\n"
                     for (row, spent), value in zip(results, values))
    if args.out:
        with open(args.out + ".log", "w", encoding="utf-8") as fh:
            fh.write(timing)
    else:
        sys.stderr.write(timing)
    if any(not row["feasible"] for row, _ in results):
        return 1
    return 0


# -- export-lp / validate / convert -------------------------------------------


def _cmd_export(args) -> int:
    inst, chance, _knobs = _load_setup(args)
    _write_text(args.out, export_lp(build_model(inst, chance)))
    return 0


def _cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    report = validate_instance(inst)
    for line in report.errors:
        print(f"error: {line}")
    for line in report.warnings:
        print(f"warning: {line}")
    for key in sorted(report.info):
        print(f"info: {key} = {report.info[key]}")
    print(f"{inst.name}: {'ok' if report.ok else 'invalid'}")
    return 0 if report.ok else 1


def _cmd_convert(args) -> int:
    inst = load_instance(args.instance)
    if args.to == "json":
        text = json.dumps(instance_to_json(inst), indent=2, sort_keys=True) + "\n"
    else:
        lossy = [r.index for r in inst.requests
                 if r.class_id != "1" or r.pickup_zone is not None]
        if lossy:
            print(f"warning: column format drops class/zone data of "
                  f"{len(lossy)} requests", file=sys.stderr)
        coords = np.array([[v.x, v.y] for v in inst.nodes])
        euclid = np.hypot(coords[:, None, 0] - coords[None, :, 0],
                          coords[:, None, 1] - coords[None, :, 1])
        if not np.allclose(euclid, inst.travel_time, atol=1e-6):
            print("warning: travel times are not coordinate distances; "
                  "the column format cannot represent them", file=sys.stderr)
        text = format_cordeau(inst)
    _write_text(args.out, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
