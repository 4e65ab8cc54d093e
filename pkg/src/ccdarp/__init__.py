"""Profit-oriented dial-a-ride with per-request acceptance guarantees."""

from .instance import (BENCHMARK_NAMES, FleetSpec, IngestConfig, IngestError,
                       Instance, Node, ParseError, Request, format_cordeau,
                       generate_benchmark, infer_outbound_pickup_window,
                       ingest_trips, instance_from_json, instance_to_json,
                       load_instance, parse_cordeau, read_trip_csv,
                       save_instance, synthetic_instance, validate_instance)
from .utility import (ChanceModel, ClassParams, FareStructure, ServiceOutcome,
                      chance_feasible, chance_threshold, deactivation_slack,
                      drt_utility, fare_of, parse_fares, parse_params,
                      private_utility, utility_bounds)
from .schedule import (Infeasible, InsertionResult, Route, Solution,
                       build_schedule, check_feasible, empty_solution,
                       objective, remove_request, route_outcomes,
                       solution_from_json, solution_to_json, try_insert)
from .heuristic import (HeuristicParams, build_insertion_order,
                        construct_initial, decentralisation_index,
                        general_index, ls_routing, ls_selection, solve_lsh,
                        travel_time_index)
from .milp import (MilpModel, brute_force_exact, build_model, evaluate,
                   export_lp, parse_lp, solution_assignment)
from .cli import main

__version__ = "0.1.0"

__all__ = [
    "BENCHMARK_NAMES", "ChanceModel", "ClassParams", "FareStructure",
    "FleetSpec", "HeuristicParams", "Infeasible", "IngestConfig",
    "IngestError", "InsertionResult", "Instance", "MilpModel", "Node",
    "ParseError", "Request", "Route", "ServiceOutcome", "Solution",
    "brute_force_exact", "build_insertion_order", "build_model",
    "build_schedule", "chance_feasible", "chance_threshold", "check_feasible",
    "construct_initial", "deactivation_slack", "decentralisation_index",
    "drt_utility", "empty_solution", "evaluate", "export_lp", "fare_of",
    "format_cordeau", "general_index", "generate_benchmark",
    "infer_outbound_pickup_window", "ingest_trips", "instance_from_json",
    "instance_to_json", "load_instance", "ls_routing", "ls_selection", "main",
    "objective", "parse_cordeau", "parse_fares", "parse_lp", "parse_params",
    "private_utility", "read_trip_csv", "remove_request", "route_outcomes",
    "save_instance", "solution_assignment", "solution_from_json",
    "solution_to_json", "solve_lsh", "synthetic_instance", "travel_time_index",
    "try_insert", "utility_bounds", "validate_instance",
]
