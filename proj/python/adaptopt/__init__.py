"""Adaptive distributed optimization over switching undirected graphs."""

from ._adaptopt import (
    AssumptionViolation,
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    Mode,
    NumericError,
    Objective,
    ParseError,
    RunRecord,
    TeamObjective,
    Topology,
    benchmark_objectives,
    component_count,
    is_connected,
    laplacian,
    load_preset,
    monitor_svg,
    norm_dir,
    parse_config,
    preset_names,
    read_csv,
    ring,
    run_experiment,
    trajectory_svg,
    transform_vbar,
)

__all__ = [
    "AssumptionViolation",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentResult",
    "Mode",
    "NumericError",
    "Objective",
    "ParseError",
    "RunRecord",
    "TeamObjective",
    "Topology",
    "benchmark_objectives",
    "component_count",
    "is_connected",
    "laplacian",
    "load_preset",
    "monitor_svg",
    "norm_dir",
    "parse_config",
    "preset_names",
    "read_csv",
    "ring",
    "run_experiment",
    "trajectory_svg",
    "transform_vbar",
]
