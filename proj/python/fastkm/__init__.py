"""Two-stage k-means: a fast Lloyd pass on a sample seeds a slow pass on all points."""

from ._fastkm import (
    ClusterResult,
    DataError,
    TwoStageResult,
    UsageError,
    assign_points,
    generate_blobs,
    load_csv,
    predicted_cost,
    predicted_two_stage_cost,
    run_baseline,
    run_lloyd,
    run_two_stage,
    save_csv,
    squared_distance,
    wcss,
)

__all__ = [
    "ClusterResult",
    "DataError",
    "TwoStageResult",
    "UsageError",
    "assign_points",
    "generate_blobs",
    "load_csv",
    "predicted_cost",
    "predicted_two_stage_cost",
    "run_baseline",
    "run_lloyd",
    "run_two_stage",
    "save_csv",
    "squared_distance",
    "wcss",
]
