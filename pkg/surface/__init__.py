from .diagnostics import (
    DiophantineClass,
    DiophantineReport,
    diophantine_check,
    geodesic_heights,
    height_distance,
    height_distance_batch,
    loglaw_statistic,
)
from .reduce import (
    Reducer,
    SurfacePoint,
    base_points,
    is_reduced,
    reduce,
    reduce_batch,
    reduce_point,
    reduce_points,
    reducer_is_unimodular,
)
from .sampling import random_reducer, sample_frames, sample_point, sample_points

__all__ = [
    "DiophantineClass",
    "DiophantineReport",
    "diophantine_check",
    "geodesic_heights",
    "height_distance",
    "height_distance_batch",
    "loglaw_statistic",
    "Reducer",
    "SurfacePoint",
    "base_points",
    "is_reduced",
    "reduce",
    "reduce_batch",
    "reduce_point",
    "reduce_points",
    "reducer_is_unimodular",
    "random_reducer",
    "sample_frames",
    "sample_point",
    "sample_points",
]
