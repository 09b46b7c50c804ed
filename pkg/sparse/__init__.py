from .blocks import (
    BlockDecomposition,
    block_coverage,
    linearization_bound,
    linearization_error,
    max_linearization_error,
    progression_times,
    venkatesh_blocks,
)
from .sums import (
    MAX_ORBIT_TIME,
    MapSumGap,
    SparseRecord,
    chunked_sum,
    empirical_lipschitz,
    map_sum_vs_flow,
    progression_bound,
    progression_vs_sparse,
    shah_average,
)

__all__ = [
    "BlockDecomposition",
    "block_coverage",
    "linearization_bound",
    "linearization_error",
    "max_linearization_error",
    "progression_times",
    "venkatesh_blocks",
    "MAX_ORBIT_TIME",
    "MapSumGap",
    "SparseRecord",
    "chunked_sum",
    "empirical_lipschitz",
    "map_sum_vs_flow",
    "progression_bound",
    "progression_vs_sparse",
    "shah_average",
]
