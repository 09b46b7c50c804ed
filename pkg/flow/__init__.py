from .element import (
    GENERATORS,
    GeneratorTag,
    GroupElement,
    commutator,
    generator_matrix,
)
from .flows import (
    FLOWS,
    FlowKind,
    alpha_batch,
    alpha_map,
    check_time,
    geodesic,
    geodesic_orbit,
    horocycle,
    horocycle_orbit,
    orbit_walk,
    unstable_horocycle,
)

__all__ = [
    "GENERATORS",
    "GeneratorTag",
    "GroupElement",
    "commutator",
    "generator_matrix",
    "FLOWS",
    "FlowKind",
    "alpha_batch",
    "alpha_map",
    "check_time",
    "geodesic",
    "geodesic_orbit",
    "horocycle",
    "horocycle_orbit",
    "orbit_walk",
    "unstable_horocycle",
]
