import math
from dataclasses import asdict, dataclass
from typing import Callable

import torch

from errors import InvalidArgument, ResourceLimit
from flow import GroupElement, alpha_batch, alpha_map, geodesic
from surface import (
    Reducer,
    SurfacePoint,
    geodesic_heights,
    height_distance,
    reduce,
    reduce_batch,
)

from .calibration import Calibration
from .hashing import (
    candidate_elements,
    frame_coordinates,
    hash_cells,
    near_pairs,
    representatives,
)

MAX_GRID_SIZE = 10**8
# Two box points are the same point of M when their frames agree to this tolerance.
MATCH_TOL = 1e-6
# Hash cells span this many grid spacings.
CELL_FACTOR = 2.0
# Number of (lattice element, sample) products formed at once.
SOLVE_CHUNK = 1 << 22
MAX_SCALE = 1e12


@dataclass(frozen=True)
class Box:
    """
    Half widths of the coordinate box [-t, t] x [-y, y] x [-z, z].
    """

    t: float
    y: float
    z: float

    def __post_init__(self):
        for name, value in [("t", self.t), ("y", self.y), ("z", self.z)]:
            if not (math.isfinite(value) and value > 0):
                raise InvalidArgument(
                    f"Box half widths must be positive, got {name}={value!r}"
                )

    @classmethod
    def scale_box(cls, T: float, c: float) -> "Box":
        """
        [-10T, 10T] x [-1/2, 1/2] x (1/c)[-1/T, 1/T], the box of c_Γ(x, T).
        """
        return cls(t=10 * T, y=0.5, z=1 / (c * T))

    @classmethod
    def fundamental(cls, r: float) -> "Box":
        return cls(t=r, y=0.5, z=r)

    def contains(
        self, t: torch.Tensor, y: torch.Tensor, z: torch.Tensor
    ) -> torch.Tensor:
        return (t.abs() <= self.t) & (y.abs() <= self.y) & (z.abs() <= self.z)


@dataclass(frozen=True)
class InjectivityGrid:
    # Spacing of the samples along t and y.
    step: float = 0.25
    # Least number of samples along t and y.
    min_points: int = 11
    # Samples along z. At least 21, so that on the box of c = 1 the spacing is at most
    # 1/(10T).
    z_points: int = 21
    # Relative accuracy of the bisection on c.
    rel_tol: float = 0.01
    max_size: int = MAX_GRID_SIZE

    def __post_init__(self):
        if not (math.isfinite(self.step) and self.step > 0):
            raise InvalidArgument(f"Grid step must be positive, got step={self.step!r}")
        if self.min_points < 2:
            raise InvalidArgument(
                f"Grid requires min_points >= 2, got min_points={self.min_points}"
            )
        if self.z_points < 21:
            raise InvalidArgument(
                f"Grid requires z_points >= 21, got z_points={self.z_points}"
            )
        if not 0 < self.rel_tol < 1:
            raise InvalidArgument(
                f"Grid requires 0 < rel_tol < 1, got rel_tol={self.rel_tol!r}"
            )

    def axis_points(self, half_width: float) -> int:
        return max(self.min_points, math.ceil(2 * half_width / self.step) + 1)

    def size(self, box: Box) -> int:
        return self.axis_points(box.t) * self.axis_points(box.y) * self.z_points

    def samples(self, box: Box) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """
        Flattened grid coordinates of the box.
        """
        size = self.size(box)
        if size > self.max_size:
            raise ResourceLimit(
                f"Injectivity grid of {size} samples exceeds the cap of {self.max_size}"
            )
        axes = [
            torch.linspace(-half, half, points, dtype=torch.float64)
            for half, points in [
                (box.t, self.axis_points(box.t)),
                (box.y, self.axis_points(box.y)),
                (box.z, self.z_points),
            ]
        ]
        t, y, z = torch.meshgrid(*axes, indexing="ij")
        return t.reshape(-1), y.reshape(-1), z.reshape(-1)

    def spacing(self, box: Box) -> float:
        return max(
            2 * box.t / (self.axis_points(box.t) - 1),
            2 * box.y / (self.axis_points(box.y) - 1),
            2 * box.z / (self.z_points - 1),
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Collision:
    """
    Two box coordinates with γ·α_x(source) = α_x(target) for the lattice element γ.
    """

    gamma: Reducer
    source: tuple[float, float, float]
    target: tuple[float, float, float]


def decompose_box(
    m: torch.Tensor,
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """
    Box coordinates of matrices m = ±exp(tU) exp(yX) exp(zV), which exist exactly when
    the lower right entry is non-zero.

    Returns:
        t (torch.Tensor): Coordinates along U.
        y (torch.Tensor): Coordinates along X.
        z (torch.Tensor): Coordinates along V.
        valid (torch.Tensor): Mask of the matrices that have box coordinates.
    """
    sign = torch.where(m[..., 1, 1] < 0, -1.0, 1.0).unsqueeze(-1).unsqueeze(-1)
    m = m * sign
    d = m[..., 1, 1]
    valid = d > 0
    safe = torch.where(valid, d, torch.ones_like(d))
    return m[..., 0, 1] / safe, -torch.log(safe), m[..., 1, 0] / safe, valid


def find_collision(
    x: SurfacePoint, box: Box, grid: InjectivityGrid = InjectivityGrid()
) -> Collision | None:
    """
    Search for two points of the box that α_x maps to the same point of M.

    The images of the grid samples are reduced and hashed, near pairs from different
    sheets give candidate lattice elements γ, and for every candidate the exact partner
    of each sample, α_x^{-1}(γ α_x(p)), is tested for lying in the box.
    """
    t, y, z = grid.samples(box)
    base = x.reduced
    box_frames = alpha_batch(GroupElement.identity(), t, y, z)
    frames = base.to_tensor() @ box_frames
    reduced, reducers = reduce_batch(frames)
    cells = hash_cells(frame_coordinates(reduced), CELL_FACTOR * grid.spacing(box))
    reps = representatives(cells, reducers)
    i, j = near_pairs(cells[reps], max_candidates=grid.max_size)
    gammas = candidate_elements(reducers[reps], i, j)
    if gammas.size(0) == 0:
        return None
    conjugates = (
        base.inverse().to_tensor() @ gammas.to(torch.float64) @ base.to_tensor()
    )
    chunk = max(1, SOLVE_CHUNK // t.size(0))
    for start in range(0, conjugates.size(0), chunk):
        partners = conjugates[start : start + chunk].unsqueeze(1) @ box_frames
        pt, py, pz, valid = decompose_box(partners)
        inside = valid & box.contains(pt, py, pz)
        hits = torch.nonzero(inside)
        for gamma_index, sample in hits.tolist():
            collision = Collision(
                gamma=tuple(gammas[start + gamma_index].reshape(-1).tolist()),
                source=(t[sample].item(), y[sample].item(), z[sample].item()),
                target=(
                    pt[gamma_index, sample].item(),
                    py[gamma_index, sample].item(),
                    pz[gamma_index, sample].item(),
                ),
            )
            if verify_collision(base, collision):
                return collision
    return None


def verify_collision(x: GroupElement, collision: Collision) -> bool:
    gamma = GroupElement(*[float(entry) for entry in collision.gamma])
    moved = gamma @ alpha_map(x, 1.0, *collision.source)
    target = alpha_map(x, 1.0, *collision.target)
    negated = GroupElement(*[-entry for entry in target.entries()])
    return moved.is_close(target, tol=MATCH_TOL) or moved.is_close(
        negated, tol=MATCH_TOL
    )


def bisect_scale(
    collides: Callable[[float], bool],
    rel_tol: float = 0.01,
    max_scale: float = MAX_SCALE,
) -> float:
    """
    Smallest c >= 1, to the relative tolerance, for which `collides(c)` is False,
    assuming that collisions disappear as c grows.
    """
    if not collides(1.0):
        return 1.0
    lo, hi = 1.0, 2.0
    while collides(hi):
        lo, hi = hi, 2 * hi
        if hi > max_scale:
            raise ResourceLimit(f"No collision free scale below {max_scale:g}")
    while hi - lo > rel_tol * hi:
        mid = (lo + hi) / 2
        if collides(mid):
            lo = mid
        else:
            hi = mid
    return hi


def injectivity_search(
    x: SurfacePoint, T: float, grid: InjectivityGrid = InjectivityGrid()
) -> float:
    """
    Empirical c_Γ(x, T): the smallest c >= 1 for which no collision of α_x is found on
    [-10T, 10T] x [-1/2, 1/2] x (1/c)[-1/T, 1/T]. Collisions missed by the grid can
    only make it smaller, so this is a lower estimate.

    The samples are at most 1/(10T) apart along z. Along t and y they only need to
    surface the candidate lattice elements, whose partners are then solved exactly.
    """
    if not (math.isfinite(T) and T > 0):
        raise InvalidArgument(f"injectivity_search requires T > 0, got T={T!r}")
    return bisect_scale(
        lambda c: find_collision(x, Box.scale_box(T, c), grid) is not None,
        rel_tol=grid.rel_tol,
    )


def injectivity_radius(
    x: SurfacePoint, grid: InjectivityGrid = InjectivityGrid()
) -> float:
    """
    Largest r <= 1 for which α_x is found injective on [-r, r] x [-1/2, 1/2] x [-r, r].
    """
    inverse = bisect_scale(
        lambda c: find_collision(x, Box.fundamental(1 / c), grid) is not None,
        rel_tol=grid.rel_tol,
    )
    return 1 / inverse


def injectivity_scale(
    x: SurfacePoint, grid: InjectivityGrid = InjectivityGrid()
) -> float:
    """
    r(x) e^{d_M(x)}, which is bounded below by C_Γ.
    """
    return injectivity_radius(x, grid) * math.exp(height_distance(x))


def c_gamma_covariance(
    x: SurfacePoint, T: float, y: float, grid: InjectivityGrid = InjectivityGrid()
) -> tuple[float, float]:
    """
    The pair (c(x, T), c(a_y x, e^{-y} T)), which agree up to the grid error.
    """
    moved = reduce(geodesic(x.reduced, y))
    return injectivity_search(x, T, grid), injectivity_search(
        moved, math.exp(-y) * T, grid
    )


@dataclass
class UpperBound:
    value: float
    # max_{0 <= y <= t_probe} d_M(a_y x)
    d_max: float
    # Largest T for which the bound is proven:
    # (C_Γ/10) e^{t_probe - d_M(a_{t_probe} x)}
    T_max: float
    in_regime: bool

    def to_dict(self) -> dict:
        return asdict(self)


def c_gamma_upper(
    x: SurfacePoint,
    T: float,
    t_probe: float,
    calibration: Calibration,
    step: float = 0.05,
) -> UpperBound:
    """
    Upper bound (10/C_Γ)² e^{2 d_M(x, t_probe)} on c_Γ(x, T). It is only proven for
    1 <= T <= T_max, outside of that range the bound is still returned with
    `in_regime = False`.
    """
    _, heights = geodesic_heights(x, t_max=t_probe, step=step)
    d_end = height_distance(reduce(geodesic(x.reduced, t_probe)))
    d_max = max(heights.max().item(), d_end)
    c_gamma = calibration.c_gamma
    T_max = c_gamma / 10 * math.exp(t_probe - d_end)
    return UpperBound(
        value=(10 / c_gamma) ** 2 * math.exp(2 * d_max),
        d_max=d_max,
        T_max=T_max,
        in_regime=1 <= T <= T_max,
    )
