import math

import torch

from flow import GroupElement

from .reduce import IDENTITY_REDUCER, Reducer, SurfacePoint, reduce

# Heights are drawn with density proportional to v^{-2} on [1, MAX_HEIGHT].
MAX_HEIGHT = 10.0


def sample_frames(seed: int, count: int) -> torch.Tensor:
    """
    Draw frames g = [[√v, u/√v], [0, 1/√v]]·k_θ with base point u + iv, where u is
    uniform in [-1/2, 1/2], v has density ∝ v^{-2} on [1, 10] (inverse CDF) and the
    angle θ is uniform.

    Returns:
        frames (torch.Tensor): Matrices of size [count, 2, 2] (float64)
    """
    gen = torch.Generator().manual_seed(seed)
    uniform = torch.rand((count, 3), generator=gen, dtype=torch.float64)
    u = uniform[:, 0] - 0.5
    v = 1 / (1 - (1 - 1 / MAX_HEIGHT) * uniform[:, 1])
    theta = 2 * math.pi * uniform[:, 2]
    sqrt_v = torch.sqrt(v)
    cos, sin = torch.cos(theta), torch.sin(theta)
    frames = torch.empty((count, 2, 2), dtype=torch.float64)
    frames[:, 0, 0] = sqrt_v * cos + u / sqrt_v * sin
    frames[:, 0, 1] = -sqrt_v * sin + u / sqrt_v * cos
    frames[:, 1, 0] = sin / sqrt_v
    frames[:, 1, 1] = cos / sqrt_v
    return frames


def sample_points(seed: int, count: int) -> list[SurfacePoint]:
    frames = sample_frames(seed, count)
    return [reduce(GroupElement.from_tensor(frame)) for frame in frames]


def sample_point(seed: int) -> SurfacePoint:
    """
    Deterministic pseudo-random point of M, the first draw of `sample_points` for the
    same seed.
    """
    return sample_points(seed, 1)[0]


def random_reducer(gen: torch.Generator, depth: int = 3) -> Reducer:
    """
    Random element of SL(2, Z), the product of `depth` factors S T^k with k uniform
    in [-3, 3].
    """
    reducer = IDENTITY_REDUCER
    for shift in torch.randint(-3, 4, (depth,), generator=gen).tolist():
        a, b, c, d = reducer
        a, b = a + shift * c, b + shift * d
        reducer = (-c, -d, a, b)
    return reducer
