import torch

from errors import ResourceLimit
from surface import base_points

# Cell indices are packed into one int64 key with this many bits per axis.
KEY_BITS = 20
KEY_OFFSET = 1 << (KEY_BITS - 1)

NEIGHBOUR_OFFSETS = torch.cartesian_prod(
    *[torch.tensor([-1, 0, 1], dtype=torch.int64)] * 3
)


def frame_coordinates(reduced: torch.Tensor) -> torch.Tensor:
    """
    Coordinates (u, log v, θ) of reduced frames [..., 2, 2], with u + iv the base
    point and θ = atan2(c, d) the angle of the frame.

    Returns:
        coords (torch.Tensor): Coordinates of size [..., 3]
    """
    z = base_points(reduced)
    theta = torch.atan2(reduced[..., 1, 0], reduced[..., 1, 1])
    return torch.stack([z.real, torch.log(z.imag), theta], dim=-1)


def hash_cells(coords: torch.Tensor, cell: float) -> torch.Tensor:
    assert cell > 0, f"Hash cell must be positive, got cell={cell!r}"
    return torch.floor(coords / cell).to(torch.int64)


def cell_keys(cells: torch.Tensor) -> torch.Tensor:
    shifted = cells + KEY_OFFSET
    assert torch.all((shifted >= 0) & (shifted < (1 << KEY_BITS))), (
        "Hash cell index out of the packable range"
    )
    return (
        (shifted[..., 0] << (2 * KEY_BITS))
        | (shifted[..., 1] << KEY_BITS)
        | shifted[..., 2]
    )


def canonical_reducers(reducers: torch.Tensor) -> torch.Tensor:
    """
    Pick the sign of integer matrices [..., 2, 2] with c > 0, or c = 0 and d > 0, as
    γ and -γ act identically.
    """
    c, d = reducers[..., 1, 0], reducers[..., 1, 1]
    flip = (c < 0) | ((c == 0) & (d < 0))
    sign = torch.where(flip, -1, 1).unsqueeze(-1).unsqueeze(-1)
    return reducers * sign


def representatives(cells: torch.Tensor, reducers: torch.Tensor) -> torch.Tensor:
    """
    One sample per (cell, reducer) combination, the first one in sample order. Samples
    in the same cell with the same reducer lie on the same sheet and cannot produce a
    new candidate.

    Returns:
        indices (torch.Tensor): Sorted indices of the kept samples.
    """
    num_samples = cells.size(0)
    rows = torch.cat([cells, reducers.reshape(num_samples, 4)], dim=-1)
    _, inverse = torch.unique(rows, dim=0, return_inverse=True)
    first = torch.full(
        (int(inverse.max().item()) + 1,), num_samples, dtype=torch.int64
    ).scatter_reduce(
        0, inverse, torch.arange(num_samples, dtype=torch.int64), reduce="amin"
    )
    return torch.sort(first).values


def near_pairs(
    cells: torch.Tensor, max_candidates: int
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    All pairs (i, j), i < j, of samples in the same or in adjacent hash cells.

    Args:
        cells (torch.Tensor): Integer cells of the samples [num_samples, 3]
        max_candidates (int): Cap on the number of enumerated pairs.

    Returns:
        i (torch.Tensor): First indices of the pairs.
        j (torch.Tensor): Second indices of the pairs.
    """
    keys = cell_keys(cells)
    sorted_keys, order = torch.sort(keys)
    num_samples = keys.size(0)
    sources, targets = [], []
    enumerated = 0
    for offset in NEIGHBOUR_OFFSETS:
        neighbours = cell_keys(cells + offset)
        lo = torch.searchsorted(sorted_keys, neighbours)
        hi = torch.searchsorted(sorted_keys, neighbours, right=True)
        counts = hi - lo
        total = int(counts.sum().item())
        enumerated += total
        if enumerated >= max_candidates:
            raise ResourceLimit(
                f"Spatial hash produced at least {max_candidates} candidate pairs"
            )
        if total == 0:
            continue
        source = torch.repeat_interleave(torch.arange(num_samples), counts)
        offsets = lo - (torch.cumsum(counts, 0) - counts)
        starts = torch.repeat_interleave(offsets, counts)
        target = order[torch.arange(total) + starts]
        keep = source < target
        sources.append(source[keep])
        targets.append(target[keep])
    if len(sources) == 0:
        empty = torch.empty(0, dtype=torch.int64)
        return empty, empty
    return torch.cat(sources), torch.cat(targets)


def candidate_elements(
    reducers: torch.Tensor, i: torch.Tensor, j: torch.Tensor
) -> torch.Tensor:
    """
    The lattice elements γ = γ_j^{-1} γ_i relating the sheets of near pairs, with
    their inverses, up to sign and without ±I.

    Returns:
        gammas (torch.Tensor): Unique integer matrices [num_elements, 2, 2]
    """
    lhs, rhs = reducers[j], reducers[i]
    inverse = torch.stack(
        [
            torch.stack([lhs[:, 1, 1], -lhs[:, 0, 1]], dim=-1),
            torch.stack([-lhs[:, 1, 0], lhs[:, 0, 0]], dim=-1),
        ],
        dim=-2,
    )
    gammas = inverse @ rhs
    gammas_inverse = torch.stack(
        [
            torch.stack([gammas[:, 1, 1], -gammas[:, 0, 1]], dim=-1),
            torch.stack([-gammas[:, 1, 0], gammas[:, 0, 0]], dim=-1),
        ],
        dim=-2,
    )
    gammas = canonical_reducers(torch.cat([gammas, gammas_inverse]))
    trivial = (
        (gammas[:, 0, 1] == 0)
        & (gammas[:, 1, 0] == 0)
        & (gammas[:, 0, 0] == gammas[:, 1, 1])
        & (gammas[:, 0, 0].abs() == 1)
    )
    gammas = gammas[~trivial]
    if gammas.size(0) == 0:
        return gammas
    return torch.unique(gammas.reshape(-1, 4), dim=0).reshape(-1, 2, 2)
