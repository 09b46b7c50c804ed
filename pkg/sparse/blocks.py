import math
from dataclasses import asdict, dataclass

import torch

from errors import InvalidArgument


@dataclass
class BlockDecomposition:
    """
    Blocks [N_j, N_{j+1}) of the index range of a sparse sum, short enough that
    n^{1+δ} is close to the arithmetic progression N_j^{1+δ} + k L_j on each block.

    The sequence starts at N_1 = ⌊N^{1-ε}⌋ + 1, continues with
    N_{j+1} = N_j + ⌊N_j^{(1-δ)/2-ε}⌋ and stops at the last N_J <= N, with the step
    L_j = (1+δ) N_j^δ of every block.
    """

    delta: float
    epsilon: float
    N: int
    starts: list[int]
    steps: list[float]

    @property
    def num_blocks(self) -> int:
        """
        Number of complete blocks [N_j, N_{j+1}), J - 1.
        """
        return len(self.starts) - 1

    def block_lengths(self) -> list[int]:
        return [end - start for start, end in zip(self.starts, self.starts[1:])]

    def to_dict(self) -> dict:
        return asdict(self)


def check_parameters(delta: float, epsilon: float):
    if not 0 <= delta < 1:
        raise InvalidArgument(f"Sparse sums require 0 <= δ < 1, got delta={delta!r}")
    if not 0 < epsilon < (1 - delta) / 2:
        raise InvalidArgument(
            f"Block decomposition requires 0 < ε < (1-δ)/2 = {(1 - delta) / 2!r}, "
            f"got epsilon={epsilon!r}"
        )


def venkatesh_blocks(N: int, delta: float, epsilon: float) -> BlockDecomposition:
    check_parameters(delta, epsilon)
    if N < 2:
        raise InvalidArgument(f"Block decomposition requires N >= 2, got N={N}")
    exponent = (1 - delta) / 2 - epsilon
    starts = [math.floor(N ** (1 - epsilon)) + 1]
    while True:
        following = starts[-1] + math.floor(starts[-1] ** exponent)
        if following > N:
            break
        starts.append(following)
    return BlockDecomposition(
        delta=delta,
        epsilon=epsilon,
        N=N,
        starts=starts,
        steps=[(1 + delta) * start**delta for start in starts],
    )


def block_coverage(blocks: BlockDecomposition) -> list[range]:
    """
    The index ranges [N_j, N_{j+1}) of the complete blocks in order, which partition
    [N_1, N_J).
    """
    return [range(start, end) for start, end in zip(blocks.starts, blocks.starts[1:])]


def linearization_error(start: int, k: int, delta: float) -> float:
    """
    |(N_j + k)^{1+δ} - (N_j^{1+δ} + k (1+δ) N_j^δ)|, evaluated relative to N_j^{1+δ}
    so that the leading terms cancel exactly.
    """
    if not 0 <= k <= start:
        raise InvalidArgument(
            f"Linearization requires 0 <= k <= N_j, got k={k} and N_j={start}"
        )
    u = k / start
    relative = math.expm1((1 + delta) * math.log1p(u)) - (1 + delta) * u
    return abs(start ** (1 + delta) * relative)


def linearization_bound(start: int, k: int, delta: float) -> float:
    """
    (1+δ) δ N_j^{δ-1} k², twice the Taylor remainder of t^{1+δ} at N_j.
    """
    return (1 + delta) * delta * start ** (delta - 1) * k**2


def max_linearization_error(blocks: BlockDecomposition) -> float:
    """
    Largest linearization error over all terms of the complete blocks, which is
    reached at the last index of a block.
    """
    return max(
        (
            linearization_error(start, length - 1, blocks.delta)
            for start, length in zip(blocks.starts, blocks.block_lengths())
        ),
        default=0.0,
    )


def progression_times(blocks: BlockDecomposition) -> torch.Tensor:
    """
    The times N_j^{1+δ} + k L_j, 0 <= k < N_{j+1} - N_j, of all complete blocks in
    index order.

    Returns:
        times (torch.Tensor): Times of size [N_J - N_1] (float64)
    """
    lengths = torch.tensor(blocks.block_lengths(), dtype=torch.int64)
    if lengths.numel() == 0:
        return torch.empty(0, dtype=torch.float64)
    starts = torch.tensor(blocks.starts[:-1], dtype=torch.float64)
    steps = torch.tensor(blocks.steps[:-1], dtype=torch.float64)
    block = torch.repeat_interleave(torch.arange(lengths.size(0)), lengths)
    offsets = torch.cumsum(lengths, 0) - lengths
    k = torch.arange(int(lengths.sum().item())) - offsets[block]
    return starts[block] ** (1 + blocks.delta) + k.to(torch.float64) * steps[block]
