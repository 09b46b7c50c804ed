import cmath
import math

import torch

from errors import InvalidArgument

DEFAULT_TRUNCATION = 40


def check_upper_half_plane(z: complex):
    if not z.imag > 0:
        raise InvalidArgument(f"Expected a point with Im z > 0, got z={z!r}")


def required_truncation(z: complex, tol: float = 1e-17) -> int:
    """
    Smallest number of product terms whose dropped tail Σ_{n>N} |q|^n is below `tol`.
    """
    check_upper_half_plane(z)
    q_abs = math.exp(-2 * math.pi * z.imag)
    # |q|^{N+1} / (1 - |q|) < tol
    n = math.log(tol * (1 - q_abs)) / math.log(q_abs) - 1
    return max(1, math.ceil(n))


def eta(z: complex, trunc: int = DEFAULT_TRUNCATION) -> complex:
    """
    Dedekind eta function η(z) = q^{1/24} ∏_{n=1}^{trunc} (1 - q^n) with q = e^{2πiz}.

    Args:
        z (complex): Point of the upper half-plane.
        trunc (int): Number of factors of the product [Default: 40]

    Returns:
        value (complex): η(z), with relative truncation error below 1e-15 for
            Im z >= 0.5.
    """
    check_upper_half_plane(z)
    q = cmath.exp(2j * math.pi * z)
    out = cmath.exp(2j * math.pi * z / 24)
    q_n = 1 + 0j
    for _ in range(trunc):
        q_n *= q
        out *= 1 - q_n
    return out


def eta_batch(z: torch.Tensor, trunc: int = DEFAULT_TRUNCATION) -> torch.Tensor:
    """
    Batched version of `eta` on a complex tensor of upper half-plane points.
    """
    z = z.to(torch.complex128)
    if not torch.all(z.imag > 0):
        raise InvalidArgument(
            f"Expected points with Im z > 0, got min Im z = {z.imag.min().item()}"
        )
    n = torch.arange(1, trunc + 1, dtype=torch.float64)
    q_n = torch.exp(2j * math.pi * n * z.unsqueeze(-1))
    return torch.exp(2j * math.pi * z / 24) * torch.prod(1 - q_n, dim=-1)
