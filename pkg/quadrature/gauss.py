from functools import cache

import torch


@cache
def gauss_legendre(n: int) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Gauss-Legendre nodes and weights on [-1, 1], computed with the Golub-Welsch
    method: the nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix
    of the Legendre recurrence and the weights are 2 times the squared first
    components of the normalised eigenvectors.

    The rule is exact for polynomials of degree <= 2n - 1.

    Args:
        n (int): Number of nodes.

    Returns:
        nodes (torch.Tensor): Ascending nodes [n] (float64)
        weights (torch.Tensor): Weights [n] (float64)
    """
    assert n >= 1, f"Gauss-Legendre rule requires n >= 1, got n={n}"
    k = torch.arange(1, n, dtype=torch.float64)
    off_diagonal = k / torch.sqrt(4 * k * k - 1)
    jacobi = torch.diag(off_diagonal, diagonal=1)
    jacobi = jacobi + torch.diag(off_diagonal, diagonal=-1)
    nodes, vectors = torch.linalg.eigh(jacobi)
    weights = 2 * vectors[0, :] ** 2
    # Symmetrise, the rule is symmetric around 0 and eigh only gets it up to rounding.
    nodes = (nodes - nodes.flip(0)) / 2
    weights = (weights + weights.flip(0)) / 2
    return nodes, weights
