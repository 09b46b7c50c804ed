import cmath
import math
from dataclasses import dataclass
from functools import cache

from errors import InvalidArgument, ResourceLimit

MAX_ORACLE_INDEX = 10_000


@dataclass(frozen=True)
class QExpansionOracle:
    """
    Exact q-expansion coefficients τ(1), ..., τ(N) of Δ = q ∏_{n>=1} (1 - q^n)^24.
    """

    max_index: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        assert len(self.coefficients) == self.max_index, (
            f"Oracle with max_index={self.max_index} must hold {self.max_index} "
            f"coefficients, got {len(self.coefficients)}"
        )

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.max_index:
            raise KeyError(f"τ({n}) is outside of the oracle range 1..{self.max_index}")
        return self.coefficients[n - 1]

    def evaluate(self, z: complex) -> complex:
        """
        Truncated series Σ_{n<=N} τ(n) q^n at z.
        """
        q = cmath.exp(2j * math.pi * z)
        out = 0j
        q_n = 1 + 0j
        for tau in self.coefficients:
            q_n *= q
            out += tau * q_n
        return out


def jacobi_triple_series(length: int) -> list[tuple[int, int]]:
    """
    Non-zero terms of ∏_{n>=1} (1 - q^n)^3 = Σ_{m>=0} (-1)^m (2m + 1) q^{m(m+1)/2}
    below q^length, as (exponent, coefficient) pairs.
    """
    terms = []
    m = 0
    while (exponent := m * (m + 1) // 2) < length:
        terms.append((exponent, (-1) ** m * (2 * m + 1)))
        m += 1
    return terms


def multiply_sparse(
    dense: list[int], sparse: list[tuple[int, int]], length: int
) -> list[int]:
    out = [0] * length
    for exponent, coefficient in sparse:
        for i in range(length - exponent):
            if dense[i]:
                out[i + exponent] += coefficient * dense[i]
    return out


@cache
def tau_oracle(N: int) -> QExpansionOracle:
    """
    Ramanujan τ(1..N) by exact integer power-series arithmetic, independent of any
    floating point evaluation of Δ.

    The 24th power of the product is the 8th power of the sparse cube from Jacobi's
    identity, so it takes 8 dense-by-sparse multiplications.

    Args:
        N (int): Number of coefficients, at most 10^4.

    Returns:
        oracle (QExpansionOracle): The coefficients τ(1), ..., τ(N).
    """
    if N < 1:
        raise InvalidArgument(f"tau_oracle requires N >= 1, got N={N}")
    if N > MAX_ORACLE_INDEX:
        raise ResourceLimit(
            f"tau_oracle is limited to N <= {MAX_ORACLE_INDEX}, got N={N}"
        )
    # τ(n) is the coefficient of q^{n-1} in the product.
    cube = jacobi_triple_series(N)
    series = [1] + [0] * (N - 1)
    for _ in range(8):
        series = multiply_sparse(series, cube, N)
    return QExpansionOracle(max_index=N, coefficients=tuple(series))
