import math
from typing import Callable

import torch

from errors import InvalidArgument
from quadrature import integrate

from .function import SobolevIndex, SpectralFunction, TwistParams
from .operators import solve_flow_coeqn
from .profiles import hat_v_jet, hat_x_jet

# Relative tolerance of the norm quadratures
NORM_TOL = 1e-10


def weighted_integral(
    f: SpectralFunction, integrand: Callable[[torch.Tensor], torch.Tensor]
) -> float:
    """
    ∫ integrand(ξ)·w(ξ) dξ over the window of f, with w the density of the norm of
    its series.
    """
    lo, hi = f.profile.window()
    if f.is_discrete:
        lo = max(lo, 0.0)
    singular = []
    if not f.is_discrete and complex(f.nu).real > 0 and lo <= 0 <= hi:
        singular.append(0.0)
    result = integrate(
        lambda xi: integrand(xi) * f.weight(xi),
        lo,
        hi,
        tol=NORM_TOL,
        breakpoints=[p for p in f.profile.breakpoints() if lo < p < hi],
        singular_points=singular,
    )
    return float(complex(result.value).real)


def squared_norm(f: SpectralFunction) -> float:
    return weighted_integral(f, lambda xi: f(xi).abs() ** 2)


def l2nu_norm(f: SpectralFunction) -> float:
    """
    (∫ |f̂(ξ)|² |ξ|^{-Re ν} dξ)^{1/2} for the principal and complementary series.
    """
    if f.is_discrete:
        raise InvalidArgument(
            f"l2nu_norm applies to the principal and complementary series, "
            f"got series={f.series!r}"
        )
    return math.sqrt(max(squared_norm(f), 0.0))


def discrete_norm(f: SpectralFunction) -> float:
    """
    ((ν - 1)!/(π 2^{ν+1}) ∫_{ℝ⁺} |f̂(ξ)|² ξ^{-ν} dξ)^{1/2} for the discrete and
    mock discrete series.
    """
    if not f.is_discrete:
        raise InvalidArgument(
            f"discrete_norm applies to the discrete and mock discrete series, "
            f"got series={f.series!r}"
        )
    return math.sqrt(max(squared_norm(f), 0.0))


def norm(f: SpectralFunction) -> float:
    """
    The norm ‖f‖₀ of the series of f.
    """
    return discrete_norm(f) if f.is_discrete else l2nu_norm(f)


def lebesgue_norm(f: SpectralFunction) -> float:
    """
    (∫ |f̂(ξ)|² dξ)^{1/2}, without the weight of the series.
    """
    lo, hi = f.profile.window()
    result = integrate(
        lambda xi: f(xi).abs() ** 2,
        lo,
        hi,
        tol=NORM_TOL,
        breakpoints=[p for p in f.profile.breakpoints() if lo < p < hi],
    )
    return math.sqrt(max(float(complex(result.value).real), 0.0))


class FoliatedLaplacian:
    """
    The operators of the rescaled foliated Sobolev norm acting on jets of
    derivatives:

        L = m²I - X̂_𝒯² - V̂_𝒯²,  A = (1 + μ_𝒯²)I + L²

    with X̂_𝒯 = 𝒯^{-1/3}X̂, V̂_𝒯 = 𝒯^{-2/3}V̂ and μ_𝒯 = 𝒯^{-2/3}μ.
    L consumes 4 derivative orders and A consumes 8.
    """

    def __init__(self, f: SpectralFunction, scale: float):
        self.nu = complex(f.nu)
        self.m = f.m
        self.scale = scale
        self.mu_scaled = scale ** (-2 / 3) * f.mu
        self.diagonal = 1 + self.mu_scaled**2

    def laplacian(self, jet: torch.Tensor, xi: torch.Tensor) -> torch.Tensor:
        n = jet.size(0) - 5
        xx = hat_x_jet(hat_x_jet(jet, xi, self.nu), xi, self.nu)
        vv = hat_v_jet(hat_v_jet(jet, xi, self.nu), xi, self.nu)
        return (
            self.m**2 * jet[: n + 1]
            - self.scale ** (-2 / 3) * xx[: n + 1]
            - self.scale ** (-4 / 3) * vv
        )

    def apply(self, jet: torch.Tensor, xi: torch.Tensor) -> torch.Tensor:
        n = jet.size(0) - 9
        return self.diagonal * jet[: n + 1] + self.laplacian(
            self.laplacian(jet, xi), xi
        )


def foliated_norm(f: SpectralFunction, idx: SobolevIndex, scale: float = 1.0) -> float:
    """
    Rescaled foliated Sobolev norm

        |f|_{r,s;𝒯} = ((1 + μ²)^{r/2} ⟨A^{s/2} f̂, f̂⟩)^{1/2}

    computed with integer powers only: for s/2 = 2j it is ‖A^j f̂‖², for
    s/2 = 2j + 1 it is (1 + μ_𝒯²)‖h‖² + ‖Lh‖² with h = A^j f̂.

    Raises:
        InvalidArgument: When f has fewer than 2s derivative oracles.
    """
    if not scale >= 1:
        raise InvalidArgument(f"Scale must be >= 1, got scale={scale!r}")
    if f.order < 2 * idx.s:
        raise InvalidArgument(
            f"Foliated norm with s={idx.s} requires derivative oracles up to order "
            f"{2 * idx.s}, the function has order {f.order}"
        )
    power = idx.s // 2
    ops = FoliatedLaplacian(f, scale)

    def integrand(xi: torch.Tensor) -> torch.Tensor:
        jet = f.profile.derivatives(xi, 2 * idx.s)
        for _ in range(power // 2):
            jet = ops.apply(jet, xi)
        if power % 2 == 0:
            return jet[0].abs() ** 2
        return (
            ops.diagonal * jet[0].abs() ** 2
            + ops.laplacian(jet, xi)[0].abs() ** 2
        )

    value = (1 + f.mu**2) ** (idx.r / 2) * weighted_integral(f, integrand)
    return math.sqrt(max(value, 0.0))


def flow_coeqn_ratio(f: SpectralFunction, p: TwistParams, s: int) -> float:
    """
    Ratio of the two sides of the Sobolev estimate of the flow cohomological
    equation,

        |g|_{0,s;𝒯} 𝒯^{1/3} |λm| / ((1 + |λm|^{-s}) |f|_{r,s+2;𝒯})

    with r = s, or r = 3s for the discrete series. It stays bounded by a constant
    independent of 𝒯 and λm.
    """
    g = solve_flow_coeqn(f, p)
    lam_m = abs(p.lam * p.m)
    r = 3 * s if f.is_discrete else s
    numerator = foliated_norm(g, SobolevIndex(0, s), p.scale) * p.scale ** (1 / 3)
    denominator = (1 + lam_m ** (-s)) / lam_m * foliated_norm(
        f, SobolevIndex(r, s + 2), p.scale
    )
    if denominator == 0:
        raise InvalidArgument("Cohomology ratio of the zero function")
    return numerator / denominator
