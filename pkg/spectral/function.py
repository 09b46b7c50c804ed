import math
from dataclasses import dataclass
from typing import Literal

import torch

from errors import InvalidArgument, UnsupportedIndex

from .profiles import Interval, Profile

type SeriesKind = Literal["principal", "complementary", "discrete", "mock-discrete"]

SERIES_KINDS: tuple[SeriesKind, ...] = (
    "principal",
    "complementary",
    "discrete",
    "mock-discrete",
)


@dataclass(frozen=True)
class TwistParams:
    """
    Twist λ, circle index m and renormalisation scale 𝒯 of a twisted horocycle
    integral.

    λ = 0 is accepted so that the untwisted cases can be reached, the operations
    that need λm != 0 reject it themselves.
    """

    lam: float
    m: int
    scale: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise InvalidArgument(f"Twist must be finite, got lam={self.lam!r}")
        if self.m == 0:
            raise InvalidArgument("Circle index m must be nonzero")
        if not self.scale >= 1:
            raise InvalidArgument(f"Scale must be >= 1, got scale={self.scale!r}")

    @property
    def pole(self) -> float:
        return -self.lam * self.m


@dataclass(frozen=True)
class SobolevIndex:
    r: float = 0.0
    s: int = 0

    def __post_init__(self):
        if self.r < 0:
            raise InvalidArgument(f"Sobolev index r must be >= 0, got r={self.r!r}")
        if self.s < 0:
            raise InvalidArgument(f"Sobolev index s must be >= 0, got s={self.s!r}")
        if self.s % 2 != 0:
            raise UnsupportedIndex(
                f"Foliated norms are available for even s only, got s={self.s}"
            )


@dataclass(frozen=True)
class SpectralFunction:
    """
    Fourier-side model of a vector in an irreducible representation: the profile
    f̂(ξ) in the series with parameter ν and circle index m.

    - principal: ν ∈ iℝ, weight 1
    - complementary: ν ∈ (0, 1), weight |ξ|^{-ν}
    - discrete: ν ∈ {1, 2, ...}, supported in ξ > 0
    - mock-discrete: ν = 0, supported in ξ > 0
    """

    series: SeriesKind
    nu: complex
    profile: Profile
    m: int = 1

    def __post_init__(self):
        nu = complex(self.nu)
        match self.series:
            case "principal":
                if nu.real != 0:
                    raise InvalidArgument(
                        f"Principal series requires ν ∈ iℝ, got nu={self.nu!r}"
                    )
            case "complementary":
                if nu.imag != 0 or not 0 < nu.real < 1:
                    raise InvalidArgument(
                        f"Complementary series requires 0 < ν < 1, got nu={self.nu!r}"
                    )
            case "discrete":
                if nu.imag != 0 or nu.real < 1 or nu.real != int(nu.real):
                    raise InvalidArgument(
                        "Discrete series requires ν ∈ {1, 2, ...}, "
                        f"got nu={self.nu!r}"
                    )
            case "mock-discrete":
                if nu != 0:
                    raise InvalidArgument(
                        f"Mock discrete series requires ν = 0, got nu={self.nu!r}"
                    )
            case _:
                raise InvalidArgument(
                    f"No series for `series={self.series!r}`, "
                    f"must be one of: {', '.join(SERIES_KINDS)}"
                )
        if self.is_discrete and not self.profile.support[0] > 0:
            raise InvalidArgument(
                f"{self.series} series requires support in (0, ∞), "
                f"got {self.profile.support}"
            )

    @property
    def is_discrete(self) -> bool:
        return self.series in ("discrete", "mock-discrete")

    @property
    def mu(self) -> float:
        """
        Casimir parameter μ = 1 - ν², real in every series.
        """
        return (1 - complex(self.nu) ** 2).real

    @property
    def support(self) -> Interval:
        return self.profile.support

    @property
    def order(self) -> int:
        return self.profile.order

    def with_profile(self, profile: Profile) -> "SpectralFunction":
        return SpectralFunction(
            series=self.series, nu=self.nu, profile=profile, m=self.m
        )

    def __call__(self, xi: torch.Tensor | float, k: int = 0) -> torch.Tensor:
        return self.profile(torch.as_tensor(xi, dtype=torch.float64), k)

    def value_at(self, xi: float) -> complex:
        return complex(self(torch.tensor([xi], dtype=torch.float64))[0].item())

    def weight(self, xi: torch.Tensor) -> torch.Tensor:
        """
        Density of the norm on the Fourier side.
        """
        nu = complex(self.nu)
        if self.is_discrete:
            n = int(nu.real)
            # (-1)! is taken to be 1 for the mock discrete series.
            factorial = math.factorial(n - 1) if n >= 1 else 1
            constant = factorial / (math.pi * 2 ** (n + 1))
            positive = xi > 0
            safe = torch.where(positive, xi, torch.ones_like(xi))
            return torch.where(
                positive, constant * safe ** (-n), torch.zeros_like(xi)
            )
        if nu.real == 0:
            return torch.ones_like(xi)
        return xi.abs() ** (-nu.real)
