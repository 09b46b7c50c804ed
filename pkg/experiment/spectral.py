import math
import typing
from dataclasses import dataclass
from typing import Literal

import torch
from simple_parsing import Serializable, field

from errors import InvalidArgument
from record import Check
from spectral import (
    BumpProfile,
    GaussianProfile,
    PolynomialProfile,
    ProductProfile,
    SeriesKind,
    SpectralFunction,
    TwistParams,
    flow_coeqn_ratio,
    norm,
    twist_interval,
    u_tau,
    u_tau_bounds,
)

from .base import BaseExperiment, Row, column, rows_where

type UTauSeries = Literal["complementary", "principal", "discrete"]


def bump_intervals(
    seed: int, count: int, lo: float, hi: float
) -> list[tuple[float, float]]:
    """
    Random subintervals [a, b] of [lo, hi], reproducible for the seed.
    """
    gen = torch.Generator().manual_seed(seed)
    uniform = torch.rand((count, 2), generator=gen, dtype=torch.float64)
    width = hi - lo
    starts = lo + 0.9 * width * uniform[:, 0]
    ends = starts + (hi - starts) * (0.1 + 0.9 * uniform[:, 1])
    return list(zip(starts.tolist(), ends.tolist()))


@dataclass
class UTauParams(Serializable):
    # Series whose bumps are scaled.
    series: list[str] = field(
        default_factory=lambda: ["complementary", "principal", "discrete"]
    )
    # Scales τ of the operator.
    taus: list[float] = field(default_factory=lambda: [1.0, 8.0, 64.0])
    # Parameters ν of the complementary series, also used as ν = i·nu for the
    # principal series.
    nus: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75])
    # Twist λ of the operator for the complementary and principal series.
    lam: float = 1.0
    # Parameters ν of the discrete series.
    discrete_nus: list[int] = field(default_factory=lambda: [1, 2])
    # Twist λ of the operator for the discrete series, at least ν + 1.
    discrete_lam: float = 4.0
    # Number of random bumps per series and parameter.
    bumps: int = 20
    # Slack of the norm comparability bounds.
    slack: float = 1e-3
    # Largest accepted deviation from an isometry in the principal series.
    isometry_tol: float = 1e-9

    def __post_init__(self):
        options = typing.get_args(UTauSeries.__value__)
        for series in self.series:
            if series not in options:
                raise InvalidArgument(
                    f"No series for `series={series!r}`, must be one of: "
                    f"{', '.join(options)}"
                )
        if len(self.taus) == 0 or min(self.taus) < 1:
            raise InvalidArgument(f"utau requires τ >= 1, got taus={self.taus}")
        if self.bumps < 1:
            raise InvalidArgument(f"utau requires bumps >= 1, got bumps={self.bumps}")


class UTauExperiment(BaseExperiment):
    """
    Norm ratios ‖U_τ f‖₀/‖f‖₀ of the scaling operator on random bumps. They lie in
    [3^{-1/2}, 3^{1/2}] for the complementary series with support in I_λ, are 1 for
    the principal series and lie within the weight ratio at the ends of the support
    for the discrete series.
    """

    kind = "utau"
    params_class = UTauParams
    parameter_columns = ("series", "nu", "bump", "tau")
    params: UTauParams

    def tasks(self) -> list[tuple[str, float, int]]:
        tasks = []
        for series in self.params.series:
            nus = self.params.discrete_nus if series == "discrete" else self.params.nus
            for nu in nus:
                for bump in range(self.params.bumps):
                    tasks.append((series, float(nu), bump))
        return tasks

    def interval(self, series: str) -> tuple[float, float]:
        if series == "discrete":
            lam = self.params.discrete_lam
            return (lam - 0.5, lam + 0.5)
        return twist_interval(self.params.lam)

    def measure(self, task: tuple[str, float, int]) -> list[Row]:
        series, nu, bump = task
        lo, hi = self.interval(series)
        # The same bumps for every parameter of the series
        a, b = bump_intervals(self.seed, self.params.bumps, lo, hi)[bump]
        kind: SeriesKind = "complementary"
        param: complex = nu
        lam = self.params.lam
        if series == "principal":
            kind, param = "principal", 1j * nu
        elif series == "discrete":
            kind, param, lam = "discrete", int(nu), self.params.discrete_lam
        f = SpectralFunction(series=kind, nu=param, profile=BumpProfile(a, b))
        lower, upper = u_tau_bounds(kind, param, lam)
        f_norm = norm(f)
        rows = []
        for tau in sorted(set(self.params.taus)):
            ratio = norm(u_tau(f, tau, lam)) / f_norm
            rows.append(
                dict(
                    series=series,
                    nu=nu,
                    bump=bump,
                    tau=tau,
                    lo=a,
                    hi=b,
                    ratio=ratio,
                    lower=lower,
                    upper=upper,
                )
            )
        return rows

    def checks(self, rows: list[Row]) -> list[Check]:
        slack = self.params.slack
        checks = []
        complementary = column(rows_where(rows, series="complementary"), "ratio")
        if len(complementary) > 0:
            checks.append(
                Check.at_least(
                    "complementary min ratio", min(complementary), 3**-0.5 - slack
                )
            )
            checks.append(
                Check.at_most(
                    "complementary max ratio", max(complementary), 3**0.5 + slack
                )
            )
        principal = column(rows_where(rows, series="principal"), "ratio")
        if len(principal) > 0:
            checks.append(
                Check.at_most(
                    "principal isometry",
                    max(abs(ratio - 1) for ratio in principal),
                    self.params.isometry_tol,
                )
            )
        discrete = rows_where(rows, series="discrete")
        if len(discrete) > 0:
            margin = min(
                min(row["ratio"] - row["lower"], row["upper"] - row["ratio"])
                for row in discrete
            )
            checks.append(Check.at_least("discrete bound margin", margin, -slack))
        return checks


def shifted_bump(lam_m: float) -> SpectralFunction:
    # Supported to the right of the pole -λm
    return SpectralFunction(
        series="principal",
        nu=0.5j,
        profile=BumpProfile(-lam_m + 0.5, -lam_m + 1.5),
    )


def vanishing_bump(lam_m: float) -> SpectralFunction:
    return SpectralFunction(
        series="principal",
        nu=0.5j,
        profile=ProductProfile(
            PolynomialProfile([lam_m, 1]), BumpProfile(-lam_m - 1, -lam_m + 1)
        ),
    )


def vanishing_gaussian(lam_m: float) -> SpectralFunction:
    return SpectralFunction(
        series="principal",
        nu=0j,
        profile=ProductProfile(
            PolynomialProfile([lam_m, 1]), GaussianProfile(center=-lam_m)
        ),
    )


def discrete_bump(lam_m: float) -> SpectralFunction:
    # The pole λm of the twist -λm lies inside the support, where f vanishes.
    return SpectralFunction(
        series="discrete",
        nu=1,
        profile=ProductProfile(
            PolynomialProfile([-lam_m, 1]), BumpProfile(lam_m / 2, 3 * lam_m / 2)
        ),
    )


# Test functions annihilated by the invariant distribution of the twist λm, the
# sign is the one of the twist.
COEQN_FAMILIES = {
    "bump": (shifted_bump, 1),
    "vanishing-bump": (vanishing_bump, 1),
    "vanishing-gaussian": (vanishing_gaussian, 1),
    "discrete": (discrete_bump, -1),
}


def ratio_spread(ratios: list[float]) -> float:
    finite = [ratio for ratio in ratios if math.isfinite(ratio) and ratio > 0]
    return max(finite) / min(finite) if len(finite) > 0 else math.inf


@dataclass
class CoeqnParams(Serializable):
    families: list[str] = field(default_factory=lambda: list(COEQN_FAMILIES))
    # Rescalings 𝒯 of the foliated norms.
    scales: list[float] = field(default_factory=lambda: [1.0, 10.0, 100.0])
    # Values of |λm|, with m = 1.
    lam_ms: list[float] = field(default_factory=lambda: [0.1, 1.0, 10.0])
    # Sobolev orders s.
    orders: list[int] = field(default_factory=lambda: [2, 4])
    # Largest accepted max/min of the ratios, over the sweep and within a family.
    max_spread: float = 10.0

    def __post_init__(self):
        for family in self.families:
            if family not in COEQN_FAMILIES:
                raise InvalidArgument(
                    f"No test family for `family={family!r}`, must be one of: "
                    f"{', '.join(COEQN_FAMILIES)}"
                )
        if len(self.lam_ms) == 0 or min(self.lam_ms) <= 0:
            raise InvalidArgument(f"coeqn requires |λm| > 0, got lam_ms={self.lam_ms}")
        if len(self.orders) == 0 or min(self.orders) < 0:
            raise InvalidArgument(f"coeqn requires s >= 0, got orders={self.orders}")
        if any(s % 2 != 0 for s in self.orders):
            raise InvalidArgument(f"coeqn requires even s, got orders={self.orders}")


class CoeqnExperiment(BaseExperiment):
    """
    Sobolev ratio |g|_{0,s;𝒯} 𝒯^{1/3} |λm| / ((1 + |λm|^{-s}) |f|_{r,s+2;𝒯}) of the
    solution g of the twisted cohomological equation, which stays within a constant
    factor over the sweep.
    """

    kind = "coeqn"
    params_class = CoeqnParams
    parameter_columns = ("family", "scale", "lam_m", "s")
    params: CoeqnParams

    def tasks(self) -> list[tuple[str, float, float, int]]:
        return [
            (family, scale, lam_m, s)
            for family in self.params.families
            for scale in sorted(set(self.params.scales))
            for lam_m in sorted(set(self.params.lam_ms))
            for s in sorted(set(self.params.orders))
        ]

    def measure(self, task: tuple[str, float, float, int]) -> list[Row]:
        family, scale, lam_m, s = task
        create, sign = COEQN_FAMILIES[family]
        f = create(lam_m)
        p = TwistParams(sign * lam_m, 1, scale=scale)
        ratio = flow_coeqn_ratio(f, p, s)
        return [dict(family=family, scale=scale, lam_m=lam_m, s=s, ratio=ratio)]

    def checks(self, rows: list[Row]) -> list[Check]:
        ratios = column(rows, "ratio")
        checks = [
            Check.finite("non-finite ratios", ratios),
            Check.at_most("ratio spread", ratio_spread(ratios), self.params.max_spread),
        ]
        for family in self.params.families:
            spread = ratio_spread(column(rows_where(rows, family=family), "ratio"))
            checks.append(
                Check.at_most(f"{family} ratio spread", spread, self.params.max_spread)
            )
        return checks
