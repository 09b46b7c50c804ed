import math
from dataclasses import dataclass
from typing import Callable

import torch
from simple_parsing import Serializable

from cusp import CuspFormSpec, lift
from errors import InvalidArgument
from flow import (
    FlowKind,
    GroupElement,
    commutator,
    generator_matrix,
    geodesic,
    horocycle,
    orbit_walk,
)
from record import Check
from spectral import (
    BumpProfile,
    GaussianProfile,
    PolynomialProfile,
    ProductProfile,
    SpectralFunction,
    TwistParams,
    solve_flow_coeqn,
    solve_map_coeqn,
)
from spectral.profiles import ExpMinusOneProfile
from surface import random_reducer, sample_points
from surface.reduce import apply_reducer

from .base import BaseExperiment, Row

# Residuals are compared away from the poles of the multipliers.
POLE_DISTANCE = 0.6


@dataclass
class IdentitiesParams(Serializable):
    # Number of composed flow steps of the determinant drift.
    steps: int = 1_000_000
    # Number of random pairs of the renormalisation and automorphy identities.
    pairs: int = 100
    # Bound of the group identities.
    group_tol: float = 1e-12
    # Bound on the relative change of the lift under SL(2, Z).
    automorphy_tol: float = 1e-9
    # Bound of the multiplier residuals.
    residual_tol: float = 1e-12

    def __post_init__(self):
        if self.steps < 1 or self.pairs < 1:
            raise InvalidArgument(
                f"identities requires steps >= 1 and pairs >= 1, "
                f"got steps={self.steps}, pairs={self.pairs}"
            )


def determinant_drift(kind: FlowKind) -> Callable[[IdentitiesParams, int], float]:
    def drift(params: IdentitiesParams, seed: int) -> float:
        x = sample_points(seed, 1)[0].reduced
        # Times 100 and 10 after 10^6 steps
        step = 1e-4 if kind == "horocycle" else 1e-5
        walked = orbit_walk(x, kind, step=step, num_steps=params.steps)
        return abs(walked.det() - 1)

    return drift


def commutators(params: IdentitiesParams, seed: int) -> float:
    X, U, V = (generator_matrix(tag) for tag in ("X", "U", "V"))
    residuals = [
        commutator(X, U) - 2 * U,
        commutator(X, V) + 2 * V,
        commutator(U, V) - X,
    ]
    return max(r.abs().max().item() for r in residuals)


def renormalisation(params: IdentitiesParams, seed: int) -> float:
    """
    a_{-y} h_t a_y = h_{t e^y}, with the flows acting on the right.
    """
    gen = torch.Generator().manual_seed(seed)
    samples = torch.rand((params.pairs, 2), generator=gen, dtype=torch.float64)
    worst = 0.0
    for y, t in (2 * samples - 1).tolist():
        y, t = 20 * y, 1e6 * t
        lhs = geodesic(horocycle(geodesic(GroupElement.identity(), y), t), -y)
        expected = horocycle(GroupElement.identity(), t * math.exp(y))
        worst = max(worst, lhs.distance(expected))
    return worst


def lift_automorphy(params: IdentitiesParams, seed: int) -> float:
    """
    The lift is invariant under SL(2, Z) acting on the left.
    """
    spec = CuspFormSpec()
    gen = torch.Generator().manual_seed(seed)
    worst = 0.0
    for x in sample_points(seed, params.pairs):
        gamma = random_reducer(gen)
        value = lift(spec, x.reduced)
        moved = lift(spec, apply_reducer(gamma, x.reduced))
        worst = max(worst, abs(moved - value) / abs(value))
    return worst


def flow_coeqn_residual(params: IdentitiesParams, seed: int) -> float:
    """
    𝒯 i(ξ + λm) ĝ = f̂ for the solution of the twisted cohomological equation.
    """
    worst = 0.0
    for p in [
        TwistParams(1.0, 1),
        TwistParams(0.5, -2, 10.0),
        TwistParams(-0.1, 1, 100.0),
    ]:
        lam_m = p.lam * p.m
        f = SpectralFunction(
            series="principal",
            nu=0.5j,
            m=p.m,
            profile=ProductProfile(
                PolynomialProfile([lam_m, 1]), GaussianProfile(center=-lam_m)
            ),
        )
        g = solve_flow_coeqn(f, p)
        xi = torch.linspace(p.pole - 5, p.pole + 5, 401, dtype=torch.float64)
        far = (xi - p.pole).abs() > POLE_DISTANCE
        residual = p.scale * 1j * (xi + lam_m) * g(xi) - f(xi)
        worst = max(worst, residual[far].abs().max().item())
    return worst


def map_coeqn_residual(params: IdentitiesParams, seed: int) -> float:
    """
    (e^{iLξ} - 1) ĝ = f̂ for the solution of the coboundary equation of the time-L
    map.
    """
    worst = 0.0
    for length in [1.0, 2.0]:
        f = SpectralFunction(
            series="principal",
            nu=0j,
            profile=ProductProfile(ExpMinusOneProfile(length), BumpProfile(5, 8)),
        )
        g = solve_map_coeqn(f, length)
        xi = torch.linspace(5, 8, 301, dtype=torch.float64)
        period = 2 * math.pi / length
        zeros = torch.round(xi / period) * period
        far = (xi - zeros).abs() > POLE_DISTANCE
        residual = (torch.exp(1j * length * xi) - 1) * g(xi) - f(xi)
        worst = max(worst, residual[far].abs().max().item())
    return worst


# The exact identities with the parameter holding their bound
IDENTITIES: dict[str, tuple[Callable[[IdentitiesParams, int], float], str]] = {
    "determinant-horocycle": (determinant_drift("horocycle"), "group_tol"),
    "determinant-geodesic": (determinant_drift("geodesic"), "group_tol"),
    "commutators": (commutators, "group_tol"),
    "renormalisation": (renormalisation, "group_tol"),
    "lift-automorphy": (lift_automorphy, "automorphy_tol"),
    "flow-coeqn-residual": (flow_coeqn_residual, "residual_tol"),
    "map-coeqn-residual": (map_coeqn_residual, "residual_tol"),
}


class IdentitiesExperiment(BaseExperiment):
    """
    The exact algebraic identities: determinant preservation over long walks, the
    commutation relations, the renormalisation of the horocycle flow by the
    geodesic flow, the automorphy of the lift and the multiplier residuals of the
    cohomological equations.
    """

    kind = "identities"
    params_class = IdentitiesParams
    parameter_columns = ("identity",)
    params: IdentitiesParams

    def tasks(self) -> list[str]:
        return list(IDENTITIES)

    def measure(self, name: str) -> list[Row]:
        fn, bound_name = IDENTITIES[name]
        return [
            dict(
                identity=name,
                residual=fn(self.params, self.seed),
                bound=getattr(self.params, bound_name),
            )
        ]

    def checks(self, rows: list[Row]) -> list[Check]:
        return [
            Check.at_most(row["identity"], row["residual"], row["bound"])
            for row in rows
        ]
