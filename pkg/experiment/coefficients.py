import math
from dataclasses import dataclass

from simple_parsing import Serializable, field

from cusp import CuspFormSpec, tau_oracle
from errors import InvalidArgument
from record import Check
from twisted import (
    QuadratureSpec,
    closed_horocycle_shift_check,
    cusp_coefficient,
    exponent_fit,
)

from .base import BaseExperiment, Row, column


@dataclass
class TauParams(Serializable):
    # Coefficients a_1, ..., a_{n_max} are recovered.
    n_max: int = 20
    # Relative tolerance of the closed horocycle quadrature.
    tol: float = 1e-12
    # Largest accepted relative error against the exact τ(n).
    max_rel_err: float = 1e-6

    def __post_init__(self):
        if self.n_max < 1:
            raise InvalidArgument(f"tau requires n_max >= 1, got n_max={self.n_max}")


class TauExperiment(BaseExperiment):
    """
    Recover τ(n) from twisted integrals along the closed horocycles and compare them
    to the exact power series coefficients.
    """

    kind = "tau"
    params_class = TauParams
    parameter_columns = ("n",)
    params: TauParams

    def tasks(self) -> list[int]:
        return list(range(1, self.params.n_max + 1))

    def measure(self, n: int) -> list[Row]:
        computed = cusp_coefficient(n, quad=QuadratureSpec(tol=self.params.tol))
        oracle = tau_oracle(self.params.n_max)[n]
        return [
            dict(
                n=n,
                computed=computed.real,
                computed_im=computed.imag,
                oracle=oracle,
                rel_err=abs(computed - oracle) / abs(oracle),
            )
        ]

    def checks(self, rows: list[Row]) -> list[Check]:
        return [
            Check.at_most(
                "max relative error",
                max(column(rows, "rel_err")),
                self.params.max_rel_err,
            )
        ]


@dataclass
class GoodBoundParams(Serializable):
    # Smallest exponent j of the indices n = 2^j.
    j_min: int = 1
    # Largest exponent j of the indices n = 2^j.
    j_max: int = 9
    # Slack added to the bounds on the fitted slopes.
    slack: float = 0.05
    tol: float = 1e-12

    def __post_init__(self):
        if not (0 <= self.j_min and self.j_max - self.j_min + 1 >= 4):
            raise InvalidArgument(
                "good-bound requires 0 <= j_min and at least 4 indices, "
                f"got j_min={self.j_min}, j_max={self.j_max}"
            )


class GoodBoundExperiment(BaseExperiment):
    """
    Growth of |a_n| along n = 2^j. The coefficient bound n^{k/2 - 1/6} (1+log n)^{1/2}
    comes from the T^{5/6} growth of the twisted integral of the lift along the
    closed horocycle of length n, whose modulus is |a_n| e^{-2π} n^{1 - k/2}.
    """

    kind = "good-bound"
    params_class = GoodBoundParams
    parameter_columns = ("n",)
    params: GoodBoundParams

    def tasks(self) -> list[int]:
        return [2**j for j in range(self.params.j_min, self.params.j_max + 1)]

    def measure(self, n: int) -> list[Row]:
        spec = CuspFormSpec()
        a_n = cusp_coefficient(n, spec, QuadratureSpec(tol=self.params.tol))
        magnitude = abs(a_n)
        return [
            dict(
                n=n,
                coefficient=a_n.real,
                coefficient_im=a_n.imag,
                magnitude=magnitude,
                lift_integral=magnitude
                * math.exp(-2 * math.pi)
                * n ** (1 - spec.weight / 2),
            )
        ]

    def checks(self, rows: list[Row]) -> list[Check]:
        weight = CuspFormSpec().weight
        ns = column(rows, "n")
        coefficients = exponent_fit(list(zip(ns, column(rows, "magnitude"))))
        integrals = exponent_fit(list(zip(ns, column(rows, "lift_integral"))))
        return [
            Check.at_most(
                "coefficient slope",
                coefficients.slope,
                weight / 2 - 1 / 6 + self.params.slack,
            ),
            Check.at_most(
                "twisted integral slope", integrals.slope, 5 / 6 + self.params.slack
            ),
        ]


@dataclass
class ShiftParams(Serializable):
    # Periods n of the closed horocycles.
    ns: list[int] = field(default_factory=lambda: [2, 3, 5])
    # The starting point is moved by s = shift·n along the horocycle.
    shift: float = 0.37
    tol: float = 1e-12
    # Largest accepted relative change of the modulus.
    max_change: float = 1e-8

    def __post_init__(self):
        if len(self.ns) == 0 or min(self.ns) < 1:
            raise InvalidArgument(f"shift requires periods n >= 1, got ns={self.ns}")


class ShiftExperiment(BaseExperiment):
    """
    The modulus of the twisted integral along a closed horocycle does not depend on
    the starting point.
    """

    kind = "shift"
    params_class = ShiftParams
    parameter_columns = ("n",)
    params: ShiftParams

    def tasks(self) -> list[int]:
        return sorted(set(self.params.ns))

    def measure(self, n: int) -> list[Row]:
        s = self.params.shift * n
        change = closed_horocycle_shift_check(
            n, s, quad=QuadratureSpec(tol=self.params.tol)
        )
        return [dict(n=n, s=s, change=change)]

    def checks(self, rows: list[Row]) -> list[Check]:
        return [
            Check.at_most(
                "max relative change",
                max(column(rows, "change")),
                self.params.max_change,
            )
        ]
