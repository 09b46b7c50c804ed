import math
from dataclasses import asdict, dataclass
from typing import Literal

type Relation = Literal["<=", ">="]


@dataclass
class Check:
    """
    A pass/fail comparison of a measured value against a bound.
    """

    name: str
    value: float
    relation: Relation
    bound: float
    passed: bool

    @classmethod
    def at_most(cls, name: str, value: float, bound: float) -> "Check":
        # NaN never passes
        return cls(name, value, "<=", bound, passed=bool(value <= bound))

    @classmethod
    def at_least(cls, name: str, value: float, bound: float) -> "Check":
        return cls(name, value, ">=", bound, passed=bool(value >= bound))

    @classmethod
    def finite(cls, name: str, values: list[float]) -> "Check":
        """
        Number of non-finite values, which must be 0.
        """
        count = sum(1 for value in values if not math.isfinite(value))
        return cls.at_most(name, count, 0)

    def to_dict(self) -> dict:
        return asdict(self)


def all_passed(checks: list[Check]) -> bool:
    return all(check.passed for check in checks)
