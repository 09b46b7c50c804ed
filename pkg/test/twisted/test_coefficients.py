import math
from dataclasses import dataclass

import pytest

from cusp import tau_oracle
from errors import InvalidArgument
from twisted import (
    closed_horocycle_integral,
    closed_horocycle_shift_check,
    cusp_coefficient,
    exponent_fit,
)


@dataclass
class CoefficientTestCase:
    n: int
    expected: int
    rel: float = 1e-6

    def assert_coefficient(self):
        value = cusp_coefficient(self.n)
        assert abs(value - self.expected) <= self.rel * abs(self.expected)


TEST_CASES = [
    CoefficientTestCase(n=1, expected=1),
    CoefficientTestCase(n=2, expected=-24),
    CoefficientTestCase(n=5, expected=4830),
    CoefficientTestCase(n=12, expected=-370944),
]


def test_cusp_coefficient():
    for test_case in TEST_CASES:
        test_case.assert_coefficient()


def test_cusp_coefficient_matches_oracle():
    oracle = tau_oracle(20)
    for n in range(1, 21):
        value = cusp_coefficient(n)
        assert abs(value - oracle[n]) <= 1e-6 * abs(oracle[n])
        assert abs(value.imag) <= 1e-6 * abs(oracle[n])


def test_closed_horocycle_rejects():
    with pytest.raises(InvalidArgument):
        closed_horocycle_integral(0)


def test_shift_invariance():
    assert closed_horocycle_shift_check(3, 0.0) == 0
    for n in [2, 3, 5]:
        assert closed_horocycle_shift_check(n, float(n)) <= 1e-10
        assert closed_horocycle_shift_check(n, 0.37 * n) <= 1e-8


def test_exponent_fit_power_laws():
    times = [10.0, 20.0, 40.0, 80.0, 160.0]
    fit = exponent_fit([(t, t**0.5) for t in times])
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(0.0, abs=1e-11)
    assert fit.samples == 5
    assert fit.residual_max <= 1e-12

    fit = exponent_fit([(t, 3.0 * t ** (5 / 6)) for t in times])
    assert fit.slope == pytest.approx(5 / 6, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-11)
    assert fit.predict(320.0) == pytest.approx(3.0 * 320 ** (5 / 6), rel=1e-10)


def test_exponent_fit_rejects():
    with pytest.raises(InvalidArgument):
        exponent_fit([(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)])
    with pytest.raises(InvalidArgument):
        exponent_fit([(1.0, 1.0), (2.0, 0.0), (3.0, 3.0), (4.0, 4.0)])
