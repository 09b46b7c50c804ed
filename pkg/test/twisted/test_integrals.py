import cmath
import math

import pytest

from cusp import ConstantObservable, DeltaObservable
from errors import InvalidArgument, OutOfRegime, UseUntwistedPath
from surface import sample_point
from twisted import (
    QuadratureSpec,
    additivity_check,
    ergodic_integral,
    rescaled_integral_check,
    small_lambda_identity_check,
    twisted_orbit_integral,
)

ONE = ConstantObservable(1.0)
DELTA = DeltaObservable()


def test_constant_full_oscillations():
    x = sample_point(1)
    for lam, periods in [(1.0, 5), (-2.5, 3)]:
        T = 2 * math.pi * periods / abs(lam)
        result = twisted_orbit_integral(x, ONE, lam, T)
        assert result.converged
        assert abs(result.value) <= 1e-9 * T


def test_constant_closed_form():
    x = sample_point(2)
    for lam, T in [(0.7, 13.3), (-3.1, 2.0), (10.0, 50.0)]:
        result = twisted_orbit_integral(x, ONE, lam, T)
        expected = (cmath.exp(1j * lam * T) - 1) / (1j * lam)
        assert abs(result.value - expected) <= 1e-9 * max(1.0, abs(expected))
        assert result.err_est <= 1e-6


def test_delta_self_convergence():
    x = sample_point(3)
    coarse = twisted_orbit_integral(x, DELTA, 1.0, 100.0)
    fine = twisted_orbit_integral(x, DELTA, 1.0, 100.0, QuadratureSpec(density=16))
    assert coarse.converged and fine.converged
    assert abs(coarse.value - fine.value) <= 1e-8
    tighter = twisted_orbit_integral(x, DELTA, 1.0, 100.0, QuadratureSpec(tol=1e-12))
    assert abs(tighter.value - coarse.value) <= max(coarse.err_est, 1e-12)


def test_untwisted_path():
    x = sample_point(4)
    with pytest.raises(UseUntwistedPath):
        twisted_orbit_integral(x, ONE, 0.0, 10.0)
    result = ergodic_integral(x, ONE, 10.0)
    assert result.lam == 0
    assert result.value == pytest.approx(10.0, rel=1e-12)
    with pytest.raises(InvalidArgument):
        ergodic_integral(x, ONE, -1.0)


def test_small_lambda_identity():
    x = sample_point(5)
    assert small_lambda_identity_check(x, ConstantObservable(0.0), 0.01, 100.0) == 0
    assert small_lambda_identity_check(x, ONE, 0.02, 100.0) <= 1e-9
    assert small_lambda_identity_check(x, DELTA, 0.01, 100.0) <= 1e-7
    with pytest.raises(OutOfRegime):
        small_lambda_identity_check(x, ONE, 1.0, 10.0)


def test_additivity():
    x = sample_point(6)
    assert additivity_check(x, DELTA, 0.5, 7.0, 11.0) <= 1e-8
    assert additivity_check(x, ONE, 2.0, 3.0, 4.5) <= 1e-9


def test_rescaled_integral():
    x = sample_point(7)
    for lam in [0.1, 0.5, -0.5]:
        assert rescaled_integral_check(x, DELTA, lam, 20.0) <= 1e-8


def test_quadrature_spec_validation():
    with pytest.raises(InvalidArgument):
        QuadratureSpec(density=4)
    with pytest.raises(InvalidArgument):
        QuadratureSpec(tol=1e-2)
    with pytest.raises(InvalidArgument):
        QuadratureSpec(tol=0.0)
    with pytest.raises(InvalidArgument):
        QuadratureSpec(max_depth=0)
    spec = QuadratureSpec()
    # 8 nodes per unit time dominate for |λ| < 2π
    assert spec.initial_panels(100.0, 1.0) == 50
    assert spec.initial_panels(100.0, 20 * math.pi) == 500
