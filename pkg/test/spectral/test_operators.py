import cmath
import math
from dataclasses import dataclass

import pytest
import torch

from errors import (
    InvalidArgument,
    NotACoboundary,
    NotAMapCoboundary,
    UndefinedDistribution,
)
from spectral import (
    BumpProfile,
    GaussianProfile,
    PolynomialProfile,
    PowerProfile,
    ProductProfile,
    SpectralFunction,
    TwistParams,
    apply_hatU,
    apply_hatV,
    apply_hatX,
    central_multiplier,
    eval_invariant_distribution,
    green_operator,
    l2nu_norm,
    map_invariant_distributions,
    operator_A,
    operator_A_inverse,
    solve_flow_coeqn,
    solve_map_coeqn,
    u_tau,
)
from spectral.profiles import ExpMinusOneProfile


def principal(profile, nu: complex = 0j, m: int = 1) -> SpectralFunction:
    return SpectralFunction(series="principal", nu=nu, profile=profile, m=m)


def max_error(values: torch.Tensor, expected: torch.Tensor) -> float:
    return (values - expected).abs().max().item()


def assert_derivatives_consistent(f: SpectralFunction, points: list[float]):
    """
    Derivative oracles agree with centered differences of the oracle one order
    below, with an observed convergence order of at least 1.8.
    """
    checked = 0
    for x in points:
        xi = torch.tensor([x], dtype=torch.float64)
        for k in (1, 2):
            exact = f(xi, k)[0]
            errors = []
            for h in (1e-3, 5e-4):
                diff = (f(xi + h, k - 1)[0] - f(xi - h, k - 1)[0]) / (2 * h)
                errors.append(abs(diff - exact).item())
            if errors[0] > 1e-10 * max(1.0, abs(exact.item())):
                assert math.log2(errors[0] / errors[1]) >= 1.8, (
                    f"Derivative {k} inconsistent at ξ={x}: errors {errors}"
                )
                checked += 1
    assert checked > 0


def test_hatX_monomials():
    xi = torch.linspace(-2, 2, 9, dtype=torch.float64)
    f = principal(PolynomialProfile([0, 1]))
    assert max_error(apply_hatX(f)(xi), 3 * xi.to(torch.complex128)) <= 1e-14
    nu = 0.7j
    constant = principal(PolynomialProfile([2.5]), nu=nu)
    expected = torch.full_like(xi, 2.5, dtype=torch.complex128) * (1 - nu)
    assert max_error(apply_hatX(constant)(xi), expected) <= 1e-14


def test_hatV_monomials():
    xi = torch.linspace(-2, 2, 9, dtype=torch.float64)
    f = principal(PolynomialProfile([0, 0, 1]))
    assert max_error(apply_hatV(f)(xi), -4j * xi.to(torch.complex128)) <= 1e-14
    constant = principal(PolynomialProfile([2.5]), nu=0.3j)
    assert apply_hatV(constant)(xi).abs().max().item() == 0.0


def test_hatV_inverse_power():
    nu = 0.3
    f = SpectralFunction(series="complementary", nu=nu, profile=PowerProfile(-1.0))
    xi = torch.linspace(0.5, 3, 11, dtype=torch.float64)
    expected = -1j * (1 + nu) / xi**2
    assert max_error(apply_hatV(f)(xi), expected.to(torch.complex128)) <= 1e-13


def test_commutators_on_cubic():
    nu = 0.4j
    f = principal(PolynomialProfile([1, 2, -1, 0.5]), nu=nu)
    xi = torch.linspace(-3, 3, 13, dtype=torch.float64)
    xv = apply_hatX(apply_hatV(f))(xi) - apply_hatV(apply_hatX(f))(xi)
    assert max_error(xv, -2 * apply_hatV(f)(xi)) <= 1e-12
    xu = apply_hatX(apply_hatU(f))(xi) - apply_hatU(apply_hatX(f))(xi)
    assert max_error(xu, 2 * apply_hatU(f)(xi)) <= 1e-12


def test_insufficient_order():
    f = principal(BumpProfile(1, 2, order=1))
    apply_hatX(f)
    with pytest.raises(InvalidArgument):
        apply_hatV(f)
    with pytest.raises(InvalidArgument):
        apply_hatX(apply_hatX(f))


def test_invariant_distribution():
    gaussian = principal(GaussianProfile(center=-1.0))
    assert eval_invariant_distribution(gaussian, TwistParams(1.0, 1)) == pytest.approx(
        1.0, abs=1e-15
    )
    away = principal(BumpProfile(1, 2))
    assert eval_invariant_distribution(away, TwistParams(1.0, 1)) == 0
    discrete = SpectralFunction(series="discrete", nu=2, profile=BumpProfile(0.5, 2))
    assert eval_invariant_distribution(discrete, TwistParams(-1.0, 1)) == 0
    assert eval_invariant_distribution(discrete, TwistParams(0.0, 1)) == 0
    mock = SpectralFunction(series="mock-discrete", nu=0, profile=BumpProfile(0.5, 2))
    with pytest.raises(UndefinedDistribution):
        eval_invariant_distribution(mock, TwistParams(0.0, 3))


def test_distribution_annihilates_twisted_generator():
    p = TwistParams(0.7, 2)
    for profile in [GaussianProfile(center=-1.0, width=0.5), BumpProfile(-3, 1)]:
        g = principal(profile, nu=0.2j)
        # i(ξ + λm)ĝ
        twisted = g.with_profile(
            ProductProfile(PolynomialProfile([1j * p.lam * p.m, 1j]), g.profile)
        )
        assert abs(eval_invariant_distribution(twisted, p)) <= 1e-12


@dataclass
class FlowCoeqnTestCase:
    lam: float
    m: int
    scale: float
    bump: tuple[float, float]
    nu: complex = 0.5j

    def assert_cancellation(self):
        lam_m = self.lam * self.m
        bump = BumpProfile(*self.bump)
        f = principal(
            ProductProfile(PolynomialProfile([lam_m, 1]), bump), nu=self.nu, m=self.m
        )
        g = solve_flow_coeqn(f, TwistParams(self.lam, self.m, self.scale))
        xi = torch.linspace(self.bump[0], self.bump[1], 201, dtype=torch.float64)
        for k in (0, 1):
            expected = -1j * bump(xi, k) / self.scale
            assert max_error(g(xi, k), expected) <= 1e-9

    def assert_residual(self):
        p = TwistParams(self.lam, self.m, self.scale)
        lam_m = self.lam * self.m
        f = principal(
            ProductProfile(PolynomialProfile([lam_m, 1]), GaussianProfile(-lam_m)),
            nu=self.nu,
            m=self.m,
        )
        g = solve_flow_coeqn(f, p)
        xi = torch.linspace(p.pole - 5, p.pole + 5, 401, dtype=torch.float64)
        far = (xi - p.pole).abs() > 0.6
        # 𝒯·i(ξ + λm)·ĝ reproduces f̂
        residual = self.scale * 1j * (xi + lam_m) * g(xi)
        assert max_error(residual[far], f(xi)[far]) <= 1e-12
        # The filled value at the pole matches both one-sided limits
        at_pole = g.value_at(p.pole)
        for side in (-1, 1):
            h = side * 1e-5

            def direct(step: float) -> complex:
                x = torch.tensor([p.pole + step], dtype=torch.float64)
                return (f(x) / (1j * self.scale * (x + lam_m)))[0].item()

            limit = 2 * direct(h / 2) - direct(h)
            assert abs(limit - at_pole) <= 1e-8


TEST_CASES = [
    FlowCoeqnTestCase(lam=1.0, m=1, scale=1.0, bump=(-2.0, 0.5)),
    FlowCoeqnTestCase(lam=0.5, m=-2, scale=10.0, bump=(0.2, 2.0)),
    FlowCoeqnTestCase(lam=-0.1, m=1, scale=100.0, bump=(-1.0, 1.0), nu=0j),
]


def test_flow_coeqn_cancellation():
    for test_case in TEST_CASES:
        test_case.assert_cancellation()


def test_flow_coeqn_residual():
    for test_case in TEST_CASES:
        test_case.assert_residual()


def test_flow_coeqn_away_from_pole():
    p = TwistParams(1.0, 1, scale=10.0)
    f = principal(BumpProfile(1, 2))
    g = solve_flow_coeqn(f, p)
    xi = torch.linspace(1, 2, 51, dtype=torch.float64)
    expected = -1j * f(xi) / (p.scale * (xi + 1))
    assert max_error(g(xi), expected) <= 1e-15


def test_flow_coeqn_rejects():
    with pytest.raises(NotACoboundary):
        solve_flow_coeqn(principal(GaussianProfile(-1.0)), TwistParams(1.0, 1))
    # Discrete series with the pole inside the support
    discrete = SpectralFunction(series="discrete", nu=1, profile=BumpProfile(0.5, 2))
    with pytest.raises(NotACoboundary):
        solve_flow_coeqn(discrete, TwistParams(-1.0, 1))
    vanishing = discrete.with_profile(
        ProductProfile(PolynomialProfile([-1, 1]), BumpProfile(0.5, 2))
    )
    solve_flow_coeqn(vanishing, TwistParams(-1.0, 1))


def test_flow_coeqn_derivatives():
    p = TwistParams(1.0, 1, scale=3.0)
    f = principal(
        ProductProfile(PolynomialProfile([1, 1]), GaussianProfile(-0.5)), nu=0.1j
    )
    g = solve_flow_coeqn(f, p)
    # Both next to the pole (filled) and away from it
    assert_derivatives_consistent(g, [-1.3, -1.05, -0.9, 0.2, 1.1])


def test_green_operator():
    f = principal(BumpProfile(1, 2))
    g = green_operator(f)
    xi = torch.linspace(1, 2, 51, dtype=torch.float64)
    assert max_error(g(xi), f(xi) / (1j * xi)) <= 1e-15
    assert max_error(1j * xi * g(xi), f(xi)) <= 1e-15
    with pytest.raises(InvalidArgument):
        green_operator(principal(BumpProfile(-1, 1)))
    left = principal(BumpProfile(-2, -1))
    assert max_error(green_operator(left)(-xi), left(-xi) / (-1j * xi)) <= 1e-15


def test_green_operator_blow_up():
    scaled = []
    for eps in [1.0, 0.1, 0.01]:
        f = principal(BumpProfile(eps, 2 * eps))
        ratio = l2nu_norm(green_operator(f)) / l2nu_norm(f)
        scaled.append(ratio * eps)
    for value in scaled[1:]:
        assert value == pytest.approx(scaled[0], rel=1e-6)


def test_map_coeqn_inside_period():
    length = 1.0
    f = principal(BumpProfile(1, 5))
    g = solve_map_coeqn(f, length)
    xi = torch.linspace(1, 5, 41, dtype=torch.float64)
    expected = f(xi) / (torch.exp(1j * length * xi) - 1)
    assert max_error(g(xi), expected) <= 1e-14


def test_map_coeqn_cancellation():
    for length in [1.0, 2.0]:
        bump = BumpProfile(5, 8)
        f = principal(ProductProfile(ExpMinusOneProfile(length), bump))
        g = solve_map_coeqn(f, length)
        xi = torch.linspace(5, 8, 301, dtype=torch.float64)
        for k in (0, 1):
            assert max_error(g(xi, k), bump(xi, k).to(torch.complex128)) <= 1e-9
        zero = 2 * math.pi * round(6.5 * length / (2 * math.pi)) / length
        filled = g.value_at(zero)
        x0 = torch.tensor([zero], dtype=torch.float64)
        limit = f(x0, 1)[0].item() / (1j * length * cmath.exp(1j * length * zero))
        assert abs(filled - limit) <= 1e-12
        far = (xi - zero).abs() > 0.6
        residual = (torch.exp(1j * length * xi) - 1) * g(xi)
        assert max_error(residual[far], f(xi)[far]) <= 1e-12
        assert_derivatives_consistent(g, [5.5, zero - 0.1, zero + 0.05, 7.6])


def test_map_coeqn_rejects():
    f = principal(BumpProfile(5, 8))
    distributions = map_invariant_distributions(f, 1.0)
    assert [k for k, _ in distributions] == [1]
    assert abs(distributions[0][1]) > 0
    with pytest.raises(NotAMapCoboundary):
        solve_map_coeqn(f, 1.0)
    with pytest.raises(InvalidArgument):
        map_invariant_distributions(f, 0.0)
    gaussian = principal(GaussianProfile(center=2 * math.pi, width=0.3))
    ((k, value),) = map_invariant_distributions(gaussian, 1.0)
    assert k == 1
    assert value == pytest.approx(1.0, abs=1e-15)


def test_central_multiplier():
    eta = torch.linspace(-math.pi, math.pi, 10_001, dtype=torch.float64)
    values = central_multiplier(eta)
    assert values.abs().max().item() <= math.pi / 2 + 1e-12
    assert central_multiplier(torch.tensor([0.0]))[0].item() == 1
    x = 1.3
    expected = complex(math.cos(x / 2), math.sin(x / 2)) * 1j * x / (
        complex(math.cos(x), math.sin(x)) - 1
    )
    assert abs(central_multiplier(torch.tensor([x]))[0].item() - expected) <= 1e-14


def test_u_tau_group_law():
    f = principal(BumpProfile(0.5, 1.5), nu=0.2j)
    assert u_tau(f, 1.0, 1.0) is f
    lam = 1.0
    xi = torch.linspace(0.8, 1.2, 41, dtype=torch.float64)
    composed = u_tau(u_tau(f, 2.0, lam), 3.0, lam)
    direct = u_tau(f, 6.0, lam)
    for k in (0, 1, 2):
        assert max_error(composed(xi, k), direct(xi, k)) <= 1e-12 * max(
            1.0, direct(xi, k).abs().max().item()
        )
    assert direct.support == pytest.approx(
        (1 - 0.5 / 6 ** (1 / 3), 1 + 0.5 / 6 ** (1 / 3))
    )
    with pytest.raises(InvalidArgument):
        u_tau(f, 0.5, lam)
    assert_derivatives_consistent(direct, [0.85, 1.0, 1.1])


def test_operator_A():
    nu = 2
    f = SpectralFunction(series="discrete", nu=nu, profile=BumpProfile(1, 2))
    a = operator_A(f)
    assert a.series == "mock-discrete"
    xi = torch.linspace(1, 2, 51, dtype=torch.float64)
    assert max_error(a(xi), f(xi) / xi) <= 1e-15
    back = operator_A_inverse(a, nu)
    assert back.series == "discrete"
    assert max_error(back(xi), f(xi)) <= 1e-14
    assert_derivatives_consistent(a, [1.2, 1.5, 1.8])
    with pytest.raises(InvalidArgument):
        operator_A(principal(BumpProfile(1, 2)))


def test_operator_outputs_have_consistent_derivatives():
    f = principal(GaussianProfile(center=0.3, width=0.8), nu=0.25j)
    assert_derivatives_consistent(apply_hatX(f), [-0.5, 0.1, 0.9])
    assert_derivatives_consistent(apply_hatV(f), [-0.5, 0.1, 0.9])
    assert_derivatives_consistent(principal(BumpProfile(-1, 2)), [-0.3, 0.4, 1.5])
