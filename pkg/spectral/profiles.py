import math
from typing import Sequence

import torch

from errors import InvalidArgument
from quadrature import gauss_legendre

# Derivative order available from the closed-form families
DEFAULT_ORDER = 16
# Nodes of the t-quadrature filling removable singularities of quotients
FILL_NODES = 64
# Bumps are set to 0 this close to the edge of their support, where exp(-1/(1-s²))
# is below 1e-200.
BUMP_EDGE = 1e-3

type Interval = tuple[float, float]


def as_complex(xi: torch.Tensor) -> torch.Tensor:
    return xi.to(torch.complex128)


def intersect(lhs: Interval, rhs: Interval) -> Interval:
    lo, hi = max(lhs[0], rhs[0]), min(lhs[1], rhs[1])
    if lo > hi:
        # Empty, collapse onto a point so that integrals vanish
        return (lo, lo)
    return (lo, hi)


def hull(lhs: Interval, rhs: Interval) -> Interval:
    return (min(lhs[0], rhs[0]), max(lhs[1], rhs[1]))


def leibniz(lhs: torch.Tensor, rhs: torch.Tensor, n: int) -> torch.Tensor:
    """
    Derivatives 0..n of a product from the derivatives of the factors.
    """
    out = torch.zeros_like(lhs[: n + 1])
    for k in range(n + 1):
        for j in range(k + 1):
            out[k] += math.comb(k, j) * lhs[j] * rhs[k - j]
    return out


def quotient_jet(num: torch.Tensor, den: torch.Tensor, n: int) -> torch.Tensor:
    """
    Derivatives 0..n of num/den, from g·den = num:
    g^{(k)} = (num^{(k)} - Σ_{j=1}^{k} C(k, j) den^{(j)} g^{(k-j)}) / den.
    """
    out = torch.zeros_like(num[: n + 1])
    for k in range(n + 1):
        acc = num[k].clone()
        for j in range(1, k + 1):
            acc -= math.comb(k, j) * den[j] * out[k - j]
        out[k] = acc / den[0]
    return out


def hat_x_jet(jet: torch.Tensor, xi: torch.Tensor, nu: complex) -> torch.Tensor:
    """
    Derivatives of X̂f = (1 - ν)f + 2ξf', whose k-th derivative is
    (1 - ν + 2k) f^{(k)} + 2ξ f^{(k+1)}. One order is consumed.
    """
    n = jet.size(0) - 2
    k = torch.arange(n + 1, dtype=torch.float64).reshape(-1, *[1] * xi.dim())
    return (1 - nu + 2 * k) * jet[: n + 1] + 2 * xi * jet[1 : n + 2]


def hat_v_jet(jet: torch.Tensor, xi: torch.Tensor, nu: complex) -> torch.Tensor:
    """
    Derivatives of V̂f = -i((1 - ν)f' + ξf''), whose k-th derivative is
    -i((1 - ν + k) f^{(k+1)} + ξ f^{(k+2)}). Two orders are consumed.
    """
    n = jet.size(0) - 3
    k = torch.arange(n + 1, dtype=torch.float64).reshape(-1, *[1] * xi.dim())
    return -1j * ((1 - nu + k) * jet[1 : n + 2] + xi * jet[2 : n + 3])


class Profile:
    """
    A function of the Fourier variable ξ with oracles for its derivatives up to
    `order`. The oracles are evaluated together as a jet: a tensor of size
    [n + 1, *xi.size()] holding the derivatives 0..n.
    """

    order: int

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        raise NotImplementedError("Profile must implement the `jet` method")

    @property
    def support(self) -> Interval:
        return (-math.inf, math.inf)

    def window(self) -> Interval:
        """
        Finite interval outside of which the profile is negligible, used as the
        integration range.
        """
        lo, hi = self.support
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidArgument(
                f"{self.__class__.__name__} has no finite integration window"
            )
        return (lo, hi)

    def breakpoints(self) -> list[float]:
        return []

    def derivatives(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        if n > self.order:
            raise InvalidArgument(
                f"{self.__class__.__name__} has derivative oracles up to order "
                f"{self.order}, but {n} were requested"
            )
        return self.jet(xi.to(torch.float64), n)

    def __call__(self, xi: torch.Tensor, k: int = 0) -> torch.Tensor:
        return self.derivatives(xi, k)[k]

    def __add__(self, other: "Profile") -> "Profile":
        return SumProfile(self, other)

    def __mul__(self, other: "Profile") -> "Profile":
        return ProductProfile(self, other)

    def scale(self, factor: complex) -> "Profile":
        return ScaledProfile(self, factor)


class BumpProfile(Profile):
    """
    C^∞ bump amplitude·exp(-1/(1 - s²)) with s the position in [lo, hi] mapped to
    [-1, 1]. Its derivatives come from φ' = g'φ with g = -1/(1 - s²), whose
    derivatives are explicit.
    """

    def __init__(
        self, lo: float, hi: float, amplitude: complex = 1.0, order: int = DEFAULT_ORDER
    ):
        if not lo < hi:
            raise InvalidArgument(f"Bump requires lo < hi, got [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.amplitude = amplitude
        self.order = order

    @property
    def support(self) -> Interval:
        return (self.lo, self.hi)

    def breakpoints(self) -> list[float]:
        return [self.lo, self.hi]

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        half_width = (self.hi - self.lo) / 2
        s = (xi - (self.lo + self.hi) / 2) / half_width
        inside = s.abs() < 1 - BUMP_EDGE
        s = torch.where(inside, s, torch.zeros_like(s))
        # g^{(j)}(s) = -j!/2 ((1 - s)^{-(j+1)} + (-1)^j (1 + s)^{-(j+1)})
        g = torch.stack(
            [
                -math.factorial(j)
                / 2
                * ((1 - s) ** (-(j + 1)) + (-1) ** j * (1 + s) ** (-(j + 1)))
                for j in range(n + 1)
            ]
        )
        phi = torch.zeros((n + 1, *xi.size()), dtype=torch.float64)
        phi[0] = torch.exp(g[0])
        for k in range(n):
            for j in range(k + 1):
                phi[k + 1] += math.comb(k, j) * g[j + 1] * phi[k - j]
        chain = torch.tensor(
            [half_width ** (-k) for k in range(n + 1)], dtype=torch.float64
        ).reshape(-1, *[1] * xi.dim())
        out = self.amplitude * as_complex(phi * chain)
        return torch.where(inside, out, torch.zeros_like(out))

    def __repr__(self) -> str:
        return f"BumpProfile(lo={self.lo}, hi={self.hi}, amplitude={self.amplitude})"


class GaussianProfile(Profile):
    """
    amplitude·exp(-((ξ - center)/width)²), with derivatives from the Hermite
    polynomials: d^k/du^k e^{-u²} = (-1)^k H_k(u) e^{-u²}.
    """

    # Beyond this many widths the Gaussian and its derivatives are negligible.
    WINDOW_WIDTHS = 12.0

    def __init__(
        self,
        center: float = 0.0,
        width: float = 1.0,
        amplitude: complex = 1.0,
        order: int = DEFAULT_ORDER,
    ):
        if not width > 0:
            raise InvalidArgument(f"Gaussian width must be positive, got {width}")
        self.center = center
        self.width = width
        self.amplitude = amplitude
        self.order = order

    def window(self) -> Interval:
        radius = self.WINDOW_WIDTHS * self.width
        return (self.center - radius, self.center + radius)

    def breakpoints(self) -> list[float]:
        return [self.center]

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        u = (xi - self.center) / self.width
        hermite = [torch.ones_like(u), 2 * u]
        for k in range(1, n):
            hermite.append(2 * u * hermite[k] - 2 * k * hermite[k - 1])
        gauss = torch.exp(-(u**2))
        out = torch.stack(
            [(-1) ** k * hermite[k] * gauss / self.width**k for k in range(n + 1)]
        )
        return self.amplitude * as_complex(out)

    def __repr__(self) -> str:
        return (
            f"GaussianProfile(center={self.center}, width={self.width}, "
            f"amplitude={self.amplitude})"
        )


class PolynomialProfile(Profile):
    """
    Σ_j coefficients[j] ξ^j, whose derivatives vanish beyond the degree.
    """

    def __init__(self, coefficients: Sequence[complex], order: int = DEFAULT_ORDER):
        self.coefficients = list(coefficients)
        self.order = order

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        xi_c = as_complex(xi)
        coefficients = list(self.coefficients)
        out = []
        for _ in range(n + 1):
            value = torch.zeros_like(xi_c)
            for c in reversed(coefficients):
                value = value * xi_c + c
            out.append(value)
            coefficients = [j * c for j, c in enumerate(coefficients)][1:]
        return torch.stack(out)

    def __repr__(self) -> str:
        return f"PolynomialProfile({self.coefficients})"


class PowerProfile(Profile):
    """
    ξ^power on ξ > 0, and 0 on ξ <= 0.
    """

    def __init__(self, power: float, order: int = DEFAULT_ORDER):
        self.power = power
        self.order = order

    @property
    def support(self) -> Interval:
        return (0.0, math.inf)

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        positive = xi > 0
        safe = torch.where(positive, xi, torch.ones_like(xi))
        out = []
        falling = 1.0
        for k in range(n + 1):
            out.append(falling * safe ** (self.power - k))
            falling *= self.power - k
        jet = as_complex(torch.stack(out))
        return torch.where(positive, jet, torch.zeros_like(jet))

    def __repr__(self) -> str:
        return f"PowerProfile(power={self.power})"


class ExpMinusOneProfile(Profile):
    """
    e^{iLξ} - 1, the multiplier of the time-L horocycle map.
    """

    def __init__(self, length: float, order: int = DEFAULT_ORDER):
        self.length = length
        self.order = order

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        phase = torch.exp(1j * self.length * as_complex(xi))
        out = [phase - 1]
        for k in range(1, n + 1):
            out.append((1j * self.length) ** k * phase)
        return torch.stack(out)


class SumProfile(Profile):
    def __init__(self, lhs: Profile, rhs: Profile):
        self.lhs = lhs
        self.rhs = rhs
        self.order = min(lhs.order, rhs.order)

    @property
    def support(self) -> Interval:
        return hull(self.lhs.support, self.rhs.support)

    def window(self) -> Interval:
        return hull(self.lhs.window(), self.rhs.window())

    def breakpoints(self) -> list[float]:
        return self.lhs.breakpoints() + self.rhs.breakpoints()

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        return self.lhs.jet(xi, n) + self.rhs.jet(xi, n)


class ScaledProfile(Profile):
    def __init__(self, profile: Profile, factor: complex):
        self.profile = profile
        self.factor = factor
        self.order = profile.order

    @property
    def support(self) -> Interval:
        return self.profile.support

    def window(self) -> Interval:
        return self.profile.window()

    def breakpoints(self) -> list[float]:
        return self.profile.breakpoints()

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        return self.factor * self.profile.jet(xi, n)


class ProductProfile(Profile):
    def __init__(self, lhs: Profile, rhs: Profile):
        self.lhs = lhs
        self.rhs = rhs
        self.order = min(lhs.order, rhs.order)

    @property
    def support(self) -> Interval:
        return intersect(self.lhs.support, self.rhs.support)

    def window(self) -> Interval:
        lhs = self._window_or_support(self.lhs)
        rhs = self._window_or_support(self.rhs)
        lo, hi = intersect(lhs, rhs)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidArgument("Product of profiles has no finite window")
        return (lo, hi)

    @staticmethod
    def _window_or_support(profile: Profile) -> Interval:
        try:
            return profile.window()
        except InvalidArgument:
            return profile.support

    def breakpoints(self) -> list[float]:
        return self.lhs.breakpoints() + self.rhs.breakpoints()

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        return leibniz(self.lhs.jet(xi, n), self.rhs.jet(xi, n), n)


class DilatedProfile(Profile):
    """
    amplitude·f(center + factor·(ξ - center)).
    """

    def __init__(
        self, profile: Profile, factor: float, center: float, amplitude: float = 1.0
    ):
        assert factor > 0, f"Dilation factor must be positive, got {factor}"
        self.profile = profile
        self.factor = factor
        self.center = center
        self.amplitude = amplitude
        self.order = profile.order

    def _pull_back(self, interval: Interval) -> Interval:
        lo, hi = interval
        return (
            self.center + (lo - self.center) / self.factor,
            self.center + (hi - self.center) / self.factor,
        )

    @property
    def support(self) -> Interval:
        return self._pull_back(self.profile.support)

    def window(self) -> Interval:
        return self._pull_back(self.profile.window())

    def breakpoints(self) -> list[float]:
        return [
            self.center + (p - self.center) / self.factor
            for p in self.profile.breakpoints()
        ]

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        inner = self.profile.jet(self.center + self.factor * (xi - self.center), n)
        chain = torch.tensor(
            [self.amplitude * self.factor**k for k in range(n + 1)],
            dtype=torch.float64,
        ).reshape(-1, *[1] * xi.dim())
        return chain * inner


class HatXProfile(Profile):
    def __init__(self, profile: Profile, nu: complex):
        self.profile = profile
        self.nu = nu
        self.order = profile.order - 1

    @property
    def support(self) -> Interval:
        return self.profile.support

    def window(self) -> Interval:
        return self.profile.window()

    def breakpoints(self) -> list[float]:
        return self.profile.breakpoints()

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        return hat_x_jet(self.profile.jet(xi, n + 1), xi, self.nu)


class HatVProfile(Profile):
    def __init__(self, profile: Profile, nu: complex):
        self.profile = profile
        self.nu = nu
        self.order = profile.order - 2

    @property
    def support(self) -> Interval:
        return self.profile.support

    def window(self) -> Interval:
        return self.profile.window()

    def breakpoints(self) -> list[float]:
        return self.profile.breakpoints()

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        return hat_v_jet(self.profile.jet(xi, n + 2), xi, self.nu)


class ZeroLocator:
    """
    The zero of a denominator closest to each ξ.
    """

    def __call__(self, xi: torch.Tensor) -> torch.Tensor:
        raise NotImplementedError("ZeroLocator must implement the `__call__` method")


class FixedZero(ZeroLocator):
    def __init__(self, point: float):
        self.point = point

    def __call__(self, xi: torch.Tensor) -> torch.Tensor:
        return torch.full_like(xi, self.point)


class PeriodicZeros(ZeroLocator):
    def __init__(self, period: float):
        self.period = period

    def __call__(self, xi: torch.Tensor) -> torch.Tensor:
        return self.period * torch.round(xi / self.period)


def removable_quotient(
    num: Profile, den: Profile, xi: torch.Tensor, zero: torch.Tensor, n: int
) -> torch.Tensor:
    """
    Derivatives of num/den next to a common zero ξ₀ of both, writing each as
    (ξ - ξ₀)·Q with Q^{(k)}(ξ) = ∫_0^1 t^k F^{(k+1)}(ξ₀ + t(ξ - ξ₀)) dt, integrated
    with a 64-point Gauss-Legendre rule in t.
    """
    nodes, weights = gauss_legendre(FILL_NODES)
    t = (nodes + 1) / 2
    w = weights / 2
    points = zero.unsqueeze(0) + t.reshape(-1, *[1] * xi.dim()) * (xi - zero)
    powers = torch.stack([t**k for k in range(n + 1)])
    shape = (n + 1, FILL_NODES, *[1] * xi.dim())
    tw = as_complex(powers * w).reshape(shape)
    q_num = torch.sum(tw * num.jet(points, n + 1)[1:], dim=1)
    q_den = torch.sum(tw * den.jet(points, n + 1)[1:], dim=1)
    return quotient_jet(q_num, q_den, n)


class QuotientProfile(Profile):
    """
    num/den, where the zeros of den inside the support of num are removable
    singularities. Within `radius` of a zero the quotient is taken between the
    integral forms of both, elsewhere the quotient rule is used directly.
    """

    def __init__(
        self, num: Profile, den: Profile, zeros: ZeroLocator, radius: float = 0.5
    ):
        self.num = num
        self.den = den
        self.zeros = zeros
        self.radius = radius
        self.order = min(num.order, den.order) - 1

    @property
    def support(self) -> Interval:
        return self.num.support

    def window(self) -> Interval:
        return self.num.window()

    def breakpoints(self) -> list[float]:
        return self.num.breakpoints()

    def jet(self, xi: torch.Tensor, n: int) -> torch.Tensor:
        zero = self.zeros(xi)
        near = (xi - zero).abs() < self.radius
        # Keep the direct quotient away from the zero, those entries are replaced.
        far_xi = torch.where(near, zero + self.radius, xi)
        out = quotient_jet(self.num.jet(far_xi, n), self.den.jet(far_xi, n), n)
        if torch.any(near):
            filled = removable_quotient(self.num, self.den, xi[near], zero[near], n)
            out[:, near] = filled
        return out
