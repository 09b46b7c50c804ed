import cmath
import math
from dataclasses import asdict, dataclass

import torch

from cusp import Observable
from errors import InvalidArgument, OutOfRegime, UseUntwistedPath
from flow import GroupElement, horocycle, horocycle_orbit
from quadrature import MAX_NODES, Integrand, QuadratureResult, gauss_legendre, integrate
from quadrature.integrate import PANEL_ORDER
from surface import SurfacePoint, reduce


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Resolution of the orbit quadratures.

    Panels start with at least `density` nodes per oscillation period 2π/|λ| and
    per unit of orbit time, and are doubled at most `max_depth` times until two
    successive estimates agree to `tol` relative.
    """

    density: int = 8
    tol: float = 1e-10
    max_depth: int = 12

    def __post_init__(self):
        if self.density < 8:
            raise InvalidArgument(
                f"Quadrature needs >= 8 nodes per period, got density={self.density}"
            )
        if not 0 < self.tol <= 1e-3:
            raise InvalidArgument(
                f"Quadrature tolerance must lie in (0, 1e-3], got tol={self.tol}"
            )
        if self.max_depth < 1:
            raise InvalidArgument(
                f"Quadrature depth must be >= 1, got max_depth={self.max_depth}"
            )

    def initial_panels(self, length: float, lam: float) -> int:
        periods = length * abs(lam) / (2 * math.pi)
        return max(1, math.ceil(self.density * max(periods, length) / PANEL_ORDER))

    def max_nodes(self, panels: int) -> int:
        return min(panels * PANEL_ORDER * 2**self.max_depth, MAX_NODES)


@dataclass
class TwistedIntegral:
    x: SurfacePoint
    lam: float
    T: float
    value: complex
    # Difference between the last two refinement levels
    err_est: float
    nodes: int
    converged: bool

    def to_dict(self) -> dict:
        out = asdict(self)
        base = self.x.base_point()
        out["x"] = {"re": base.real, "im": base.imag}
        out["value"] = {"re": self.value.real, "im": self.value.imag}
        return out


def orbit_integrand(x: GroupElement, obs: Observable, lam: float) -> Integrand:
    """
    t -> e^{iλt} f(h_t x), with the orbit points reduced by the observable.
    """

    def integrand(t: torch.Tensor) -> torch.Tensor:
        values = obs(horocycle_orbit(x, t))
        if lam == 0:
            return values
        return torch.exp(1j * lam * t) * values

    return integrand


def orbit_integral(
    x: SurfacePoint,
    obs: Observable,
    lam: float,
    T: float,
    spec: QuadratureSpec,
) -> QuadratureResult:
    if not T > 0:
        raise InvalidArgument(f"Orbit integrals require T > 0, got T={T!r}")
    panels = spec.initial_panels(T, lam)
    return integrate(
        orbit_integrand(x.reduced, obs, lam),
        0.0,
        T,
        tol=spec.tol,
        max_nodes=spec.max_nodes(panels),
        panels=panels,
    )


def to_integral(
    x: SurfacePoint, lam: float, T: float, result: QuadratureResult
) -> TwistedIntegral:
    return TwistedIntegral(
        x=x,
        lam=lam,
        T=T,
        value=complex(result.value),
        err_est=result.err_est,
        nodes=result.nodes,
        converged=result.converged,
    )


def twisted_orbit_integral(
    x: SurfacePoint,
    obs: Observable,
    lam: float,
    T: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> TwistedIntegral:
    """
    Twisted ergodic integral ∫_0^T e^{iλt} f(h_t x) dt along the horocycle orbit
    of x.

    Raises:
        UseUntwistedPath: For λ = 0, which is the classical ergodic integral
            computed by `ergodic_integral`.
    """
    if lam == 0:
        raise UseUntwistedPath(
            "λ = 0 is the untwisted ergodic integral, use `ergodic_integral`"
        )
    return to_integral(x, lam, T, orbit_integral(x, obs, lam, T, spec))


def ergodic_integral(
    x: SurfacePoint,
    obs: Observable,
    T: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> TwistedIntegral:
    """
    Ergodic integral ∫_0^T f(h_t x) dt along the horocycle orbit of x.
    """
    return to_integral(x, 0.0, T, orbit_integral(x, obs, 0.0, T, spec))


def shifted(x: SurfacePoint, t: float) -> SurfacePoint:
    return reduce(horocycle(x.reduced, t))


def additivity_check(
    x: SurfacePoint,
    obs: Observable,
    lam: float,
    T1: float,
    T2: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """
    |I_x(T₁ + T₂) - I_x(T₁) - e^{iλT₁} I_{h_{T₁}x}(T₂)|, which vanishes up to the
    quadrature errors.
    """
    whole = orbit_integral(x, obs, lam, T1 + T2, spec).value
    head = orbit_integral(x, obs, lam, T1, spec).value
    tail = orbit_integral(shifted(x, T1), obs, lam, T2, spec).value
    return abs(whole - head - cmath.exp(1j * lam * T1) * tail)


def rescaled_integral_check(
    x: SurfacePoint,
    obs: Observable,
    lam: float,
    T: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """
    Difference between the twisted integral and its rescaled form

        |λ|^{-1} ∫_0^{|λT|} e^{i sign(λ) t} f(h^{U/|λ|}_t x) dt

    where the flow of U/|λ| is computed as the conjugate a_y h_t a_{-y} of the
    horocycle flow by the geodesic flow at time y = log|λ|.
    """
    if lam == 0:
        raise UseUntwistedPath("The rescaled form needs λ != 0")
    scale = abs(lam)
    y = math.log(scale)
    # a_{-y}, then h_t, then a_y, all acting on the right
    start = x.reduced @ GroupElement.exp("X", -y / 2)
    end = GroupElement.exp("X", y / 2).to_tensor()
    sign = math.copysign(1.0, lam)

    def integrand(t: torch.Tensor) -> torch.Tensor:
        frames = horocycle_orbit(start, t) @ end
        return torch.exp(1j * sign * t) * obs(frames)

    length = scale * T
    panels = spec.initial_panels(length, sign)
    rescaled = integrate(
        integrand,
        0.0,
        length,
        tol=spec.tol,
        max_nodes=spec.max_nodes(panels),
        panels=panels,
    )
    direct = orbit_integral(x, obs, lam, T, spec)
    return abs(direct.value - rescaled.value / scale)


def cumulative_integral(fn: Integrand, T: float, panels: int) -> Integrand:
    """
    F(t) = ∫_0^t fn, for batches of t in [0, T]: whole panels come from a table
    of cumulative sums, the partial panel from one more 16-point rule.
    """
    nodes, weights = gauss_legendre(PANEL_ORDER)
    edges = torch.linspace(0.0, T, panels + 1, dtype=torch.float64)
    half = (edges[1:] - edges[:-1]).unsqueeze(-1) / 2
    mid = (edges[1:] + edges[:-1]).unsqueeze(-1) / 2
    panel_values = fn((mid + half * nodes).flatten()).reshape(panels, PANEL_ORDER)
    panel_sums = torch.sum(half * weights * panel_values, dim=-1)
    cumulative = torch.cat([panel_sums.new_zeros(1), torch.cumsum(panel_sums, dim=0)])

    def antiderivative(t: torch.Tensor) -> torch.Tensor:
        index = torch.clamp(
            torch.searchsorted(edges, t, right=True) - 1, 0, panels - 1
        )
        left = edges[index]
        part_half = ((t - left) / 2).unsqueeze(-1)
        part_mid = ((t + left) / 2).unsqueeze(-1)
        part_values = fn((part_mid + part_half * nodes).flatten()).reshape(
            *t.size(), PANEL_ORDER
        )
        return cumulative[index] + torch.sum(part_half * weights * part_values, dim=-1)

    return antiderivative


def small_lambda_identity_check(
    x: SurfacePoint,
    obs: Observable,
    lam: float,
    T: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """
    Difference between the two sides of the integration by parts

        ∫_0^T e^{iλt} f(h_t x) dt
            = e^{iλT} ∫_0^T f(h_t x) dt - iλ ∫_0^T e^{iλt} (∫_0^t f(h_τ x) dτ) dt

    which shows that twisted integrals behave like untwisted ones for |λT| <= e.

    Raises:
        OutOfRegime: For |λT| > e.
    """
    if abs(lam * T) > math.e:
        raise OutOfRegime(
            f"The small twist regime requires |λT| <= e, got |λT|={abs(lam * T):.4g}"
        )
    twisted = orbit_integral(x, obs, lam, T, spec).value
    untwisted_fn = orbit_integrand(x.reduced, obs, 0.0)
    # The inner table is twice as fine as the coarsest outer panels.
    panels = 2 * spec.initial_panels(T, lam)
    antiderivative = cumulative_integral(untwisted_fn, T, panels)
    total = antiderivative(torch.tensor([T], dtype=torch.float64))[0].item()
    inner = integrate(
        lambda t: torch.exp(1j * lam * t) * antiderivative(t),
        0.0,
        T,
        tol=spec.tol,
        max_nodes=spec.max_nodes(panels),
        panels=panels,
    ).value
    return abs(twisted - (cmath.exp(1j * lam * T) * total - 1j * lam * inner))
