import math

import torch

from errors import (
    InvalidArgument,
    NotACoboundary,
    NotAMapCoboundary,
    UndefinedDistribution,
)

from .function import SeriesKind, SpectralFunction, TwistParams
from .profiles import (
    DilatedProfile,
    ExpMinusOneProfile,
    FixedZero,
    HatVProfile,
    HatXProfile,
    PeriodicZeros,
    PolynomialProfile,
    PowerProfile,
    ProductProfile,
    QuotientProfile,
)

# Values below this count as zero for the annihilation preconditions
ANNIHILATION_TOL = 1e-12
# Distance to the pole within which a quotient is filled by its integral form
POLE_RADIUS = 0.5


def check_order(f: SpectralFunction, required: int, name: str):
    if f.order < required:
        raise InvalidArgument(
            f"{name} requires derivative oracles up to order {required}, "
            f"the function has order {f.order}"
        )


def apply_hatX(f: SpectralFunction) -> SpectralFunction:
    """
    X̂f = (1 - ν)f + 2ξf'.
    """
    check_order(f, 1, "apply_hatX")
    return f.with_profile(HatXProfile(f.profile, complex(f.nu)))


def apply_hatV(f: SpectralFunction) -> SpectralFunction:
    """
    V̂f = -i((1 - ν)f' + ξf'').
    """
    check_order(f, 2, "apply_hatV")
    return f.with_profile(HatVProfile(f.profile, complex(f.nu)))


def apply_hatU(f: SpectralFunction) -> SpectralFunction:
    """
    Û is the multiplication by iξ.
    """
    return f.with_profile(ProductProfile(f.profile, PolynomialProfile([0, 1j])))


def eval_invariant_distribution(f: SpectralFunction, p: TwistParams) -> complex:
    """
    The invariant distribution D^λ of the twisted horocycle flow, which on the
    Fourier side is the Dirac mass at -λm.

    For the discrete series the functions live on ξ > 0. The distribution vanishes
    for λm < 0 and for λm = 0 with ν >= 1, and it is undefined for λm = 0 in the
    mock discrete series. For λm > 0 it is the evaluation of the model at -λm,
    which is outside the support, so the obstruction to the cohomological equation
    for the discrete series lies in the pole of the multiplier instead (see
    `solve_flow_coeqn`).
    """
    lam_m = p.lam * p.m
    if f.is_discrete:
        if lam_m == 0:
            if f.series == "mock-discrete":
                raise UndefinedDistribution(
                    "The invariant distribution is undefined for λm = 0 in the mock "
                    "discrete series"
                )
            return 0j
        if lam_m < 0:
            return 0j
    return f.value_at(-lam_m)


def solve_flow_coeqn(f: SpectralFunction, p: TwistParams) -> SpectralFunction:
    """
    Solution of 𝒯(U + λK)g = f on the Fourier side:

        ĝ(ξ) = -i f̂(ξ) / (𝒯(ξ + λm))

    with the removable singularity at ξ = -λm filled by
    ĝ(ξ) = -(i/𝒯) ∫_0^1 f̂'(-λm + t(ξ + λm)) dt.

    Raises:
        NotACoboundary: When f is not annihilated by the invariant distribution,
            or f does not vanish at the pole -λm inside its support.
    """
    distribution = eval_invariant_distribution(f, p)
    if abs(distribution) > ANNIHILATION_TOL:
        raise NotACoboundary(
            f"D^λ(f) = {distribution:.3e} for λ={p.lam}, m={p.m}, "
            "the equation has no smooth solution"
        )
    lo, hi = f.support
    if lo <= p.pole <= hi:
        at_pole = f.value_at(p.pole)
        if abs(at_pole) > ANNIHILATION_TOL:
            raise NotACoboundary(
                f"f(-λm) = {at_pole:.3e} at the pole -λm={p.pole} inside the support"
            )
    lam_m = p.lam * p.m
    # i𝒯(ξ + λm)
    den = PolynomialProfile([1j * p.scale * lam_m, 1j * p.scale])
    return f.with_profile(
        QuotientProfile(f.profile, den, FixedZero(p.pole), radius=POLE_RADIUS)
    )


def green_operator(f: SpectralFunction) -> SpectralFunction:
    """
    Inverse of the horocycle generator, f̂(ξ)/(iξ), for profiles supported away
    from 0.
    """
    lo, hi = f.support
    if lo <= 0 <= hi:
        raise InvalidArgument(
            f"Green operator requires a support away from 0, got [{lo}, {hi}]"
        )
    gap = lo if lo > 0 else -hi
    den = PolynomialProfile([0, 1j])
    return f.with_profile(
        QuotientProfile(
            f.profile, den, FixedZero(0.0), radius=min(POLE_RADIUS, gap / 2)
        )
    )


def map_zeros(f: SpectralFunction, length: float) -> list[int]:
    """
    Indices k with 2πk/L inside the (integration window of the) support.
    """
    try:
        lo, hi = f.profile.window()
    except InvalidArgument:
        lo, hi = f.support
    period = 2 * math.pi / length
    return list(range(math.ceil(lo / period), math.floor(hi / period) + 1))


def map_invariant_distributions(
    f: SpectralFunction, length: float
) -> list[tuple[int, complex]]:
    """
    The invariant distributions of the time-L horocycle map: the values
    f̂(2πk/L) for every zero 2πk/L of e^{iLξ} - 1 in the support.
    """
    if not length > 0:
        raise InvalidArgument(f"Map length must be positive, got L={length!r}")
    period = 2 * math.pi / length
    return [(k, f.value_at(k * period)) for k in map_zeros(f, length)]


def solve_map_coeqn(f: SpectralFunction, length: float) -> SpectralFunction:
    """
    Solution of g∘h_L - g = f on the Fourier side, ĝ = f̂/(e^{iLξ} - 1). At a zero
    ξ₀ of the denominator the value is the limit f̂'(ξ₀)/(iL e^{iLξ₀}).

    Raises:
        NotAMapCoboundary: When f̂ does not vanish at a zero of the denominator.
    """
    for k, value in map_invariant_distributions(f, length):
        if abs(value) > ANNIHILATION_TOL:
            raise NotAMapCoboundary(
                f"f(2πk/L) = {value:.3e} for k={k}, L={length}, "
                "the equation has no smooth solution"
            )
    period = 2 * math.pi / length
    radius = min(POLE_RADIUS, period / 4)
    return f.with_profile(
        QuotientProfile(
            f.profile, ExpMinusOneProfile(length), PeriodicZeros(period), radius=radius
        )
    )


def central_multiplier(eta: torch.Tensor) -> torch.Tensor:
    """
    e^{iη/2}·iη/(e^{iη} - 1), which equals (η/2)/sin(η/2) and is 1 at η = 0.
    """
    eta = torch.as_tensor(eta, dtype=torch.float64)
    return (1 / torch.sinc(eta / (2 * math.pi))).to(torch.complex128)


def u_tau(f: SpectralFunction, tau: float, lam: float) -> SpectralFunction:
    """
    Scaling operator (U_τ f)^(ξ) = τ^{1/6} f̂(λ + τ^{1/3}(ξ - λ)), which zooms into
    the twist frequency λ.
    """
    if not tau >= 1:
        raise InvalidArgument(f"U_τ requires τ >= 1, got tau={tau!r}")
    if tau == 1:
        return f
    return f.with_profile(
        DilatedProfile(f.profile, tau ** (1 / 3), lam, amplitude=tau ** (1 / 6))
    )


def twist_interval(lam: float) -> tuple[float, float]:
    """
    I_λ = [λ - |λ|/2, λ + |λ|/2], the supports for which U_τ is norm-comparable in
    the complementary series.
    """
    return (lam - abs(lam) / 2, lam + abs(lam) / 2)


def u_tau_bounds(series: SeriesKind, nu: complex, lam: float) -> tuple[float, float]:
    """
    Bounds on ‖U_τ f‖₀/‖f‖₀, uniform in τ >= 1.

    - principal: U_τ is an isometry
    - complementary: [1/√3, √3] for f supported in I_λ
    - discrete: for λ >= ν + 1 and f supported in [λ - 1/2, λ + 1/2], the weights
      ξ^{-ν} at the two ends differ by ((1 + 1/(2λ))/(1 - 1/(2λ)))^ν at most
    """
    match series:
        case "principal":
            return (1.0, 1.0)
        case "complementary":
            return (1 / math.sqrt(3), math.sqrt(3))
        case "discrete" | "mock-discrete":
            nu_real = complex(nu).real
            if lam < nu_real + 1:
                raise InvalidArgument(
                    f"Discrete series bounds require λ >= ν + 1, got lam={lam}, nu={nu}"
                )
            ratio = ((1 + 1 / (2 * lam)) / (1 - 1 / (2 * lam))) ** nu_real
            return (1 / ratio, ratio)
        case _:
            raise InvalidArgument(f"No U_τ bounds for `series={series!r}`")


def operator_A(f: SpectralFunction) -> SpectralFunction:
    """
    𝒜f = f̂(ξ)ξ^{-ν/2}, which turns the discrete series weight ξ^{-ν} into the
    Lebesgue measure of the mock discrete series.
    """
    if f.series != "discrete":
        raise InvalidArgument(
            f"Operator 𝒜 applies to the discrete series, got series={f.series!r}"
        )
    nu = complex(f.nu).real
    return SpectralFunction(
        series="mock-discrete",
        nu=0,
        profile=ProductProfile(f.profile, PowerProfile(-nu / 2, order=f.order)),
        m=f.m,
    )


def operator_A_inverse(g: SpectralFunction, nu: int) -> SpectralFunction:
    if g.series != "mock-discrete":
        raise InvalidArgument(
            f"Operator 𝒜⁻¹ applies to the mock discrete series, got series={g.series!r}"
        )
    return SpectralFunction(
        series="discrete",
        nu=nu,
        profile=ProductProfile(g.profile, PowerProfile(nu / 2, order=g.order)),
        m=g.m,
    )
