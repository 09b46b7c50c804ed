import math
from dataclasses import dataclass

import pytest
import torch
from hypothesis import given
from hypothesis import strategies as st

from errors import InvalidArgument
from flow import (
    GroupElement,
    alpha_batch,
    alpha_map,
    commutator,
    generator_matrix,
    geodesic,
    geodesic_orbit,
    horocycle,
    horocycle_orbit,
    orbit_walk,
    unstable_horocycle,
)

times = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


@st.composite
def group_elements(draw) -> GroupElement:
    # Iwasawa coordinates keep the sampled matrices well conditioned.
    u = draw(st.floats(min_value=-3.0, max_value=3.0))
    log_v = draw(st.floats(min_value=-2.0, max_value=2.0))
    theta = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    sqrt_v = math.exp(log_v / 2)
    n_a = GroupElement(sqrt_v, u / sqrt_v, 0.0, 1 / sqrt_v)
    k = GroupElement(
        math.cos(theta), -math.sin(theta), math.sin(theta), math.cos(theta)
    )
    return n_a @ k


@dataclass
class FlowTestCase:
    name: str
    x: GroupElement
    t: float
    expected: GroupElement

    def assert_flow(self):
        flows = dict(
            geodesic=geodesic,
            horocycle=horocycle,
            unstable_horocycle=unstable_horocycle,
        )
        out = flows[self.name](self.x, self.t)
        assert out.is_close(self.expected), f"{self.name}: {out} != {self.expected}"


TEST_CASES = [
    FlowTestCase("geodesic", GroupElement.identity(), 0.0, GroupElement.identity()),
    FlowTestCase(
        "geodesic",
        GroupElement.identity(),
        2 * math.log(2),
        GroupElement(2.0, 0.0, 0.0, 0.5),
    ),
    FlowTestCase(
        "horocycle", GroupElement.identity(), 1.0, GroupElement(1.0, 1.0, 0.0, 1.0)
    ),
    FlowTestCase("horocycle", GroupElement.identity(), 0.0, GroupElement.identity()),
    FlowTestCase(
        "unstable_horocycle",
        GroupElement.identity(),
        1.0,
        GroupElement(1.0, 0.0, 1.0, 1.0),
    ),
    FlowTestCase(
        "unstable_horocycle", GroupElement.identity(), 0.0, GroupElement.identity()
    ),
]


def test_flow_closed_forms():
    for test_case in TEST_CASES:
        test_case.assert_flow()


def test_non_finite_time_rejected():
    for flow in [geodesic, horocycle, unstable_horocycle]:
        with pytest.raises(InvalidArgument):
            flow(GroupElement.identity(), math.nan)
        with pytest.raises(InvalidArgument):
            flow(GroupElement.identity(), math.inf)


@given(group_elements(), times, times)
def test_one_parameter_groups(x: GroupElement, s: float, t: float):
    for flow in [geodesic, horocycle, unstable_horocycle]:
        assert flow(flow(x, s), t).is_close(flow(x, s + t), tol=1e-11)
        assert abs(flow(x, t).det() - 1) <= 1e-12 * max(1.0, x.max_abs() ** 2) * 10


@given(group_elements(), group_elements(), group_elements())
def test_composition_associative(x: GroupElement, y: GroupElement, z: GroupElement):
    assert ((x @ y) @ z).is_close(x @ (y @ z))


@given(group_elements())
def test_inverse(x: GroupElement):
    assert (x @ x.inverse()).is_close(GroupElement.identity(), tol=1e-11)


@given(group_elements(), times, times)
def test_unstable_renormalisation(x: GroupElement, y: float, t: float):
    lhs = geodesic(unstable_horocycle(geodesic(x, y), t), -y)
    assert lhs.is_close(unstable_horocycle(x, t * math.exp(-y)), tol=1e-11)


def test_horocycle_renormalisation():
    gen = torch.Generator().manual_seed(7)
    for _ in range(50):
        y, t = (torch.rand(2, generator=gen, dtype=torch.float64) * 2 - 1).tolist()
        y *= 20
        t *= 1e6
        lhs = geodesic(horocycle(geodesic(GroupElement.identity(), y), t), -y)
        expected = horocycle(GroupElement.identity(), t * math.exp(y))
        assert lhs.is_close(expected, tol=1e-12)


def test_commutators():
    X = generator_matrix("X")
    U = generator_matrix("U")
    V = generator_matrix("V")
    assert torch.equal(commutator(X, U), 2 * U)
    assert torch.equal(commutator(X, V), -2 * V)
    assert torch.equal(commutator(U, V), X)


def test_unknown_generator():
    with pytest.raises(ValueError):
        generator_matrix("K")  # pyright: ignore[reportArgumentType]


def test_alpha_map():
    x = GroupElement(1.3, 0.4, -0.2, 0.7).normalise()
    assert alpha_map(GroupElement.identity(), 1.0, 0.0, 0.0, 0.0).is_close(
        GroupElement.identity()
    )
    assert alpha_map(GroupElement.identity(), 1.0, 2.5, 0.0, 0.0).is_close(
        GroupElement(1.0, 2.5, 0.0, 1.0)
    )
    scale, t, y, z = 27.0, 0.3, -0.6, 1.1
    # exp(t𝒯U) exp(y𝒯^{-1/3}X) exp(z𝒯^{-2/3}V) written out by hand
    s = math.exp(y / 3)
    w = z / 9
    product = GroupElement(s + t * scale * w / s, t * scale / s, w / s, 1 / s)
    assert alpha_map(x, scale, t, y, z).is_close(x @ product)
    with pytest.raises(InvalidArgument):
        alpha_map(x, 0.5, t, y, z)


def test_alpha_batch_matches_scalar():
    x = GroupElement(1.3, 0.4, -0.2, 0.7).normalise()
    t = torch.tensor([0.0, 0.3, -2.0], dtype=torch.float64)
    y = torch.tensor([0.0, -0.6, 0.45], dtype=torch.float64)
    z = torch.tensor([0.0, 1.1, -0.02], dtype=torch.float64)
    for scale in [1.0, 27.0]:
        batch = alpha_batch(x, t, y, z, scale=scale)
        assert batch.size() == (3, 2, 2)
        for i in range(3):
            expected = alpha_map(x, scale, t[i].item(), y[i].item(), z[i].item())
            assert GroupElement.from_tensor(batch[i]).is_close(expected)
    with pytest.raises(InvalidArgument):
        alpha_batch(x, t, y, z, scale=0.5)


def test_orbit_walk_keeps_determinant():
    x = GroupElement(2.0, 1.0, 3.0, 2.0)
    walked = orbit_walk(x, "horocycle", step=1e-3, num_steps=100_000)
    assert abs(walked.det() - 1) <= 1e-12
    assert walked.is_close(horocycle(x, 100.0), tol=1e-9)
    walked = orbit_walk(x, "geodesic", step=1e-4, num_steps=100_000)
    assert abs(walked.det() - 1) <= 1e-12
    assert walked.is_close(geodesic(x, 10.0), tol=1e-9)


def test_batched_orbits_match_scalar():
    x = GroupElement(0.5, -1.0, 1.0, 0.0)
    ts = torch.linspace(-4, 4, 9, dtype=torch.float64)
    horo = horocycle_orbit(x, ts)
    geo = geodesic_orbit(x, ts)
    for i, t in enumerate(ts.tolist()):
        assert GroupElement.from_tensor(horo[i]).is_close(horocycle(x, t))
        assert GroupElement.from_tensor(geo[i]).is_close(geodesic(x, t))


def test_distance():
    identity = GroupElement.identity()
    assert identity.distance(identity) == 0
    assert identity.distance(GroupElement(1.0, 0.5, 0.0, 1.0)) == 0.5
    # Relative to the largest entry once it exceeds 1
    large = GroupElement(100.0, 0.0, 0.0, 0.01)
    assert large.distance(GroupElement(100.0, 2.0, 0.0, 0.01)) == pytest.approx(0.02)
    assert identity.is_close(GroupElement(1.0, 1e-13, 0.0, 1.0))
    assert not identity.is_close(GroupElement(1.0, 1e-11, 0.0, 1.0))
