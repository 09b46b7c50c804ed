import math
from dataclasses import dataclass
from typing import Callable

import pytest
import torch

from errors import InvalidArgument, ResourceLimit
from flow import GroupElement, alpha_batch
from returns import (
    Box,
    Calibration,
    InjectivityGrid,
    bisect_scale,
    c_gamma_covariance,
    c_gamma_upper,
    decompose_box,
    find_collision,
    injectivity_radius,
    injectivity_search,
)
from returns.injectivity import verify_collision
from surface import reduce, sample_point

CALIBRATION = Calibration(c_gamma=0.1, c_gamma_prime=1.0, seed=0, date="2020-01-01")


@dataclass
class BisectTestCase:
    collides: Callable[[float], bool]
    expected: float
    rel_tol: float = 0.01

    def assert_bisect(self):
        result = bisect_scale(self.collides, rel_tol=self.rel_tol)
        assert not self.collides(result)
        assert self.expected <= result <= self.expected * (1 + 2 * self.rel_tol)


TEST_CASES = [
    BisectTestCase(lambda c: False, expected=1.0),
    BisectTestCase(lambda c: c < 37.0, expected=37.0),
    BisectTestCase(lambda c: c < 1.5, expected=1.5, rel_tol=1e-6),
    BisectTestCase(lambda c: c <= 1024.0, expected=1024.0),
]


def test_bisect_scale():
    for test_case in TEST_CASES:
        test_case.assert_bisect()


def test_bisect_scale_cap():
    with pytest.raises(ResourceLimit):
        bisect_scale(lambda c: True, max_scale=1e3)


def test_grid_validation():
    with pytest.raises(InvalidArgument):
        InjectivityGrid(step=0.0)
    with pytest.raises(InvalidArgument):
        InjectivityGrid(z_points=11)
    with pytest.raises(InvalidArgument):
        InjectivityGrid(rel_tol=1.0)
    with pytest.raises(InvalidArgument):
        Box(t=1.0, y=0.5, z=0.0)
    grid = InjectivityGrid(max_size=1000)
    box = Box.scale_box(T=1.0, c=1.0)
    assert grid.size(box) == 81 * 11 * 21
    with pytest.raises(ResourceLimit):
        grid.samples(box)


def test_grid_resolution():
    # Along z the spacing on the box of c_Γ(x, T) is at most 1/(10T)
    grid = InjectivityGrid()
    for T in [1.0, 3.0, 50.0]:
        box = Box.scale_box(T=T, c=1.0)
        assert 2 * box.z / (grid.z_points - 1) <= 1 / (10 * T) + 1e-15
    box = Box.scale_box(T=1.0, c=2.0)
    t, y, z = grid.samples(box)
    assert t.size() == y.size() == z.size() == (grid.size(box),)


def test_decompose_box():
    gen = torch.Generator().manual_seed(0)
    t = 20 * torch.rand(100, generator=gen, dtype=torch.float64) - 10
    y = torch.rand(100, generator=gen, dtype=torch.float64) - 0.5
    z = 2 * torch.rand(100, generator=gen, dtype=torch.float64) - 1
    m = alpha_batch(GroupElement.identity(), t, y, z)
    for sign in [1.0, -1.0]:
        dt, dy, dz, valid = decompose_box(sign * m)
        assert torch.all(valid)
        torch.testing.assert_close(dt, t, rtol=0, atol=1e-12)
        torch.testing.assert_close(dy, y, rtol=0, atol=1e-12)
        torch.testing.assert_close(dz, z, rtol=0, atol=1e-12)
    rotation = torch.tensor([[[0.0, -1.0], [1.0, 0.0]]], dtype=torch.float64)
    assert not decompose_box(rotation)[3].item()


def test_find_collision_on_closed_horocycle():
    # The horocycle through i closes up after time 1, so every long box collides.
    x = reduce(GroupElement.identity())
    collision = find_collision(x, Box.scale_box(T=1.0, c=1.0))
    assert collision is not None
    assert verify_collision(x.reduced, collision)
    assert collision.gamma != (1, 0, 0, 1)
    with pytest.raises(ResourceLimit):
        injectivity_search(x, 1.0)


def test_injectivity_search():
    x = sample_point(11)
    c = injectivity_search(x, 1.0)
    assert c >= 1
    assert find_collision(x, Box.scale_box(T=1.0, c=c)) is None
    upper = c_gamma_upper(x, 1.0, t_probe=1.0, calibration=CALIBRATION)
    assert c <= upper.value
    with pytest.raises(InvalidArgument):
        injectivity_search(x, 0.0)


def test_injectivity_radius():
    r = injectivity_radius(sample_point(5))
    assert 0 < r <= 1


def test_c_gamma_covariance():
    c, moved = c_gamma_covariance(sample_point(2), T=2.0, y=0.5)
    assert c >= 1
    assert moved >= 1


def test_c_gamma_upper():
    x = reduce(GroupElement.identity())
    upper = c_gamma_upper(x, 1.0, t_probe=0.0, calibration=CALIBRATION)
    assert upper.d_max == 0.0
    assert upper.value == pytest.approx((10 / CALIBRATION.c_gamma) ** 2, rel=1e-12)
    assert upper.T_max == pytest.approx(CALIBRATION.c_gamma / 10, rel=1e-12)
    assert not upper.in_regime

    y = sample_point(4)
    values = [
        c_gamma_upper(y, 1.0, t_probe=t_probe, calibration=CALIBRATION).value
        for t_probe in [0.0, 0.5, 1.0, 2.0, 4.0]
    ]
    for shorter, longer in zip(values, values[1:]):
        assert longer >= shorter * (1 - 1e-9)

