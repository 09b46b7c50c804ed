import math

import pytest
import torch

from errors import InvalidArgument
from flow import GroupElement
from returns import ReturnEvent, tube_side, width_integral
from surface import reduce

X = reduce(GroupElement.identity())


def event(t0: float, beta: int) -> ReturnEvent:
    return ReturnEvent(
        t0=t0,
        t1=t0,
        z=math.exp(-beta),
        beta=beta,
        degenerate=True,
        gamma=(1, 0, 1, 1),
    )


EVENTS = [event(2.0, 0), event(2.5, 1), event(7.0, 2), event(9.8, 0), event(4.0, 0)]


def test_no_events():
    for c in [1.0, 2.0, 7.5]:
        profile = width_integral(X, 1.0, 10.0, [], c=c)
        assert profile.integral == pytest.approx((100 * c) ** 2, rel=1e-14)
        assert profile.integral == pytest.approx(profile.baseline, rel=1e-14)


def test_single_event_closed_form():
    scale, T, c, beta = 8.0, 10.0, 2.0, 1
    profile = width_integral(X, scale, T, [event(5.0, beta)], c=c)
    window = math.exp(beta) * scale ** (-2 / 3)
    pinch = (
        2e4 * c**2 * math.exp(2 * beta) * scale ** (-2 / 3) * (2 - math.exp(-beta))
    )
    expected = ((T - 2 * window) * (100 * c) ** 2 + pinch) / T
    assert profile.integral == pytest.approx(expected, rel=1e-12)


def test_matches_riemann_sum():
    scale, T, c = 1.0, 10.0, 1.5
    profile = width_integral(X, scale, T, EVENTS, c=c)
    n = 1_000_000
    t = (torch.arange(n, dtype=torch.float64) + 0.5) * (T / n)
    riemann = torch.mean(tube_side(t, EVENTS, scale, c) ** -2).item()
    assert profile.integral == pytest.approx(riemann, rel=1e-6)


def test_tube_side():
    c = 2.0
    # Slope e^{-1}/(100c), floor 1 and window e around t0 = 5
    t = torch.tensor([0.0, 3.0, 4.5, 5.0, 6.5, 9.0], dtype=torch.float64)
    side = tube_side(t, [event(5.0, 1)], 1.0, c)
    baseline = 1 / (100 * c)
    expected = [1.0, 2 / math.e, 1 / math.e, 1 / math.e, 1.5 / math.e, 1.0]
    torch.testing.assert_close(
        side, baseline * torch.tensor(expected, dtype=torch.float64)
    )
    assert torch.all(tube_side(t, EVENTS, 1.0, c) <= baseline)


def test_adding_events_never_decreases():
    values = [
        width_integral(X, 1.0, 10.0, EVENTS[:k], c=1.5).integral
        for k in range(len(EVENTS) + 1)
    ]
    for fewer, more in zip(values, values[1:]):
        assert more >= fewer * (1 - 1e-12)
    assert values[-1] > values[0]
    assert min(values) >= 1


def test_normalised():
    profile = width_integral(X, 8.0, 10.0, EVENTS, c=1.5)
    growth = 1 + math.log(2 * 10.0)
    assert profile.normalised == pytest.approx(
        profile.integral / (1.5**2 * 10.0 * growth), rel=1e-12
    )
    assert profile.to_dict()["baseline"] == pytest.approx(150.0**2)


def test_width_integral_rejects():
    with pytest.raises(InvalidArgument):
        width_integral(X, 0.5, 10.0, [], c=1.0)
    with pytest.raises(InvalidArgument):
        width_integral(X, 1.0, 0.0, [], c=1.0)
    with pytest.raises(InvalidArgument):
        width_integral(X, 1.0, 10.0, [], c=0.5)
