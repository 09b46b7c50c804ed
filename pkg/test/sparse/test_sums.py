import pytest
import torch

from cusp import ConstantObservable, DeltaObservable, NormalisedDeltaObservable
from errors import InvalidArgument, PrecisionLimit
from flow import horocycle, horocycle_orbit
from sparse import (
    chunked_sum,
    empirical_lipschitz,
    map_sum_vs_flow,
    max_linearization_error,
    progression_bound,
    progression_times,
    progression_vs_sparse,
    shah_average,
    venkatesh_blocks,
)
from surface import sample_point

ONE = ConstantObservable(1.0)
DELTA = DeltaObservable()


def test_chunked_sum():
    def fn(i: torch.Tensor) -> torch.Tensor:
        return torch.sin(i.to(torch.float64))

    direct = torch.sin(torch.arange(1000, dtype=torch.float64)).sum().item()
    assert chunked_sum(fn, 1000, chunk=7) == pytest.approx(direct, rel=1e-12)
    assert chunked_sum(fn, 1000, chunk=7) == chunked_sum(fn, 1000, chunk=7)
    assert chunked_sum(fn, 0) == 0.0


def test_shah_average_constant():
    x = sample_point(0)
    for delta in [0.0, 0.05, 0.5]:
        for N in [1, 17, 1000]:
            record = shah_average(ONE, x, delta, N)
            assert record.average == 1.0
            assert record.N == N


def test_shah_average_birkhoff():
    x = sample_point(1)
    N = 50
    record = shah_average(DELTA, x, 0.0, N)
    expected = sum(DELTA.at(horocycle(x.reduced, float(n))) for n in range(N)) / N
    assert record.average == pytest.approx(expected, rel=1e-10, abs=1e-12)
    assert record.to_dict()["delta"] == 0.0


def test_shah_average_rejects():
    x = sample_point(2)
    with pytest.raises(InvalidArgument):
        shah_average(ONE, x, 1.0, 10)
    with pytest.raises(InvalidArgument):
        shah_average(ONE, x, 0.05, 0)
    with pytest.raises(PrecisionLimit):
        shah_average(ONE, x, 0.5, 10**8 + 2)


def test_progression_vs_sparse():
    x = sample_point(3)
    assert progression_vs_sparse(ONE, x, 0.05, 0.02, 5000) == 0.0
    obs = NormalisedDeltaObservable()
    N, delta, epsilon = 5000, 0.05, 0.05
    value = progression_vs_sparse(obs, x, delta, epsilon, N)
    blocks = venkatesh_blocks(N, delta, epsilon)
    lipschitz = empirical_lipschitz(obs, x, progression_times(blocks))
    assert value <= 2 * lipschitz * max_linearization_error(blocks) + 1e-12


def test_progression_vs_sparse_finer_blocks():
    x = sample_point(3)
    obs = NormalisedDeltaObservable()
    N, delta = 20000, 0.05
    values = []
    envelopes = []
    for epsilon in [0.02, 0.15, 0.3]:
        blocks = venkatesh_blocks(N, delta, epsilon)
        count = blocks.starts[-1] - blocks.starts[0]
        envelope = max_linearization_error(blocks) * count / N
        lipschitz = empirical_lipschitz(obs, x, progression_times(blocks))
        value = progression_vs_sparse(obs, x, delta, epsilon, N)
        assert value <= 2 * lipschitz * envelope + 1e-12
        if len(values) > 0:
            # Non-increasing up to the error left by the finer blocks
            assert value <= values[-1] + 2 * lipschitz * envelope + 1e-12
            assert envelope <= envelopes[-1]
        values.append(value)
        envelopes.append(envelope)
    assert envelopes[-1] <= envelopes[0] / 10


def test_progression_vs_sparse_large_n():
    x = sample_point(3)
    obs = NormalisedDeltaObservable()
    N, delta, epsilon = 100000, 0.05, 0.02
    blocks = venkatesh_blocks(N, delta, epsilon)
    lipschitz = empirical_lipschitz(obs, x, progression_times(blocks))
    assert lipschitz > 0
    value = progression_vs_sparse(obs, x, delta, epsilon, N)
    assert value <= progression_bound(N, epsilon, lipschitz)
    assert progression_bound(N, epsilon, 1.0) == pytest.approx(
        10 * N ** (-2 * epsilon * (1 - epsilon))
    )


def test_map_sum_vs_flow():
    x = sample_point(4)
    gap = map_sum_vs_flow(ONE, x, 0.7, 40)
    assert gap.value == pytest.approx(0.0, abs=1e-9)
    assert gap.converged

    # A single step compares f(x) with its mean over the arc [0, L]
    L = 1.5
    gap = map_sum_vs_flow(DELTA, x, L, 1)
    arc = DELTA(horocycle_orbit(x.reduced, torch.linspace(0, L, 2001)))
    assert gap.value <= (arc.max() - arc.min()).item() + 1e-9
    with pytest.raises(InvalidArgument):
        map_sum_vs_flow(ONE, x, 0.0, 10)
    with pytest.raises(InvalidArgument):
        map_sum_vs_flow(ONE, x, 1.0, 0)
