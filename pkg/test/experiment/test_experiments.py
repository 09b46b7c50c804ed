import math
import typing

import pytest

from errors import InvalidArgument
from experiment import (
    EXPERIMENTS,
    CalibrateExperiment,
    CoeqnExperiment,
    ExperimentKind,
    GoodBoundExperiment,
    IdentitiesExperiment,
    LoglawExperiment,
    ReturnsExperiment,
    ShiftExperiment,
    SparseExperiment,
    TauExperiment,
    UTauExperiment,
    WidthExperiment,
    create_experiment,
    rows_where,
)
from experiment.coefficients import GoodBoundParams, ShiftParams, TauParams
from experiment.diagnostics import LoglawParams
from experiment.identities import IdentitiesParams
from experiment.integrals import MapsParams, ScalingParams, mean_fit_slope
from experiment.returns import CalibrateParams, ReturnsParams
from experiment.runner import run_experiment
from experiment.sparse import SparseParams
from experiment.spectral import CoeqnParams, UTauParams, bump_intervals
from returns import load_calibration


def test_registry():
    assert set(EXPERIMENTS) == set(typing.get_args(ExperimentKind.__value__))
    for kind, Experiment in EXPERIMENTS.items():
        experiment = create_experiment(kind)  # pyright: ignore[reportArgumentType]
        assert isinstance(experiment, Experiment)
        assert isinstance(experiment.params, Experiment.params_class)
    with pytest.raises(ValueError, match="No experiment"):
        create_experiment("fourier")  # pyright: ignore[reportArgumentType]
    with pytest.raises(InvalidArgument):
        TauExperiment(UTauParams())


def test_params_validation():
    with pytest.raises(InvalidArgument):
        TauParams(n_max=0)
    with pytest.raises(InvalidArgument):
        GoodBoundParams(j_min=1, j_max=3)
    with pytest.raises(InvalidArgument):
        ShiftParams(ns=[0])
    with pytest.raises(InvalidArgument):
        ScalingParams(lam=0.0)
    with pytest.raises(InvalidArgument):
        MapsParams(j_min=7, j_max=9)
    with pytest.raises(InvalidArgument):
        UTauParams(series=["cuspidal"])
    with pytest.raises(InvalidArgument):
        UTauParams(taus=[0.5])
    with pytest.raises(InvalidArgument):
        CoeqnParams(families=["gaussian"])
    with pytest.raises(InvalidArgument):
        CoeqnParams(orders=[2, 3])
    with pytest.raises(InvalidArgument):
        LoglawParams(median_length=50.0)
    with pytest.raises(InvalidArgument):
        SparseParams(ns=[1000])
    with pytest.raises(InvalidArgument):
        ReturnsParams(scale=0.5)
    with pytest.raises(InvalidArgument):
        IdentitiesParams(pairs=0)


def test_sort_rows():
    experiment = UTauExperiment()
    rows = [
        dict(series="principal", nu=0.5, bump=0, tau=8.0),
        dict(series="complementary", nu=0.5, bump=1, tau=1.0),
        dict(series="principal", nu=0.25, bump=0, tau=1.0),
        dict(series="complementary", nu=0.5, bump=0, tau=64.0),
    ]
    ordered = experiment.sort_rows(rows)
    assert [(row["series"], row["nu"], row["bump"]) for row in ordered] == [
        ("complementary", 0.5, 0),
        ("complementary", 0.5, 1),
        ("principal", 0.25, 0),
        ("principal", 0.5, 0),
    ]
    assert len(rows_where(rows, series="principal", bump=0)) == 2


def test_tau(tmp_path):
    run = run_experiment(TauExperiment(TauParams(n_max=3)), tmp_path)
    assert [row["n"] for row in run.rows] == [1, 2, 3]
    assert run.rows[0]["oracle"] == 1
    assert all(row["rel_err"] <= 1e-6 for row in run.rows)
    assert run.manifest.passed


def test_good_bound_checks():
    experiment = GoodBoundExperiment()
    rows = []
    for j in range(1, 10):
        n = 2**j
        magnitude = n**5.5
        rows.append(
            dict(
                n=n,
                magnitude=magnitude,
                lift_integral=magnitude * math.exp(-2 * math.pi) * n**-5,
            )
        )
    slope, integral_slope = experiment.checks(rows)
    assert slope.value == pytest.approx(5.5)
    assert slope.bound == pytest.approx(6 - 1 / 6 + 0.05)
    assert slope.passed
    assert integral_slope.value == pytest.approx(0.5)
    assert integral_slope.passed


def test_shift():
    experiment = ShiftExperiment(ShiftParams(ns=[2]))
    (row,) = experiment.measure(2)
    assert row["s"] == pytest.approx(0.74)
    assert row["change"] <= 1e-8


def test_mean_fit_slope():
    rows = [
        dict(point=point, T=T, magnitude=(point + 1) * T**0.75)
        for point in range(3)
        for T in [10.0, 20.0, 40.0, 80.0]
    ]
    assert mean_fit_slope(rows, "T", "magnitude") == pytest.approx(0.75)


def test_identities():
    experiment = IdentitiesExperiment(IdentitiesParams(pairs=5))
    (commutators,) = experiment.measure("commutators")
    assert commutators["residual"] == 0
    assert commutators["bound"] == 1e-12
    (renormalisation,) = experiment.measure("renormalisation")
    assert renormalisation["residual"] <= 1e-12
    checks = experiment.checks([commutators, renormalisation])
    assert [check.name for check in checks] == ["commutators", "renormalisation"]
    assert all(check.passed for check in checks)


def test_bump_intervals():
    intervals = bump_intervals(seed=3, count=20, lo=0.5, hi=1.5)
    assert intervals == bump_intervals(seed=3, count=20, lo=0.5, hi=1.5)
    assert intervals != bump_intervals(seed=4, count=20, lo=0.5, hi=1.5)
    for a, b in intervals:
        assert 0.5 <= a < b <= 1.5


def test_utau_principal():
    params = UTauParams(series=["principal"], nus=[0.5], taus=[1.0, 8.0], bumps=2)
    experiment = UTauExperiment(params)
    assert experiment.tasks() == [("principal", 0.5, 0), ("principal", 0.5, 1)]
    rows = experiment.measure(("principal", 0.5, 1))
    assert [row["tau"] for row in rows] == [1.0, 8.0]
    for row in rows:
        assert row["ratio"] == pytest.approx(1.0, abs=1e-9)
    (isometry,) = experiment.checks(rows)
    assert isometry.name == "principal isometry"
    assert isometry.passed


def test_utau_checks():
    experiment = UTauExperiment()
    rows = [
        dict(series="complementary", ratio=0.6),
        dict(series="complementary", ratio=1.7),
        dict(series="discrete", ratio=1.0, lower=0.9, upper=1.2),
    ]
    checks = {check.name: check for check in experiment.checks(rows)}
    assert set(checks) == {
        "complementary min ratio",
        "complementary max ratio",
        "discrete bound margin",
    }
    assert all(check.passed for check in checks.values())
    assert checks["discrete bound margin"].value == pytest.approx(0.1)
    rows[0]["ratio"] = 0.5
    assert not experiment.checks(rows)[0].passed


def test_coeqn():
    experiment = CoeqnExperiment(CoeqnParams(families=["bump"]))
    (row,) = experiment.measure(("bump", 1.0, 1.0, 2))
    assert math.isfinite(row["ratio"]) and row["ratio"] > 0
    rows = [
        dict(family="bump", ratio=1.0),
        dict(family="bump", ratio=5.0),
    ]
    finite, spread, bump_spread = experiment.checks(rows)
    assert finite.passed
    assert spread.value == 5.0 and spread.passed
    assert bump_spread.value == 5.0 and bump_spread.passed
    finite, spread, _ = experiment.checks(
        rows + [dict(family="bump", ratio=math.inf)]
    )
    assert not finite.passed
    assert spread.value == 5.0


def test_coeqn_spread_over_families():
    experiment = CoeqnExperiment(CoeqnParams(families=["bump", "discrete"]))
    rows = [
        dict(family="bump", ratio=1.0),
        dict(family="bump", ratio=2.0),
        dict(family="discrete", ratio=50.0),
        dict(family="discrete", ratio=60.0),
    ]
    finite, spread, bump_spread, discrete_spread = experiment.checks(rows)
    assert finite.passed
    assert bump_spread.passed and discrete_spread.passed
    assert spread.value == pytest.approx(60.0)
    assert not spread.passed


def test_loglaw():
    params = LoglawParams(points=2, lengths=[100.0], median_length=100.0)
    experiment = LoglawExperiment(params)
    (row,) = experiment.measure((1, 100.0))
    assert row["point"] == 1 and row["T"] == 100.0
    assert row["statistic"] >= 0


def test_loglaw_checks():
    experiment = LoglawExperiment()
    statistics = {1e3: [0.4, 0.5, 0.6], 1e4: [0.45, 0.5, 0.7], 1e5: [0.5, 0.55, 0.6]}
    rows = [
        dict(point=point, T=T, statistic=value)
        for T, values in statistics.items()
        for point, value in enumerate(values)
    ]
    lower, upper, growth = experiment.checks(rows)
    assert lower.value == pytest.approx(0.5) and lower.passed
    assert upper.passed
    assert growth.value == pytest.approx(0.05) and growth.passed
    message = experiment.finish(rows)
    assert message is not None and "T=10000: 0.500" in message


def test_sparse():
    experiment = SparseExperiment(SparseParams(ns=[100, 1000]))
    (row,) = experiment.measure((0, 1000))
    assert abs(row["average"]) < 2
    assert row["abs_average"] == abs(row["average"])
    assert row["linearization_error"] <= row["linearization_bound"]
    assert row["progression_error"] <= row["progression_bound"]
    assert row["lipschitz"] > 0
    assert row["blocks"] >= 1


def test_sparse_checks():
    experiment = SparseExperiment(SparseParams(ns=[1000, 100000]))
    rows = [
        dict(
            point=0,
            N=1000,
            abs_average=0.2,
            linearization_error=0.1,
            linearization_bound=0.2,
            progression_error=0.01,
            progression_bound=0.5,
        ),
        dict(
            point=0,
            N=100000,
            abs_average=0.06,
            linearization_error=0.1,
            linearization_bound=0.2,
            progression_error=0.001,
            progression_bound=0.3,
        ),
    ]
    decay, excess, progression = experiment.checks(rows)
    assert decay.bound == pytest.approx(0.1)
    assert decay.passed and excess.passed and progression.passed
    assert progression.value == pytest.approx(-0.299)
    rows[1]["abs_average"] = 0.15
    assert not experiment.checks(rows)[0].passed
    # Small averages always pass
    rows[0]["abs_average"] = 0.01
    rows[1]["abs_average"] = 0.04
    assert experiment.checks(rows)[0].passed
    rows[0]["progression_error"] = 0.6
    assert not experiment.checks(rows)[2].passed


def test_returns_requires_calibration(tmp_path):
    experiment = ReturnsExperiment(calibration=tmp_path / "calibration.txt")
    with pytest.raises(InvalidArgument, match="calibrate"):
        experiment.tasks()


def test_returns_checks():
    experiment = ReturnsExperiment()
    rows = [
        dict(count=2, bound=400.0, degenerate_count=1, degenerate_bound=2.0),
        dict(count=0, bound=50.0, degenerate_count=3, degenerate_bound=2.5),
    ]
    for row in rows:
        row["separated"] = True
    count, degenerate, separation = experiment.checks(rows)
    assert count.passed
    assert degenerate.value == pytest.approx(1.2) and not degenerate.passed
    assert separation.value == 0 and separation.passed


def test_width_checks():
    experiment = WidthExperiment()
    rows = [dict(normalised=k) for k in [1.0, 2.0, 4.0]]
    finite, spread = experiment.checks(rows)
    assert finite.passed
    assert spread.value == 4.0 and spread.passed
    rows.append(dict(normalised=20.0))
    assert not experiment.checks(rows)[1].passed


def calibration_rows(scales: list[float]) -> list[dict]:
    return [
        dict(
            seed=0,
            index=index,
            d_m=0.1,
            injectivity_scale=scale,
            c=2.0,
            degenerate_ratio=1.5,
            refined_scale=scale * 0.95,
        )
        for index, scale in enumerate(scales)
    ]


def test_calibrate(tmp_path):
    path = tmp_path / "calibration.txt"
    experiment = CalibrateExperiment(CalibrateParams(stability=True), calibration=path)
    rows = calibration_rows([0.8, 0.5, 0.9])
    lower, upper, finite, stability = experiment.checks(rows)
    assert upper.value == pytest.approx(0.45)
    assert lower.passed and upper.passed and finite.passed
    assert stability.value == pytest.approx(0.05) and stability.passed

    message = experiment.finish(rows)
    assert message is not None and "written to" in message
    calibration = load_calibration(path)
    assert calibration.c_gamma == pytest.approx(0.45)
    assert calibration.c_gamma_prime == 1.5
    content = path.read_bytes()
    message = experiment.finish(rows)
    assert message is not None and "unchanged in" in message
    assert path.read_bytes() == content


def test_calibrate_requires_path():
    with pytest.raises(InvalidArgument):
        CalibrateExperiment().tasks()
