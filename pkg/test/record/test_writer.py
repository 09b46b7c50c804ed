import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from record import (
    canonical_json,
    columns_of,
    config_hash,
    format_value,
    write_csv,
    write_json,
)


def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value(0.1) == "0.1"
    assert format_value(1e-20) == "1e-20"
    assert format_value(1 / 3) == "0.3333333333333333"
    assert format_value(math.inf) == "inf"
    assert format_value(12) == "12"
    assert format_value("delta") == "delta"
    with pytest.raises(TypeError):
        format_value([1, 2])  # pyright: ignore[reportArgumentType]


def test_columns_of():
    rows = [{"n": 1, "a": 0.5}, {"n": 2, "b": 1.0, "a": 0.25}]
    assert columns_of(rows) == ["n", "a", "b"]


def test_write_csv(tmp_path):
    path = tmp_path / "results.csv"
    rows = [
        {"n": 1, "value": 0.5, "passed": True},
        {"n": 2, "value": None, "passed": False},
        {"n": 3, "value": -2.5e-17, "passed": True, "note": "a,b"},
    ]
    write_csv(path, rows)
    assert path.read_bytes() == (
        b"n,value,passed,note\n"
        b"1,0.5,true,\n"
        b"2,,false,\n"
        b'3,-2.5e-17,true,"a,b"\n'
    )
    write_csv(path, rows[:1], columns=["passed", "n"])
    assert path.read_bytes() == b"passed,n\ntrue,1\n"


def test_write_json_non_finite(tmp_path):
    path = tmp_path / "results.json"
    write_json(path, [{"gap": math.inf, "values": [math.nan, 1.0]}])
    assert json.loads(path.read_text()) == [{"gap": "inf", "values": ["nan", 1.0]}]
    assert path.read_text().endswith("]\n")


def test_config_hash():
    config = dict(experiment="tau", seed=0, params=dict(n_max=20, tol=1e-12))
    reordered = dict(params=dict(tol=1e-12, n_max=20), seed=0, experiment="tau")
    assert canonical_json(config) == canonical_json(reordered)
    assert config_hash(config) == config_hash(reordered)
    assert len(config_hash(config)) == 64
    assert config_hash(config) != config_hash(dict(config, seed=1))
    assert config_hash(config) != config_hash(
        dict(config, params=dict(n_max=21, tol=1e-12))
    )


@given(st.dictionaries(st.text(), st.floats(allow_nan=False) | st.integers()))
def test_config_hash_key_order(values: dict):
    reordered = dict(reversed(list(values.items())))
    assert config_hash(dict(params=values)) == config_hash(dict(params=reordered))
