import json
import math

import numpy as np
import pandas as pd
import pytest

from processes.P03_shared_functions import (
    bar_to_pa, pa_to_bar, normalise_bar_keys, read_flat_config, write_csv, write_json,
    format_aligned_table,
)
from processes.P06_class_items import ConfigError


class TestUnits:

    def test_bar_pa_conversion(self):
        assert bar_to_pa(1.015) == pytest.approx(101500.0)
        assert pa_to_bar(92500.0) == pytest.approx(0.925)
        np.testing.assert_allclose(bar_to_pa(np.array([1.0, 2.0])), [1e5, 2e5])


class TestFlatConfig:

    def test_bar_suffix_is_converted(self):
        out = normalise_bar_keys({"pin_bar": 1.05, "m": 60.45})
        assert out == {"pin": pytest.approx(1.05e5), "m": 60.45}

    def test_both_forms_rejected(self):
        with pytest.raises(ConfigError):
            normalise_bar_keys({"pin_bar": 1.05, "pin": 1.05e5})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            read_flat_config(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nu: 1", encoding="utf-8")
        with pytest.raises(ConfigError):
            read_flat_config(path)

    def test_nested_rejected(self, tmp_path):
        path = tmp_path / "nested.json"
        path.write_text(json.dumps({"qp": {"alpha": 1}}), encoding="utf-8")
        with pytest.raises(ConfigError):
            read_flat_config(path)

    def test_reads_flat_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"nu": 150, "ps_bar": 1.015, "qp_G": [[1.0]]}), encoding="utf-8")
        out = read_flat_config(path)
        assert out["nu"] == 150
        assert out["ps"] == pytest.approx(101500.0)
        assert out["qp_G"] == [[1.0]]


class TestWriters:

    def test_json_non_finite_becomes_null(self, tmp_path):
        path = write_json({"a": math.inf, "b": np.float64(1.5), "c": [math.nan]}, tmp_path / "x.json")
        assert json.loads(path.read_text()) == {"a": None, "b": 1.5, "c": [None]}

    def test_csv_is_deterministic(self, tmp_path):
        df = pd.DataFrame({"t": [0.0, 0.1], "ps": [101500.0, 1 / 3]})
        a = write_csv(df, tmp_path / "a.csv").read_bytes()
        b = write_csv(df, tmp_path / "b.csv").read_bytes()
        assert a == b
        assert a.decode().splitlines()[0] == "t,ps"
        assert "0.333333333333" in a.decode()

    def test_aligned_table(self):
        text = format_aligned_table(pd.DataFrame({"beta1": [150.0], "feasible": [True]}))
        lines = text.splitlines()
        assert len(lines) == 3
        assert set(lines[1]) <= {"-", " "}
