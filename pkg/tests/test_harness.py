import csv
import io
import math

import numpy as np
import pytest

from dpexperts.core import MechanismSpec, NoiseKind
from dpexperts.harness import (
    CSV_HEADER,
    AxisMismatch,
    cell_axis_value,
    cells_to_csv,
    estimate_pseudoregret,
    scaling_report,
    selection_frequency,
    sweep,
    write_csv,
)
from dpexperts.instances import (
    bernoulli_instance,
    deterministic_instance,
    uniform_grid_instance,
)

GUMBEL1 = MechanismSpec(0, NoiseKind.GUMBEL, epsilon=1.0)


class TestEstimation:
    def test_deterministic_from_seed(self):
        inst = bernoulli_instance([0.2, 0.6])
        a = estimate_pseudoregret(inst, GUMBEL1, 31, 500, base_seed=9)
        b = estimate_pseudoregret(inst, GUMBEL1, 31, 500, base_seed=9)
        assert a == b
        assert a != estimate_pseudoregret(inst, GUMBEL1, 31, 500, base_seed=10)

    def test_stderr_shrinks_with_trials(self):
        inst = bernoulli_instance([0.2, 0.6])
        small = estimate_pseudoregret(inst, GUMBEL1, 63, 400, 1)
        large = estimate_pseudoregret(inst, GUMBEL1, 63, 40_000, 1)
        assert large.stderr < small.stderr
        assert abs(small.mean - large.mean) < 5 * math.hypot(small.stderr, large.stderr)

    def test_single_trial_has_zero_stderr(self):
        inst = deterministic_instance([0.0, 1.0])
        est = estimate_pseudoregret(inst, GUMBEL1, 7, 1, 0)
        assert est.stderr == 0.0 and est.trials == 1

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            estimate_pseudoregret(deterministic_instance([0.0]), GUMBEL1, 7, 0, 0)


class TestSelectionFrequency:
    def test_is_a_pmf(self):
        inst = bernoulli_instance([0.2, 0.5, 0.8])
        freq = selection_frequency(inst, GUMBEL1, 4, 20_000, 3)
        assert freq.shape == (3,)
        assert freq.sum() == pytest.approx(1.0)
        assert freq.min() >= 0.0

    def test_best_action_dominates_at_late_epochs(self):
        inst = bernoulli_instance([0.1, 0.9])
        freq = selection_frequency(inst, GUMBEL1, 9, 20_000, 3)
        assert freq[0] > 0.95

    def test_validation(self):
        inst = bernoulli_instance([0.2, 0.8])
        with pytest.raises(ValueError):
            selection_frequency(inst, GUMBEL1, 0, 100, 0)
        with pytest.raises(ValueError):
            selection_frequency(inst, GUMBEL1, 1, 0, 0)


class TestSweep:
    def _cells(self, **kwargs):
        instances = [("a", bernoulli_instance([0.2, 0.6])),
                     ("b", deterministic_instance([0.0, 0.5]))]
        specs = [MechanismSpec(0, NoiseKind.GUMBEL, epsilon=e) for e in (0.5, 1.0)]
        return sweep(instances, specs, [15, 31], trials=200, base_seed=77, **kwargs)

    def test_grid_order_and_ids(self):
        cells = self._cells()
        assert len(cells) == 8
        assert [c.run_id for c in cells] == list(range(8))
        assert [c.label for c in cells[:4]] == ["a"] * 4

    def test_parallel_matches_sequential(self):
        seq = self._cells(max_workers=1)
        par = self._cells(max_workers=4)
        assert [(c.run_id, c.estimate) for c in seq] == [(c.run_id, c.estimate) for c in par]

    def test_env_var_controls_default_workers(self, monkeypatch):
        monkeypatch.setenv("DPEXPERTS_THREADS", "3")
        via_env = [(c.run_id, c.estimate) for c in self._cells()]
        explicit = [(c.run_id, c.estimate) for c in self._cells(max_workers=3)]
        assert via_env == explicit


class TestCsv:
    def test_header_and_rows(self):
        cells = sweep([("det", deterministic_instance([0.0, 1.0]))],
                      [GUMBEL1], [7], trials=50, base_seed=5)
        text = cells_to_csv(cells)
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        rows = list(csv.DictReader(io.StringIO(text)))
        assert len(rows) == 1
        row = rows[0]
        assert row["instance"] == "det" and row["K"] == "2"
        assert row["noise"] == "gumbel" and row["T"] == "7"
        # Floats round-trip exactly through repr.
        assert float(row["regret_mean"]) == cells[0].estimate.mean

    def test_write_csv(self, tmp_path):
        cells = sweep([("det", deterministic_instance([0.0, 1.0]))],
                      [GUMBEL1], [7], trials=50, base_seed=5)
        path = tmp_path / "out.csv"
        write_csv(cells, str(path))
        assert path.read_text().startswith(CSV_HEADER)


class TestScalingReport:
    def test_k_axis_normalizes_by_log(self):
        specs = [MechanismSpec(0, NoiseKind.LAPLACE, epsilon=1.0)]
        instances = [(f"K={k}", uniform_grid_instance(k)) for k in (8, 16, 32)]
        cells = sweep(instances, specs, [1023], trials=500, base_seed=3)
        rows = scaling_report(cells, "K")
        assert [v for v, _, _ in rows] == [8.0, 16.0, 32.0]
        for v, regret, norm in rows:
            assert norm == pytest.approx(regret / math.log(v))

    def test_epsilon_axis(self):
        inst = [("g", uniform_grid_instance(8))]
        specs = [MechanismSpec(0, NoiseKind.GUMBEL, epsilon=e) for e in (0.5, 2.0)]
        cells = sweep(inst, specs, [255], trials=500, base_seed=3)
        rows = scaling_report(cells, "epsilon")
        for v, regret, norm in rows:
            assert norm == pytest.approx(regret * v)

    def test_mismatched_cells_rejected(self):
        inst = [("g", uniform_grid_instance(8))]
        specs = [MechanismSpec(0, NoiseKind.GUMBEL, epsilon=1.0)]
        cells = sweep(inst, specs, [15, 31], trials=50, base_seed=1)
        with pytest.raises(AxisMismatch):
            scaling_report(cells, "epsilon")
        with pytest.raises(AxisMismatch):
            scaling_report(cells, "orbit")

    def test_delta_min_axis_needs_positive_gap(self):
        cells = sweep([("flat", deterministic_instance([0.5, 0.5]))],
                      [GUMBEL1], [7], trials=10, base_seed=0)
        with pytest.raises(AxisMismatch):
            cell_axis_value(cells[0], "delta_min")
