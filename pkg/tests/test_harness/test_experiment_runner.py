"""
Unit tests for sweep planning, point evaluation and result analyses
"""

import numpy as np
import pytest

from src.harness.experiment_runner import (
    PointTask,
    calibrate_discard_for,
    equalizer_config,
    evaluate_point,
    peak_summary,
    plan_points,
    reach_at_snr,
    realization_seeds,
    run_experiment,
    search_optimum_power,
    zeta_gain,
)
from src.harness.results_io import append_partial, manifest_path, parse_csv, partial_path
from src.models.equalizer_models import Scheme
from src.models.experiment_models import (
    EqualizerSettings,
    ExperimentConfig,
    LinkConfig,
    PointStatus,
    SweepAxis,
    SweepConfig,
    SweepResult,
    SweepRow,
    TxConfig,
)
from src.utils.validators import ConfigurationError


def _row(scheme, power, distance, snr=None, zeta=None, window=0):
    return SweepRow(scheme=scheme, power_dbm=power, distance_km=distance, window_symbols=window,
                    discard=0, snr_db=snr, zeta_db=zeta)


class TestPlanning:
    """Expanding sweeps into tasks"""

    def test_power_sweep(self):
        """One task per scheme and power"""
        tasks = plan_points(ExperimentConfig())
        assert len(tasks) == len(Scheme) * 7
        assert all(task.num_spans == 10 for task in tasks)

    def test_window_sweep_repeats_windowed_schemes(self):
        """Windows multiply only the windowed schemes"""
        config = ExperimentConfig(sweep=SweepConfig(windows=[128, 256]))
        tasks = plan_points(config)
        assert len(tasks) == 3 * 2 * 7 + 3 * 7
        assert {task.window_symbols for task in tasks if task.scheme == Scheme.EDC} == {None}

    def test_power_search_tasks(self):
        """Power optimization gives one search per scheme"""
        config = ExperimentConfig(
            schemes=[Scheme.EDC, Scheme.VAO],
            sweep=SweepConfig(axis=SweepAxis.DISTANCE, distances_km=[200.0, 400.0], optimize_power=True),
        )
        tasks = plan_points(config)
        assert len(tasks) == 2
        assert all(task.is_search for task in tasks)
        assert tasks[0].distances == ((0, 2), (1, 4))

    def test_auto_window_from_memory(self):
        """auto_window sizes windowed schemes from the channel memory"""
        config = ExperimentConfig(equalizer=EqualizerSettings(auto_window=True))
        vao = equalizer_config(config, Scheme.VAO, 10)
        assert vao.window_symbols == 1024
        assert vao.discard_per_side == 256
        assert equalizer_config(config, Scheme.EDC, 10).window_symbols == 512


class TestSeeds:
    """Realization seed streams"""

    def test_streams_are_reproducible(self):
        """Equal arguments give equal streams"""
        first = realization_seeds([1, 2], 0, 0.0)
        second = realization_seeds([1, 2], 0, 0.0)
        for _ in range(3):
            (seed_a, seq_a), (seed_b, seq_b) = next(first), next(second)
            assert seed_a == seed_b
            np.testing.assert_array_equal(seq_a.generate_state(2), seq_b.generate_state(2))

    def test_streams_cycle_master_seeds(self):
        """Master seeds are used in turn"""
        stream = realization_seeds([4, 7], 0, 0.0)
        assert [next(stream)[0] for _ in range(4)] == [4, 7, 4, 7]

    def test_power_changes_stream(self):
        """Different powers see different realizations"""
        _, low = next(realization_seeds([1], 0, 0.0))
        _, high = next(realization_seeds([1], 0, 2.0))
        assert not np.array_equal(low.generate_state(2), high.generate_state(2))


class TestEvaluatePoint:
    """Monte-Carlo evaluation on a tiny system"""

    @pytest.fixture
    def config(self):
        """One channel, 64 symbols, two noiseless spans"""
        return ExperimentConfig(
            name="tiny",
            tx=TxConfig(num_channels=1, n_symbols=64),
            link=LinkConfig(num_spans=2, steps_per_span=2, ase_enabled=False),
            schemes=[Scheme.EDC, Scheme.OPC],
            sweep=SweepConfig(powers_dbm=[0.0, 2.0]),
            seeds=[1],
        )

    def test_edc_point(self, config):
        """EDC rows carry an SNR and ζ = 0"""
        row = evaluate_point(config, PointTask(Scheme.EDC, 0.0, 0, 2))
        assert row.status in (PointStatus.SUCCESS, PointStatus.PARTIAL)
        assert row.snr_db > 20.0
        assert row.zeta_db == 0.0
        assert row.num_symbols == 2 * 64
        assert row.seeds == [1]
        assert row.window_symbols == 0

    def test_opc_point_has_zeta(self, config):
        """ASE-off points report ζ against EDC on the same symbols"""
        row = evaluate_point(config, PointTask(Scheme.OPC, 2.0, 0, 2))
        assert row.error_message is None
        assert row.zeta_db is not None

    def test_failure_is_recorded(self, config):
        """A window longer than the frame fails the point without raising"""
        row = evaluate_point(config, PointTask(Scheme.VSFE_SINGLE, 0.0, 0, 2, window_symbols=512))
        assert row.status == PointStatus.ERROR
        assert row.snr_db is None
        assert row.error_message

    def test_run_experiment_writes_artifacts(self, config, tmp_path):
        """A finished run leaves the CSV and manifest, not the sidecar"""
        output = tmp_path / "tiny.csv"
        result = run_experiment(config, output=output, max_workers=1, show_progress=False)
        assert len(result.rows) == 4
        assert output.exists()
        assert manifest_path(output).exists()
        assert not partial_path(output).exists()
        assert len(parse_csv(output).rows) == 4

    def test_resume_skips_completed(self, config, tmp_path, mocker):
        """Rows in the partial sidecar are not recomputed"""
        output = tmp_path / "tiny.csv"
        append_partial(_row(Scheme.EDC, 0.0, 200.0, snr=30.0, zeta=0.0), output)
        calls = []

        def fake(cfg, task):
            calls.append(task)
            return _row(task.scheme, task.power_dbm, task.num_spans * 100.0, snr=25.0, zeta=0.0)

        mocker.patch("src.harness.experiment_runner.evaluate_point", side_effect=fake)
        result = run_experiment(config, output=output, max_workers=1, resume=True, show_progress=False)
        assert len(calls) == 3
        assert len(result.rows) == 4

    def test_empty_sweep(self, config, tmp_path):
        """No powers gives a header-only CSV"""
        empty = config.model_copy(update={"sweep": SweepConfig(powers_dbm=[])})
        result = run_experiment(empty, output=tmp_path / "none.csv", max_workers=1, show_progress=False)
        assert result.rows == []
        assert (tmp_path / "none.csv").read_text().startswith("scheme,")

    def test_calibration_needs_windowed_scheme(self, config):
        """Discard calibration is only defined for windowed schemes"""
        with pytest.raises(ConfigurationError):
            calibrate_discard_for(config, Scheme.EDC)


class TestPowerSearch:
    """Hill climbing of the launch power"""

    @pytest.fixture
    def config(self):
        """Distance sweep with power optimization"""
        return ExperimentConfig(
            schemes=[Scheme.EDC],
            sweep=SweepConfig(axis=SweepAxis.DISTANCE, distances_km=[200.0, 400.0], optimize_power=True),
        )

    @staticmethod
    def _parabola(cfg, task):
        snr = 20.0 - (task.power_dbm - 3.0) ** 2
        return _row(task.scheme, task.power_dbm, task.num_spans * 100.0, snr=snr)

    def test_finds_optimum(self, config, mocker):
        """The climb stops at the SNR maximum for every distance"""
        task = plan_points(config)[0]
        mocker.patch("src.harness.experiment_runner.evaluate_point", side_effect=self._parabola)
        rows = search_optimum_power(config, task)
        assert [row.power_dbm for row in rows] == [3.0, 3.0]
        assert [row.distance_km for row in rows] == [200.0, 400.0]

    def test_skips_completed_distances(self, config, mocker):
        """Completed distances are not searched again"""
        task = plan_points(config)[0]
        done = {200.0: _row(Scheme.EDC, 3.0, 200.0, snr=20.0)}
        mock_eval = mocker.patch("src.harness.experiment_runner.evaluate_point", side_effect=self._parabola)
        rows = search_optimum_power(config, task, done)
        assert [row.distance_km for row in rows] == [400.0]
        assert all(call.args[1].num_spans == 4 for call in mock_eval.call_args_list)


class TestAnalyses:
    """Summaries of finished sweeps"""

    def test_zeta_gain(self):
        """Gain is VAO ζ minus single-step VSFE ζ"""
        result = SweepResult(rows=[
            _row(Scheme.VAO, 0.0, 1000.0, snr=25.0, zeta=20.0, window=512),
            _row(Scheme.VSFE_SINGLE, 0.0, 1000.0, snr=18.0, zeta=5.0, window=512),
            _row(Scheme.EDC, 0.0, 1000.0, snr=15.0, zeta=0.0),
        ])
        table = zeta_gain(result)
        assert len(table) == 1
        assert table.loc[0, "gain_db"] == pytest.approx(15.0)

    def test_zeta_gain_empty(self):
        """No rows gives an empty table with the expected columns"""
        assert list(zeta_gain(SweepResult()).columns) == [
            "distance_km", "window_symbols", "zeta_vao_db", "zeta_vsfe_db", "gain_db"
        ]

    def test_reach_interpolates(self):
        """Reach is interpolated between bracketing distances"""
        result = SweepResult(rows=[
            _row(Scheme.EDC, 0.0, 200.0, snr=20.0),
            _row(Scheme.EDC, 0.0, 400.0, snr=16.0),
            _row(Scheme.EDC, 0.0, 600.0, snr=12.0),
        ])
        assert reach_at_snr(result, Scheme.EDC, 14.0) == pytest.approx(500.0)
        assert reach_at_snr(result, Scheme.EDC, 5.0) is None

    def test_peak_summary(self):
        """Peak SNR and its power per scheme"""
        result = SweepResult(rows=[
            _row(Scheme.EDC, -2.0, 1000.0, snr=16.0),
            _row(Scheme.EDC, 0.0, 1000.0, snr=17.0),
            _row(Scheme.EDC, 2.0, 1000.0, snr=16.5),
            _row(Scheme.OPC, 2.0, 1000.0),
        ])
        summary = peak_summary(result)
        assert list(summary["scheme"]) == ["edc"]
        assert summary.loc[0, "optimum_power_dbm"] == 0.0
        assert summary.loc[0, "peak_snr_db"] == 17.0
