"""
Experiment Runner Module

Seeded sweep execution: every sweep point simulates independent
realizations, runs the receiver chain of each scheme and accumulates a
data-aided SNR until the confidence target or a budget is reached.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from config.logging_config import configure_worker_logging
from config.settings import get_settings

from ..equalizers.windowing import default_window_symbols, discard_calibration
from ..metrics.estimators import SnrAccumulator, channel_memory_estimate, snr_data_aided, zeta
from ..models.equalizer_models import EqualizerConfig, RxChain, Scheme
from ..models.experiment_models import (
    ExperimentConfig,
    PointStatus,
    SweepAxis,
    SweepResult,
    SweepRow,
)
from ..models.link import Link
from ..models.signals import DualPolSignal, SymbolFrame
from ..receiver.rx_chain import run_chain
from ..simulation.channel import propagate_link
from ..simulation.waveform import WdmTransmitter
from ..utils.helpers import format_duration
from ..utils.validators import ConfigurationError, DiscardConvergenceError
from .results_io import append_partial, emit_csv, parse_csv, partial_path, write_manifest

logger = logging.getLogger(__name__)

WINDOWED_SCHEMES = (Scheme.VSFE_SINGLE, Scheme.VSFE_RECURSIVE, Scheme.VAO)
POWER_SEARCH_STEP_DB = 1.0
MAX_POWER_SEARCH_STEPS = 30


@dataclass(frozen=True)
class PointTask:
    """One sweep point, or one power-search series when ``distances`` is set"""
    scheme: Scheme
    power_dbm: float
    distance_index: int
    num_spans: int
    window_symbols: Optional[int] = None
    distances: Tuple[Tuple[int, int], ...] = ()

    @property
    def is_search(self) -> bool:
        return bool(self.distances)


def _power_key(power_dbm: float) -> int:
    return int(round((power_dbm + 100.0) * 100.0))


def realization_seeds(
    seeds: List[int],
    distance_index: int,
    power_dbm: float
) -> Iterator[Tuple[int, np.random.SeedSequence]]:
    """
    Endless stream of (master seed, SeedSequence) per realization

    Streams depend only on the master seed, the distance position and the
    launch power, so every scheme at a point sees the same symbols.
    """
    realization = 0
    while True:
        seed = seeds[realization % len(seeds)]
        yield seed, np.random.SeedSequence(
            entropy=seed, spawn_key=(distance_index, _power_key(power_dbm), realization)
        )
        realization += 1


def simulate_realization(
    config: ExperimentConfig,
    link: Link,
    power_dbm: float,
    sequence: np.random.SeedSequence
) -> Tuple[SymbolFrame, DualPolSignal, DualPolSignal]:
    """
    Transmit one multiplex and propagate it

    Args:
        config: Experiment configuration
        link: Link to traverse
        power_dbm: Launch power per channel
        sequence: Seed sequence of this realization

    Returns:
        Tuple of (symbols, launched field, received field)
    """
    symbol_sequence, noise_sequence = sequence.spawn(2)
    symbol_seed = int(symbol_sequence.generate_state(1)[0])
    frame, launched = WdmTransmitter(config.tx).transmit(seed=symbol_seed, power_dbm=power_dbm)
    received = propagate_link(launched, link, np.random.default_rng(noise_sequence))
    return frame, launched, received


def equalizer_config(
    config: ExperimentConfig,
    scheme: Scheme,
    num_spans: int,
    window_override: Optional[int] = None,
    discard_override: Optional[int] = None
) -> EqualizerConfig:
    """
    Equalizer geometry for a scheme at a sweep point

    With auto_window the window is four times the channel memory,
    capped at 1024 symbols and at the frame length.
    """
    tx = config.tx
    if window_override is None and config.equalizer.auto_window and scheme in WINDOWED_SCHEMES:
        span = config.link.fiber_span()
        memory = channel_memory_estimate(
            span.beta2, tx.symbol_rate, tx.total_bandwidth, span.length * num_spans
        )
        window_override = min(default_window_symbols(memory, tx.samples_per_symbol), tx.n_symbols)
    return config.equalizer.config_for(
        scheme, tx.samples_per_symbol, window_override=window_override, discard_override=discard_override
    )


def _channel(config: ExperimentConfig) -> int:
    return config.tx.center_channel if config.channel_index is None else config.channel_index


def calibrate_discard(
    config: ExperimentConfig,
    scheme: Scheme,
    received: DualPolSignal,
    frame: SymbolFrame,
    link: Link,
    eq_config: EqualizerConfig
) -> Tuple[int, Dict[int, float]]:
    """
    Calibrate the per-side discard of a windowed scheme on one realization

    Returns:
        Tuple of (discard in symbols, metric history); on non-convergence
        the largest discard tried is used
    """
    chain = RxChain(scheme=scheme, channel_index=config.channel_index)
    reference = frame.channel(_channel(config))

    history: Dict[int, float] = {}

    def metric(signal: DualPolSignal, candidate: EqualizerConfig) -> float:
        output = run_chain(signal, chain, link, candidate, config.tx)
        value = snr_data_aided(output.symbols, output.reference(reference)).snr_db
        history[candidate.discard_per_side] = value
        return value

    try:
        discard = discard_calibration(
            received,
            eq_config.model_copy(update={"discard_per_side": 0}),
            metric,
            tolerance=config.equalizer.discard_tolerance_db,
        )
    except DiscardConvergenceError as e:
        discard = max(e.history)
        logger.warning(f"{scheme.value}: discard calibration did not converge, using {discard} symbols")
    return discard, history


def evaluate_point(config: ExperimentConfig, task: PointTask) -> SweepRow:
    """
    Monte-Carlo SNR (and ζ for ASE-off links) of one scheme at one point

    Failures are recorded on the row and never raised.

    Args:
        config: Experiment configuration
        task: Sweep point

    Returns:
        SweepRow
    """
    start = time.perf_counter()
    scheme = task.scheme
    distance_km = task.num_spans * config.link.span_length_km
    windowed = scheme in WINDOWED_SCHEMES
    row = SweepRow(scheme=scheme, power_dbm=task.power_dbm, distance_km=distance_km, window_symbols=0, discard=0)

    try:
        link = config.link.build_link(opc=scheme.uses_opc_link, num_spans=task.num_spans)
        eq_config = equalizer_config(config, scheme, task.num_spans, task.window_symbols)
        chain = RxChain(scheme=scheme, channel_index=config.channel_index)
        compare_edc = config.needs_zeta and scheme != Scheme.EDC
        edc_link = config.link.build_link(opc=False, num_spans=task.num_spans) if compare_edc else None
        edc_chain = RxChain(scheme=Scheme.EDC, channel_index=config.channel_index)
        edc_config = equalizer_config(config, Scheme.EDC, task.num_spans)

        accumulator = SnrAccumulator()
        edc_accumulator = SnrAccumulator()
        used_seeds: List[int] = []
        status = PointStatus.PARTIAL
        stop = config.stop

        for realization, (seed, sequence) in enumerate(
            realization_seeds(config.seeds, task.distance_index, task.power_dbm)
        ):
            frame, launched, received = simulate_realization(config, link, task.power_dbm, sequence)
            if realization == 0 and windowed and config.equalizer.calibrate_discard:
                discard, _ = calibrate_discard(config, scheme, received, frame, link, eq_config)
                eq_config = equalizer_config(config, scheme, task.num_spans, task.window_symbols, discard)

            reference = frame.channel(_channel(config))
            output = run_chain(received, chain, link, eq_config, config.tx)
            accumulator.add(output.symbols, output.reference(reference))

            if compare_edc:
                edc_received = received
                if scheme.uses_opc_link:
                    edc_received = propagate_link(launched, edc_link, np.random.default_rng(sequence))
                edc_output = run_chain(edc_received, edc_chain, edc_link, edc_config, config.tx)
                edc_accumulator.add(edc_output.symbols, edc_output.reference(reference))

            if seed not in used_seeds:
                used_seeds.append(seed)
            logger.debug(
                f"{scheme.value} @ {task.power_dbm} dBm, {distance_km} km: realization {realization + 1}, "
                f"half-width {accumulator.half_width:.3f} dB"
            )

            if accumulator.half_width <= stop.half_width_db:
                status = PointStatus.SUCCESS
                break
            if stop.max_wall_time_s is not None and time.perf_counter() - start > stop.max_wall_time_s:
                logger.warning(f"{scheme.value} @ {task.power_dbm} dBm: wall-time budget exhausted")
                break
            if stop.max_symbols is None:
                if realization + 1 >= len(config.seeds):
                    break
            elif accumulator.count >= stop.max_symbols:
                logger.warning(f"{scheme.value} @ {task.power_dbm} dBm: symbol budget exhausted")
                break

        estimate = accumulator.estimate()
        zeta_db = None
        if config.needs_zeta:
            zeta_db = 0.0 if scheme == Scheme.EDC else zeta(estimate, edc_accumulator.estimate()).zeta_db

        row = row.model_copy(update={
            "window_symbols": eq_config.window_symbols if windowed else 0,
            "discard": eq_config.discard_per_side if windowed else 0,
            "snr_db": estimate.snr_db,
            "zeta_db": zeta_db,
            "num_symbols": estimate.num_symbols,
            "seeds": used_seeds,
            "status": status,
            "confidence_halfwidth": estimate.confidence_halfwidth,
        })
    except Exception as e:
        logger.error(f"{scheme.value} @ {task.power_dbm} dBm, {distance_km} km failed: {e}")
        row = row.model_copy(update={"status": PointStatus.ERROR, "error_message": str(e)})

    row = row.model_copy(update={"wall_time_s": time.perf_counter() - start})
    logger.info(
        f"{scheme.value} @ {task.power_dbm:+.1f} dBm, {distance_km:.0f} km: "
        f"SNR {row.snr_db if row.snr_db is not None else float('nan'):.2f} dB "
        f"({row.status.value}, {format_duration(row.wall_time_s)})"
    )
    return row


def search_optimum_power(
    config: ExperimentConfig,
    task: PointTask,
    completed: Optional[Dict[float, SweepRow]] = None
) -> List[SweepRow]:
    """
    Optimum-power rows along a distance series for one scheme

    At each distance a 1 dB grid is climbed from the previous distance's
    optimum until neither neighbour improves the SNR.

    Args:
        config: Experiment configuration
        task: Search task; ``distances`` lists (distance index, span count)
        completed: Rows already persisted, keyed by distance in km

    Returns:
        One row per distance not already completed
    """
    completed = completed or {}
    optimum = config.sweep.initial_power_dbm
    rows: List[SweepRow] = []

    for distance_index, num_spans in task.distances:
        distance_km = num_spans * config.link.span_length_km
        if distance_km in completed:
            optimum = completed[distance_km].power_dbm
            continue

        cache: Dict[float, SweepRow] = {}

        def snr_at(power: float) -> float:
            if power not in cache:
                cache[power] = evaluate_point(config, PointTask(
                    scheme=task.scheme,
                    power_dbm=power,
                    distance_index=distance_index,
                    num_spans=num_spans,
                    window_symbols=task.window_symbols,
                ))
            snr = cache[power].snr_db
            return -math.inf if snr is None else snr

        power = optimum
        for _ in range(MAX_POWER_SEARCH_STEPS):
            up, down = power + POWER_SEARCH_STEP_DB, power - POWER_SEARCH_STEP_DB
            best = max((power, up, down), key=snr_at)
            if best == power:
                break
            power = best

        optimum = power
        rows.append(cache[power])
        logger.info(f"{task.scheme.value}: optimum {power:+.1f} dBm at {distance_km:.0f} km")
    return rows


def plan_points(config: ExperimentConfig) -> List[PointTask]:
    """
    Expand a sweep definition into tasks

    Windowed schemes are repeated for every configured window size;
    distance sweeps with power optimization give one search per scheme
    and window.
    """
    sweep = config.sweep
    if sweep.axis == SweepAxis.DISTANCE:
        spans = config.span_counts()
        points = [(index, count) for index, count in enumerate(spans)]
        power = sweep.fixed_power_dbm if sweep.fixed_power_dbm is not None else config.tx.power_per_channel
        powers = [power]
    else:
        points = [(0, config.link.num_spans)]
        powers = list(sweep.powers_dbm)

    tasks: List[PointTask] = []
    for scheme in config.schemes:
        windows = list(sweep.windows) if sweep.windows and scheme in WINDOWED_SCHEMES else [None]
        for window in windows:
            if sweep.axis == SweepAxis.DISTANCE and sweep.optimize_power:
                if points:
                    tasks.append(PointTask(
                        scheme=scheme,
                        power_dbm=sweep.initial_power_dbm,
                        distance_index=points[0][0],
                        num_spans=points[0][1],
                        window_symbols=window,
                        distances=tuple(points),
                    ))
                continue
            for distance_index, num_spans in points:
                for power in powers:
                    tasks.append(PointTask(
                        scheme=scheme,
                        power_dbm=power,
                        distance_index=distance_index,
                        num_spans=num_spans,
                        window_symbols=window,
                    ))
    return tasks


def _row_window(config: ExperimentConfig, task: PointTask) -> int:
    if task.scheme not in WINDOWED_SCHEMES:
        return 0
    return equalizer_config(config, task.scheme, task.num_spans, task.window_symbols).window_symbols


def _point_key(scheme: Scheme, distance_km: float, power_dbm: Optional[float], window: int):
    return scheme.value, round(distance_km, 4), None if power_dbm is None else round(power_dbm, 4), window


def execute_task(
    config: ExperimentConfig,
    task: PointTask,
    completed: Optional[Dict[float, SweepRow]] = None
) -> List[SweepRow]:
    """Worker entry point: one point or one power search."""
    if task.is_search:
        return search_optimum_power(config, task, completed)
    return [evaluate_point(config, task)]


def run_experiment(
    config: ExperimentConfig,
    output: Optional[Union[str, Path]] = None,
    max_workers: Optional[int] = None,
    resume: bool = False,
    show_progress: Optional[bool] = None
) -> SweepResult:
    """
    Run every sweep point of an experiment

    Args:
        config: Experiment configuration
        output: Result CSV; completed points are appended to its partial sidecar
        max_workers: Worker processes (defaults to settings)
        resume: Skip points already in the partial sidecar
        show_progress: Display a progress bar (defaults to settings)

    Returns:
        Canonically sorted SweepResult
    """
    settings = get_settings()
    max_workers = max_workers or settings.max_workers
    show_progress = settings.show_progress if show_progress is None else show_progress
    started = time.perf_counter()

    previous: List[SweepRow] = []
    if output is not None:
        sidecar = partial_path(output)
        if resume and sidecar.exists():
            previous = parse_csv(sidecar, config.name).rows
            logger.info(f"Resuming with {len(previous)} completed points from {sidecar}")
        elif sidecar.exists():
            sidecar.unlink()

    done_points = {
        _point_key(row.scheme, row.distance_km, row.power_dbm, row.window_symbols) for row in previous
    }
    done_series: Dict[Tuple, Dict[float, SweepRow]] = {}
    for row in previous:
        done_series.setdefault((row.scheme.value, row.window_symbols), {})[row.distance_km] = row

    jobs: List[Tuple[PointTask, Optional[Dict[float, SweepRow]]]] = []
    for task in plan_points(config):
        window = _row_window(config, task)
        if task.is_search:
            completed = done_series.get((task.scheme.value, window), {})
            if len(completed) < len(task.distances):
                jobs.append((task, completed))
            continue
        distance_km = task.num_spans * config.link.span_length_km
        if _point_key(task.scheme, distance_km, task.power_dbm, window) not in done_points:
            jobs.append((task, None))

    logger.info(f"Experiment '{config.name}': {len(jobs)} tasks, {max_workers} worker(s)")
    rows = list(previous)

    def collect(new_rows: List[SweepRow]) -> None:
        for row in new_rows:
            rows.append(row)
            if output is not None:
                append_partial(row, output)

    progress = tqdm(total=len(jobs), desc=config.name, unit="point", disable=not show_progress or not jobs)
    if max_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(
            max_workers=max_workers,
            initializer=configure_worker_logging,
            initargs=(logging.getLogger().level, settings.log_file),
        ) as executor:
            futures = [executor.submit(execute_task, config, task, completed) for task, completed in jobs]
            for future in as_completed(futures):
                collect(future.result())
                progress.update(1)
    else:
        for task, completed in jobs:
            collect(execute_task(config, task, completed))
            progress.update(1)
    progress.close()

    result = SweepResult(name=config.name, rows=rows).sorted()
    elapsed = time.perf_counter() - started
    if output is not None:
        emit_csv(result, output)
        write_manifest(config, result, output, timings={"total_wall_time_s": elapsed})
        sidecar = partial_path(output)
        if sidecar.exists():
            sidecar.unlink()
    logger.info(f"Experiment '{config.name}' finished in {format_duration(elapsed)}")
    return result


def zeta_gain(result: SweepResult) -> pd.DataFrame:
    """
    ζ advantage of VAO over single-step VSFE per (distance, window)

    Returns:
        DataFrame with columns distance_km, window_symbols, zeta_vao_db,
        zeta_vsfe_db and gain_db
    """
    frame = pd.DataFrame([row.model_dump(mode="json") for row in result.rows])
    columns = ["distance_km", "window_symbols", "zeta_vao_db", "zeta_vsfe_db", "gain_db"]
    if frame.empty:
        return pd.DataFrame(columns=columns)
    frame = frame.dropna(subset=["zeta_db"])
    keys = ["distance_km", "window_symbols"]
    vao = frame[frame["scheme"] == Scheme.VAO.value].groupby(keys)["zeta_db"].mean()
    vsfe = frame[frame["scheme"] == Scheme.VSFE_SINGLE.value].groupby(keys)["zeta_db"].mean()
    table = pd.concat([vao.rename("zeta_vao_db"), vsfe.rename("zeta_vsfe_db")], axis=1, join="inner")
    table["gain_db"] = table["zeta_vao_db"] - table["zeta_vsfe_db"]
    return table.reset_index()[columns]


def reach_at_snr(result: SweepResult, scheme: Scheme, target_db: float) -> Optional[float]:
    """
    Distance (km) at which a scheme's SNR falls to a target

    Linear interpolation between the bracketing points of a distance
    sweep; the best SNR per distance is used when several powers exist.

    Returns:
        Distance in km, or None if the SNR never crosses the target
    """
    best: Dict[float, float] = {}
    for row in result.for_scheme(scheme):
        if row.snr_db is not None:
            best[row.distance_km] = max(best.get(row.distance_km, -math.inf), row.snr_db)
    points = sorted(best.items())
    for (d0, s0), (d1, s1) in zip(points, points[1:]):
        if s0 >= target_db > s1:
            return d0 + (s0 - target_db) * (d1 - d0) / (s0 - s1)
    return None


def peak_summary(result: SweepResult) -> pd.DataFrame:
    """
    Optimum launch power and peak SNR of every scheme in a power sweep

    Returns:
        DataFrame with columns scheme, distance_km, optimum_power_dbm, peak_snr_db
    """
    records = []
    groups: Dict[Tuple[str, float], List[SweepRow]] = {}
    for row in result.rows:
        if row.snr_db is not None:
            groups.setdefault((row.scheme.value, row.distance_km), []).append(row)
    for (scheme, distance), rows in sorted(groups.items()):
        top = max(rows, key=lambda row: row.snr_db)
        records.append({
            "scheme": scheme,
            "distance_km": distance,
            "optimum_power_dbm": top.power_dbm,
            "peak_snr_db": top.snr_db,
        })
    return pd.DataFrame.from_records(
        records, columns=["scheme", "distance_km", "optimum_power_dbm", "peak_snr_db"]
    )


def calibrate_discard_for(config: ExperimentConfig, scheme: Scheme) -> Tuple[int, Dict[int, float]]:
    """
    Discard calibration on the first realization of the configured system

    Args:
        config: Experiment configuration (first power, configured span count)
        scheme: Windowed scheme to calibrate

    Returns:
        Tuple of (discard in symbols, metric history)

    Raises:
        ConfigurationError: if the scheme does not use windows
    """
    if scheme not in WINDOWED_SCHEMES:
        raise ConfigurationError(f"{scheme.value} does not use block windows")
    sweep = config.sweep
    power = sweep.powers_dbm[0] if sweep.axis == SweepAxis.POWER and sweep.powers_dbm else config.tx.power_per_channel
    num_spans = config.link.num_spans
    link = config.link.build_link(opc=scheme.uses_opc_link, num_spans=num_spans)
    eq_config = equalizer_config(config, scheme, num_spans)
    _, sequence = next(realization_seeds(config.seeds, 0, power))
    frame, _, received = simulate_realization(config, link, power, sequence)
    return calibrate_discard(config, scheme, received, frame, link, eq_config)
