"""Seeded parallel trajectory ensembles and exponential-rate extraction.

Trajectory i always uses random substream i of the master seed, so results
are independent of worker count and merge order.  Accumulation of means and
variances runs over completed trajectories in fixed index order, which makes
ensemble statistics bit-stable across reruns.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import RunConfig, build_model
from .engine import RngStream, TrajectoryRecord, run_trajectory

WORKERS_ENV = "ZENOSIM_WORKERS"


class NonPositiveValues(ValueError):
    """Log-linear fit requested on data containing values <= 0."""


@dataclass
class TrajectorySummary:
    """Per-trajectory digest kept alongside the ensemble statistics."""

    trajectory_id: int
    n_jumps: int
    jump_times: np.ndarray
    final_observables: dict[str, float]


@dataclass
class EnsembleStatistics:
    """Across-trajectory mean and standard error per recorded time.

    ``curves`` holds the raw per-trajectory series (one row per trajectory)
    when the ensemble was run with keep_curves=True; block-wise analyses
    need them.
    """

    times: np.ndarray
    mean: dict[str, np.ndarray]
    std_error: dict[str, np.ndarray]
    n_trajectories: int
    total_jumps: int
    trajectory_summaries: list[TrajectorySummary] = field(default_factory=list)
    curves: Optional[dict[str, np.ndarray]] = None

    def observable_names(self) -> tuple[str, ...]:
        return tuple(self.mean.keys())


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def _run_range(config: RunConfig, lo: int, hi: int) -> list[TrajectoryRecord]:
    model = build_model(config.model)
    return [
        run_trajectory(model, config, RngStream(config.master_seed, i))
        for i in range(lo, hi)
    ]


def run_ensemble(config: RunConfig, workers: Optional[int] = None,
                 keep_curves: bool = False) -> EnsembleStatistics:
    """Run the configured ensemble and aggregate statistics.

    Failures of individual trajectories abort the run once they exceed 1% of
    the ensemble; below that they are re-raised at the end with the count.
    """
    n = config.n_trajectories
    if workers is None:
        workers = default_workers()
    workers = max(1, min(workers, n))

    records: dict[int, TrajectoryRecord] = {}
    failures: list[tuple[int, Exception]] = []

    if workers == 1:
        model = build_model(config.model)
        for i in range(n):
            try:
                records[i] = run_trajectory(model, config, RngStream(config.master_seed, i))
            except Exception as exc:  # collected, re-raised below
                failures.append((i, exc))
                if len(failures) > max(1, n // 100):
                    raise
    else:
        chunk = max(1, -(-n // (workers * 4)))
        ranges = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_run_range, config, lo, hi): (lo, hi) for lo, hi in ranges}
            for fut, (lo, hi) in futures.items():
                try:
                    for rec in fut.result():
                        records[rec.trajectory_id] = rec
                except Exception as exc:
                    failures.append((lo, exc))
                    if len(failures) > max(1, n // 100):
                        raise

    if failures:
        idx, exc = failures[0]
        raise RuntimeError(f"{len(failures)} trajectories failed, first at index {idx}: {exc}")

    first = records[0]
    names = tuple(first.observables.keys())
    npts = len(first.times)
    sums = {k: np.zeros(npts) for k in names}
    sq_sums = {k: np.zeros(npts) for k in names}
    curves = {k: np.empty((n, npts)) for k in names} if keep_curves else None
    total_jumps = 0
    summaries = []
    for i in range(n):  # fixed index order: merge is deterministic
        rec = records[i]
        for k in names:
            v = rec.observables[k]
            sums[k] += v
            sq_sums[k] += v * v
            if curves is not None:
                curves[k][i] = v
        total_jumps += len(rec.jumps)
        summaries.append(TrajectorySummary(
            trajectory_id=i,
            n_jumps=len(rec.jumps),
            jump_times=np.array([j.time for j in rec.jumps]),
            final_observables=rec.final_observables,
        ))

    mean = {k: sums[k] / n for k in names}
    if n > 1:
        std_error = {
            k: np.sqrt(np.maximum(sq_sums[k] / n - mean[k] ** 2, 0.0) / (n - 1))
            for k in names
        }
    else:
        std_error = {k: np.zeros(npts) for k in names}

    return EnsembleStatistics(
        times=first.times.copy(),
        mean=mean,
        std_error=std_error,
        n_trajectories=n,
        total_jumps=total_jumps,
        trajectory_summaries=summaries,
        curves=curves,
    )


@dataclass(frozen=True)
class FitResult:
    """Exponent extracted from a log-linear least-squares fit."""

    rate: float
    intercept: float
    window: tuple[float, float]
    residual_rms: float
    n_points: int


def fit_exponential_rate(times: np.ndarray, values: np.ndarray,
                         window: tuple[float, float],
                         weights: Optional[np.ndarray] = None) -> FitResult:
    """Least-squares line through log(values) on t in [window]; rate = -slope.

    ``weights`` (inverse variances of the log-values), when given, turn the
    fit into weighted least squares; the default is the plain unweighted
    fit.
    """
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise ValueError(f"empty fit window {window}")
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = (times >= t_lo) & (times <= t_hi)
    if mask.sum() < 10:
        raise ValueError(f"fit window {window} contains {mask.sum()} points; need >= 10")
    y = values[mask]
    if np.any(y <= 0):
        raise NonPositiveValues(
            f"{int(np.sum(y <= 0))} non-positive samples inside fit window {window}"
        )
    t = times[mask]
    logy = np.log(y)
    w = None if weights is None else np.sqrt(np.asarray(weights, dtype=float)[mask])
    slope, intercept = np.polyfit(t, logy, 1, w=w)
    resid = logy - (slope * t + intercept)
    return FitResult(
        rate=-float(slope),
        intercept=float(intercept),
        window=(float(t_lo), float(t_hi)),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        n_points=int(mask.sum()),
    )


def default_fit_window(times: np.ndarray, mean: np.ndarray, std_error: np.ndarray,
                       t_start: float, noise_floor: float = 0.02,
                       snr_stop: float = 8.0) -> tuple[float, float]:
    """Fit window skipping the short-time region and the noise-dominated tail.

    Starts at t_start; ends just before the first time where
    mean - 2*std_error drops below max(noise_floor, snr_stop*std_error) (or
    at the last sample).  The signal-to-noise cutoff keeps the log-linear
    fit conditioned: with a plain absolute floor the tail points carry
    O(1) log-noise at small ensembles and dominate the fitted slope.
    """
    times = np.asarray(times)
    cutoff = np.maximum(noise_floor, snr_stop * std_error)
    below = np.nonzero((mean - 2.0 * std_error < cutoff) & (times > t_start))[0]
    t_hi = times[below[0] - 1] if len(below) and below[0] > 0 else times[-1]
    if t_hi <= t_start:
        t_hi = times[-1]
    return (float(t_start), float(t_hi))


def block_rate_estimate(times: np.ndarray, curves: np.ndarray,
                        window: tuple[float, float], n_blocks: int = 10,
                        noise_floor: float = 0.02) -> tuple[float, float, np.ndarray]:
    """Rate mean and standard error over disjoint trajectory blocks.

    ``curves`` holds one row per trajectory.  The trajectories are split
    into ``n_blocks`` contiguous blocks; each block-mean curve is fitted on
    ``window``, truncated where that block's own values reach the noise
    floor.  The block fits weight each log-point with the inverse of its
    binomial log-variance (proportional to m/(1-m) for occupation curves,
    whose per-trajectory variance is m(1-m)), which keeps the noisy tail
    from dominating the slope.  Returns (mean rate, standard error,
    per-block rates).
    """
    curves = np.asarray(curves)
    n = curves.shape[0]
    if n < n_blocks:
        n_blocks = max(2, n)
    edges = np.linspace(0, n, n_blocks + 1).astype(int)
    rates = []
    for b in range(n_blocks):
        block = curves[edges[b]:edges[b + 1]].mean(axis=0)
        t_lo, t_hi = window
        usable = (times >= t_lo) & (times <= t_hi) & (block > noise_floor)
        if usable.sum() < 10:
            continue
        weights = np.clip(block, 1e-6, 1 - 1e-3)
        weights = weights / (1.0 - weights)
        try:
            fit = fit_exponential_rate(times, block, (t_lo, float(times[usable][-1])),
                                       weights=weights)
        except NonPositiveValues:
            continue
        rates.append(fit.rate)
    if len(rates) < 3:
        raise ValueError("too few usable blocks for a rate uncertainty estimate")
    rates = np.asarray(rates)
    return float(rates.mean()), float(rates.std(ddof=1) / np.sqrt(len(rates))), rates
