"""CSV emission and run manifests.

Floats are serialized with 17 significant digits so files round-trip to the
exact in-memory values.  Ensemble files carry one mean and one standard
error column per observable; per-trajectory files add a 0/1 ``jump`` column
marking rows recorded immediately after a collapse.
"""

from __future__ import annotations

import csv
import json
import time as _time
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, describe
from .engine import TrajectoryRecord
from .ensemble import EnsembleStatistics


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_ensemble_csv(path, stats: EnsembleStatistics) -> None:
    names = stats.observable_names()
    header = ["t"]
    for n in names:
        header += [f"{n}_mean", f"{n}_stderr"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, t in enumerate(stats.times):
            row = [_fmt(t)]
            for n in names:
                row += [_fmt(stats.mean[n][i]), _fmt(stats.std_error[n][i])]
            w.writerow(row)


def read_ensemble_csv(path):
    """Read a file produced by write_ensemble_csv back into arrays."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        rows = [[float(x) for x in row] for row in r]
    data = np.array(rows)
    out = {name: data[:, i] for i, name in enumerate(header)}
    return out


def write_trajectory_csv(path, rec: TrajectoryRecord) -> None:
    names = tuple(rec.observables.keys())
    jump_rows = set()
    times = rec.times
    if len(times) > 1:
        step = times[1] - times[0]
        for j in rec.jumps:
            idx = int(np.ceil((j.time - times[0]) / step + 1e-9))
            if 0 <= idx < len(times):
                jump_rows.add(idx)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", *names, "jump"])
        for i, t in enumerate(times):
            row = [_fmt(t)]
            row += [_fmt(rec.observables[n][i]) for n in names]
            row.append("1" if i in jump_rows else "0")
            w.writerow(row)


def write_manifest(path, config: RunConfig, outputs: list[str],
                   wall_time_s: float, extra: dict | None = None) -> None:
    manifest = {
        "version": __version__,
        "config": describe(config),
        "outputs": outputs,
        "wall_time_s": wall_time_s,
        "created_unix": int(_time.time()),
    }
    if extra:
        manifest.update(extra)
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
