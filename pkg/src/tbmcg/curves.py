"""Learning-curve containers and the CSV/metadata writers shared by the
system-identification and noise-control harnesses."""

import json
from dataclasses import dataclass, field

import numpy as np

DB_FLOOR = -300.0
METRIC_NAMES = ("nmsd_db", "anr_db")


@dataclass
class LearningCurve:
    """Per-iteration metric trace averaged over Monte Carlo runs."""

    metric_name: str
    values: np.ndarray
    runs_averaged: int = 1
    diverged_runs: int = 0

    def __post_init__(self):
        if self.metric_name not in METRIC_NAMES:
            raise ValueError(f"metric_name must be one of {METRIC_NAMES}")
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("curve values must be 1-D")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("curve values must be finite (floor dB values first)")
        if self.runs_averaged < 1:
            raise ValueError("runs_averaged must be at least 1")

    def __len__(self):
        return len(self.values)


def floor_db(values, floor=DB_FLOOR):
    """Clamp dB values at the documented floor so traces stay finite."""
    return np.maximum(values, floor)


def average_traces(traces, metric_name, diverged_runs=0, mode="db"):
    """Pointwise average of per-run dB traces.

    ``mode='db'`` averages the dB values directly; ``mode='linear'`` averages
    the linear powers and converts back. Input traces must already be
    floored/finite.
    """
    stack = np.stack([np.asarray(t, dtype=np.float64) for t in traces])
    if mode == "db":
        avg = stack.mean(axis=0)
    elif mode == "linear":
        avg = 10.0 * np.log10(np.mean(10.0 ** (stack / 10.0), axis=0))
    else:
        raise ValueError(f"unknown averaging mode {mode!r}")
    return LearningCurve(metric_name, floor_db(avg), runs_averaged=len(traces),
                         diverged_runs=diverged_runs)


def smooth(curve, window):
    """Centered moving average; endpoints use symmetrically shrunken windows."""
    window = int(window)
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and positive, got {window}")
    values = curve.values
    if window == 1:
        out = values.copy()
    else:
        half = window // 2
        csum = np.concatenate([[0.0], np.cumsum(values)])
        n = len(values)
        idx = np.arange(n)
        lo = np.maximum(idx - half, 0)
        hi = np.minimum(idx + half, n - 1)
        out = (csum[hi + 1] - csum[lo]) / (hi - lo + 1)
    return LearningCurve(curve.metric_name, out, curve.runs_averaged, curve.diverged_runs)


def write_curves(curves, path, floor=DB_FLOOR):
    """Write curves as CSV: ``iteration,<name>_<metric>,...`` in roster order.

    Values are rendered with 6 significant digits; a comment header records
    the dB floor. All curves must share one iteration count. Rewriting the
    same curves produces a byte-identical file.
    """
    if not curves:
        raise ValueError("no curves to write")
    lengths = {len(c) for c in curves.values()}
    if len(lengths) != 1:
        raise ValueError(f"curves have unequal lengths: {sorted(lengths)}")
    names = list(curves)
    header = ",".join(["iteration"] + [f"{n}_{curves[n].metric_name}" for n in names])
    n_iter = lengths.pop()
    with open(path, "w") as fh:
        fh.write(f"# db_floor={floor:g}\n")
        fh.write(header + "\n")
        for i in range(n_iter):
            row = [str(i)] + [f"{curves[n].values[i]:.6g}" for n in names]
            fh.write(",".join(row) + "\n")


def read_curves(path):
    """Parse a curves CSV back into column name -> value array."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return {name: data[:, j] for j, name in enumerate(header) if name != "iteration"}


def write_metadata(path, payload):
    """JSON sidecar with the fully resolved config, seeds and tool version."""
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")
