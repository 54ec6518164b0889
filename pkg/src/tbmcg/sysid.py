"""System-identification benchmark harness.

Runs a roster of adaptive filters against an unknown FIR plant under
configurable input and noise models, averaging normalized weight-error
curves over independent Monte Carlo runs. Within one run every algorithm
sees bit-identical input, plant and noise streams (common random numbers),
so curve differences are purely algorithmic.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .config import AlgoSpec
from .curves import DB_FLOOR, average_traces, floor_db
from .filters import make_filter, regressor_matrix
from .noise import make_rng
from .validation import as_finite_vector


@dataclass
class Plant:
    """Unknown system: a finite impulse response to identify."""

    h_true: np.ndarray

    def __post_init__(self):
        self.h_true = as_finite_vector("h_true", self.h_true)
        if not np.linalg.norm(self.h_true) > 0:
            raise ValueError("plant impulse response must have positive norm")


def random_plant(n_taps, rng):
    """Unit-norm plant with Gaussian taps; regenerated per Monte Carlo run."""
    h = rng.standard_normal(n_taps)
    return Plant(h / np.linalg.norm(h))


def nmsd(h, h_true, floor=DB_FLOOR):
    """Normalized mean-square deviation in dB.

    ``20 * log10(||h - h_true|| / ||h_true||)``, floored so a perfect match
    reports ``floor`` instead of minus infinity.
    """
    h = np.asarray(h, dtype=np.float64)
    h_true = np.asarray(h_true, dtype=np.float64)
    if h.shape != h_true.shape:
        raise ValueError("weight vectors must have equal length")
    denom = np.linalg.norm(h_true)
    if not denom > 0:
        raise ValueError("plant norm must be positive")
    ratio = np.linalg.norm(h - h_true) / denom
    if ratio <= 0.0:
        return floor
    return max(20.0 * math.log10(ratio), floor)


@dataclass
class RunResult:
    """Per-run outcome for one algorithm."""

    trace: np.ndarray
    diverged_at: int = None
    op_totals: dict = field(default_factory=dict)

    @property
    def diverged(self):
        return self.diverged_at is not None


@dataclass
class ExperimentResult:
    """Averaged curves plus divergence bookkeeping for a whole experiment."""

    curves: dict
    divergences: dict
    runs: int
    seed: int
    op_totals: dict = field(default_factory=dict)

    def divergence_counts(self):
        return {name: len(v) for name, v in self.divergences.items()}


def _make_streams(config, run_seq):
    plant_seq, input_seq, noise_seq = run_seq.spawn(3)
    plant_cfg = config.plant
    if plant_cfg.get("kind", "random_unit_norm") == "fixed":
        plant = Plant(np.asarray(plant_cfg["coefficients"], dtype=np.float64))
    else:
        plant = random_plant(config.n_taps, make_rng(plant_seq))
    x = config.input.generate(config.iterations, input_seq)
    X = regressor_matrix(x, config.n_taps)
    clean = X @ plant.h_true
    signal_power = float(np.mean(clean ** 2))
    v = config.noise.generate(config.iterations, noise_seq, signal_power=signal_power)
    return plant, X, clean + v


def _run_algorithms(config, run_seq):
    """One Monte Carlo run: every algorithm on the same streams."""
    plant, X, d = _make_streams(config, run_seq)
    out = {}
    for name, spec in config.algorithms.items():
        filt = make_filter(spec.kind, config.n_taps, **spec.params)
        trace = np.empty(config.iterations)
        totals = {"adds": 0, "mults": 0, "comparisons": 0}
        diverged_at = None
        for n in range(config.iterations):
            filt.step(X[n], d[n])
            ops = filt.ops_
            totals["adds"] += ops.adds
            totals["mults"] += ops.mults
            totals["comparisons"] += ops.comparisons
            norm = float(np.linalg.norm(filt.w_))
            if filt.diverged_ or not np.isfinite(norm) or norm > config.weight_limit:
                diverged_at = n
                trace[n:] = np.nan
                break
            trace[n] = nmsd(filt.w_, plant.h_true)
        out[name] = RunResult(trace, diverged_at, totals)
    return out


def run_experiment(config, jobs=1):
    """Execute the configured Monte Carlo experiment.

    Returns an :class:`ExperimentResult` whose curves are pointwise averages
    over the runs that did not diverge; divergent runs are recorded per
    algorithm, never fatal. Identical config and seed give identical results
    regardless of ``jobs``.
    """
    master = np.random.SeedSequence(config.seed)
    run_seqs = master.spawn(config.runs)
    if jobs == 1:
        per_run = [_run_algorithms(config, seq) for seq in run_seqs]
    else:
        per_run = Parallel(n_jobs=jobs)(
            delayed(_run_algorithms)(config, seq) for seq in run_seqs)

    curves, divergences, op_totals = {}, {}, {}
    for name in config.algorithms:
        results = [r[name] for r in per_run]
        divergences[name] = [(i, r.diverged_at) for i, r in enumerate(results) if r.diverged]
        survivors = [floor_db(r.trace) for r in results if not r.diverged]
        if survivors:
            curves[name] = average_traces(survivors, "nmsd_db",
                                          diverged_runs=len(divergences[name]),
                                          mode=config.averaging)
        totals = [r.op_totals for r in results]
        op_totals[name] = {k: int(np.mean([t[k] for t in totals])) for k in totals[0]}
    return ExperimentResult(curves, divergences, config.runs, config.seed, op_totals)


def c_sweep(config, c_values, jobs=1):
    """Averaged curves of the robust CG filter across cutoff values.

    All cutoffs share one master seed, so every ``c`` sees identical data.
    Infinity is accepted as the no-rejection sentinel. Base parameters are
    taken from the first robust-CG entry in the config roster, if any.
    """
    base = {}
    for spec in config.algorithms.values():
        if spec.kind == "tbmcg":
            base = {k: v for k, v in spec.params.items() if k != "c"}
            break
    roster = {}
    for c in c_values:
        c = float(c)
        if not c > 0:
            raise ValueError(f"cutoff values must be positive, got {c!r}")
        roster[f"c={c:g}"] = AlgoSpec("tbmcg", {**base, "c": c})
    sweep_config = type(config)(**{**vars(config), "algorithms": roster})
    result = run_experiment(sweep_config, jobs=jobs)
    return {float(name.split("=")[1]): curve for name, curve in result.curves.items()}, result
