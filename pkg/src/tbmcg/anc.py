"""Active-noise-control simulator with filtered-x adaptive controllers.

The acoustic model is the single-channel feedforward layout: a reference
``x`` reaches the error sensor through the primary path while the controller
output ``y = w @ x`` reaches it through the secondary path, giving the
residual ``e = primary*x - secondary*y``. Controllers adapt on the reference
pre-filtered by the secondary-path estimate, the standard filtered-x
arrangement; any filter from the registry can serve as the update rule.
"""

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from joblib import Parallel, delayed
from scipy.signal import firwin

from .config import ANC_ALGO_KINDS
from .curves import DB_FLOOR, average_traces, floor_db
from .filters import make_filter
from .noise import make_rng
from .sysid import ExperimentResult, RunResult
from .validation import ConfigError, as_finite_vector

ANC_KINDS = {
    "fxtbmcg": ("tbmcg", {"forgetting": 0.999, "step_scale": 1.0, "c": 10.0}),
    "fxcg": ("cg", {"forgetting": 0.999, "step_scale": 1.0}),
    "fxrls": ("rls", {"forgetting": 0.999, "delta": 100.0}),
    "rfxlms": ("rlms", {"mu": 0.002}),
    "fxloglms": ("loglms", {"mu": 0.002}),
}
assert set(ANC_KINDS) == set(ANC_ALGO_KINDS)


@dataclass
class AncPlant:
    """Primary and secondary acoustic paths plus the controller's estimate
    of the secondary path (which may deliberately differ)."""

    primary: np.ndarray
    secondary: np.ndarray
    secondary_estimate: np.ndarray = None

    def __post_init__(self):
        self.primary = as_finite_vector("primary", self.primary)
        self.secondary = as_finite_vector("secondary", self.secondary)
        if self.primary.size == 0 or self.secondary.size == 0:
            raise ValueError("paths must be non-empty")
        if self.secondary_estimate is None:
            self.secondary_estimate = self.secondary.copy()
        else:
            self.secondary_estimate = as_finite_vector(
                "secondary_estimate", self.secondary_estimate)


def save_path_file(path, coefficients, comment=None):
    """Plain-text path format: optional comments, a length line, one
    coefficient per line."""
    coefficients = np.asarray(coefficients, dtype=np.float64)
    with open(path, "w") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(f"{coefficients.size}\n")
        for c in coefficients:
            fh.write(f"{float(c)!r}\n")


def load_path_file(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"empty path file: {path}")
    count = int(lines[0])
    coeffs = np.array([float(v) for v in lines[1:]])
    if coeffs.size != count:
        raise ValueError(f"{path}: header says {count} coefficients, found {coeffs.size}")
    return coeffs


def demo_paths():
    """The synthetic paths shipped with the presets.

    Primary: 8-sample delay followed by a 24-tap bandpass; secondary:
    5-sample delay followed by an 11-tap bandpass. The shorter secondary
    delay keeps the layout causal, so a 128-tap controller can cancel to
    below -45 dB under a white reference.
    """
    primary = np.concatenate([np.zeros(8), firwin(24, [0.08, 0.45], pass_zero=False)])
    secondary = np.concatenate([np.zeros(5), firwin(11, [0.05, 0.55], pass_zero=False)])
    return primary, secondary


def resolve_path(ref):
    """Resolve a config path reference: ``builtin:<name>`` or a filename."""
    if isinstance(ref, str) and ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        target = resources.files("tbmcg.presets").joinpath(f"paths/{name}.txt")
        with resources.as_file(target) as concrete:
            return load_path_file(concrete)
    return load_path_file(ref)


class AnrTracker:
    """Averaged noise reduction: dB ratio of smoothed residual magnitude to
    smoothed disturbance magnitude.

    Both magnitudes follow ``a <- rho a + (1 - rho) |value|``, so a step
    change settles with time constant ``1 / (1 - rho)`` samples. The ratio is
    invariant to a common positive scaling of both streams.
    """

    def __init__(self, smoothing=0.999, floor=DB_FLOOR):
        if not 0.0 < smoothing < 1.0:
            raise ConfigError("smoothing must lie in (0, 1)")
        self.smoothing = smoothing
        self.floor = floor
        self.a_err = 0.0
        self.a_dist = 0.0

    def update(self, e, d):
        rho = self.smoothing
        self.a_err = rho * self.a_err + (1.0 - rho) * abs(e)
        self.a_dist = rho * self.a_dist + (1.0 - rho) * abs(d)
        if self.a_dist <= 1e-300:
            return 0.0
        if self.a_err <= 0.0:
            return self.floor
        return max(20.0 * math.log10(self.a_err / self.a_dist), self.floor)


class FilteredXSimulation:
    """One controller in the feedforward loop, processed sample by sample."""

    def __init__(self, plant, controller, anr_smoothing=0.999,
                 controller_limit=1e3, cutoff_schedule=None):
        self.plant = plant
        self.controller = controller
        self.anr = AnrTracker(anr_smoothing)
        self.controller_limit = float(controller_limit)
        self.cutoff_schedule = sorted(cutoff_schedule or [], key=lambda s: s[0])
        L = controller.n_taps
        self._xbuf = np.zeros(max(L, plant.primary.size, plant.secondary_estimate.size))
        self._xpbuf = np.zeros(L)
        self._ybuf = np.zeros(plant.secondary.size)
        self.n = 0
        self.diverged_at = None

    def _apply_cutoff_schedule(self):
        weighting = getattr(self.controller, "weighting", None)
        if weighting is None:
            return
        for start, c in self.cutoff_schedule:
            if start == self.n:
                weighting.c = float(c)

    def step(self, x, sensor_noise=0.0):
        """Advance the loop by one reference sample; returns the residual."""
        self._apply_cutoff_schedule()
        plant, ctrl = self.plant, self.controller
        xb = self._xbuf
        xb[1:] = xb[:-1]
        xb[0] = x
        L = ctrl.n_taps
        y = float(ctrl.w_ @ xb[:L])
        yb = self._ybuf
        yb[1:] = yb[:-1]
        yb[0] = y
        d = float(plant.primary @ xb[:plant.primary.size])
        anti = float(plant.secondary @ yb)
        e = d - anti + sensor_noise
        xp = float(plant.secondary_estimate @ xb[:plant.secondary_estimate.size])
        xpb = self._xpbuf
        xpb[1:] = xpb[:-1]
        xpb[0] = xp
        ctrl.adapt(xpb, e)
        self.n += 1
        anr_db = self.anr.update(e, d)
        norm = float(np.linalg.norm(ctrl.w_))
        if ctrl.diverged_ or not np.isfinite(norm) or norm > self.controller_limit:
            self.diverged_at = self.n - 1
        return e, anr_db

    def run(self, source, sensor_noise=None):
        """Process a whole reference stream; returns the ANR trace."""
        source = np.asarray(source, dtype=np.float64)
        trace = np.empty(source.size)
        for n in range(source.size):
            v = 0.0 if sensor_noise is None else float(sensor_noise[n])
            _, trace[n] = self.step(source[n], v)
            if self.diverged_at is not None:
                trace[n:] = np.nan
                break
        return trace


def make_controller(kind, n_taps, **params):
    """Build a filtered-x controller update rule by ANC registry name."""
    try:
        core_kind, defaults = ANC_KINDS[kind]
    except KeyError:
        raise ConfigError(f"unknown ANC algorithm {kind!r}; known: {', '.join(sorted(ANC_KINDS))}") from None
    merged = {**defaults, **params}
    return make_filter(core_kind, n_taps, **merged)


def _anc_run(config, plant, run_seq):
    source_seq, sensor_seq = run_seq.spawn(2)
    source = config.source.generate(config.iterations, source_seq)
    sensor = None
    if config.sensor_noise is not None:
        sensor = config.sensor_noise.generate(config.iterations, sensor_seq)
    out = {}
    for name, spec in config.algorithms.items():
        params = dict(spec.params)
        cutoff_schedule = params.pop("c_schedule", None)
        controller = make_controller(spec.kind, config.n_taps, **params)
        sim = FilteredXSimulation(plant, controller,
                                  anr_smoothing=config.anr_smoothing,
                                  controller_limit=config.controller_limit,
                                  cutoff_schedule=cutoff_schedule)
        trace = sim.run(source, sensor)
        out[name] = RunResult(trace, sim.diverged_at)
    return out


def run_anc_experiment(config, jobs=1):
    """Monte Carlo ANC comparison; mirrors ``sysid.run_experiment``.

    Divergence (non-finite state or controller norm beyond the configured
    limit) is a recorded outcome per run and algorithm. Algorithms whose runs
    all diverged contribute no curve but keep their divergence log.
    """
    plant = AncPlant(resolve_path(config.primary_path),
                     resolve_path(config.secondary_path))
    if config.secondary_mismatch:
        rng = make_rng(np.random.SeedSequence(config.seed).spawn(1)[0])
        jitter = 1.0 + config.secondary_mismatch * rng.standard_normal(plant.secondary.size)
        plant.secondary_estimate = plant.secondary * jitter
    master = np.random.SeedSequence(config.seed)
    run_seqs = master.spawn(config.runs)
    if jobs == 1:
        per_run = [_anc_run(config, plant, seq) for seq in run_seqs]
    else:
        per_run = Parallel(n_jobs=jobs)(
            delayed(_anc_run)(config, plant, seq) for seq in run_seqs)

    curves, divergences = {}, {}
    for name in config.algorithms:
        results = [r[name] for r in per_run]
        divergences[name] = [(i, r.diverged_at) for i, r in enumerate(results) if r.diverged]
        survivors = [floor_db(r.trace) for r in results if not r.diverged]
        if survivors:
            curves[name] = average_traces(survivors, "anr_db",
                                          diverged_runs=len(divergences[name]),
                                          mode=config.averaging)
    return ExperimentResult(curves, divergences, config.runs, config.seed)


def anc_kind_names():
    return tuple(sorted(ANC_KINDS))
