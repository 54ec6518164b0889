"""Experiment configuration: YAML schema, validation, presets and hashing.

Configs are plain YAML documents with a ``schema_version`` and an
``experiment`` discriminator (``sysid`` or ``anc``). The loader validates
everything up front and returns a typed config object; the fully resolved
dictionary (after preset merging and CLI overrides) is what gets hashed into
the output directory name and recorded in the metadata sidecar.
"""

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import yaml

from .filters import FILTER_KINDS
from .noise import InputModel, NoiseSpec, Schedule
from .validation import ConfigError

SCHEMA_VERSION = 1
PRESET_NAMES = ("fig3a", "fig3b", "fig4a", "fig4b", "fig5", "fig6")
ANC_ALGO_KINDS = ("fxtbmcg", "fxcg", "fxrls", "rfxlms", "fxloglms")

_NOISE_FIELDS = ("kind", "alpha", "scale", "snr_db", "variant", "x0")


@dataclass
class AlgoSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        known = FILTER_KINDS + ANC_ALGO_KINDS
        if self.kind not in known:
            raise ConfigError(f"unknown algorithm kind {self.kind!r}; known: {', '.join(known)}")


def _noise_spec(entry, where):
    unknown = set(entry) - set(_NOISE_FIELDS) - {"start"}
    if unknown:
        raise ConfigError(f"{where}: unknown noise fields {sorted(unknown)}")
    fields = {k: entry[k] for k in _NOISE_FIELDS if k in entry}
    return NoiseSpec(**fields)


def _schedule(entries, where):
    if isinstance(entries, dict):
        entries = [dict(start=0, **entries)]
    segments = []
    for entry in entries:
        start = entry.get("start", 0)
        segments.append((start, _noise_spec(entry, where)))
    return Schedule(segments)


def _algorithms(section):
    if not isinstance(section, dict) or not section:
        raise ConfigError("config needs a non-empty 'algorithms' mapping")
    roster = {}
    for name, params in section.items():
        params = dict(params or {})
        kind = params.pop("kind", name)
        roster[str(name)] = AlgoSpec(kind, params)
    return roster


@dataclass
class SysIdConfig:
    """Full system-identification experiment description."""

    algorithms: dict
    noise: Schedule
    input: InputModel = field(default_factory=InputModel)
    n_taps: int = 10
    runs: int = 100
    iterations: int = 5000
    seed: int = 12345
    averaging: str = "db"
    plant: dict = field(default_factory=lambda: {"kind": "random_unit_norm"})
    weight_limit: float = 1e6
    name: str = "sysid"

    experiment = "sysid"

    def __post_init__(self):
        if self.n_taps < 1 or self.runs < 1 or self.iterations < 1:
            raise ConfigError("n_taps, runs and iterations must be positive")
        if self.averaging not in ("db", "linear"):
            raise ConfigError(f"averaging must be 'db' or 'linear', got {self.averaging!r}")
        kind = self.plant.get("kind", "random_unit_norm")
        if kind not in ("random_unit_norm", "fixed"):
            raise ConfigError(f"unknown plant kind {kind!r}")
        if kind == "fixed" and len(self.plant.get("coefficients", ())) != self.n_taps:
            raise ConfigError("fixed plant needs n_taps coefficients")
        for name, spec in self.algorithms.items():
            if spec.kind not in FILTER_KINDS:
                raise ConfigError(f"algorithm {name!r}: kind {spec.kind!r} is not a sysid filter")


@dataclass
class AncConfig:
    """Full active-noise-control experiment description."""

    algorithms: dict
    source: Schedule
    primary_path: str = "builtin:primary32"
    secondary_path: str = "builtin:secondary16"
    secondary_mismatch: float = 0.0
    sensor_noise: Schedule = None
    n_taps: int = 128
    runs: int = 20
    iterations: int = 15000
    seed: int = 12345
    averaging: str = "db"
    anr_smoothing: float = 0.999
    controller_limit: float = 1e3
    name: str = "anc"

    experiment = "anc"

    def __post_init__(self):
        if self.n_taps < 1 or self.runs < 1 or self.iterations < 1:
            raise ConfigError("n_taps, runs and iterations must be positive")
        if self.averaging not in ("db", "linear"):
            raise ConfigError(f"averaging must be 'db' or 'linear', got {self.averaging!r}")
        if not 0.0 < self.anr_smoothing < 1.0:
            raise ConfigError("anr_smoothing must lie in (0, 1)")
        for name, spec in self.algorithms.items():
            if spec.kind not in ANC_ALGO_KINDS:
                raise ConfigError(f"algorithm {name!r}: kind {spec.kind!r} is not an ANC controller")


def config_from_dict(doc):
    """Validate a raw config dictionary and build the typed config."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}; this tool reads version {SCHEMA_VERSION}")
    experiment = doc.get("experiment")
    doc = {k: v for k, v in doc.items() if k not in ("schema_version", "experiment")}
    try:
        if experiment == "sysid":
            doc["noise"] = _schedule(doc.get("noise", []), "noise")
            if "input" in doc:
                doc["input"] = InputModel(**doc["input"])
            doc["algorithms"] = _algorithms(doc.get("algorithms"))
            return SysIdConfig(**doc)
        if experiment == "anc":
            doc["source"] = _schedule(doc.get("source", []), "source")
            if doc.get("sensor_noise"):
                doc["sensor_noise"] = _schedule(doc["sensor_noise"], "sensor_noise")
            doc["algorithms"] = _algorithms(doc.get("algorithms"))
            return AncConfig(**doc)
    except TypeError as exc:
        raise ConfigError(f"bad config field: {exc}") from None
    raise ConfigError(f"experiment must be 'sysid' or 'anc', got {experiment!r}")


def load_config(path):
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    return config_from_dict(doc)


def load_preset(name, overrides=None):
    """Load a packaged preset by name, applying top-level overrides."""
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    text = resources.files("tbmcg.presets").joinpath(f"{name}.yaml").read_text()
    doc = yaml.safe_load(text)
    if overrides:
        doc.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(doc), doc


def resolved_dict(config):
    """Canonical plain-data view of a config, for hashing and metadata."""
    def convert(obj):
        if isinstance(obj, (SysIdConfig, AncConfig)):
            out = {"experiment": obj.experiment, "schema_version": SCHEMA_VERSION}
            out.update({k: convert(v) for k, v in vars(obj).items()})
            return out
        if isinstance(obj, AlgoSpec):
            return {"kind": obj.kind, **convert(obj.params)}
        if isinstance(obj, Schedule):
            return [dict(start=s, **convert(spec)) for s, spec in obj.segments]
        if isinstance(obj, (NoiseSpec, InputModel)):
            return {k: v for k, v in vars(obj).items() if v is not None}
        if isinstance(obj, dict):
            return {k: convert(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [convert(v) for v in obj]
        return obj

    return convert(config)


def config_hash(config):
    """Short stable hash of the resolved config, used in output paths."""
    canonical = json.dumps(resolved_dict(config), sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def rescale_iterations(config, new_iterations):
    """Shrink or stretch an experiment to a new horizon.

    Segment boundaries of every schedule (noise, source, sensor noise and
    per-algorithm cutoff schedules) scale proportionally, so an overridden
    ``--iters`` produces a scaled replica of the original protocol rather
    than truncating it.
    """
    new_iterations = int(new_iterations)
    if new_iterations < 1:
        raise ConfigError("iterations must be positive")
    factor = new_iterations / config.iterations

    def scale_schedule(schedule):
        if schedule is None:
            return None
        return Schedule([(round(start * factor), spec) for start, spec in schedule.segments])

    config.iterations = new_iterations
    for attr in ("noise", "source", "sensor_noise"):
        if hasattr(config, attr):
            setattr(config, attr, scale_schedule(getattr(config, attr)))
    for spec in config.algorithms.values():
        if spec is not None and "c_schedule" in spec.params:
            spec.params["c_schedule"] = [
                [round(start * factor), c] for start, c in spec.params["c_schedule"]]
    return config
