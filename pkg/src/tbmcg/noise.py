"""Signal and noise generators: symmetric alpha-stable, Gaussian, mixed and
chaotic sources, AR(1) colored input, and piecewise time-varying schedules.

Every generator is a pure function of its specification and seed. Streams are
drawn from counter-based Philox generators so independently seeded segments
and Monte Carlo runs never share state.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .validation import ConfigError, check_open_unit, check_positive

NOISE_KINDS = ("alpha_stable", "gaussian", "mixed", "logistic_chaotic", "none")
INPUT_KINDS = ("white_gaussian", "ar1")

# invariant-density statistics of the chaotic maps, used to normalize the
# streams to zero mean and unit power (logistic values are exact)
_CHAOTIC_STATS = {
    1: (0.5, 0.3535533905932738),
    3: (0.539883, 0.331114),
}
_CUBIC_RATE = 2.59


def make_rng(seed):
    """Counter-based generator for one value stream."""
    return np.random.Generator(np.random.Philox(seed))


def sample_alpha_stable(alpha, scale, rng, size=None):
    """Draw from the symmetric alpha-stable distribution.

    Uses the Chambers-Mallows-Stuck construction: with ``phi`` uniform on
    (-pi/2, pi/2) and ``w`` unit exponential,

        sin(alpha * phi) / cos(phi)**(1/alpha)
            * (cos((1 - alpha) * phi) / w)**((1 - alpha) / alpha)

    is standard SaS, i.e. has characteristic function ``exp(-|t|**alpha)``.
    ``scale`` multiplies the draw (dispersion ``scale**alpha``). At
    ``alpha = 2`` the output is Gaussian with variance ``2 * scale**2``; at
    ``alpha = 1`` it is Cauchy with unit half-width times ``scale``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 2.0:
        raise ConfigError(f"alpha must lie in (0, 2], got {alpha!r}")
    scale = check_positive("scale", scale)
    phi = (rng.uniform(size=size) - 0.5) * np.pi
    w = rng.exponential(size=size)
    if alpha == 2.0:
        return 2.0 * scale * np.sqrt(w) * np.sin(phi)
    x = (np.sin(alpha * phi) / np.cos(phi) ** (1.0 / alpha)
         * (np.cos((1.0 - alpha) * phi) / w) ** ((1.0 - alpha) / alpha))
    return scale * x


def logistic_chaotic(variant, n_samples, x0=0.9, normalize=True):
    """Deterministic chaotic noise stream.

    Variant 1 iterates the fully chaotic logistic map ``x <- 4 x (1 - x)``;
    variant 3 iterates the cubic map ``x <- 2.59 x (1 - x**2)``. Both start
    from ``x0`` (default 0.9) and, when ``normalize`` is set, are shifted and
    scaled by the map's invariant-density mean and standard deviation so the
    stream has zero mean and unit power in the long run.
    """
    n_samples = int(n_samples)
    if n_samples < 0:
        raise ConfigError("n_samples must be non-negative")
    x0 = float(x0)
    if not 0.0 < x0 < 1.0:
        raise ConfigError(f"x0 must lie in (0, 1), got {x0!r}")
    if variant == 1:
        def step(v):
            return 4.0 * v * (1.0 - v)
    elif variant == 3:
        def step(v):
            return _CUBIC_RATE * v * (1.0 - v * v)
    else:
        raise ConfigError(f"unknown chaotic variant {variant!r}; known: 1, 3")
    out = np.empty(n_samples)
    v = x0
    for i in range(n_samples):
        v = step(v)
        out[i] = v
    if normalize:
        mean, std = _CHAOTIC_STATS[variant]
        out = (out - mean) / std
    return out


def ar1_signal(pole, n_samples, rng):
    """First-order autoregressive signal driven by unit white Gaussian noise."""
    pole = float(pole)
    if not abs(pole) < 1.0:
        raise ConfigError(f"AR(1) pole must satisfy |pole| < 1, got {pole!r}")
    w = rng.standard_normal(int(n_samples))
    return lfilter([1.0], [1.0, -pole], w)


@dataclass
class NoiseSpec:
    """Parameterized noise source.

    ``kind`` selects the family. ``alpha``/``scale`` parameterize the stable
    draw, ``snr_db`` sizes Gaussian components against a signal power that
    the caller supplies at generation time, ``variant`` picks the chaotic
    map. ``mixed`` sums an independent Gaussian (from ``snr_db``) and an
    alpha-stable stream.
    """

    kind: str
    alpha: float = None
    scale: float = None
    snr_db: float = None
    variant: int = None
    x0: float = 0.9

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigError(f"unknown noise kind {self.kind!r}; known: {', '.join(NOISE_KINDS)}")
        if self.kind in ("alpha_stable", "mixed"):
            if self.alpha is None:
                raise ConfigError(f"{self.kind} noise requires alpha")
            if not 0.0 < float(self.alpha) <= 2.0:
                raise ConfigError(f"alpha must lie in (0, 2], got {self.alpha!r}")
            if self.scale is not None:
                check_positive("scale", self.scale)
        if self.kind == "gaussian":
            if self.scale is None and self.snr_db is None:
                raise ConfigError("gaussian noise requires scale or snr_db")
            if self.scale is not None:
                check_positive("scale", self.scale)
        if self.kind == "mixed" and self.snr_db is None:
            raise ConfigError("mixed noise requires snr_db for its Gaussian part")
        if self.kind == "logistic_chaotic":
            if self.variant not in (1, 3):
                raise ConfigError(f"chaotic variant must be 1 or 3, got {self.variant!r}")

    def _gaussian_sigma(self, signal_power):
        if self.scale is not None and self.kind == "gaussian":
            return float(self.scale)
        if signal_power is None:
            raise ConfigError("snr_db-sized noise needs the signal power at generation time")
        return float(np.sqrt(signal_power * 10.0 ** (-self.snr_db / 10.0)))

    def generate(self, n_samples, seed, signal_power=None):
        """Produce ``n_samples`` values; a pure function of (spec, seed)."""
        n_samples = int(n_samples)
        if self.kind == "none":
            return np.zeros(n_samples)
        if self.kind == "logistic_chaotic":
            return logistic_chaotic(self.variant, n_samples, x0=self.x0)
        seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        if self.kind == "alpha_stable":
            scale = 1.0 if self.scale is None else self.scale
            return sample_alpha_stable(self.alpha, scale, make_rng(seq), n_samples)
        if self.kind == "gaussian":
            sigma = self._gaussian_sigma(signal_power)
            return sigma * make_rng(seq).standard_normal(n_samples)
        # mixed: independent Gaussian and stable components
        gauss_seq, stable_seq = seq.spawn(2)
        sigma = self._gaussian_sigma(signal_power)
        gauss = sigma * make_rng(gauss_seq).standard_normal(n_samples)
        scale = 1.0 if self.scale is None else self.scale
        stable = sample_alpha_stable(self.alpha, scale, make_rng(stable_seq), n_samples)
        return gauss + stable


@dataclass
class Schedule:
    """Ordered noise segments: ``segments[i] = (start_iteration, NoiseSpec)``.

    Starts must begin at 0 and strictly increase; the spec active at
    iteration ``n`` is the last one whose start is ``<= n``. Each segment
    draws from its own child seed, so the switch points are exact and a
    single-segment schedule reproduces the bare spec's stream bit for bit.
    """

    segments: list

    def __post_init__(self):
        if not self.segments:
            raise ConfigError("schedule needs at least one segment")
        starts = [int(s) for s, _ in self.segments]
        if starts[0] != 0:
            raise ConfigError("first schedule segment must start at iteration 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ConfigError("schedule starts must be strictly increasing")
        self.segments = [(int(s), spec) for s, spec in self.segments]

    def spec_at(self, n):
        active = self.segments[0][1]
        for start, spec in self.segments:
            if start <= n:
                active = spec
            else:
                break
        return active

    def generate(self, n_samples, seed, signal_power=None):
        seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        children = seq.spawn(len(self.segments))
        starts = [s for s, _ in self.segments] + [int(n_samples)]
        parts = []
        for (start, spec), child, stop in zip(self.segments, children, starts[1:]):
            if start >= n_samples:
                break
            length = min(stop, n_samples) - start
            parts.append(spec.generate(length, child, signal_power=signal_power))
        return np.concatenate(parts) if parts else np.zeros(0)


@dataclass
class InputModel:
    """Input signal model: white Gaussian or AR(1) with the given pole."""

    kind: str = "ar1"
    pole: float = 0.5

    def __post_init__(self):
        if self.kind not in INPUT_KINDS:
            raise ConfigError(f"unknown input kind {self.kind!r}; known: {', '.join(INPUT_KINDS)}")
        if self.kind == "ar1" and not abs(float(self.pole)) < 1.0:
            raise ConfigError(f"AR(1) pole must satisfy |pole| < 1, got {self.pole!r}")

    def generate(self, n_samples, seed):
        seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        rng = make_rng(seq)
        if self.kind == "white_gaussian":
            return rng.standard_normal(int(n_samples))
        return ar1_signal(self.pole, n_samples, rng)


def export_stream(values, path):
    """Write a stream as ``iteration,value`` CSV for inspection."""
    values = np.asarray(values)
    with open(path, "w") as fh:
        fh.write("iteration,value\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{v:.6g}\n")
