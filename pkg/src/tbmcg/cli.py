"""Command-line entry point: experiment registry, config validation, run
orchestration and reproduction presets.

Exit codes: 0 success, 2 configuration error, 3 every run of every algorithm
diverged, 4 I/O failure. Errors print one machine-parsable line to stderr:
``error: <category>: <message>``.
"""

import json
import os
import sys
from pathlib import Path

import click
import numpy as np
from scipy import stats

from . import __version__, anc as anc_mod, sysid as sysid_mod
from .config import (
    SCHEMA_VERSION, PRESET_NAMES, config_hash, load_config, load_preset,
    rescale_iterations, resolved_dict,
)
from .curves import write_curves, write_metadata
from .filters import make_filter
from .noise import make_rng, sample_alpha_stable
from .validation import ConfigError

OUT_ROOT_ENV = "TBMCG_OUT"

EXIT_CONFIG = 2
EXIT_ALL_DIVERGED = 3
EXIT_IO = 4


def _fail(category, message, code):
    click.echo(f"error: {category}: {message}", err=True)
    sys.exit(code)


def _resolve_config(config_path, preset, overrides, expected=None):
    try:
        if preset:
            cfg, _ = load_preset(preset, {k: v for k, v in overrides.items() if k != "iterations"})
        elif config_path:
            cfg = load_config(config_path)
            for key, value in overrides.items():
                if value is not None and key != "iterations":
                    setattr(cfg, key, value)
                    cfg.__post_init__()
        else:
            raise ConfigError("provide --config or --preset")
        if overrides.get("iterations") is not None:
            rescale_iterations(cfg, overrides["iterations"])
        if expected and cfg.experiment != expected:
            raise ConfigError(f"config describes a {cfg.experiment!r} experiment, expected {expected!r}")
        return cfg
    except (ConfigError, FileNotFoundError, KeyError) as exc:
        _fail("config", str(exc), EXIT_CONFIG)
    except Exception as exc:  # malformed YAML and friends
        _fail("config", f"{type(exc).__name__}: {exc}", EXIT_CONFIG)


def _output_dir(cfg, out):
    root = Path(out or os.environ.get(OUT_ROOT_ENV, "results"))
    return root / f"{cfg.name}-{config_hash(cfg)}"


def _emit(cfg, result, out, extra=None):
    outdir = _output_dir(cfg, out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        if result.curves:
            write_curves(result.curves, outdir / "curves.csv")
        meta = {
            "tool_version": __version__,
            "schema_version": SCHEMA_VERSION,
            "config": resolved_dict(cfg),
            "master_seed": cfg.seed,
            "divergences": {k: v for k, v in result.divergences.items()},
        }
        if extra:
            meta.update(extra)
        write_metadata(outdir / "metadata.json", meta)
        div_lines = [f"{name} run={run} iteration={it}"
                     for name, events in result.divergences.items() for run, it in events]
        if div_lines:
            (outdir / "divergence.log").write_text("\n".join(div_lines) + "\n")
    except OSError as exc:
        _fail("io", str(exc), EXIT_IO)
    for name in cfg.algorithms:
        n_div = len(result.divergences.get(name, ()))
        if name in result.curves:
            final = result.curves[name].values[-1]
            click.echo(f"{cfg.name} {name}: final={final:.2f} dB diverged={n_div}/{cfg.runs}")
        else:
            click.echo(f"{cfg.name} {name}: all {n_div}/{cfg.runs} runs diverged")
    click.echo(f"wrote {outdir}")
    if all(len(result.divergences.get(name, ())) == cfg.runs for name in cfg.algorithms):
        sys.exit(EXIT_ALL_DIVERGED)


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), help="YAML experiment config")(fn)
    fn = click.option("--preset", type=click.Choice(PRESET_NAMES), help="packaged reproduction preset")(fn)
    fn = click.option("--seed", type=int, default=None, help="override master seed")(fn)
    fn = click.option("--runs", type=int, default=None, help="override Monte Carlo run count")(fn)
    fn = click.option("--iters", type=int, default=None, help="override iteration count")(fn)
    fn = click.option("--jobs", type=int, default=-1, help="worker processes (-1: all cores)")(fn)
    fn = click.option("--out", type=click.Path(), default=None,
                      help=f"output root (default $" + OUT_ROOT_ENV + " or ./results)")(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Robust CG adaptive filtering experiment runner."""


@main.command()
@_common_options
def sysid(config_path, preset, seed, runs, iters, jobs, out):
    """System-identification comparison with NMSD learning curves."""
    overrides = {"seed": seed, "runs": runs, "iterations": iters}
    cfg = _resolve_config(config_path, preset, overrides, expected="sysid")
    result = sysid_mod.run_experiment(cfg, jobs=jobs)
    _emit(cfg, result, out, extra={"overrides": {k: v for k, v in overrides.items() if v is not None}})


@main.command()
@_common_options
def anc(config_path, preset, seed, runs, iters, jobs, out):
    """Active-noise-control comparison with ANR learning curves."""
    overrides = {"seed": seed, "runs": runs, "iterations": iters}
    cfg = _resolve_config(config_path, preset, overrides, expected="anc")
    result = anc_mod.run_anc_experiment(cfg, jobs=jobs)
    _emit(cfg, result, out, extra={"overrides": {k: v for k, v in overrides.items() if v is not None}})


@main.command("sweep-c")
@_common_options
@click.option("--c-values", default="5,20,100", show_default=True,
              help="comma-separated cutoffs; 'inf' allowed")
def sweep_c(config_path, preset, seed, runs, iters, jobs, out, c_values):
    """Cutoff sweep of the robust CG filter."""
    overrides = {"seed": seed, "runs": runs, "iterations": iters}
    cfg = _resolve_config(config_path, preset, overrides, expected="sysid")
    try:
        values = [float(v) for v in c_values.split(",") if v.strip()]
    except ValueError as exc:
        _fail("config", f"bad --c-values: {exc}", EXIT_CONFIG)
    curves, result = sysid_mod.c_sweep(cfg, values, jobs=jobs)
    result.curves = {f"c={c:g}": curve for c, curve in curves.items()}
    cfg.algorithms = {f"c={c:g}": None for c in curves}
    _emit(cfg, result, out)


@main.command("noise-check")
@click.option("--alpha", type=float, default=2.0, show_default=True)
@click.option("--scale", type=float, default=1.0, show_default=True)
@click.option("--draws", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--export", "export_path", type=click.Path(), default=None,
              help="also write the stream as iteration,value CSV")
def noise_check(alpha, scale, draws, seed, export_path):
    """Empirical checks of the alpha-stable sampler."""
    try:
        rng = make_rng(seed)
        samples = sample_alpha_stable(alpha, scale, rng, draws)
    except ConfigError as exc:
        _fail("config", str(exc), EXIT_CONFIG)
    click.echo(f"alpha={alpha} scale={scale} draws={draws}")
    for t in (0.5, 1.0, 2.0):
        ecf = float(np.mean(np.cos(t * samples)))
        target = float(np.exp(-abs(t * scale) ** alpha))
        click.echo(f"  ecf(t={t}): measured={ecf:.4f} target={target:.4f} |err|={abs(ecf-target):.4f}")
    if alpha == 2.0:
        gauss = make_rng(seed + 1).normal(0.0, scale * np.sqrt(2.0), draws)
        p = stats.ks_2samp(samples, gauss).pvalue
        verdict = "consistent" if p > 0.01 else "REJECTED"
        click.echo(f"  gaussian two-sample KS: p={p:.4f} ({verdict} at the 1% level)")
    if export_path:
        try:
            from .noise import export_stream
            export_stream(samples, export_path)
        except OSError as exc:
            _fail("io", str(exc), EXIT_IO)


@main.command("opcount-audit")
@click.option("--sizes", default="8,16,32,64", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def opcount_audit(sizes, seed):
    """Measured per-step operation counts versus the published table."""
    try:
        lengths = [int(v) for v in sizes.split(",") if v.strip()]
    except ValueError as exc:
        _fail("config", f"bad --sizes: {exc}", EXIT_CONFIG)
    published = {
        "cg": ("2L^2+9L-4", "3L^2+10L+2", lambda L: (2*L*L + 9*L - 4, 3*L*L + 10*L + 2)),
        "tbmcg": ("2L^2+9L-3", "3L^2+12L+4", lambda L: (2*L*L + 9*L - 3, 3*L*L + 12*L + 4)),
        "rls": ("3L^2", "4L^2+3L+1", lambda L: (3*L*L, 4*L*L + 3*L + 1)),
        "lmm": ("2L+4", "2L+N_w+7", None),
        "nmcc": ("2L-1", "2L+2 (+1 exp)", lambda L: (2*L - 1, 2*L + 2)),
    }
    rng = make_rng(seed)
    for kind in ("cg", "tbmcg", "rls", "lmm", "nmcc"):
        click.echo(f"{kind}: published adds={published[kind][0]} mults={published[kind][1]}")
        for L in lengths:
            params = {"c": 1e9} if kind == "tbmcg" else {}
            filt = make_filter(kind, L, **params)
            for _ in range(6):  # past the guard warm-up
                filt.step(rng.standard_normal(L), float(rng.standard_normal()))
            ops = filt.op_count()
            line = f"  L={L}: measured adds={ops.adds} mults={ops.mults} cmps={ops.comparisons}"
            if published[kind][2] is not None:
                pa, pm = published[kind][2](L)
                line += f" | table adds={pa} mults={pm} (delta {ops.adds - pa:+d}, {ops.mults - pm:+d})"
            click.echo(line)
    click.echo("note: quadratic coefficients match the table; linear-term deltas are "
               "reported, not asserted (see README).")


if __name__ == "__main__":
    main()
