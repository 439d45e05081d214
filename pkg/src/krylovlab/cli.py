"""Configuration-driven command-line entry point.

Subcommands:
    krylovlab run --config FILE [--threads N] [--seed S] [--out DIR]
    krylovlab preset NAME [--reduced] [--out DIR]
    krylovlab list-presets
    krylovlab validate --config FILE

Exit codes: 0 success, 2 schema violation, 3 symmetry violation,
4 resource exhaustion, 1 other errors.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import time
from importlib import resources

import jsonschema
import numpy as np

from . import __version__, fits, pipeline
from .chaos import (
    DisorderSpec,
    dip_and_plateau_times,
    histogram_r_tilde,
    r_statistics,
    ramp_fit,
    sff,
    trailing_time_average,
)
from .errors import (
    ConfigError,
    EmptySectorError,
    IncompatibleSectorError,
    KrylovLabError,
    SymmetryViolationError,
)
from .krylov import evolve_wavefunction
from .spin_models import ModelSpec, SeedKind
from .symmetry import SectorSpec

FAMILIES = ["local_tfim", "nonlocal_tfim", "mixed_field_tfim", "local_xxz", "mixed_field_xxz"]

CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["model", "probe"],
    "properties": {
        "model": {
            "type": "object",
            "additionalProperties": False,
            "required": ["family", "L"],
            "properties": {
                "family": {"enum": FAMILIES},
                "L": {"type": "integer", "minimum": 2},
                "g": {"type": "number"},
                "h": {"type": "number"},
                "gamma": {"type": "number"},
                "alpha": {"type": "number", "minimum": 0},
                "J": {"type": "number"},
                "J_zz": {"type": "number"},
                "kappa": {"type": "number", "exclusiveMinimum": 0},
                "eps_d": {"type": "number"},
                "defect_site": {"type": "integer", "minimum": 1},
                "defect_symmetric": {"type": "boolean"},
            },
        },
        "sector": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "parity": {"enum": [-1, 1]},
                "z_reflection": {"enum": [-1, 1]},
                "magnetization": {"type": "number"},
            },
        },
        "seed_operator": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["single_sz", "parity_symmetric_sz"]},
                "site": {"type": "integer", "minimum": 1},
            },
        },
        "probe": {"enum": ["lanczos", "complexity", "rstats", "sff", "sweep_alpha"]},
        "disorder": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_samples", "sigma", "target"],
            "properties": {
                "n_samples": {"type": "integer", "minimum": 1},
                "sigma": {"type": "number", "minimum": 0},
                "mu": {"type": "number"},
                "target": {"enum": ["longitudinal_field", "nonlocal_coupling"]},
            },
        },
        "time_grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_min": {"type": "number", "exclusiveMinimum": 0},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "points": {"type": "integer", "minimum": 2},
                "spacing": {"enum": ["log", "linear"]},
            },
        },
        "fit": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_min": {"type": "integer", "minimum": 2},
                "n_max": {"type": "integer", "minimum": 3},
            },
        },
        "lanczos": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_steps": {"type": "integer", "minimum": 1},
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
                "store_basis": {"type": "boolean"},
                "reorth_dtype": {"enum": ["float32", "float64"]},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["alphas", "metric"],
            "properties": {
                "alphas": {
                    "type": "array",
                    "items": {"type": "number", "minimum": 0},
                    "minItems": 1,
                },
                "metric": {"enum": ["growth_rate", "saturation", "mean_r_tilde"]},
            },
        },
        "beta": {"type": "number", "minimum": 0},
        "ramp_window": {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 2,
            "maxItems": 2,
        },
        "output_dir": {"type": "string"},
        "master_seed": {"type": "integer", "minimum": 0},
        "threads": {
            "oneOf": [{"type": "integer", "minimum": 1}, {"const": "auto"}]
        },
        "meta": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "description": {"type": "string"},
                "figure": {"type": "string"},
                "reduced": {"type": "object"},
            },
        },
    },
}

_DEFAULT_TIME_GRID = {"t_min": 1e-2, "t_max": 1e7, "points": 400, "spacing": "log"}


def validate_config(config: dict) -> None:
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at '{path}': {e.message}") from e


def resolve_config(config: dict) -> dict:
    """Validated config with all defaults made explicit."""
    validate_config(config)
    cfg = copy.deepcopy(config)
    L = cfg["model"]["L"]
    cfg.setdefault("sector", {"parity": 1})
    cfg.setdefault("seed_operator", {"kind": "single_sz", "site": (L + 1) // 2})
    cfg["seed_operator"].setdefault("site", (L + 1) // 2)
    tg = cfg.setdefault("time_grid", {})
    for k, v in _DEFAULT_TIME_GRID.items():
        tg.setdefault(k, v)
    cfg.setdefault("beta", 0.0)
    cfg.setdefault("master_seed", 0)
    cfg.setdefault("threads", "auto")
    cfg.setdefault("output_dir", "krylovlab_out")
    if "disorder" in cfg:
        cfg["disorder"].setdefault("mu", 0.0)
    if cfg["probe"] == "sweep_alpha":
        if "sweep" not in cfg:
            raise ConfigError("probe 'sweep_alpha' requires a 'sweep' block")
        if cfg["model"]["family"] not in ("mixed_field_tfim", "mixed_field_xxz"):
            raise ConfigError("alpha sweeps need a power-law (mixed_field_*) family")
        if cfg["sweep"]["metric"] == "mean_r_tilde" and "disorder" not in cfg:
            raise ConfigError("sweep metric 'mean_r_tilde' requires a 'disorder' block")
    return cfg


def resolve_threads(cfg: dict, override: int | None = None) -> int:
    if override is not None:
        return override
    t = cfg.get("threads", "auto")
    if t != "auto":
        return int(t)
    env = os.environ.get("KRYLOVLAB_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _model_spec(cfg: dict) -> ModelSpec:
    return ModelSpec(**cfg["model"])


def _sector_spec(cfg: dict) -> SectorSpec:
    return SectorSpec(**cfg["sector"])


def _time_grid(cfg: dict) -> np.ndarray:
    tg = cfg["time_grid"]
    if tg["spacing"] == "log":
        return np.logspace(np.log10(tg["t_min"]), np.log10(tg["t_max"]), tg["points"])
    return np.linspace(tg["t_min"], tg["t_max"], tg["points"])


def _disorder_spec(cfg: dict) -> DisorderSpec:
    d = cfg["disorder"]
    return DisorderSpec(
        n_samples=d["n_samples"],
        sigma=d["sigma"],
        mu=d["mu"],
        master_seed=cfg["master_seed"],
        target=d["target"],
    )


def _lanczos_kwargs(cfg: dict) -> dict:
    lz = cfg.get("lanczos", {})
    out = {}
    if "max_steps" in lz:
        out["max_iter"] = lz["max_steps"]
    if "tolerance" in lz:
        out["tol"] = lz["tolerance"]
    if "store_basis" in lz:
        out["store_basis"] = lz["store_basis"]
    if "reorth_dtype" in lz:
        out["reorth_dtype"] = np.dtype(lz["reorth_dtype"])
    return out


def run(config: dict, out_dir=None, threads: int | None = None, seed: int | None = None) -> dict:
    """Execute one pipeline; write artifacts and summary.json; return the summary."""
    cfg = resolve_config(config)
    if seed is not None:
        cfg["master_seed"] = seed
    if out_dir is not None:
        cfg["output_dir"] = str(out_dir)
    n_threads = resolve_threads(cfg, threads)

    out = cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    t0 = time.monotonic()

    model = _model_spec(cfg)
    sector = _sector_spec(cfg)
    probe = cfg["probe"]
    metrics: dict = {}

    if probe in ("lanczos", "complexity"):
        seed_kind = SeedKind(cfg["seed_operator"]["kind"])
        res = pipeline.lanczos_for(
            model, sector, seed_kind, cfg["seed_operator"]["site"], **_lanczos_kwargs(cfg)
        )
        res.to_csv(os.path.join(out, "bn.csv"))
        metrics.update(
            K=res.K,
            termination=res.termination.value,
            b_max=float(res.b.max()) if res.b.size else 0.0,
        )
        if "fit" in cfg:
            fr = (cfg["fit"].get("n_min", 2), cfg["fit"].get("n_max", min(25, res.b.size)))
            gf = fits.fit_growth_rate(res.b, fr)
            metrics.update(delta=gf.delta, delta_offset=gf.c, fit_residual=gf.residual)
        if probe == "complexity":
            curve = evolve_wavefunction(res.b, _time_grid(cfg))
            curve.to_csv(os.path.join(out, "ck.csv"))
            sat = fits.saturation_value(curve)
            metrics.update(
                saturation=sat.value, saturation_std=sat.std, plateaued=sat.plateaued
            )

    elif probe == "rstats":
        Hs, basis = pipeline.sector_hamiltonian(model, sector)
        from .chaos import diagonalize

        base_spectrum = diagonalize(Hs, model=model, sector=sector)
        base_spectrum.to_csv(os.path.join(out, "spectrum.csv"))
        if "disorder" in cfg:
            spectra = pipeline.ensemble_spectra(model, _disorder_spec(cfg), sector, n_threads)
        else:
            spectra = [base_spectrum]
        stats = [r_statistics(s) for s in spectra]
        pooled = np.concatenate([s.r_tilde_values for s in stats])
        with open(os.path.join(out, "rstats.csv"), "w") as f:
            f.write("r_tilde\n")
            for v in pooled:
                f.write(f"{float(v)!r}\n")
        lo, hi, dens = histogram_r_tilde(pooled)
        with open(os.path.join(out, "rstats_hist.csv"), "w") as f:
            f.write("bin_lo,bin_hi,density\n")
            for a, b_, d in zip(lo, hi, dens):
                f.write(f"{float(a)!r},{float(b_)!r},{float(d)!r}\n")
        per_sample = np.array([s.mean_r_tilde for s in stats])
        metrics.update(
            mean_r_tilde=float(per_sample.mean()),
            stderr_r_tilde=float(per_sample.std() / np.sqrt(per_sample.size)),
            n_samples=len(stats),
            n_dropped=int(sum(s.n_dropped for s in stats)),
            dim_sector=basis.dim_sector,
        )

    elif probe == "sff":
        Hs, basis = pipeline.sector_hamiltonian(model, sector)
        from .chaos import diagonalize

        base_spectrum = diagonalize(Hs, model=model, sector=sector)
        base_spectrum.to_csv(os.path.join(out, "spectrum.csv"))
        if "disorder" in cfg:
            spectra = pipeline.ensemble_spectra(model, _disorder_spec(cfg), sector, n_threads)
        else:
            spectra = [base_spectrum]
        times = _time_grid(cfg)
        curve = sff(spectra, cfg["beta"], times, reference=base_spectrum.eigenvalues)
        curve.to_csv(os.path.join(out, "sff.csv"))
        metrics.update(
            plateau_prediction=curve.plateau_prediction,
            trailing_average=trailing_time_average(curve.times, curve.g_values),
            degenerate_reference=curve.degenerate_reference,
            n_samples=curve.n_samples,
            dim_sector=basis.dim_sector,
        )
        if "ramp_window" in cfg:
            window = tuple(cfg["ramp_window"])
        else:
            window = dip_and_plateau_times(curve)
        try:
            rf = ramp_fit(curve, window)
            metrics.update(
                ramp_slope=rf.slope,
                ramp_intercept=rf.intercept,
                ramp_residual=rf.residual,
                ramp_window=list(window),
            )
        except ValueError:
            metrics.update(ramp_window=list(window), ramp_slope=None)

    elif probe == "sweep_alpha":
        sw = cfg["sweep"]
        rows = fits.sweep_alpha(
            model,
            sw["alphas"],
            fits.SweepProbe(sw["metric"]),
            sector,
            seed_kind=SeedKind(cfg["seed_operator"]["kind"]),
            seed_site=cfg["seed_operator"]["site"],
            fit_range=(cfg.get("fit", {}).get("n_min", 2), cfg.get("fit", {}).get("n_max", 25)),
            times=_time_grid(cfg),
            disorder=_disorder_spec(cfg) if "disorder" in cfg else None,
            lanczos_kwargs=_lanczos_kwargs(cfg),
            threads=n_threads,
        )
        fits.sweep_to_csv(rows, os.path.join(out, "sweep.csv"))
        metrics["table"] = [
            {"alpha": r.alpha, "metric": r.metric, "value": r.value, "stderr": r.stderr}
            for r in rows
        ]

    summary = {
        "version": __version__,
        "config": cfg,
        "wall_time_s": time.monotonic() - t0,
        "metrics": metrics,
    }
    with open(os.path.join(out, "summary.json"), "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
    return summary


def _preset_dir():
    return resources.files("krylovlab") / "presets"


def list_presets() -> list[str]:
    return sorted(p.name[: -len(".json")] for p in _preset_dir().iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> dict:
    path = _preset_dir() / f"{name}.json"
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError(f"unknown preset '{name}'; see `krylovlab list-presets`") from None
    return json.loads(text)


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def apply_reduction(config: dict) -> dict:
    """Preset config with its recorded reduced-scale overrides applied."""
    reduced = config.get("meta", {}).get("reduced", {})
    return _deep_merge(config, reduced)


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON in {path}: line {e.lineno} column {e.colno}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="krylovlab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"krylovlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a pipeline from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--threads", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out")

    p_preset = sub.add_parser("preset", help="run a bundled figure-reproduction config")
    p_preset.add_argument("name")
    p_preset.add_argument("--reduced", action="store_true", help="apply recorded CI reduction")
    p_preset.add_argument("--threads", type=int)
    p_preset.add_argument("--seed", type=int)
    p_preset.add_argument("--out")

    sub.add_parser("list-presets", help="list bundled presets")

    p_val = sub.add_parser("validate", help="validate a JSON config against the schema")
    p_val.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            summary = run(
                _load_config_file(args.config),
                out_dir=args.out,
                threads=args.threads,
                seed=args.seed,
            )
            print(json.dumps(summary["metrics"], indent=2, sort_keys=True))
        elif args.command == "preset":
            cfg = load_preset(args.name)
            if args.reduced:
                cfg = apply_reduction(cfg)
            summary = run(cfg, out_dir=args.out, threads=args.threads, seed=args.seed)
            print(json.dumps(summary["metrics"], indent=2, sort_keys=True))
        elif args.command == "list-presets":
            for name in list_presets():
                print(name)
        elif args.command == "validate":
            resolve_config(_load_config_file(args.config))
            print("ok")
    except ConfigError as e:
        _emit_error(e)
        return 2
    except (SymmetryViolationError, IncompatibleSectorError, EmptySectorError) as e:
        _emit_error(e)
        return 3
    except MemoryError as e:
        _emit_error(e)
        return 4
    except KrylovLabError as e:
        _emit_error(e)
        return 1
    return 0


def _emit_error(e: Exception) -> None:
    sys.stderr.write(json.dumps({"type": type(e).__name__, "error": str(e)}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
