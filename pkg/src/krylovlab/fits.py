"""Post-processing: Lanczos growth-rate fits, saturation values, alpha sweeps."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import pipeline
from .chaos import DisorderSpec, r_statistics
from .krylov import ComplexityCurve, default_time_grid, evolve_wavefunction
from .spin_models import ModelSpec, SeedKind
from .symmetry import SectorSpec


@dataclass
class GrowthFit:
    """Fit of b_n = delta * n / ln(n) + c over an index range."""

    delta: float
    c: float
    n_range: tuple[int, int]
    residual: float


def fit_growth_rate(b: np.ndarray, n_range: tuple[int, int] = (2, 25)) -> GrowthFit:
    """Linear least squares of b_n against n / ln(n), n in [n_min, n_max]."""
    n_min, n_max = n_range
    if n_min < 2:
        raise ValueError("n_min must be >= 2 (n / ln n is undefined at n = 1)")
    b = np.asarray(b, dtype=float)
    if n_max > b.size:
        raise ValueError(f"n_max {n_max} exceeds available coefficients ({b.size})")
    n = np.arange(n_min, n_max + 1)
    if n.size < 3:
        raise ValueError(f"fit range [{n_min}, {n_max}] holds fewer than 3 points")
    x = n / np.log(n)
    y = b[n - 1]
    delta, c = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (delta * x + c)) ** 2)))
    return GrowthFit(delta=float(delta), c=float(c), n_range=(n_min, n_max), residual=resid)


@dataclass
class SaturationResult:
    value: float
    std: float
    plateaued: bool


def saturation_value(
    curve: ComplexityCurve,
    window_fraction: float = 0.1,
    plateau_rel_std: float = 0.1,
) -> SaturationResult:
    """Mean of C_K over the trailing window of the (log-spaced) time grid.

    ``plateaued`` is False when the window fluctuates by more than
    ``plateau_rel_std`` relative standard deviation.
    """
    if not (0.0 < window_fraction < 1.0):
        raise ValueError("window_fraction must be in (0, 1)")
    m = max(1, int(round(window_fraction * curve.times.size)))
    tail = curve.c_k[-m:]
    value = float(tail.mean())
    std = float(tail.std())
    plateaued = std <= plateau_rel_std * max(abs(value), 1.0)
    return SaturationResult(value=value, std=std, plateaued=plateaued)


class SweepProbe(str, Enum):
    GROWTH_RATE = "growth_rate"
    SATURATION = "saturation"
    MEAN_R_TILDE = "mean_r_tilde"


@dataclass
class SweepRow:
    alpha: float
    metric: str
    value: float
    stderr: float


def sweep_alpha(
    base_spec: ModelSpec,
    alphas: list[float],
    probe: SweepProbe,
    sector: SectorSpec,
    seed_kind: SeedKind = SeedKind.SINGLE_SZ,
    seed_site: int | None = None,
    max_steps: int | None = None,
    fit_range: tuple[int, int] = (2, 25),
    times: np.ndarray | None = None,
    disorder: DisorderSpec | None = None,
    lanczos_kwargs: dict | None = None,
    threads: int = 1,
) -> list[SweepRow]:
    """Run the selected probe once per power-law exponent alpha.

    Errors are propagated per alpha with partial results retained on the
    raised exception (``exc.partial``).
    """
    if not alphas:
        raise ValueError("alpha list must be nonempty")
    probe = SweepProbe(probe)
    if seed_site is None:
        seed_site = (base_spec.L + 1) // 2
    lk = dict(lanczos_kwargs or {})
    if max_steps is not None:
        lk["max_iter"] = max_steps

    rows: list[SweepRow] = []
    for alpha in alphas:
        spec = replace(base_spec, alpha=float(alpha))
        try:
            if probe is SweepProbe.GROWTH_RATE:
                res = pipeline.lanczos_for(spec, sector, seed_kind, seed_site, **lk)
                fit = fit_growth_rate(res.b, fit_range)
                rows.append(SweepRow(alpha, probe.value, fit.delta, fit.residual))
            elif probe is SweepProbe.SATURATION:
                res = pipeline.lanczos_for(spec, sector, seed_kind, seed_site, **lk)
                grid = times if times is not None else default_time_grid()
                curve = evolve_wavefunction(res.b, grid)
                sat = saturation_value(curve)
                rows.append(SweepRow(alpha, probe.value, sat.value, sat.std))
            else:
                if disorder is None:
                    raise ValueError("mean_r_tilde sweep requires a disorder spec")
                spectra = pipeline.ensemble_spectra(spec, disorder, sector, threads=threads)
                means = np.array([r_statistics(s).mean_r_tilde for s in spectra])
                rows.append(
                    SweepRow(alpha, probe.value, float(means.mean()),
                             float(means.std() / np.sqrt(means.size)))
                )
        except Exception as exc:
            exc.partial = rows  # type: ignore[attr-defined]
            raise
    return rows


def sweep_to_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w") as f:
        f.write("alpha,metric,value,stderr\n")
        for r in rows:
            f.write(f"{float(r.alpha)!r},{r.metric},{float(r.value)!r},{float(r.stderr)!r}\n")
