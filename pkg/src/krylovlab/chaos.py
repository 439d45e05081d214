"""Spectral chaos diagnostics: level-spacing ratios and the spectral form factor.

Disorder ensembles are deterministic: sample k draws from a Philox stream
keyed by (master_seed, k), so results are independent of execution order
and thread count.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

import numpy as np
from scipy.integrate import quad

from .errors import NonHermitianError
from .spin_models import Family, ModelSpec, build_hamiltonian
from .symmetry import SectorBasis, SectorSpec, build_sector_basis, project

HERMITICITY_TOL = 1e-10


@dataclass
class Spectrum:
    """Ascending sector eigenvalues with model/sector provenance."""

    eigenvalues: np.ndarray
    model: ModelSpec | None = None
    sector: SectorSpec | None = None

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("index,energy\n")
            for i, e in enumerate(self.eigenvalues):
                f.write(f"{i},{float(e)!r}\n")


def diagonalize(H: np.ndarray, model=None, sector=None) -> Spectrum:
    """Full ascending eigenvalue set of a dense Hermitian matrix."""
    H = np.asarray(H)
    defect = float(np.abs(H - H.conj().T).max())
    if defect > HERMITICITY_TOL:
        raise NonHermitianError(f"hermiticity defect {defect:.3e} exceeds {HERMITICITY_TOL}")
    return Spectrum(np.linalg.eigvalsh(H), model=model, sector=sector)


@dataclass
class RStats:
    """Consecutive-spacing ratios r_n and folded ratios r~_n = min(r, 1/r)."""

    r_values: np.ndarray
    r_tilde_values: np.ndarray
    mean_r_tilde: float
    n_dropped: int = 0

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("r_tilde\n")
            for v in self.r_tilde_values:
                f.write(f"{float(v)!r}\n")


def r_statistics(spectrum: Spectrum | np.ndarray) -> RStats:
    """Spacing-ratio statistics; exactly degenerate neighbors are dropped."""
    e = spectrum.eigenvalues if isinstance(spectrum, Spectrum) else np.asarray(spectrum)
    if e.size < 3:
        raise ValueError(f"need at least 3 levels, got {e.size}")
    s = np.diff(np.sort(e))
    dropped = int((s == 0).sum())
    s = s[s > 0]
    if s.size < 2:
        raise ValueError("fewer than two nonzero spacings")
    r = s[1:] / s[:-1]
    r_tilde = np.minimum(r, 1.0 / r)
    return RStats(
        r_values=r,
        r_tilde_values=r_tilde,
        mean_r_tilde=float(r_tilde.mean()),
        n_dropped=dropped,
    )


def histogram_r_tilde(r_tilde: np.ndarray, bins: int = 25):
    """Density-normalized histogram of r~ on (0, 1]."""
    counts, edges = np.histogram(r_tilde, bins=bins, range=(0.0, 1.0), density=True)
    return edges[:-1], edges[1:], counts


class EnsembleKind(str, Enum):
    POISSON = "poisson"
    GOE = "goe"
    GUE = "gue"
    GSE = "gse"


_DYSON_BETA = {EnsembleKind.GOE: 1, EnsembleKind.GUE: 2, EnsembleKind.GSE: 4}

# exact normalization constants of the Wigner-like surmise
# (r + r^2)^beta / (1 + r + r^2)^(1 + 3 beta / 2); validated by quadrature
# in the test suite
SURMISE_NORMALIZATION = {
    1: 8.0 / 27.0,
    2: 4.0 * np.pi / (81.0 * np.sqrt(3.0)),
    4: 4.0 * np.pi / (729.0 * np.sqrt(3.0)),
}

MEAN_R_TILDE = {
    EnsembleKind.POISSON: 2.0 * np.log(2.0) - 1.0,
    EnsembleKind.GOE: 4.0 - 2.0 * np.sqrt(3.0),
    EnsembleKind.GUE: 2.0 * np.sqrt(3.0) / np.pi - 0.5,
    EnsembleKind.GSE: (32.0 / 15.0) * np.sqrt(3.0) / np.pi - 0.5,
}


def reference_distribution(kind: EnsembleKind, r) -> np.ndarray:
    """Density P(r) of the spacing ratio for the reference ensemble."""
    kind = EnsembleKind(kind)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("spacing ratio r must be positive")
    if kind is EnsembleKind.POISSON:
        return 1.0 / (1.0 + r) ** 2
    beta = _DYSON_BETA[kind]
    Z = SURMISE_NORMALIZATION[beta]
    return (r + r * r) ** beta / (Z * (1.0 + r + r * r) ** (1.0 + 1.5 * beta))


def r_tilde_density(kind: EnsembleKind, r_tilde) -> np.ndarray:
    """P(r~) = 2 P(r) restricted to 0 < r~ <= 1."""
    r_tilde = np.asarray(r_tilde, dtype=float)
    if np.any(r_tilde <= 0) or np.any(r_tilde > 1):
        raise ValueError("r~ must lie in (0, 1]")
    return 2.0 * reference_distribution(kind, r_tilde)


def mean_r_tilde_reference(kind: EnsembleKind) -> float:
    return float(MEAN_R_TILDE[EnsembleKind(kind)])


def sample_r_tilde(kind: EnsembleKind, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw r~ samples from the reference density by numeric inverse CDF."""
    grid = np.linspace(1e-9, 1.0, 4001)
    pdf = r_tilde_density(kind, grid)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))])
    cdf /= cdf[-1]
    u = rng.uniform(0.0, 1.0, size=n)
    return np.interp(u, cdf, grid)


class DisorderTarget(str, Enum):
    LONGITUDINAL_FIELD = "longitudinal_field"
    NONLOCAL_COUPLING = "nonlocal_coupling"


@dataclass(frozen=True)
class DisorderSpec:
    """Gaussian scalar disorder applied to one model parameter per sample."""

    n_samples: int
    sigma: float
    master_seed: int
    mu: float = 0.0
    target: DisorderTarget = DisorderTarget.LONGITUDINAL_FIELD

    def __post_init__(self):
        object.__setattr__(self, "target", DisorderTarget(self.target))
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


def sample_rng(master_seed: int, k: int) -> np.random.Generator:
    """Counter-based child stream for disorder sample k."""
    key = np.array([np.uint64(master_seed & (2**64 - 1)), np.uint64(k)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def perturbed_model(model: ModelSpec, target: DisorderTarget, eps: float) -> ModelSpec:
    target = DisorderTarget(target)
    if target is DisorderTarget.LONGITUDINAL_FIELD:
        if model.family not in (
            Family.LOCAL_TFIM,
            Family.NONLOCAL_TFIM,
            Family.MIXED_FIELD_TFIM,
        ):
            raise ValueError(f"family {model.family.value} has no longitudinal field h")
        return model.with_params(h=model.h + eps)
    if model.family is not Family.NONLOCAL_TFIM:
        raise ValueError(f"family {model.family.value} has no all-to-all coupling gamma")
    return model.with_params(gamma=model.gamma + eps)


def disorder_ensemble(
    model: ModelSpec,
    disorder: DisorderSpec,
    sector: SectorSpec,
    basis: SectorBasis | None = None,
) -> Iterator[Spectrum]:
    """Stream of sector spectra for deterministically seeded disorder samples.

    The symmetry projection is re-validated per sample, so a perturbation
    that breaks a requested symmetry raises SymmetryViolationError.
    """
    if basis is None:
        basis = build_sector_basis(sector, model.L)
    for k in range(disorder.n_samples):
        eps = float(sample_rng(disorder.master_seed, k).normal(disorder.mu, disorder.sigma))
        spec_k = perturbed_model(model, disorder.target, eps)
        Hs = project(build_hamiltonian(spec_k), basis)
        yield diagonalize(Hs, model=spec_k, sector=sector)


@dataclass
class SFFCurve:
    """Annealed spectral form factor on a time grid."""

    times: np.ndarray
    g_values: np.ndarray
    beta: float
    plateau_prediction: float
    n_samples: int
    degenerate_reference: bool = False

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("t,g\n")
            for t, g in zip(self.times, self.g_values):
                f.write(f"{float(t)!r},{float(g)!r}\n")


def plateau_prediction(eigenvalues: np.ndarray, beta: float) -> float:
    """Long-time average Z(2 beta) / Z(beta)^2 for a non-degenerate spectrum."""
    # shift for overflow safety; the ratio is shift-invariant
    e = np.asarray(eigenvalues, dtype=float) - np.min(eigenvalues)
    zb = np.exp(-beta * e).sum()
    return float(np.exp(-2.0 * beta * e).sum() / zb**2)


def sff(
    spectra: Iterable[Spectrum | np.ndarray],
    beta: float,
    times: np.ndarray,
    reference: np.ndarray | None = None,
) -> SFFCurve:
    """Annealed SFF g(beta, t) = E[|Z(beta, t)|^2] / E[|Z(beta, 0)|^2].

    ``reference`` (default: the first spectrum) supplies the plateau
    prediction Z(2 beta)/Z(beta)^2; it is flagged unreliable when the
    reference has exact degeneracies.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    times = np.asarray(times, dtype=float)
    num = np.zeros(times.size)
    den = 0.0
    count = 0
    ref = None if reference is None else np.asarray(reference, dtype=float)
    for spec in spectra:
        e = spec.eigenvalues if isinstance(spec, Spectrum) else np.asarray(spec, dtype=float)
        if not np.all(np.isfinite(e)):
            raise ValueError("non-finite eigenvalues in ensemble")
        if ref is None:
            ref = e
        # absolute Boltzmann weights: annealed averaging must not rescale
        # individual samples
        w = np.exp(-beta * e) if beta > 0 else np.ones(e.size)
        phases = np.exp(-1j * np.outer(e, times))
        z = w @ phases
        num += np.abs(z) ** 2
        den += float(w.sum() ** 2)
        count += 1
    if count == 0:
        raise ValueError("empty ensemble")
    degenerate = bool(np.any(np.diff(np.sort(ref)) == 0))
    return SFFCurve(
        times=times,
        g_values=num / den,
        beta=beta,
        plateau_prediction=plateau_prediction(ref, beta),
        n_samples=count,
        degenerate_reference=degenerate,
    )


@dataclass
class RampFit:
    slope: float
    intercept: float
    residual: float
    n_points: int


def ramp_fit(curve: SFFCurve, window: tuple[float, float]) -> RampFit:
    """Least-squares linear fit of g against t over [t_lo, t_hi] (linear coords)."""
    t_lo, t_hi = window
    mask = (curve.times >= t_lo) & (curve.times <= t_hi)
    n = int(mask.sum())
    if n < 10:
        raise ValueError(f"ramp window holds {n} points, need at least 10")
    t = curve.times[mask]
    g = curve.g_values[mask]
    slope, intercept = np.polyfit(t, g, 1)
    resid = float(np.sqrt(np.mean((g - (slope * t + intercept)) ** 2)))
    return RampFit(slope=float(slope), intercept=float(intercept), residual=resid, n_points=n)


def dip_and_plateau_times(curve: SFFCurve) -> tuple[float, float]:
    """Heuristic (t_dip, t_plateau) bracketing the ramp of a chaotic SFF.

    Works on a log-smoothed copy of the curve so that sample noise around
    the dip does not trigger a spurious early plateau crossing.
    """
    g = curve.g_values
    n = g.size
    w = max(3, n // 40) | 1
    logg = np.log(np.clip(g, 1e-300, None))
    padded = np.pad(logg, w // 2, mode="edge")
    smooth = np.convolve(padded, np.ones(w) / w, mode="valid")
    dip_idx = int(np.argmin(smooth))
    t_dip = float(curve.times[dip_idx])
    level = np.log(curve.plateau_prediction)
    above = smooth[dip_idx:] >= level
    # require the smoothed curve to stay above the plateau level for a full
    # smoothing window before declaring the ramp finished
    t_plateau = float(curve.times[-1])
    run = 0
    for k, flag in enumerate(above):
        run = run + 1 if flag else 0
        if run >= w:
            t_plateau = float(curve.times[dip_idx + k - w + 1])
            break
    if t_plateau <= t_dip:
        t_plateau = float(curve.times[-1])
    return t_dip, t_plateau


def trailing_time_average(times: np.ndarray, values: np.ndarray, decades: float = 2.0) -> float:
    """Mean of ``values`` over the final ``decades`` decades of a log grid."""
    t_hi = times[-1]
    mask = times >= t_hi / 10**decades
    return float(values[mask].mean())


def validate_surmise_normalizations(tol: float = 1e-10) -> dict[int, float]:
    """Quadrature check of the surmise normalization constants.

    Returns the absolute defect per Dyson index; raises if any exceeds tol.
    """
    out = {}
    for beta, Z in SURMISE_NORMALIZATION.items():
        val, _ = quad(
            lambda r, beta=beta: (r + r * r) ** beta / (1 + r + r * r) ** (1 + 1.5 * beta),
            0.0,
            np.inf,
        )
        defect = abs(val - Z)
        if defect > tol:
            raise AssertionError(f"surmise normalization mismatch for beta={beta}: {val} vs {Z}")
        out[beta] = defect
    return out
