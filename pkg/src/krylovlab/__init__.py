"""krylovlab: operator growth and spectral chaos in spin-1/2 chains."""

from .chaos import (
    DisorderSpec,
    DisorderTarget,
    EnsembleKind,
    RampFit,
    RStats,
    SFFCurve,
    Spectrum,
    diagonalize,
    disorder_ensemble,
    mean_r_tilde_reference,
    perturbed_model,
    plateau_prediction,
    r_statistics,
    r_tilde_density,
    ramp_fit,
    reference_distribution,
    sample_r_tilde,
    sample_rng,
    sff,
    trailing_time_average,
    validate_surmise_normalizations,
)
from .errors import (
    ConfigError,
    EmptySectorError,
    IncompatibleSectorError,
    KrylovLabError,
    NonHermitianError,
    SymmetryViolationError,
)
from .fits import (
    GrowthFit,
    SaturationResult,
    SweepProbe,
    fit_growth_rate,
    saturation_value,
    sweep_alpha,
)
from .krylov import (
    ComplexityCurve,
    LanczosResult,
    Termination,
    complexity,
    default_time_grid,
    evolve_wavefunction,
    frobenius_inner,
    frobenius_norm,
    krylov_dimension_bound,
    lanczos,
    liouvillian_apply,
    moments_from_b,
)
from .spin_models import (
    Family,
    ModelSpec,
    SeedKind,
    SparseOperator,
    build_hamiltonian,
    coupling_matrix,
    power_law_coupling,
    seed_operator,
)
from .symmetry import (
    SectorBasis,
    SectorSpec,
    build_sector_basis,
    parity_operator,
    project,
    z_reflection_operator,
)

__version__ = "0.1.0"
