"""Exception types shared across the package."""


class KrylovLabError(Exception):
    """Base class for krylovlab errors."""


class SymmetryViolationError(KrylovLabError):
    """An operator does not commute with a symmetry defining a sector."""

    def __init__(self, symmetry: str, residual: float):
        self.symmetry = symmetry
        self.residual = residual
        super().__init__(
            f"operator violates {symmetry} symmetry (commutator max |.| = {residual:.3e})"
        )


class EmptySectorError(KrylovLabError):
    """The requested symmetry sector contains no states."""


class IncompatibleSectorError(KrylovLabError):
    """The requested quantum numbers are mutually inconsistent."""


class NonHermitianError(KrylovLabError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class ConfigError(KrylovLabError):
    """A run configuration failed schema or consistency validation."""
