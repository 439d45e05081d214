"""Sparse Hamiltonians and seed operators for spin-1/2 chains.

Site convention: sites are numbered 1..L and site 1 is the most significant
qubit of the computational-basis index.  Bit value 0 means spin up
(sigma^z = +1), bit value 1 means spin down (sigma^z = -1).  All chains use
open boundary conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
import scipy.sparse as sp


class Family(str, Enum):
    LOCAL_TFIM = "local_tfim"
    NONLOCAL_TFIM = "nonlocal_tfim"
    MIXED_FIELD_TFIM = "mixed_field_tfim"
    LOCAL_XXZ = "local_xxz"
    MIXED_FIELD_XXZ = "mixed_field_xxz"


_TFIM_FAMILIES = {Family.LOCAL_TFIM, Family.NONLOCAL_TFIM, Family.MIXED_FIELD_TFIM}
_XXZ_FAMILIES = {Family.LOCAL_XXZ, Family.MIXED_FIELD_XXZ}
_POWER_LAW_FAMILIES = {Family.MIXED_FIELD_TFIM, Family.MIXED_FIELD_XXZ}


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a Hamiltonian family and its couplings.

    Fields irrelevant to the chosen family are ignored.  ``defect_site``
    defaults to floor((L+1)/2); for even L a single-site defect breaks the
    spatial reflection, so ``defect_symmetric`` places the defect on the two
    mirror-image central sites instead.
    """

    family: Family
    L: int
    g: float = 0.0
    h: float = 0.0
    gamma: float = 0.0
    alpha: float = 0.0
    J: float = 1.0
    J_zz: float = 1.1
    kappa: float = 1.0
    eps_d: float = 0.0
    defect_site: int | None = None
    defect_symmetric: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        site = self.defect_site
        if site is not None and not (1 <= site <= self.L):
            raise ValueError(f"defect_site {site} outside chain of length {self.L}")

    @property
    def dim(self) -> int:
        return 2**self.L

    def resolved_defect_site(self) -> int:
        if self.defect_site is not None:
            return self.defect_site
        return (self.L + 1) // 2

    def with_params(self, **kwargs) -> "ModelSpec":
        return replace(self, **kwargs)


@dataclass
class SparseOperator:
    """A sparse operator on the full 2^L space.

    ``matrix`` is kept in CSR form for arithmetic; coordinate-list export
    uses deterministic (row, col) lexicographic ordering.
    """

    matrix: sp.csr_matrix
    hermitian: bool = False

    def __post_init__(self):
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n) or n & (n - 1):
            raise ValueError(f"dimension {self.matrix.shape} is not a power of two")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_defect(self) -> float:
        d = self.matrix - self.matrix.conj().T
        return 0.0 if d.nnz == 0 else float(np.abs(d.data).max())

    def coordinate_list(self):
        """Entries as (row, col, value) sorted lexicographically by (row, col)."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return list(zip(coo.row[order], coo.col[order], coo.data[order]))

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("row,col,re,im\n")
            for r, c, v in self.coordinate_list():
                v = complex(v)
                f.write(f"{r},{c},{float(v.real)!r},{float(v.imag)!r}\n")


def power_law_coupling(J: float, kappa: float, alpha: float, i: int, j: int) -> float:
    """Coupling strength J / (kappa * |i-j|^alpha) between sites i and j."""
    if i == j:
        raise ValueError(f"degenerate pair: i = j = {i}")
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return J / (kappa * abs(i - j) ** alpha)


def coupling_matrix(L: int, J: float, kappa: float, alpha: float) -> np.ndarray:
    """Symmetric L x L power-law coupling matrix with zero diagonal (1-based sites)."""
    out = np.zeros((L, L))
    for i in range(1, L + 1):
        for j in range(i + 1, L + 1):
            out[i - 1, j - 1] = out[j - 1, i - 1] = power_law_coupling(J, kappa, alpha, i, j)
    return out


def _site_mask(i: int, L: int) -> int:
    if not (1 <= i <= L):
        raise ValueError(f"site {i} outside chain of length {L}")
    return 1 << (L - i)


def sigma_z_diag(i: int, L: int) -> np.ndarray:
    """Diagonal of sigma^z at site i over the 2^L computational basis."""
    states = np.arange(2**L)
    return 1.0 - 2.0 * ((states & _site_mask(i, L)) > 0)


def _flip_rows(states: np.ndarray, mask: int) -> np.ndarray:
    return states ^ mask


class _Builder:
    """Accumulates diagonal and off-diagonal entries of a 2^L operator."""

    def __init__(self, L: int):
        self.L = L
        self.dim = 2**L
        self.states = np.arange(self.dim)
        self.diag = np.zeros(self.dim)
        self.rows: list[np.ndarray] = []
        self.cols: list[np.ndarray] = []
        self.vals: list[np.ndarray] = []

    def add_diag(self, values: np.ndarray) -> None:
        self.diag += values

    def add_sigma_x(self, i: int, coeff: float) -> None:
        mask = _site_mask(i, self.L)
        self.rows.append(self.states ^ mask)
        self.cols.append(self.states)
        self.vals.append(np.full(self.dim, coeff))

    def add_hop(self, i: int, j: int, coeff: float) -> None:
        """coeff * (sigma^x_i sigma^x_j + sigma^y_i sigma^y_j)."""
        mi, mj = _site_mask(i, self.L), _site_mask(j, self.L)
        sel = ((self.states & mi) > 0) != ((self.states & mj) > 0)
        src = self.states[sel]
        self.rows.append(src ^ (mi | mj))
        self.cols.append(src)
        self.vals.append(np.full(src.size, 2.0 * coeff))

    def build(self) -> SparseOperator:
        rows = np.concatenate([self.states] + self.rows)
        cols = np.concatenate([self.states] + self.cols)
        vals = np.concatenate([self.diag] + self.vals)
        mat = sp.coo_matrix((vals, (rows, cols)), shape=(self.dim, self.dim)).tocsr()
        mat.sum_duplicates()
        return SparseOperator(mat, hermitian=True)


def build_hamiltonian(spec: ModelSpec) -> SparseOperator:
    """Hermitian sparse matrix of the requested Hamiltonian family."""
    L = spec.L
    b = _Builder(L)
    z = [None] + [sigma_z_diag(i, L) for i in range(1, L + 1)]  # 1-based

    fam = spec.family
    if fam in _TFIM_FAMILIES:
        if fam is Family.LOCAL_TFIM or fam is Family.NONLOCAL_TFIM:
            for j in range(1, L):
                b.add_diag(-z[j] * z[j + 1])
        if fam is Family.NONLOCAL_TFIM:
            pref = spec.gamma / np.sqrt(L)
            for i in range(1, L + 1):
                for j in range(i + 1, L + 1):
                    b.add_diag(-pref * z[i] * z[j])
        if fam is Family.MIXED_FIELD_TFIM:
            for i in range(1, L + 1):
                for j in range(i + 1, L + 1):
                    Jij = power_law_coupling(spec.J, spec.kappa, spec.alpha, i, j)
                    b.add_diag(-Jij * z[i] * z[j])
        for j in range(1, L + 1):
            b.add_sigma_x(j, -spec.g)
        if spec.h != 0.0:
            for j in range(1, L + 1):
                b.add_diag(-spec.h * z[j])
    elif fam in _XXZ_FAMILIES:
        if fam is Family.LOCAL_XXZ:
            pairs = [(i, i + 1, spec.J, spec.J_zz) for i in range(1, L)]
        else:
            pairs = []
            for i in range(1, L + 1):
                for j in range(i + 1, L + 1):
                    pairs.append(
                        (
                            i,
                            j,
                            power_law_coupling(spec.J, spec.kappa, spec.alpha, i, j),
                            power_law_coupling(spec.J_zz, spec.kappa, spec.alpha, i, j),
                        )
                    )
        for i, j, Jxy, Jzz in pairs:
            b.add_hop(i, j, Jxy / 4.0)
            b.add_diag((Jzz / 4.0) * z[i] * z[j])
        if fam is Family.MIXED_FIELD_XXZ and spec.eps_d != 0.0:
            site = spec.resolved_defect_site()
            if spec.defect_symmetric:
                b.add_diag(spec.eps_d * 0.5 * (z[site] + z[L + 1 - site]))
            else:
                b.add_diag(spec.eps_d * 0.5 * z[site])
    else:  # pragma: no cover - Family() coercion rejects unknown values first
        raise ValueError(f"unknown family {fam}")

    return b.build()


class SeedKind(str, Enum):
    SINGLE_SZ = "single_sz"
    PARITY_SYMMETRIC_SZ = "parity_symmetric_sz"


def seed_operator(kind: SeedKind, i: int, L: int) -> SparseOperator:
    """Seed operator S^z_i or the reflection-symmetric S^z_i + S^z_{L-i+1}."""
    kind = SeedKind(kind)
    if not (1 <= i <= L):
        raise ValueError(f"site {i} outside chain of length {L}")
    diag = 0.5 * sigma_z_diag(i, L)
    if kind is SeedKind.PARITY_SYMMETRIC_SZ:
        diag = diag + 0.5 * sigma_z_diag(L + 1 - i, L)
    mat = sp.diags(diag).tocsr()
    return SparseOperator(mat, hermitian=True)
