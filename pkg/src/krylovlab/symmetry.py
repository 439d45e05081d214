"""Symmetry sectors: spatial parity, global spin flip, magnetization.

Sector bases are built from symmetric/antisymmetric combinations of
computational-basis states over orbits of the requested symmetry group,
ordered by the smallest binary representative of each orbit.  The
coefficient of the smallest representative is always positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import EmptySectorError, IncompatibleSectorError, SymmetryViolationError
from .spin_models import SparseOperator

COMMUTATOR_TOL = 1e-10


@dataclass(frozen=True)
class SectorSpec:
    """Quantum numbers selecting a symmetry sector.

    ``magnetization`` is the total S^z eigenvalue, i.e. (n_up - n_down)/2
    (half-integer for odd L).
    """

    parity: int | None = None
    z_reflection: int | None = None
    magnetization: float | None = None

    def __post_init__(self):
        if self.parity is None and self.z_reflection is None and self.magnetization is None:
            raise ValueError("sector must fix at least one quantum number")
        for name in ("parity", "z_reflection"):
            v = getattr(self, name)
            if v is not None and v not in (-1, 1):
                raise ValueError(f"{name} must be +1 or -1, got {v}")

    def labels(self) -> dict:
        out = {}
        if self.parity is not None:
            out["parity"] = self.parity
        if self.z_reflection is not None:
            out["z_reflection"] = self.z_reflection
        if self.magnetization is not None:
            out["magnetization"] = self.magnetization
        return out


def _reverse_bits(states: np.ndarray, L: int) -> np.ndarray:
    out = np.zeros_like(states)
    for i in range(L):
        out |= ((states >> i) & 1) << (L - 1 - i)
    return out


def parity_operator(L: int) -> SparseOperator:
    """Permutation reversing the chain: (s_1 ... s_L) -> (s_L ... s_1)."""
    if L < 2:
        raise ValueError("L must be >= 2")
    states = np.arange(2**L)
    rows = _reverse_bits(states, L)
    mat = sp.coo_matrix((np.ones(2**L), (rows, states)), shape=(2**L, 2**L)).tocsr()
    return SparseOperator(mat, hermitian=True)


def z_reflection_operator(L: int) -> SparseOperator:
    """Global spin flip, prod_i sigma^x_i; flips every bit."""
    states = np.arange(2**L)
    rows = states ^ (2**L - 1)
    mat = sp.coo_matrix((np.ones(2**L), (rows, states)), shape=(2**L, 2**L)).tocsr()
    return SparseOperator(mat, hermitian=True)


def magnetization_diag(L: int) -> np.ndarray:
    """Diagonal of total S^z = sum_i sigma^z_i / 2."""
    states = np.arange(2**L)
    n_down = np.zeros(2**L, dtype=np.int64)
    for i in range(L):
        n_down += (states >> i) & 1
    return (L - 2 * n_down) / 2.0


def magnetization_operator(L: int) -> SparseOperator:
    return SparseOperator(sp.diags(magnetization_diag(L)).tocsr(), hermitian=True)


@dataclass
class SectorBasis:
    """Orthonormal basis of a symmetry sector embedded in the full space.

    ``vectors`` holds dim_sector orthonormal columns as a sparse
    (2^L x dim_sector) matrix.
    """

    L: int
    spec: SectorSpec
    vectors: sp.csc_matrix

    @property
    def dim_full(self) -> int:
        return 2**self.L

    @property
    def dim_sector(self) -> int:
        return self.vectors.shape[1]

    def to_csv(self, path) -> None:
        coo = self.vectors.tocoo()
        order = np.lexsort((coo.row, coo.col))
        with open(path, "w") as f:
            f.write("column_index,basis_state_bits,amplitude_re,amplitude_im\n")
            for k in order:
                c, r, v = coo.col[k], coo.row[k], complex(coo.data[k])
                bits = format(r, f"0{self.L}b")
                f.write(f"{c},{bits},{float(v.real)!r},{float(v.imag)!r}\n")


def build_sector_basis(spec: SectorSpec, L: int) -> SectorBasis:
    """Joint eigenbasis of the requested symmetries.

    Each basis vector is sum_g chi(g) |g(s)> / norm over the abelian group
    generated by the requested reflections, restricted to the magnetization
    subspace when one is fixed.
    """
    states = np.arange(2**L)
    if spec.z_reflection is not None and spec.magnetization not in (None, 0, 0.0):
        raise IncompatibleSectorError(
            "global spin flip maps magnetization M to -M; only M = 0 is compatible"
        )

    if spec.magnetization is not None:
        m = magnetization_diag(L)
        candidates = states[m == spec.magnetization]
        if candidates.size == 0:
            raise EmptySectorError(f"no states with magnetization {spec.magnetization}")
    else:
        candidates = states

    # group elements as (state permutation, character)
    perms = [(states, 1.0)]
    if spec.parity is not None:
        rev = _reverse_bits(states, L)
        perms = perms + [(p[rev], float(spec.parity) * c) for p, c in perms]
    if spec.z_reflection is not None:
        flip = states ^ (2**L - 1)
        perms = perms + [(p[flip], float(spec.z_reflection) * c) for p, c in perms]

    candidate_set = set(int(s) for s in candidates)
    rows, cols, vals = [], [], []
    col = 0
    seen = set()
    for s in sorted(candidate_set):
        if s in seen:
            continue
        amp: dict[int, float] = {}
        orbit = set()
        for perm, chi in perms:
            t = int(perm[s])
            orbit.add(t)
            amp[t] = amp.get(t, 0.0) + chi
        seen |= orbit
        vec = {t: a for t, a in amp.items() if abs(a) > 1e-12}
        if not vec:
            continue
        norm = np.sqrt(sum(a * a for a in vec.values()))
        for t, a in sorted(vec.items()):
            rows.append(t)
            cols.append(col)
            vals.append(a / norm)
        col += 1

    if col == 0:
        raise EmptySectorError(f"sector {spec.labels()} is empty for L = {L}")
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(2**L, col)).tocsc()
    return SectorBasis(L=L, spec=spec, vectors=mat)


def _symmetry_operators(basis: SectorBasis):
    ops = []
    if basis.spec.parity is not None:
        ops.append(("parity", parity_operator(basis.L).matrix))
    if basis.spec.z_reflection is not None:
        ops.append(("z_reflection", z_reflection_operator(basis.L).matrix))
    if basis.spec.magnetization is not None:
        ops.append(("magnetization", magnetization_operator(basis.L).matrix))
    return ops


def project(
    op: SparseOperator, basis: SectorBasis, check_tol: float = COMMUTATOR_TOL
) -> np.ndarray:
    """Dense sector-restricted matrix V^dagger op V.

    The operator must commute with every symmetry defining the basis;
    violations raise SymmetryViolationError naming the offending symmetry.
    """
    if op.dim != basis.dim_full:
        raise ValueError(f"operator dim {op.dim} != sector full dim {basis.dim_full}")
    if check_tol is not None:
        for name, S in _symmetry_operators(basis):
            comm = op.matrix @ S - S @ op.matrix
            resid = 0.0 if comm.nnz == 0 else float(np.abs(comm.data).max())
            if resid > check_tol:
                raise SymmetryViolationError(name, resid)
    V = basis.vectors
    out = (V.conj().T @ (op.matrix @ V)).toarray()
    if op.hermitian:
        out = 0.5 * (out + out.conj().T)
    if np.iscomplexobj(out) and np.abs(out.imag).max() < 1e-14 * max(1.0, np.abs(out.real).max()):
        out = out.real
    return np.ascontiguousarray(out)
