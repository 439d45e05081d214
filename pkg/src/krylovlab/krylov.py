"""Lanczos tridiagonalization of the Liouvillian and Krylov complexity.

Operators restricted to a D-dimensional sector are treated as vectors in a
D^2-dimensional space with the infinite-temperature (Frobenius) inner
product (A|B) = Tr[A^dagger B] / D.  The Lanczos recursion uses full
reorthogonalization (two Gram-Schmidt passes against all stored vectors per
step), so late coefficients stay faithful over thousands of iterations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.linalg import eigh_tridiagonal


def frobenius_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """(A|B) = Tr[A^dagger B] / D."""
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return complex(np.vdot(A, B) / A.shape[0])


def frobenius_norm(A: np.ndarray) -> float:
    return float(np.sqrt(np.vdot(A, A).real / A.shape[0]))


def liouvillian_apply(H: np.ndarray, O: np.ndarray) -> np.ndarray:
    """[H, O] = HO - OH."""
    if H.shape != O.shape:
        raise ValueError(f"shape mismatch: H {H.shape} vs O {O.shape}")
    return H @ O - O @ H


class Termination(str, Enum):
    TOLERANCE_HIT = "tolerance_hit"
    MAX_ITERATIONS = "max_iterations"
    EXACT_BREAKDOWN = "exact_breakdown"


@dataclass
class LanczosResult:
    """Positive coefficients b_1..b_{K-1} and the Krylov dimension K."""

    b: np.ndarray
    K: int
    termination: Termination
    basis: np.ndarray | None = None  # (K, D, D) when stored

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("n,b_n\n")
            for n, bn in enumerate(self.b, start=1):
                f.write(f"{n},{float(bn)!r}\n")


def krylov_dimension_bound(D: int) -> int:
    """Upper bound D^2 - D + 1 on the Krylov dimension of a D-dim sector."""
    return D * D - D + 1


def lanczos(
    H: np.ndarray,
    seed: np.ndarray,
    tol: float | None = None,
    max_iter: int | None = None,
    store_basis: bool | None = None,
    reorth_dtype=None,
) -> LanczosResult:
    """Tridiagonalize the Liouvillian of H on the Krylov space of ``seed``.

    ``tol`` terminates when a new off-diagonal falls below it; by default a
    scale-relative 1e-10 * max(b seen) is used.  ``max_iter`` caps the number
    of coefficients (initial-coefficients-only mode).  ``store_basis``
    defaults to D <= 256.  ``reorth_dtype`` optionally stores the
    reorthogonalization basis at reduced precision (e.g. float32) to fit
    large sectors in memory; the three-term recurrence itself stays in
    working precision.
    """
    D = H.shape[0]
    if H.shape != seed.shape or H.shape[0] != H.shape[1]:
        raise ValueError(f"shape mismatch: H {H.shape} vs seed {seed.shape}")
    seed_norm = frobenius_norm(seed)
    if seed_norm == 0.0:
        raise ValueError("seed operator is zero")

    bound = krylov_dimension_bound(D)
    if max_iter is None:
        max_iter = bound - 1
    if store_basis is None:
        store_basis = D <= 256

    if sparse.issparse(H):
        H = H.toarray()
    real = not (np.iscomplexobj(H) or np.iscomplexobj(seed))
    dtype = np.float64 if real else np.complex128
    H = np.ascontiguousarray(H, dtype=dtype)

    store_dtype = np.dtype(reorth_dtype) if reorth_dtype is not None else np.dtype(dtype)
    if not real and store_dtype.kind == "f":
        store_dtype = np.dtype(np.complex64 if store_dtype.itemsize == 4 else np.complex128)
    capacity = min(max_iter + 1, 128)
    basis = np.empty((capacity, D * D), dtype=store_dtype)

    cur = np.asarray(seed, dtype=dtype) / seed_norm
    basis[0] = cur.ravel()
    prev = None
    b: list[float] = []
    eps = np.finfo(np.float64).eps
    termination = Termination.MAX_ITERATIONS

    for n in range(1, max_iter + 1):
        w = liouvillian_apply(H, cur)
        if prev is not None:
            w -= b[-1] * prev
        wf = w.reshape(-1)
        # full reorthogonalization, two classical Gram-Schmidt passes
        B = basis[:n]
        for _ in range(2):
            if B.dtype == dtype:
                coeffs = (B.conj() @ wf) / D
                wf -= B.T @ coeffs
            else:
                # reduced-precision basis: keep the matmuls in the storage
                # dtype so the basis is never upcast-copied
                wlow = wf.astype(store_dtype)
                coeffs = (B.conj() @ wlow) / D
                wf -= (B.T @ coeffs).astype(dtype)
        bn = float(np.sqrt(np.vdot(wf, wf).real / D))

        scale = max(b) if b else 1.0
        threshold = tol if tol is not None else 1e-10 * scale
        breakdown = 1e3 * eps * max(scale, 1.0)
        if bn < max(threshold, breakdown):
            termination = (
                Termination.EXACT_BREAKDOWN if bn < breakdown else Termination.TOLERANCE_HIT
            )
            break

        b.append(bn)
        prev = cur
        cur = w / bn
        if n >= capacity:
            capacity = min(max(2 * capacity, n + 1), max_iter + 1)
            basis = np.resize(basis, (capacity, D * D))
        basis[n] = cur.ravel()

    K = len(b) + 1
    kept = None
    if store_basis:
        kept = basis[:K].astype(dtype, copy=True).reshape(K, D, D)
    return LanczosResult(b=np.array(b), K=K, termination=termination, basis=kept)


def default_time_grid(t_min: float = 1e-2, t_max: float = 1e7, points: int = 400) -> np.ndarray:
    """Log-spaced grid covering exponential, linear, and plateau regimes."""
    return np.logspace(np.log10(t_min), np.log10(t_max), points)


@dataclass
class ComplexityCurve:
    """Krylov-chain amplitudes phi_n(t) and complexity C_K(t) on a time grid."""

    times: np.ndarray
    phi: np.ndarray  # (K, T) complex
    c_k: np.ndarray  # (T,)

    @property
    def K(self) -> int:
        return self.phi.shape[0]

    def norms(self) -> np.ndarray:
        return (np.abs(self.phi) ** 2).sum(axis=0)

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("t,c_k\n")
            for t, c in zip(self.times, self.c_k):
                f.write(f"{float(t)!r},{float(c)!r}\n")

    def to_csv_wide(self, path) -> None:
        K = self.K
        with open(path, "w") as f:
            cols = ",".join(f"phi_{n}_re,phi_{n}_im" for n in range(K))
            f.write(f"t,{cols}\n")
            for j, t in enumerate(self.times):
                row = ",".join(f"{float(self.phi[n, j].real)!r},{float(self.phi[n, j].imag)!r}" for n in range(K))
                f.write(f"{float(t)!r},{row}\n")


def evolve_wavefunction(b: np.ndarray, times: np.ndarray) -> ComplexityCurve:
    """Amplitudes phi_n(t) = i^{-n} [exp(i L_tri t)]_{n0} by spectral decomposition.

    Exact at all times: the K x K tridiagonal matrix with off-diagonals b is
    diagonalized once and the propagator applied per time point.
    """
    b = np.asarray(b, dtype=float)
    times = np.asarray(times, dtype=float)
    if b.size and b.min() <= 0:
        raise ValueError("all Lanczos coefficients must be positive")
    K = b.size + 1
    if K == 1:
        phi = np.ones((1, times.size), dtype=complex)
        return ComplexityCurve(times=times, phi=phi, c_k=np.zeros(times.size))

    # the default stemr driver can fail to converge for K in the thousands;
    # fall back to dense divide-and-conquer there, which is reliable
    if K <= 1500:
        lam, V = eigh_tridiagonal(np.zeros(K), b, lapack_driver="stev")
    else:
        T = np.zeros((K, K))
        idx = np.arange(K - 1)
        T[idx, idx + 1] = b
        T[idx + 1, idx] = b
        lam, V = scipy.linalg.eigh(T, driver="evd")
    M = V * V[0, :]  # M[n, k] = V[n,k] V[0,k]
    args = np.outer(lam, times)
    re = M @ np.cos(args)
    im = M @ np.sin(args)
    amp = re + 1j * im  # [exp(i L t)]_{n0}
    phase = (-1j) ** np.arange(K)
    phi = phase[:, None] * amp
    weights = np.arange(K, dtype=float)
    c_k = weights @ (re * re + im * im)
    return ComplexityCurve(times=times, phi=phi, c_k=c_k)


def complexity(phi: np.ndarray) -> np.ndarray:
    """C_K(t) = sum_n n |phi_n(t)|^2 for amplitudes of shape (K, T)."""
    weights = np.arange(phi.shape[0], dtype=float)
    return weights @ (np.abs(phi) ** 2)


def moments_from_b(b: np.ndarray, order: int) -> float:
    """(O_0| L^order |O_0) as the (0,0) entry of the tridiagonal power.

    Exact whenever the coefficient list reaches depth order/2 or the
    recursion ended by exact breakdown; a truncated list shorter than
    order/2 gives the moment of the truncated operator instead.
    """
    b = np.asarray(b, dtype=float)
    if order < 0:
        raise ValueError("order must be nonnegative")
    m = min(b.size, order // 2) + 1
    T = np.diag(b[: m - 1], 1) + np.diag(b[: m - 1], -1)
    return float(np.linalg.matrix_power(T, order)[0, 0])
