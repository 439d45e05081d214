"""Shared building blocks tying models, sectors, and probes together."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .chaos import DisorderSpec, Spectrum, diagonalize, perturbed_model, sample_rng
from .krylov import LanczosResult, lanczos
from .spin_models import ModelSpec, SeedKind, build_hamiltonian, seed_operator
from .symmetry import SectorBasis, SectorSpec, build_sector_basis, project


def sector_hamiltonian(
    model: ModelSpec, sector: SectorSpec, basis: SectorBasis | None = None
) -> tuple[np.ndarray, SectorBasis]:
    """Dense sector-projected Hamiltonian together with the basis used."""
    if basis is None:
        basis = build_sector_basis(sector, model.L)
    return project(build_hamiltonian(model), basis), basis


def projected_seed(kind: SeedKind, site: int, basis: SectorBasis) -> np.ndarray:
    return project(seed_operator(kind, site, basis.L), basis)


def lanczos_for(
    model: ModelSpec,
    sector: SectorSpec,
    seed_kind: SeedKind,
    seed_site: int,
    **lanczos_kwargs,
) -> LanczosResult:
    Hs, basis = sector_hamiltonian(model, sector)
    seed = projected_seed(seed_kind, seed_site, basis)
    return lanczos(Hs, seed, **lanczos_kwargs)


def ensemble_spectra(
    model: ModelSpec,
    disorder: DisorderSpec,
    sector: SectorSpec,
    threads: int = 1,
) -> list[Spectrum]:
    """Disorder ensemble materialized in sample order.

    Samples are independent; with ``threads > 1`` they are diagonalized in a
    thread pool but always collected in index order, so the result is
    identical to the sequential one.
    """
    basis = build_sector_basis(sector, model.L)

    def one(k: int) -> Spectrum:
        eps = float(sample_rng(disorder.master_seed, k).normal(disorder.mu, disorder.sigma))
        spec_k = perturbed_model(model, disorder.target, eps)
        Hs = project(build_hamiltonian(spec_k), basis)
        return diagonalize(Hs, model=spec_k, sector=sector)

    if threads <= 1:
        return [one(k) for k in range(disorder.n_samples)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(disorder.n_samples)))
