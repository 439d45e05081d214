import numpy as np
import pytest
from scipy.integrate import quad

from krylovlab import (
    DisorderSpec,
    DisorderTarget,
    EnsembleKind,
    Family,
    ModelSpec,
    NonHermitianError,
    SectorSpec,
    Spectrum,
    diagonalize,
    perturbed_model,
    plateau_prediction,
    r_statistics,
    ramp_fit,
    reference_distribution,
    sample_r_tilde,
    sample_rng,
    sff,
    trailing_time_average,
    validate_surmise_normalizations,
)
from krylovlab.chaos import (
    MEAN_R_TILDE,
    SURMISE_NORMALIZATION,
    dip_and_plateau_times,
    histogram_r_tilde,
    mean_r_tilde_reference,
    r_tilde_density,
)
from krylovlab.pipeline import ensemble_spectra


class TestDiagonalize:
    def test_pauli_z(self):
        spec = diagonalize(np.diag([1.0, -1.0]))
        assert np.allclose(spec.eigenvalues, [-1.0, 1.0])

    def test_sorted_ascending(self):
        rng = np.random.default_rng(0)
        A = rng.normal(size=(40, 40))
        spec = diagonalize(A + A.T)
        assert np.all(np.diff(spec.eigenvalues) >= 0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestRStatistics:
    def test_equally_spaced_gives_unity(self):
        stats = r_statistics(np.arange(10.0))
        assert np.allclose(stats.r_values, 1.0)
        assert stats.mean_r_tilde == pytest.approx(1.0)

    def test_three_levels(self):
        # spacings 1 and 2: r = 2, r-tilde = 1/2
        stats = r_statistics(np.array([0.0, 1.0, 3.0]))
        assert stats.r_values[0] == pytest.approx(2.0)
        assert stats.r_tilde_values[0] == pytest.approx(0.5)

    def test_too_few_levels(self):
        with pytest.raises(ValueError):
            r_statistics(np.array([0.0, 1.0]))

    def test_degenerate_levels_dropped(self):
        stats = r_statistics(np.array([0.0, 1.0, 1.0, 2.0, 4.0]))
        assert stats.n_dropped == 1
        assert np.all(np.isfinite(stats.r_tilde_values))

    def test_histogram_normalized_as_density(self):
        rng = np.random.default_rng(1)
        lo, hi, density = histogram_r_tilde(rng.uniform(0, 1, 5000))
        assert np.sum(density * (hi - lo)) == pytest.approx(1.0)
        assert lo[0] == pytest.approx(0.0)
        assert hi[-1] == pytest.approx(1.0)


class TestReferenceDistributions:
    def test_poisson_mean(self):
        assert mean_r_tilde_reference(EnsembleKind.POISSON) == pytest.approx(
            2 * np.log(2) - 1
        )

    def test_goe_mean(self):
        assert mean_r_tilde_reference(EnsembleKind.GOE) == pytest.approx(4 - 2 * np.sqrt(3))

    def test_surmise_normalization_constants(self):
        assert SURMISE_NORMALIZATION[1] == pytest.approx(8 / 27)
        assert SURMISE_NORMALIZATION[2] == pytest.approx(4 * np.pi / (81 * np.sqrt(3)))
        assert SURMISE_NORMALIZATION[4] == pytest.approx(4 * np.pi / (729 * np.sqrt(3)))

    def test_densities_normalized_by_quadrature(self):
        for kind in EnsembleKind:
            total, _ = quad(
                lambda r: reference_distribution(kind, r), 0, np.inf, limit=200
            )
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_folded_density_normalized(self):
        for kind in EnsembleKind:
            total, _ = quad(lambda u: r_tilde_density(kind, u), 0, 1, limit=200)
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_mean_constants_match_quadrature(self):
        for kind, target in MEAN_R_TILDE.items():
            val, _ = quad(lambda u: u * r_tilde_density(kind, u), 0, 1, limit=200)
            assert val == pytest.approx(target, abs=1e-8)

    def test_validate_surmise_normalizations(self):
        defects = validate_surmise_normalizations()
        assert all(d < 1e-10 for d in defects.values())

    def test_rejects_negative_r(self):
        with pytest.raises(ValueError):
            reference_distribution(EnsembleKind.GOE, -0.5)

    def test_sampling_reproduces_goe_mean(self):
        rng = np.random.default_rng(42)
        samples = sample_r_tilde(EnsembleKind.GOE, 20000, rng)
        assert np.all((samples > 0) & (samples <= 1))
        assert samples.mean() == pytest.approx(4 - 2 * np.sqrt(3), abs=0.01)


class TestDisorder:
    def test_rng_deterministic_per_sample(self):
        a = sample_rng(7, 3).normal(size=4)
        b = sample_rng(7, 3).normal(size=4)
        c = sample_rng(7, 4).normal(size=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_perturbed_model_targets(self):
        base = ModelSpec(family=Family.LOCAL_TFIM, L=4, g=1.0, h=0.5)
        assert perturbed_model(base, DisorderTarget.LONGITUDINAL_FIELD, 0.1).h == 0.6
        nb = ModelSpec(family=Family.NONLOCAL_TFIM, L=4, g=1.0, h=0.0, gamma=0.5)
        assert perturbed_model(nb, DisorderTarget.NONLOCAL_COUPLING, -0.2).gamma == 0.3

    def test_zero_sigma_gives_identical_spectra(self):
        base = ModelSpec(family=Family.LOCAL_TFIM, L=4, g=-1.05, h=0.5)
        dis = DisorderSpec(
            n_samples=3, sigma=0.0, master_seed=1, target=DisorderTarget.LONGITUDINAL_FIELD
        )
        spectra = list(ensemble_spectra(base, dis, SectorSpec(parity=1)))
        assert len(spectra) == 3
        for s in spectra[1:]:
            assert np.array_equal(s.eigenvalues, spectra[0].eigenvalues)

    def test_same_master_seed_reproducible(self):
        base = ModelSpec(family=Family.LOCAL_TFIM, L=4, g=-1.05, h=0.5)
        dis = DisorderSpec(
            n_samples=4, sigma=0.01, master_seed=9, target=DisorderTarget.LONGITUDINAL_FIELD
        )
        run1 = [s.eigenvalues for s in ensemble_spectra(base, dis, SectorSpec(parity=1))]
        run2 = [s.eigenvalues for s in ensemble_spectra(base, dis, SectorSpec(parity=1))]
        for a, b in zip(run1, run2):
            assert np.array_equal(a, b)

    def test_thread_count_does_not_change_results(self):
        base = ModelSpec(family=Family.LOCAL_TFIM, L=5, g=-1.05, h=0.5)
        dis = DisorderSpec(
            n_samples=4, sigma=0.01, master_seed=5, target=DisorderTarget.LONGITUDINAL_FIELD
        )
        serial = [s.eigenvalues for s in ensemble_spectra(base, dis, SectorSpec(parity=1))]
        threaded = [
            s.eigenvalues
            for s in ensemble_spectra(base, dis, SectorSpec(parity=1), threads=3)
        ]
        for a, b in zip(serial, threaded):
            assert np.array_equal(a, b)

    def test_field_disorder_incompatible_with_z_sector(self):
        from krylovlab import SymmetryViolationError

        base = ModelSpec(family=Family.LOCAL_TFIM, L=4, g=1.0, h=0.0)
        dis = DisorderSpec(
            n_samples=2, sigma=0.1, master_seed=0, target=DisorderTarget.LONGITUDINAL_FIELD
        )
        with pytest.raises(SymmetryViolationError):
            list(ensemble_spectra(base, dis, SectorSpec(parity=1, z_reflection=1)))


class TestSFF:
    def test_two_level_is_cosine_squared(self):
        spec = Spectrum(eigenvalues=np.array([-1.0, 1.0]))
        times = np.linspace(0.0, 4.0, 50)
        curve = sff([spec], beta=0.0, times=times)
        assert np.allclose(curve.g_values, np.cos(times) ** 2, atol=1e-12)
        assert curve.g_values[0] == pytest.approx(1.0)
        assert curve.plateau_prediction == pytest.approx(0.5)

    def test_shift_invariance_at_infinite_temperature(self):
        rng = np.random.default_rng(2)
        e = np.sort(rng.normal(size=30))
        times = np.logspace(-1, 2, 40)
        g1 = sff([Spectrum(eigenvalues=e)], beta=0.0, times=times).g_values
        g2 = sff([Spectrum(eigenvalues=e + 17.0)], beta=0.0, times=times).g_values
        assert np.allclose(g1, g2, atol=1e-10)

    def test_sample_order_fixed_reduction(self):
        rng = np.random.default_rng(3)
        spectra = [Spectrum(eigenvalues=np.sort(rng.normal(size=16))) for _ in range(5)]
        times = np.logspace(-1, 1, 10)
        g1 = sff(spectra, beta=0.0, times=times).g_values
        g2 = sff(list(spectra), beta=0.0, times=times).g_values
        assert np.array_equal(g1, g2)

    def test_plateau_prediction_infinite_temperature(self):
        e = np.linspace(-1, 1, 64)
        assert plateau_prediction(e, 0.0) == pytest.approx(1 / 64)

    def test_plateau_prediction_shift_safe(self):
        rng = np.random.default_rng(4)
        e = rng.normal(size=32)
        p1 = plateau_prediction(e, 1.5)
        p2 = plateau_prediction(e + 300.0, 1.5)
        assert p1 == pytest.approx(p2, rel=1e-10)

    def test_empty_ensemble_rejected(self):
        with pytest.raises(ValueError):
            sff([], beta=0.0, times=np.array([0.0, 1.0]))

    def test_goe_ensemble_plateau(self):
        # the long-time average of g should settle on the plateau prediction
        rng = np.random.default_rng(11)
        dim = 256
        spectra = []
        for _ in range(50):
            A = rng.normal(size=(dim, dim))
            spectra.append(diagonalize((A + A.T) / 2.0))
        times = np.logspace(-2, 4, 300)
        curve = sff(spectra, beta=0.0, times=times)
        avg = trailing_time_average(curve.times, curve.g_values, decades=2.0)
        assert avg == pytest.approx(1.0 / dim, rel=0.05)
        t_dip, t_plateau = dip_and_plateau_times(curve)
        assert t_dip < t_plateau
        fit = ramp_fit(curve, (t_dip, t_plateau))
        assert fit.slope > 0


class TestRampFit:
    def test_linear_recovery(self):
        from krylovlab import SFFCurve

        times = np.linspace(1.0, 100.0, 100)
        synthetic = SFFCurve(
            times=times,
            g_values=0.5 * times + 3.0,
            beta=0.0,
            plateau_prediction=0.5,
            n_samples=1,
        )
        fit = ramp_fit(synthetic, (1.0, 100.0))
        assert fit.slope == pytest.approx(0.5)
        assert fit.intercept == pytest.approx(3.0)

    def test_requires_enough_points(self):
        times = np.linspace(0.0, 1.0, 50)
        curve = sff([Spectrum(eigenvalues=np.array([-1.0, 1.0]))], 0.0, times)
        with pytest.raises(ValueError):
            ramp_fit(curve, (0.0, 0.02))


def test_trailing_time_average_constant():
    times = np.logspace(0, 5, 200)
    assert trailing_time_average(times, np.full(200, 3.0)) == pytest.approx(3.0)
