"""Tests for voice transforms and reproducing-subspace checks in voice.py"""
import numpy as np
import pytest

from errors import BandLimitError, PreconditionError, ResolutionError
from kernels import modulation_kernel, shannon_kernel
from pou import make_pou_2d
from sampling import Grid1D, Grid2D, SampledFunction2D
from testfunctions import box, gaussian, gaussian_2d
from voice import (
    box_window,
    covariance_defect,
    full_period_grid,
    isometry_defect,
    kernel_fourier_discrepancy,
    lem1_fourier_identity_check,
    modulation_coefficients,
    omega_core,
    relative_on_core,
    reproducing_membership,
    truncation_floor,
    voice_modulation,
    voice_shannon,
    window_norm,
)


class TestShannonVoice:
    """Test suite for voice_shannon()"""

    def test_kernel_passes_through(self, shannon):
        K = shannon_kernel(shannon, Grid1D.symmetric(256.0, 1 / 16))

        assert voice_shannon(K, shannon) is K
        print("✓ Test passed: band-limited input is returned unchanged")

    def test_narrow_gaussian(self, shannon):
        with pytest.raises(BandLimitError):
            voice_shannon(gaussian(Grid1D.symmetric(8.0, 1 / 64), width=0.1), shannon)
        print("✓ Test passed: energy beyond the band rejected")


class TestModulationVoice:
    """Test suite for the box-window transform U_g"""

    def test_box_window_samples(self):
        window = box_window(Grid1D.symmetric(1.0, 0.25))

        np.testing.assert_allclose(window.values, [0, 0, 0.5, 1, 1, 1, 0.5, 0, 0])
        print("✓ Test passed: g is 1/2 on its edge samples")

    def test_window_of_window_is_kernel(self, mod_grid):
        voiced = voice_modulation(box(Grid1D.symmetric(3.0, 1 / 32)), mod_grid)
        K = modulation_kernel(mod_grid)

        error = relative_on_core(voiced.values, K.values, omega_core(mod_grid))
        assert error < 2e-2
        print(f"✓ Test passed: U_g g = K, relative error {error:.2e}")

    def test_frequency_spacing_must_divide(self):
        f = box(Grid1D.symmetric(3.0, 1 / 32))
        grid = Grid2D(Grid1D.symmetric(2.0, 1 / 32), Grid1D(-3.0, 0.3, 21))

        with pytest.raises(ResolutionError):
            voice_modulation(f, grid)
        print("✓ Test passed: 1/(h_f h_w) must be an integer")

    def test_frequency_range_beyond_nyquist(self):
        f = box(Grid1D.symmetric(3.0, 1 / 32))

        with pytest.raises(ResolutionError):
            voice_modulation(f, Grid2D.symmetric(2.0, 20.0, 1 / 32))
        print("✓ Test passed: |w| <= 1/(2 h_f) enforced")

    def test_window_norm(self):
        assert window_norm(Grid1D.symmetric(1.0, 1 / 32)) == pytest.approx(np.sqrt(31.5 / 32))
        print("✓ Test passed: ||g|| under the edge-weighted quadrature")

    def test_full_period_grid(self):
        grid = full_period_grid(Grid1D.symmetric(4.0, 1 / 128), 3.0, 1 / 8)

        assert grid.w_axis.count == 256
        assert grid.w_axis.spacing == pytest.approx(0.5)
        assert grid.w_axis.origin == pytest.approx(-64.0)
        print("✓ Test passed: one FFT period of frequencies")

    def test_isometry(self):
        f = gaussian(Grid1D.symmetric(4.0, 1 / 128), normalize=True)

        defect = isometry_defect(f, full_period_grid(f.grid, 3.0, 1 / 8))
        assert defect < 1e-3
        print(f"✓ Test passed: ||U_g f|| = ||f|| ||g||, defect {defect:.2e}")

    def test_translation_covariance(self):
        f = gaussian(Grid1D.symmetric(4.0, 1 / 128), normalize=True)

        defect = covariance_defect(f, full_period_grid(f.grid, 3.0, 1 / 8), a=0.5)
        assert defect < 1e-3
        print(f"✓ Test passed: U_g(T_a f) = e^(-2 pi i a w) U_g f(x - a, w), defect {defect:.2e}")

    def test_modulation_coefficients(self, mod_grid):
        f = gaussian(Grid1D.symmetric(3.0, 1 / 32))

        c = modulation_coefficients(f, make_pou_2d(mod_grid, radius=1))
        assert len(c) == 9
        assert np.all(np.isfinite(c.values))
        print("✓ Test passed: <U_g f, phi_(k,l)> over the 3x3 lattice")


class TestReproducingSubspace:
    """Test suite for membership and the Fourier factorization"""

    def test_kernel_is_member(self, mod_grid):
        report = reproducing_membership(modulation_kernel(mod_grid), threads=2)

        assert report.member
        assert report.residual == pytest.approx(report.floor, abs=1e-9)
        assert report.residual < 2e-2
        print(f"✓ Test passed: K (.) K = K, residual {report.residual:.2e}")

    def test_voice_of_box_is_member(self, mod_grid):
        voiced = voice_modulation(box(Grid1D.symmetric(3.0, 1 / 32)), mod_grid)

        report = reproducing_membership(voiced)
        assert report.member
        assert report.residual - report.floor < report.threshold
        print(f"✓ Test passed: U_g(box) residual {report.residual:.2e}, floor {report.floor:.2e}")

    def test_gaussian_is_not_member(self, mod_grid):
        report = reproducing_membership(gaussian_2d(mod_grid))

        assert not report.member
        assert report.residual - report.floor > report.threshold
        print(f"✓ Test passed: Gaussian witness residual {report.residual:.3f}")

    def test_floor_shrinks_with_the_omega_window(self):
        narrow = truncation_floor(Grid2D.symmetric(2.0, 8.0, 1 / 32))
        wide = truncation_floor(Grid2D.symmetric(2.0, 16.0, 1 / 32))

        assert 0 < wide < narrow
        print(f"✓ Test passed: truncation floor {narrow:.2e} at W=8, {wide:.2e} at W=16")

    def test_zero_is_member(self, mod_grid):
        report = reproducing_membership(SampledFunction2D(mod_grid, np.zeros(mod_grid.shape)))

        assert report.member
        assert report.residual == 0.0
        print("✓ Test passed: 0 is in the subspace")

    def test_kernel_factorizes(self, mod_grid):
        misfit, ratio_error = lem1_fourier_identity_check(modulation_kernel(mod_grid))

        assert misfit < 2e-2
        assert ratio_error < 5e-2
        print(f"✓ Test passed: misfit {misfit:.2e}, ratio error {ratio_error:.2e}")

    def test_factorization_needs_membership(self, mod_grid):
        with pytest.raises(PreconditionError):
            lem1_fourier_identity_check(gaussian_2d(mod_grid))
        print("✓ Test passed: non-members rejected")

    def test_kernel_fourier_oracle(self):
        error = kernel_fourier_discrepancy()

        assert error < 0.03
        print(f"✓ Test passed: FFT(K) matches K^, max error {error:.2e}")
