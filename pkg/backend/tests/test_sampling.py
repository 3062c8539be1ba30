"""Tests for grids, sampled functions, norms and serialization in sampling.py"""
import numpy as np
import pytest

from errors import AlignmentError, GridMismatchError, NumericalOverflowError, PreconditionError
from sampling import (
    Grid1D,
    Grid2D,
    SampledFunction1D,
    SampledFunction2D,
    SeminormFamily,
    apply_padded_multiplier,
    embed,
    fourier_transform,
    from_bytes,
    from_csv,
    inner_product,
    lp_norm,
    seminorm_vector,
    to_bytes,
    to_csv,
    translate,
)
from weights import default_sample_points, validate_weight_pair, weight_preset


class TestGrid:
    """Test suite for Grid1D and Grid2D"""

    def test_symmetric_grid(self):
        grid = Grid1D.symmetric(1.0, 0.25)

        assert grid.count == 9
        assert grid.origin == pytest.approx(-1.0)
        assert grid.halfwidth == pytest.approx(1.0)
        np.testing.assert_allclose(grid.points, np.linspace(-1.0, 1.0, 9))
        print("✓ Test passed: symmetric grid contains 0 and both ends")

    def test_steps_and_index(self):
        grid = Grid1D.symmetric(2.0, 0.125)

        assert grid.steps(0.5) == 4
        assert grid.index_of(0.0) == 16
        with pytest.raises(AlignmentError):
            grid.steps(0.3)
        print("✓ Test passed: alignment enforced")

    def test_invalid_grids(self):
        with pytest.raises(PreconditionError):
            Grid1D(0.0, 0.0, 10)
        with pytest.raises(PreconditionError):
            Grid1D(0.0, 0.1, 1)
        print("✓ Test passed: degenerate grids rejected")

    def test_grid_2d(self):
        grid = Grid2D.symmetric(1.0, 2.0, 0.5)

        assert grid.shape == (5, 9)
        assert grid.cell == pytest.approx(0.25)
        X, W = grid.points
        assert X[0, 0] == pytest.approx(-1.0) and W[0, 0] == pytest.approx(-2.0)
        print("✓ Test passed: 2D grid is indexed [x, omega]")


class TestSampledFunction:
    """Test suite for SampledFunction1D/2D"""

    def test_shape_mismatch(self):
        with pytest.raises(GridMismatchError):
            SampledFunction1D(Grid1D.symmetric(1.0, 0.5), np.ones(3))
        print("✓ Test passed: wrong value shape rejected")

    def test_non_finite_values(self):
        with pytest.raises(NumericalOverflowError):
            SampledFunction1D(Grid1D.symmetric(1.0, 0.5), [0.0, np.inf, 0.0, 0.0, 0.0])
        print("✓ Test passed: non-finite samples rejected")

    def test_values_are_read_only(self):
        F = SampledFunction1D.zeros(Grid1D.symmetric(1.0, 0.5))

        with pytest.raises(ValueError):
            F.values[0] = 1.0
        print("✓ Test passed: samples are immutable")

    def test_arithmetic_needs_same_grid(self):
        F = SampledFunction1D.zeros(Grid1D.symmetric(1.0, 0.5))
        G = SampledFunction1D.zeros(Grid1D.symmetric(1.0, 0.25))

        with pytest.raises(GridMismatchError):
            F + G
        assert np.all((2.0 * (F + F)).values == 0)
        print("✓ Test passed: arithmetic requires matching grids")


class TestNorms:
    """Test suite for lp_norm() and seminorms"""

    def test_constant_function(self):
        F = SampledFunction1D(Grid1D(0.0, 0.5, 4), np.ones(4))

        assert lp_norm(F, 1) == pytest.approx(2.0)
        assert lp_norm(F, 2) == pytest.approx(np.sqrt(2.0))
        assert lp_norm(F, np.inf) == pytest.approx(1.0)
        print("✓ Test passed: rectangle-rule norms")

    def test_weighted_norm(self):
        grid = Grid1D(0.0, 1.0, 3)
        F = SampledFunction1D(grid, np.ones(3))

        def weight(x):
            return 1.0 + x

        assert lp_norm(F, 1, weight) == pytest.approx(1.0 + 2.0 + 3.0)
        print("✓ Test passed: weight multiplies the samples")

    def test_large_values_do_not_overflow(self):
        F = SampledFunction1D(Grid1D(0.0, 1.0, 3), np.full(3, 1e200))

        assert lp_norm(F, 4) == pytest.approx(1e200 * 3 ** 0.25)
        print("✓ Test passed: norms are scaled before powering")

    def test_exponent_below_one(self):
        F = SampledFunction1D(Grid1D(0.0, 1.0, 3), np.ones(3))

        with pytest.raises(PreconditionError):
            lp_norm(F, 0.5)
        print("✓ Test passed: p < 1 rejected")

    def test_seminorm_family(self):
        F = SampledFunction1D(Grid1D(0.0, 0.5, 4), np.ones(4))
        family = SeminormFamily((2, 4))

        np.testing.assert_allclose(seminorm_vector(F, family), [2.0 ** 0.5, 2.0 ** 0.25])
        with pytest.raises(PreconditionError):
            SeminormFamily((1.0, 2.0))
        print("✓ Test passed: seminorm family over p > 1")

    def test_inner_product(self):
        grid = Grid1D(0.0, 0.5, 2)
        F = SampledFunction1D(grid, [1.0, 1j])
        G = SampledFunction1D(grid, [2.0, 1j])

        assert inner_product(F, G) == pytest.approx(0.5 * (2.0 + 1.0))
        print("✓ Test passed: <F, G> conjugates G")


class TestTranslationAndEmbedding:
    """Test suite for translate() and embed()"""

    def test_lattice_shift(self):
        F = SampledFunction1D(Grid1D(0.0, 0.25, 5), [1.0, 2.0, 3.0, 4.0, 5.0])

        np.testing.assert_allclose(translate(F, 0.25).values, [0.0, 1.0, 2.0, 3.0, 4.0])
        np.testing.assert_allclose(translate(F, -0.5).values, [3.0, 4.0, 5.0, 0.0, 0.0])
        print("✓ Test passed: (lambda(s)F)(x) = F(x - s) with zero fill")

    def test_misaligned_shift(self):
        F = SampledFunction1D.zeros(Grid1D(0.0, 0.25, 5))

        with pytest.raises(AlignmentError):
            translate(F, 0.1)
        print("✓ Test passed: off-lattice shift rejected")

    def test_fourier_shift_of_periodic_signal(self):
        grid = Grid1D(0.0, 1 / 16, 16)
        F = SampledFunction1D(grid, np.exp(2j * np.pi * grid.points))

        shifted = translate(F, 0.1, fourier=True)
        np.testing.assert_allclose(shifted.values, np.exp(2j * np.pi * (grid.points - 0.1)), atol=1e-12)
        print("✓ Test passed: phase-factor translation")

    def test_2d_shift(self):
        grid = Grid2D.symmetric(1.0, 1.0, 0.5)
        values = np.zeros(grid.shape)
        values[2, 2] = 1.0
        F = SampledFunction2D(grid, values)

        moved = translate(F, (0.5, -0.5))
        assert moved.values[3, 1] == 1.0
        print("✓ Test passed: 2D translation moves both axes")

    @pytest.mark.parametrize("preset, s", [("poly:1", 2.0), ("log", -3.5), ("exp:0.5", 1.25)])
    def test_translation_bound(self, preset, s):
        grid = Grid1D.symmetric(8.0, 1 / 16)
        F = SampledFunction1D(grid, np.exp(-np.pi * grid.points ** 2))
        weight = weight_preset(preset)
        pair = validate_weight_pair(weight, weight, default_sample_points())

        for p in (1.0, 2.0, 4.0):
            lhs = lp_norm(translate(F, s), p, pair.m)
            rhs = pair.moderateness_constant * float(pair.w(np.array(s))) * lp_norm(F, p, pair.m)
            assert lhs <= rhs * (1 + 1e-12)
        print(f"✓ Test passed: ||lambda(s)F||_(p,m) <= C w(s) ||F||_(p,m) for {preset}, s={s}")

    def test_embed_pad_and_crop(self):
        F = SampledFunction1D(Grid1D.symmetric(0.5, 0.25), [1.0, 2.0, 3.0, 4.0, 5.0])

        padded = embed(F, Grid1D.symmetric(1.0, 0.25))
        np.testing.assert_allclose(padded.values, [0, 0, 1, 2, 3, 4, 5, 0, 0])
        cropped = embed(padded, Grid1D.symmetric(0.25, 0.25))
        np.testing.assert_allclose(cropped.values, [2, 3, 4])
        print("✓ Test passed: embed pads and crops")

    def test_embed_needs_equal_spacing(self):
        F = SampledFunction1D.zeros(Grid1D.symmetric(0.5, 0.25))

        with pytest.raises(GridMismatchError):
            embed(F, Grid1D.symmetric(0.5, 0.125))
        print("✓ Test passed: spacing mismatch rejected")


class TestFourier:
    """Test suite for the transform helpers"""

    def test_gaussian_transform(self):
        grid = Grid1D.symmetric(8.0, 1 / 16)
        F = SampledFunction1D(grid, np.exp(-np.pi * grid.points ** 2))

        xi, values = fourier_transform(F)
        near = np.abs(xi) <= 2.0
        np.testing.assert_allclose(values[near], np.exp(-np.pi * xi[near] ** 2), atol=1e-10)
        print("✓ Test passed: e^{-pi x^2} is its own transform")

    def test_identity_multiplier(self):
        grid = Grid1D.symmetric(4.0, 1 / 8)
        F = SampledFunction1D(grid, np.exp(-grid.points ** 2))

        same = apply_padded_multiplier(F, np.ones_like)
        np.testing.assert_allclose(same.values, F.values, atol=1e-12)
        print("✓ Test passed: unit multiplier is the identity")


class TestSerialization:
    """Test suite for CSV and binary formats"""

    def test_csv_1d(self):
        F = SampledFunction1D(Grid1D(-1.0, 0.5, 5), [1.0, 2j, -3.0, 0.5 + 0.5j, 0.0])

        restored = from_csv(to_csv(F))
        assert restored.grid.same_as(F.grid)
        np.testing.assert_array_equal(restored.values, F.values)
        assert to_csv(F).splitlines()[0] == "x,re,im"
        print("✓ Test passed: CSV keeps grid and values")

    def test_binary_2d(self):
        grid = Grid2D.symmetric(0.5, 1.0, 0.25)
        values = np.arange(np.prod(grid.shape)).reshape(grid.shape) * (1 - 1j)
        F = SampledFunction2D(grid, values)

        payload = to_bytes(F)
        assert payload[:4] == b"CRB1"
        restored = from_bytes(payload)
        assert isinstance(restored, SampledFunction2D)
        np.testing.assert_array_equal(restored.values, F.values)
        print("✓ Test passed: binary layout keeps the 2D grid")

    def test_bad_magic(self):
        with pytest.raises(PreconditionError):
            from_bytes(b"XXXX" + bytes(32))
        print("✓ Test passed: foreign payload rejected")
