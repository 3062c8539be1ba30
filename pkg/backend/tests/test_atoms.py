"""Tests for the atom family, analysis/synthesis and the roundtrip in atoms.py"""
import numpy as np
import pytest

from atoms import (
    analysis_constant,
    analyze,
    build_atoms,
    kernel_exponent,
    mother_atom,
    roundtrip,
    roundtrip_errors,
    synthesis_bound_check,
    synthesize,
)
from discretize import CoefficientSequence, coefficients
from errors import ExponentRelationError, GridMismatchError, IndexMismatchError, PreconditionError
from kernels import shannon_kernel
from pou import make_pou_1d
from sampling import Grid1D, embed, lp_norm
from testfunctions import sparse_coefficients
from weights import default_sample_points, validate_weight_pair, weight_preset


@pytest.fixture
def atoms(shannon, hat_pou):
    return build_atoms(shannon, hat_pou)


class TestMotherAtom:
    """Test suite for mother_atom() and build_atoms()"""

    def test_unit_mean(self, atoms):
        mother = atoms.mother

        assert mother.grid.halfwidth == pytest.approx(2.0 * atoms.window.halfwidth)
        assert np.sum(mother.values).real * mother.grid.spacing == pytest.approx(1.0, abs=1e-2)
        assert not np.any(mother.values.imag)
        print("✓ Test passed: a_0^(0) = 1 and a_0 is real")

    def test_undersampled_lattice(self, shannon, window):
        with pytest.raises(PreconditionError):
            mother_atom(shannon, window, tau=1.0)
        print("✓ Test passed: tau = 1/omega has no left inverse")

    def test_atom_is_translated_mother(self, atoms):
        center = int(np.flatnonzero(atoms.pou.indices[:, 0] == 0)[0])

        expected = embed(atoms.mother, atoms.window)
        np.testing.assert_allclose(atoms.atom(center).values, expected.values, atol=1e-10)
        print("✓ Test passed: a_k = a_0(. - g_k)")


class TestRoundtrip:
    """Test suite for analysis, synthesis and S(A(F)) = F"""

    def test_kernel_roundtrip(self, atoms, shannon, window):
        K = shannon_kernel(shannon, window)
        K = K * (1.0 / lp_norm(K, 2))

        errors = roundtrip_errors(K, atoms, (1.5, 2.0, 3.0, 4.0))
        assert set(errors) == {"1.5", "2", "3", "4"}
        assert max(errors.values()) < 1e-2
        print(f"✓ Test passed: K roundtrip errors {errors}")

    def test_random_family(self, atoms, family):
        report = roundtrip(family, atoms, (1.5, 2.0, 3.0, 4.0), seed=7, threads=2)

        assert report.passed
        assert report.trials == len(family)
        assert max(report.per_p_errors.values()) < 1e-2
        print(f"✓ Test passed: worst errors {report.per_p_errors}")

    def test_threads_do_not_change_the_result(self, atoms, family):
        serial = roundtrip(family, atoms, (2.0,), seed=7)
        parallel = roundtrip(family, atoms, (2.0,), seed=7, threads=3)

        assert serial.per_p_errors == parallel.per_p_errors
        print("✓ Test passed: ordered reduction")

    def test_analysis_is_coefficient_map(self, atoms, family):
        c = analyze(family[0], atoms.pou, method="spectral")

        np.testing.assert_array_equal(c.indices, atoms.pou.indices)
        np.testing.assert_allclose(c.values, coefficients(family[0], atoms.pou, method="spectral").values)
        print("✓ Test passed: A(F) = {<F, phi_k>}")

    def test_analysis_and_synthesis_are_linear(self, atoms, family):
        F, G = family[0], family[1]
        a, b = 2.0, -0.5j

        combined = analyze(a * F + b * G, atoms.pou)
        expected = a * analyze(F, atoms.pou) + b * analyze(G, atoms.pou)
        np.testing.assert_allclose(combined.values, expected.values, atol=1e-12)

        c, d = analyze(F, atoms.pou), analyze(G, atoms.pou)
        np.testing.assert_allclose(synthesize(a * c + b * d, atoms).values,
                                   (a * synthesize(c, atoms) + b * synthesize(d, atoms)).values, atol=1e-12)
        print("✓ Test passed: A and S are linear")

    def test_stable_under_refinement(self, shannon):
        errors = []
        for spacing in (1 / 32, 1 / 64):
            window = Grid1D.symmetric(32.0, spacing)
            atoms = build_atoms(shannon, make_pou_1d(0.5, window))
            K = shannon_kernel(shannon, window)
            errors.append(roundtrip_errors(K * (1.0 / lp_norm(K, 2)), atoms, (2.0,))["2"])

        coarse, fine = errors
        assert coarse < 1e-2 and fine < 1e-2
        assert fine <= coarse + 1e-3
        print(f"✓ Test passed: K roundtrip error {coarse:.2e} at h=1/32, {fine:.2e} at h=1/64")

    def test_index_mismatch(self, atoms):
        c = CoefficientSequence([0, 1], [1.0, 1.0], atoms.pou.tau)

        with pytest.raises(IndexMismatchError):
            synthesize(c, atoms)
        print("✓ Test passed: coefficients must cover the lattice")

    def test_grid_mismatch(self, atoms, shannon):
        K = shannon_kernel(shannon, Grid1D.symmetric(16.0, 1 / 64))

        with pytest.raises(GridMismatchError):
            roundtrip_errors(K, atoms, (2.0,))
        print("✓ Test passed: F must live on the atom window")


class TestBounds:
    """Test suite for the synthesis majorant and the analysis constant"""

    def test_kernel_exponent(self):
        assert kernel_exponent(2.0, 2.0) == pytest.approx(1.0)
        assert kernel_exponent(4.0, 2.0) == pytest.approx(4.0 / 3.0)
        with pytest.raises(ExponentRelationError):
            kernel_exponent(1.5, 3.0)
        print("✓ Test passed: 1/p + 1 = 1/q + 1/q'")

    def test_synthesis_bound(self, atoms):
        const = weight_preset("const")
        pair = validate_weight_pair(const, const, default_sample_points())
        c = sparse_coefficients(atoms.pou, 10, seed=7)

        report = synthesis_bound_check(c, atoms, 2.0, 2.0, pair)
        assert report.passed
        assert 0 < report.ratio <= 1.05
        assert report.rhs <= report.details["analytic_bound"] * 1.05
        print(f"✓ Test passed: ||S(c)|| / majorant = {report.ratio:.4f}")

    def test_analysis_constant(self, family, hat_pou):
        report = analysis_constant(family, hat_pou)

        assert report.passed
        assert 0 < report.ratio < np.inf
        print(f"✓ Test passed: ||A(F)||_2 <= {report.ratio:.4f} ||F||_2")
