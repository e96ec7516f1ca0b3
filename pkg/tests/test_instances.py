"""Matrix file parsing, serialization, and seeded instance generation.

Ground truth: hand-written files and eigenvalue identities on the generated
spectra (log-uniform between 1 and kappa, endpoints pinned).
"""
import numpy as np
import pytest

from mesp_bounds import (
    AsymmetricMatrixError,
    MatrixFormatError,
    generate_instance,
    load_matrix,
    save_matrix,
)


class TestLoadMatrix:
    def test_basic_file(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("# a header comment\n2\n2.0 1.0\n1.0 2.0\n")
        model = load_matrix(p)
        np.testing.assert_allclose(model.entries, [[2.0, 1.0], [1.0, 2.0]], atol=0)
        assert model.lambda_min == pytest.approx(1.0, abs=1e-12)

    def test_inline_comments_and_blank_lines(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("2  # dimension\n\n3.0 0.0  # row one\n0.0 1.0\n")
        model = load_matrix(p)
        np.testing.assert_allclose(model.entries, np.diag([3.0, 1.0]), atol=0)

    def test_missing_row_reports_location(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("3\n1.0 0.0 0.0\n0.0 1.0 0.0\n")
        with pytest.raises(MatrixFormatError, match="m.txt"):
            load_matrix(p)

    def test_wrong_entry_count(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("2\n1.0 0.0 5.0\n0.0 1.0\n")
        with pytest.raises(MatrixFormatError, match="2"):
            load_matrix(p)

    def test_non_numeric_entry(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("2\n1.0 oops\n0.0 1.0\n")
        with pytest.raises(MatrixFormatError):
            load_matrix(p)

    def test_non_integer_dimension(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("2.5\n")
        with pytest.raises(MatrixFormatError):
            load_matrix(p)

    def test_asymmetric_beyond_tolerance_rejected(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("2\n2.0 0.1\n0.0 2.0\n")
        with pytest.raises(AsymmetricMatrixError):
            load_matrix(p)

    def test_round_trip_is_bit_exact(self, tmp_path):
        model = generate_instance(7, 37.5, seed=77)
        p = tmp_path / "round.txt"
        save_matrix(p, model)
        again = load_matrix(p)
        assert np.array_equal(again.entries, model.entries)


class TestGenerateInstance:
    def test_kappa_one_is_identity(self):
        model = generate_instance(5, 1.0, seed=0)
        np.testing.assert_allclose(model.entries, np.eye(5), atol=1e-12)

    def test_condition_number_matches_kappa(self):
        for kappa in (3.0, 48.42, 5e4):
            model = generate_instance(12, kappa, seed=3)
            assert model.condition_number == pytest.approx(kappa, rel=1e-8)

    def test_spectrum_pinned_between_one_and_kappa(self):
        model = generate_instance(10, 25.0, seed=4)
        eigs = model.decomposition.eigenvalues
        assert eigs[0] == pytest.approx(25.0, rel=1e-10)
        assert eigs[-1] == pytest.approx(1.0, rel=1e-10)
        assert np.all(eigs >= 1.0 - 1e-8)
        assert np.all(eigs <= 25.0 + 1e-8)

    def test_same_seed_reproduces(self):
        a = generate_instance(8, 12.0, seed=9)
        b = generate_instance(8, 12.0, seed=9)
        assert np.array_equal(a.entries, b.entries)

    def test_different_seeds_differ(self):
        a = generate_instance(8, 12.0, seed=9)
        b = generate_instance(8, 12.0, seed=10)
        assert not np.array_equal(a.entries, b.entries)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            generate_instance(1, 5.0, seed=0)
        with pytest.raises(ValueError):
            generate_instance(4, 0.5, seed=0)
