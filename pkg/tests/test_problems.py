import numpy as np
import pytest

from eigexpand import extraction, linalg, problems


class TestGenerators:
    def test_inverse_diag_full_scale(self):
        p = problems.gen_inverse_diag(10000)
        lam, x = p.reference
        assert lam == 1e-4
        assert x[-1] == 1.0 and np.linalg.norm(x[:-1]) == 0.0
        assert p.a[0, 0] == 1.0
        del p

    def test_inverse_diag_entries(self):
        p = problems.gen_inverse_diag(50)
        for k in (1, 7, 50):
            assert p.a[k - 1, k - 1] == 1.0 / k
        assert np.count_nonzero(p.a - np.diag(np.diag(p.a))) == 0

    def test_inverse_diag_reference_residual(self):
        p = problems.gen_inverse_diag(40)
        lam, x = p.reference
        assert np.linalg.norm(p.a @ x - lam * x) <= 1e-15 * np.linalg.norm(p.a, 1)

    def test_strakos_full_scale_endpoints(self):
        p = problems.gen_strakos(10000, 8.0, -2.0, 0.99)
        assert p.a[0, 0] == 8.0
        assert p.a[-1, -1] == -2.0          # rho^0 term is exact
        assert p.reference[0] == 8.0
        del p

    def test_strakos_midpoint_formula(self):
        p = problems.gen_strakos(100, 8.0, -2.0, 0.9)
        i = 50
        expected = 8.0 + ((i - 1) / (100 - 1)) * (-2.0 - 8.0) * 0.9 ** (100 - i)
        assert expected == pytest.approx(7.974491415640537, rel=1e-15)
        assert p.a[i - 1, i - 1] == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("rho", [0.9, 1.0])
    def test_strakos_strictly_decreasing(self, rho):
        p = problems.gen_strakos(80, 8.0, -2.0, rho)
        d = np.diag(p.a)
        assert np.all(np.diff(d) < 0)

    def test_generator_validation(self):
        with pytest.raises(ValueError):
            problems.gen_inverse_diag(1)
        with pytest.raises(ValueError):
            problems.gen_strakos(10, 8.0, -2.0, 0.0)
        with pytest.raises(ValueError):
            problems.gen_strakos(10, 3.0, 3.0, 0.9)


class TestMatrixMarket:
    def test_general_real_hand_file(self, tmp_path):
        f = tmp_path / "t.mtx"
        f.write_text("%%MatrixMarket matrix coordinate real general\n"
                     "2 2 2\n1 1 2.0\n2 2 3.0\n")
        p = problems.load_matrix_market(str(f))
        np.testing.assert_array_equal(p.a, np.diag([2.0, 3.0]))

    def test_symmetric_mirrors_entries(self, tmp_path):
        f = tmp_path / "s.mtx"
        f.write_text("%%MatrixMarket matrix coordinate real symmetric\n"
                     "% a comment line\n"
                     "3 3 2\n1 1 1.5\n3 1 -0.25\n")
        p = problems.load_matrix_market(str(f))
        assert p.a[2, 0] == p.a[0, 2] == -0.25
        np.testing.assert_array_equal(p.a, p.a.T)

    def test_complex_field(self, tmp_path):
        f = tmp_path / "c.mtx"
        f.write_text("%%MatrixMarket matrix coordinate complex general\n"
                     "2 2 1\n2 1 1.5 -2.0\n")
        p = problems.load_matrix_market(str(f))
        assert p.a[1, 0] == 1.5 - 2.0j

    def test_unsupported_variants(self, tmp_path):
        for header in ("%%MatrixMarket matrix coordinate pattern general",
                       "%%MatrixMarket matrix coordinate real skew-symmetric",
                       "%%MatrixMarket matrix coordinate complex hermitian",
                       "%%MatrixMarket matrix array real general"):
            f = tmp_path / "u.mtx"
            f.write_text(header + "\n2 2 0\n")
            with pytest.raises(problems.UnsupportedFormat):
                problems.load_matrix_market(str(f))

    def test_parse_errors_carry_line_numbers(self, tmp_path):
        cases = [
            ("%%MatrixMarket matrix coordinate real general\n2 2\n", "line 2"),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n", "line 3"),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n", "line 3"),
            ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5.0\n", "announced 2"),
            ("not a header\n", "line 1"),
        ]
        for content, needle in cases:
            f = tmp_path / "bad.mtx"
            f.write_text(content)
            with pytest.raises(problems.ParseError, match=needle):
                problems.load_matrix_market(str(f))

    def test_roundtrip_bit_exact_general(self, tmp_path, rng):
        a = rng.standard_normal((7, 5))
        a[rng.random((7, 5)) < 0.3] = 0.0
        path = str(tmp_path / "rt.mtx")
        problems.save_matrix_market(path, a)
        np.testing.assert_array_equal(problems.load_matrix_market(path).a, a)

    def test_roundtrip_bit_exact_symmetric(self, tmp_path, rng):
        g = rng.standard_normal((6, 6))
        a = g + g.T
        path = str(tmp_path / "sym.mtx")
        problems.save_matrix_market(path, a)
        with open(path) as f:
            assert "symmetric" in f.readline()
        np.testing.assert_array_equal(problems.load_matrix_market(path).a, a)

    def test_roundtrip_bit_exact_complex(self, tmp_path, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        path = str(tmp_path / "cx.mtx")
        problems.save_matrix_market(path, a)
        np.testing.assert_array_equal(problems.load_matrix_market(path).a, a)


class TestReferenceEigenpair:
    def test_inverse_diag_smallest(self):
        p = problems.gen_inverse_diag(50)
        p = problems.reference_eigenpair(
            p, extraction.TargetSpec(extraction.SMALLEST_MAGNITUDE))
        lam, x = p.reference
        assert lam == 1.0 / 50
        assert x[49] == 1.0

    def test_strakos_largest(self):
        p = problems.gen_strakos(100, 8.0, -2.0, 0.9)
        p = problems.reference_eigenpair(
            p, extraction.TargetSpec(extraction.LARGEST_REAL))
        lam, x = p.reference
        assert lam == 8.0
        assert x[0] == 1.0

    def test_unsymmetric_residual_contract(self, rng):
        a = rng.standard_normal((60, 60)) / np.sqrt(60)
        p = problems.reference_eigenpair(
            problems.Problem(a=a, label="rand"),
            extraction.TargetSpec(extraction.LARGEST_REAL))
        lam, x = p.reference
        assert np.linalg.norm(a @ x - lam * x) <= 1e-10 * np.linalg.norm(a, 1)

    def test_desk_scale_cap_enforced(self, rng):
        a = rng.standard_normal((12, 12))
        with pytest.raises(ValueError):
            problems.reference_eigenpair(
                problems.Problem(a=a, label="r"),
                extraction.TargetSpec(extraction.LARGEST_REAL), max_order=10)


class TestInitialBasis:
    def test_deterministic_and_orthonormal(self):
        v1 = problems.initial_basis(40, 6, seed=123)
        v2 = problems.initial_basis(40, 6, seed=123)
        np.testing.assert_array_equal(v1, v2)
        assert linalg.orthonormality(v1) <= 1e-12
        assert not np.array_equal(v1, problems.initial_basis(40, 6, seed=124))
