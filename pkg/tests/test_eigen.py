"""
Tests for the Jacobi eigensolver, the similarity route for D^-1 K, nullity,
Rayleigh quotients and the closed-form oracle.
"""
import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config  # noqa: E402
from eigen import (  # noqa: E402
    Spectrum, closed_form_eigenvalues, count_zero_eigenvalues, general_eig_real_spectrum,
    gershgorin_bound, hermitian_eig, nullity, operator_spectrum, rayleigh, spectral_radius,
)
from hypergraph import build, degree_profile, gen_single_edge_all_ones  # noqa: E402
from operators import OPERATOR_KINDS, operator  # noqa: E402
from utils import (  # noqa: E402
    BadParameter, LengthMismatch, NoConvergence, NonPositiveDiagonal, NotHermitian, NotSquare,
    ZeroDegreeVertex, ZeroVector,
)


def random_hermitian(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (X + X.conj().T) / 2


entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian_matrices(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    re = draw(arrays(float, (n, n), elements=entries))
    im = draw(arrays(float, (n, n), elements=entries))
    X = re + 1j * im
    return (X + X.conj().T) / 2


@pytest.mark.unit
class TestHermitianEig:
    def test_adjacency_of_g3(self, g3):
        values = hermitian_eig(operator(g3, 'A')).values
        np.testing.assert_allclose(values, [-2, 1, 1], atol=1e-12)

    def test_kirchhoff_of_g1(self, g1):
        np.testing.assert_allclose(hermitian_eig(operator(g1, 'K')).values, [0, 2], atol=1e-12)

    def test_kirchhoff_of_g3(self, g3):
        np.testing.assert_allclose(hermitian_eig(operator(g3, 'K')).values, [0, 0, 3], atol=1e-12)

    def test_zero_matrix(self):
        spectrum = hermitian_eig(np.zeros((4, 4)), want_vectors=True)
        np.testing.assert_array_equal(spectrum.values, np.zeros(4))
        np.testing.assert_allclose(spectrum.vectors, np.eye(4))

    def test_empty_matrix(self):
        spectrum = hermitian_eig(np.zeros((0, 0)), want_vectors=True)
        assert len(spectrum) == 0
        assert spectrum.vectors.shape == (0, 0)

    def test_values_ascending_and_read_only(self, g3):
        spectrum = hermitian_eig(operator(g3, 'A'), want_vectors=True)
        assert np.all(np.diff(spectrum.values) >= 0)
        with pytest.raises(ValueError):
            spectrum.values[0] = 0.0

    def test_vectors_are_orthonormal_and_accurate(self):
        M = random_hermitian(np.random.default_rng(5), 7)
        spectrum = hermitian_eig(M, want_vectors=True)
        V = spectrum.vectors
        np.testing.assert_allclose(V.conj().T @ V, np.eye(7), atol=1e-12)
        assert spectrum.max_residual <= 1e-10
        np.testing.assert_allclose(M @ V, V * spectrum.values[None, :], atol=1e-10)

    def test_largest_component_is_real_non_negative(self):
        M = random_hermitian(np.random.default_rng(6), 5)
        V = hermitian_eig(M, want_vectors=True).vectors
        for col in range(V.shape[1]):
            idx = int(np.argmax(np.abs(V[:, col])))
            assert V[idx, col].imag == 0.0
            assert V[idx, col].real >= 0.0

    def test_non_square(self):
        with pytest.raises(NotSquare):
            hermitian_eig(np.zeros((2, 3)))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_sweep_limit(self, monkeypatch):
        monkeypatch.setattr(config, 'JACOBI_MAX_SWEEPS', 0)
        with pytest.raises(NoConvergence):
            hermitian_eig(np.array([[1, 1j], [-1j, 1]]))

    def test_spectrum_properties(self):
        spectrum = Spectrum([-1.0, 0.5, 3.0])
        assert spectrum.lambda_min == -1.0
        assert spectrum.lambda_max == 3.0
        assert spectral_radius(spectrum) == 3.0
        assert spectral_radius(Spectrum([])) == 0.0


@pytest.mark.unit
class TestGeneralEig:
    @pytest.mark.parametrize('name,expected', [('g1', [0, 2]), ('g2', [1, 1]), ('g3', [0, 0, 3])])
    def test_normalized_laplacian(self, name, expected, request):
        G = request.getfixturevalue(name)
        degrees = degree_profile(G).degrees
        spectrum = general_eig_real_spectrum(operator(G, 'L'), degrees)
        np.testing.assert_allclose(spectrum.values, expected, atol=1e-12)

    def test_vectors_solve_the_original_problem(self):
        G = build(3, [[(0, 1.0, 0.0), (1, 0.0, 1.0)], [(0, -1.0, 0.0), (1, 1.0, 0.0), (2, 0.0, -1.0)]])
        L = operator(G, 'L').entries
        spectrum = general_eig_real_spectrum(L, degree_profile(G).degrees)
        for i, value in enumerate(spectrum.values):
            x = spectrum.vectors[:, i]
            assert abs(np.linalg.norm(x) - 1.0) < 1e-12
            np.testing.assert_allclose(L @ x, value * x, atol=1e-10)
        assert spectrum.max_residual <= 1e-10

    def test_without_vectors(self, g3):
        spectrum = general_eig_real_spectrum(operator(g3, 'L'), [1, 1, 1], want_vectors=False)
        assert spectrum.vectors is None

    def test_non_positive_diagonal(self, g3):
        with pytest.raises(NonPositiveDiagonal):
            general_eig_real_spectrum(operator(g3, 'K'), [1, 0, 1])

    def test_length_mismatch(self, g3):
        with pytest.raises(LengthMismatch):
            general_eig_real_spectrum(operator(g3, 'K'), [1, 1])


@pytest.mark.unit
class TestNullityAndBounds:
    def test_nullity(self, g3):
        assert nullity(operator(g3, 'K')) == 2
        assert nullity(operator(g3, 'Kstar')) == 0
        assert nullity(np.zeros((3, 3))) == 3

    def test_zero_count_is_two_sided(self):
        assert count_zero_eigenvalues([-1e-12, 1e-12, 1.0]) == 2
        assert count_zero_eigenvalues([]) == 0

    def test_custom_policy(self):
        policy = config.NullityTolerance(absolute_floor=0.1, relative_factor=0.0)
        assert count_zero_eigenvalues([0.05, 0.2], policy) == 1

    @pytest.mark.parametrize('name,expected', [('g1', 1.0), ('g2', 0.0), ('g3', 2.0)])
    def test_spectral_radius_of_adjacency(self, name, expected, request):
        G = request.getfixturevalue(name)
        assert spectral_radius(operator_spectrum(G, 'A')) == pytest.approx(expected, abs=1e-12)

    def test_gershgorin(self, g3):
        assert gershgorin_bound(operator(g3, 'A')) == 2.0
        assert gershgorin_bound(operator(g3, 'K')) == 3.0
        assert gershgorin_bound(np.diag([1.0, -5.0])) == 5.0
        assert gershgorin_bound(np.zeros((0, 0))) == 0.0


@pytest.mark.unit
class TestSingleEdgeAllOnes:
    """One all-ones n-edge: A = I - J and K = J, the sharp case of rho(A) <= Delta(nabla - 1)"""

    @pytest.mark.parametrize('n', [3, 5, 8])
    def test_adjacency_spectrum(self, n):
        values = operator_spectrum(gen_single_edge_all_ones(n), 'A').values
        np.testing.assert_allclose(values, [1.0 - n] + [1.0] * (n - 1), atol=1e-9)

    @pytest.mark.parametrize('n', [3, 5, 8])
    def test_kirchhoff_spectrum(self, n):
        values = operator_spectrum(gen_single_edge_all_ones(n), 'K').values
        np.testing.assert_allclose(values, [0.0] * (n - 1) + [float(n)], atol=1e-9)
        assert nullity(operator(gen_single_edge_all_ones(n), 'K')) == n - 1


@pytest.mark.unit
class TestRayleigh:
    def test_kirchhoff_at_all_ones(self, g3):
        assert rayleigh('K', g3, np.ones(3) / np.sqrt(3)) == pytest.approx(3.0)

    def test_scale_invariance(self, g3):
        x = np.array([1.0, 2.0, -1.0j])
        assert rayleigh('A', g3, 7 * x) == pytest.approx(rayleigh('A', g3, x))

    def test_adjacency_on_g1(self, g1):
        assert rayleigh('A', g1, np.array([1.0, 0.0])) == 0.0

    def test_normalized_on_g2(self, g2):
        assert rayleigh('L', g2, np.array([1.0, 1j])) == pytest.approx(1.0)
        assert rayleigh('calL', g2, np.array([0.3, -2.0])) == pytest.approx(1.0)

    def test_columns(self, g3):
        X = np.eye(3)
        np.testing.assert_allclose(rayleigh('K', g3, X), [1, 1, 1])
        np.testing.assert_allclose(rayleigh('A', g3, X), [0, 0, 0])

    def test_zero_vector(self, g3):
        with pytest.raises(ZeroVector):
            rayleigh('K', g3, np.zeros(3))

    def test_isolated_vertex(self):
        G = build(2, [[(0, 1.0, 0.0)]])
        with pytest.raises(ZeroDegreeVertex):
            rayleigh('L', G, np.ones(2))
        assert rayleigh('K', G, np.array([1.0, 0.0])) == pytest.approx(1.0)

    def test_length_and_kind(self, g3):
        with pytest.raises(LengthMismatch):
            rayleigh('K', g3, np.ones(2))
        with pytest.raises(BadParameter):
            rayleigh('Kstar', g3, np.ones(3))


@pytest.mark.unit
class TestClosedForm:
    def test_small_orders(self):
        np.testing.assert_allclose(closed_form_eigenvalues(np.array([[2.0]])), [2.0])
        np.testing.assert_allclose(closed_form_eigenvalues(np.array([[1, -1j], [1j, 1]])), [0, 2], atol=1e-15)
        # double root: the trigonometric form loses about half the digits there
        np.testing.assert_allclose(closed_form_eigenvalues(np.eye(3) - np.ones((3, 3))), [-2, 1, 1], atol=1e-6)
        np.testing.assert_array_equal(closed_form_eigenvalues(4 * np.eye(3)), [4, 4, 4])

    def test_order_four_rejected(self):
        with pytest.raises(BadParameter):
            closed_form_eigenvalues(np.eye(4))

    @pytest.mark.parametrize('n', [2, 3])
    def test_jacobi_matches_closed_form(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(1000):
            M = random_hermitian(rng, n)
            expected = closed_form_eigenvalues(M)
            scale = 1.0 + np.max(np.abs(expected))
            np.testing.assert_allclose(hermitian_eig(M).values, expected, atol=1e-9 * scale)


@pytest.mark.unit
class TestOperatorSpectrum:
    def test_cached(self, g3):
        assert operator_spectrum(g3, 'A') is operator_spectrum(g3, 'A')

    def test_unknown_kind(self, g3):
        with pytest.raises(BadParameter):
            operator_spectrum(g3, 'B')

    def test_every_kind_on_g2(self, g2):
        for kind in OPERATOR_KINDS:
            spectrum = operator_spectrum(g2, kind, True)
            assert len(spectrum) == 2
            assert spectrum.max_residual <= 1e-10


@pytest.mark.fuzz
class TestSolverProperties:
    @given(M=hermitian_matrices())
    @settings(max_examples=100, deadline=None)
    def test_matches_numpy(self, M):
        values = hermitian_eig(M).values
        expected = np.linalg.eigvalsh(M)
        np.testing.assert_allclose(values, expected, atol=1e-9 * (1.0 + np.max(np.abs(expected))))

    @given(M=hermitian_matrices())
    @settings(max_examples=100, deadline=None)
    def test_vectors_are_unitary(self, M):
        spectrum = hermitian_eig(M, want_vectors=True)
        V = spectrum.vectors
        scale = 1.0 + np.max(np.abs(spectrum.values))
        np.testing.assert_allclose(V.conj().T @ V, np.eye(M.shape[0]), atol=1e-10)
        assert spectrum.max_residual <= 1e-8 * scale

    def test_positive_semidefinite_operators(self, corpus):
        for G in corpus:
            for kind in ('K', 'Kstar'):
                spectrum = operator_spectrum(G, kind)
                if len(spectrum):
                    assert spectrum.lambda_min >= -1e-9 * (1.0 + abs(spectrum.lambda_max))

    def test_trace_of_adjacency_is_zero(self, corpus):
        for G in corpus:
            values = operator_spectrum(G, 'A').values
            assert abs(values.sum()) <= 1e-9 * G.n * (1.0 + np.max(np.abs(values), initial=0.0))
