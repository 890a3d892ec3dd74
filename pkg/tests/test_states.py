import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unient.partitions import Partition
from unient.states import (
    DensityMatrix,
    PureState,
    StateError,
    basis_state,
    bell_state,
    eigenvalues,
    ghz_state,
    make_rng,
    matrix_power,
    maximally_mixed,
    partial_trace,
    sample_ginibre_density,
    sample_haar_pure,
    sample_haar_unitary,
    schmidt_coefficients,
    spectral_decompose,
    trace_power,
)

seeds = st.integers(min_value=0, max_value=2**32)


def test_pure_state_validates_norm_and_dims():
    with pytest.raises(StateError):
        PureState(np.array([1.0, 1.0]), (2,))
    with pytest.raises(StateError):
        PureState(np.array([1.0, 0.0]), (3,))
    psi = PureState.from_unnormalized([3.0, 4.0], (2,))
    assert np.isclose(np.linalg.norm(psi.amplitudes), 1.0)


def test_density_matrix_rejects_bad_input():
    with pytest.raises(StateError):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]), (2,))
    with pytest.raises(StateError):
        DensityMatrix(np.eye(2), (2,))
    with pytest.raises(StateError):
        DensityMatrix(np.diag([1.1, -0.1]), (2,))


def test_partial_trace_bell_is_maximally_mixed():
    rho = partial_trace(bell_state(), [0])
    np.testing.assert_allclose(rho.matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product_recovers_factor(rng):
    a = sample_ginibre_density(2, None, rng)
    b = sample_ginibre_density(3, None, rng)
    rho = a.kron(b)
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, a.matrix, atol=1e-10)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, b.matrix, atol=1e-10)


def test_partial_trace_ghz_drop_last():
    rho = partial_trace(ghz_state(3), [0, 1])
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = 0.5
    np.testing.assert_allclose(rho.matrix, expected, atol=1e-12)
    assert rho.dims == (2, 2)


def test_partial_trace_keeps_relative_order(rng):
    psi = sample_haar_pure((2, 3, 4), rng)
    rho = partial_trace(psi, [2, 0])
    assert rho.dims == (2, 4)
    t = psi.tensor()
    direct = np.einsum("ajb,cjd->abcd", t, t.conj()).reshape(8, 8)
    np.testing.assert_allclose(rho.matrix, direct, atol=1e-12)


@pytest.mark.parametrize("keep", [[], [0, 1], [5]])
def test_partial_trace_errors(keep):
    with pytest.raises(StateError):
        partial_trace(bell_state(), keep)


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 2, 2)]))
def test_partial_trace_preserves_trace(seed, dims):
    rho = sample_ginibre_density(dims, None, make_rng(seed))
    for k in range(len(dims)):
        assert abs(np.trace(partial_trace(rho, [k]).matrix) - 1) < 1e-10


def test_spectral_decompose_examples(rng):
    np.testing.assert_allclose(spectral_decompose(maximally_mixed(2)).eigenvalues, [0.5, 0.5])
    rho = DensityMatrix(np.diag([0.3, 0.7]).astype(complex), (2,))
    np.testing.assert_allclose(spectral_decompose(rho).eigenvalues, [0.7, 0.3])
    rho = sample_ginibre_density(4, None, rng)
    spec = spectral_decompose(rho)
    assert np.all(spec.eigenvalues >= 0) and abs(spec.eigenvalues.sum() - 1) < 1e-9
    assert np.all(np.diff(spec.eigenvalues) <= 0)
    assert np.max(np.abs(spec.reconstruct() - rho.matrix)) < 1e-8
    u = spec.eigenvectors
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-8


def test_spectral_decompose_rejects_non_hermitian():
    with pytest.raises(StateError):
        spectral_decompose(np.array([[0.5, 0.2], [0.0, 0.5]]))


def test_matrix_power_examples():
    np.testing.assert_allclose(matrix_power(maximally_mixed(2), 2), np.eye(2) / 4, atol=1e-14)
    proj = bell_state().density()
    np.testing.assert_allclose(matrix_power(proj, 0.37), proj.matrix, atol=1e-12)
    rho = DensityMatrix(np.diag([0.5, 0.5, 0.0]).astype(complex), (3,))
    np.testing.assert_allclose(matrix_power(rho, -0.25), np.diag([2**0.25, 2**0.25, 0]), atol=1e-12)
    with pytest.raises(ValueError):
        matrix_power(rho, 0)


@given(seeds, st.floats(0.1, 3), st.floats(0.1, 3))
def test_matrix_power_semigroup(seed, a, b):
    rho = sample_ginibre_density(3, None, make_rng(seed))
    lhs = matrix_power(rho, a) @ matrix_power(rho, b)
    assert np.max(np.abs(lhs - matrix_power(rho, a + b))) < 1e-8
    assert np.max(np.abs(matrix_power(rho, 1) - rho.matrix)) < 1e-10


def test_trace_power_examples():
    assert trace_power(bell_state().density(), 2.5) == pytest.approx(1.0)
    assert trace_power(maximally_mixed(2), 2) == pytest.approx(0.5)
    assert trace_power(maximally_mixed(3), 0.5) == pytest.approx(np.sqrt(3))
    assert trace_power(maximally_mixed(3), 1) == 1.0
    with pytest.raises(ValueError):
        trace_power(maximally_mixed(2), 0)


@given(seeds, st.floats(1.05, 4), st.floats(0.05, 0.95))
def test_trace_power_bounds_on_mixed(seed, q, r):
    rho = sample_ginibre_density(3, 2, make_rng(seed))
    assert trace_power(rho, q) < 1
    assert trace_power(rho, r) > 1


def test_schmidt_examples():
    np.testing.assert_allclose(schmidt_coefficients(bell_state(), [0]), [2**-0.5] * 2)
    np.testing.assert_allclose(schmidt_coefficients(basis_state([0, 0]), [0]), [1.0])
    psi = PureState(np.array([np.sqrt(0.9), 0, 0, np.sqrt(0.1)]), (2, 2))
    np.testing.assert_allclose(schmidt_coefficients(psi, Partition.parse("A|B")), [np.sqrt(0.9), np.sqrt(0.1)])
    with pytest.raises(StateError):
        schmidt_coefficients(ghz_state(3), Partition.parse("A|B", 3))


@given(seeds)
def test_schmidt_matches_reduced_spectrum(seed):
    psi = sample_haar_pure((2, 3), make_rng(seed))
    s = schmidt_coefficients(psi, [0])
    np.testing.assert_allclose(s**2, eigenvalues(partial_trace(psi, [0]))[: s.size], atol=1e-9)
    assert s.size <= 2


def test_sampling_is_deterministic():
    a = sample_haar_pure((2, 2), (7, 3)).amplitudes
    b = sample_haar_pure((2, 2), (7, 3)).amplitudes
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_haar_pure((2, 2), (7, 4)).amplitudes)
    assert abs(np.linalg.norm(a) - 1) < 1e-12


def test_ginibre_rank(rng):
    rho = sample_ginibre_density(4, 2, rng)
    assert np.count_nonzero(eigenvalues(rho) > 1e-9) == 2
    with pytest.raises(ValueError):
        sample_ginibre_density(4, 5, rng)


def test_haar_unitary_is_unitary(rng):
    u = sample_haar_unitary(5, rng)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


def test_permute_matches_partial_trace(rng):
    psi = sample_haar_pure((2, 3), rng)
    swapped = psi.permute([1, 0])
    assert swapped.dims == (3, 2)
    np.testing.assert_allclose(partial_trace(swapped, [1]).matrix, partial_trace(psi, [0]).matrix, atol=1e-12)
