"""
Tests for dense linear algebra helpers.
"""
import numpy as np
import pytest
from app.exceptions import InvalidInputError
from app.linalg import (
    apply_local_map,
    basis_ket,
    hermitian_eigen,
    partial_trace,
    random_hermitian,
    realign,
    span_rank,
    tensor_product,
    trace_norm,
)
from app.maps import identity_op, reduction_op, time_reversal_op
from app.spin import SpinSystem, singlet_projector, swap_operator


def test_tensor_product_identity():
    """I2 ⊗ I2 is I4."""
    assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_product_block_layout():
    """diag(1,2) ⊗ X puts X and 2X on the diagonal blocks."""
    x = np.array([[0, 1], [1, 0]])
    out = tensor_product(np.diag([1, 2]), x)
    assert np.array_equal(out[:2, :2], x)
    assert np.array_equal(out[2:, 2:], 2 * x)
    assert np.array_equal(out[:2, 2:], np.zeros((2, 2)))


def test_tensor_product_index_convention():
    """e1 ⊗ e2 lands at flat index 1: subsystem 1 is the major index."""
    ket = np.kron(basis_ket(2, 0), basis_ket(2, 1))
    assert np.argmax(np.abs(ket)) == 1


def test_tensor_product_associative(rng):
    """(A⊗B)⊗C equals A⊗(B⊗C) exactly on integer inputs."""
    a, b, c = (rng.integers(-5, 5, size=(2, 2)) for _ in range(3))
    left = tensor_product(tensor_product(a, b), c)
    right = tensor_product(a, tensor_product(b, c))
    assert np.array_equal(left, right)


def test_partial_trace_of_products(rng):
    """tr2(A⊗B) = A tr(B) over random pairs."""
    for _ in range(100):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        reduced = partial_trace(np.kron(a, b), (3, 4), which=2)
        assert np.max(np.abs(reduced - a * np.trace(b))) <= 1e-12 * (1 + np.max(np.abs(a * np.trace(b))))
        reduced1 = partial_trace(np.kron(a, b), (3, 4), which=1)
        assert np.allclose(reduced1, b * np.trace(a), atol=1e-12)


@pytest.mark.parametrize("N", [4, 6, 8])
def test_partial_trace_of_singlet(N):
    """tr2 P0 = I/N."""
    p0 = singlet_projector(SpinSystem.from_dimension(N))
    assert np.allclose(partial_trace(p0, (N, N), which=2), np.eye(N) / N, atol=1e-12)


def test_partial_trace_maximally_mixed():
    """tr1(I/N²) = I/N."""
    assert np.allclose(partial_trace(np.eye(16) / 16, (4, 4), which=1), np.eye(4) / 4)


def test_partial_trace_dimension_mismatch():
    """A 5x5 operator cannot be split as 2x2."""
    with pytest.raises(InvalidInputError):
        partial_trace(np.eye(5), (2, 2))


def test_apply_identity_map(rng):
    """The identity map leaves the operator unchanged."""
    rho = random_hermitian(12, rng)
    assert np.allclose(apply_local_map(rho, (3, 4), identity_op(4)), rho)


def test_apply_time_reversal_to_singlet(spin4):
    """ϑ2 P0 = F/N."""
    p0 = singlet_projector(spin4)
    image = apply_local_map(p0, (4, 4), time_reversal_op(4))
    assert np.max(np.abs(image - swap_operator(spin4) / 4)) <= 1e-10


def test_apply_reduction_to_singlet(spin4):
    """(I⊗Λ)P0 = I/N - P0, and in general ρ1⊗I - ρ."""
    p0 = singlet_projector(spin4)
    image = apply_local_map(p0, (4, 4), reduction_op(4))
    assert np.allclose(image, np.eye(16) / 4 - p0, atol=1e-12)


def test_apply_reduction_blockwise_identity(rng):
    """(I⊗Λ)ρ = ρ1⊗I - ρ for a random operator."""
    rho = random_hermitian(12, rng)
    rho1 = partial_trace(rho, (3, 4), which=2)
    expected = np.kron(rho1, np.eye(4)) - rho
    assert np.allclose(apply_local_map(rho, (3, 4), reduction_op(4)), expected, atol=1e-12)


def test_apply_local_map_trace(rng):
    """Trace of the image equals Σ_i tr Λ(B_ii)."""
    rho = random_hermitian(12, rng)
    local = reduction_op(4)
    image = apply_local_map(rho, (3, 4), local)
    direct = sum(np.trace(local(rho[4 * i:4 * i + 4, 4 * i:4 * i + 4])) for i in range(3))
    assert abs(np.trace(image) - direct) <= 1e-12 * (1 + abs(direct))


def test_apply_local_map_block_mismatch(rng):
    """A map on 4x4 blocks rejects a 3x3 subsystem."""
    with pytest.raises(InvalidInputError):
        apply_local_map(np.eye(9), (3, 3), reduction_op(4))


def test_hermitian_eigen_diagonal():
    """diag(3,1,2) sorts to (1,2,3)."""
    spectrum = hermitian_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(spectrum.eigenvalues, [1, 2, 3])


def test_hermitian_eigen_pauli_x():
    """Pauli-x has eigenvalues ±1."""
    spectrum = hermitian_eigen(np.array([[0, 1], [1, 0]]))
    assert np.allclose(spectrum.eigenvalues, [-1, 1])


def test_hermitian_eigen_random_reconstruction(rng):
    """Reconstruction and orthonormality on random Hermitian matrices up to dimension 64."""
    for _ in range(100):
        dim = int(rng.integers(1, 65))
        a = random_hermitian(dim, rng)
        spectrum = hermitian_eigen(a)
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)
        gram = spectrum.eigenvectors.conj().T @ spectrum.eigenvectors
        assert np.max(np.abs(gram - np.eye(dim))) <= 1e-9
        error = np.max(np.abs(a - spectrum.reconstruct()))
        assert error <= 1e-9 * np.max(np.abs(a))


def test_hermitian_eigen_deterministic(rng):
    """Identical input gives identical output."""
    a = random_hermitian(10, rng)
    first, second = hermitian_eigen(a), hermitian_eigen(a.copy())
    assert np.array_equal(first.eigenvalues, second.eigenvalues)


def test_hermitian_eigen_rejects_non_hermitian():
    """A non-Hermitian matrix is invalid input."""
    with pytest.raises(InvalidInputError):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_hermitian_eigen_rejects_nan():
    """NaN entries are invalid input."""
    with pytest.raises(InvalidInputError):
        hermitian_eigen(np.array([[np.nan, 0], [0, 1]]))


def test_multiplicities_grouping():
    """Clustered eigenvalues are counted together."""
    spectrum = hermitian_eigen(np.diag([2.0, -1.0, 2.0, 0.0, 2.0]))
    groups = spectrum.multiplicities()
    assert [count for _, count in groups] == [1, 1, 3]
    assert [value for value, _ in groups] == pytest.approx([-1.0, 0.0, 2.0])


def test_trace_norm_unitary(rng):
    """A unitary has trace norm equal to its dimension."""
    q, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    assert abs(trace_norm(q) - 5) <= 1e-10


def test_trace_norm_zero():
    """The zero matrix has trace norm 0."""
    assert trace_norm(np.zeros((3, 4))) == 0.0


def test_trace_norm_realigned_singlet(spin4):
    """‖R(P0)‖₁ = N."""
    p0 = singlet_projector(spin4)
    assert abs(trace_norm(realign(p0, (4, 4))) - 4) <= 1e-10


def test_realign_product_is_rank_one(rng):
    """R(A⊗B) = vec(A) vec(B)^T."""
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    assert np.allclose(realign(np.kron(a, b), (2, 3)), np.outer(a.reshape(-1), b.reshape(-1)))


def test_span_rank_basic():
    """Single and duplicated vectors have rank 1; empty has rank 0."""
    e1 = basis_ket(3, 0)
    assert span_rank([e1]) == 1
    assert span_rank([e1, e1, 2 * e1]) == 1
    assert span_rank([]) == 0


@pytest.mark.parametrize("count,dim", [(3, 5), (5, 5), (9, 5), (20, 16)])
def test_span_rank_generic(rng, count, dim):
    """k generic vectors in dimension n span min(k, n)."""
    vectors = [rng.standard_normal(dim) + 1j * rng.standard_normal(dim) for _ in range(count)]
    assert span_rank(vectors) == min(count, dim)


def test_span_rank_mixed_dimensions():
    """Vectors of different lengths are rejected."""
    with pytest.raises(InvalidInputError):
        span_rank([np.ones(2), np.ones(3)])
