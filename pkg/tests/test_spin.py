"""
Tests for spin-j basis machinery.
"""
import numpy as np
import pytest
from app.exceptions import InvalidInputError, UnsupportedDimensionError
from app.linalg import basis_ket, hermitian_eigen, partial_trace
from app.spin import (
    SpinSystem,
    build_V,
    clebsch_gordan,
    coupling_matrix,
    singlet_projector,
    spin_operators,
    swap_operator,
    theta_ket,
    total_spin_projectors,
    total_spin_squared,
)

EVEN_N = [2, 4, 6, 8, 10]


def test_spin_system_dimension():
    """N = twoJ + 1."""
    sys_ = SpinSystem.from_dimension(6)
    assert sys_.two_j == 5
    assert sys_.N == 6
    assert sys_.two_m_values == [5, 3, 1, -1, -3, -5]


def test_spin_system_rejects_negative():
    """twoJ must be nonnegative."""
    with pytest.raises(InvalidInputError):
        SpinSystem(-1)


def test_build_V_spin_half():
    """N=2 gives [[0,-1],[1,0]]."""
    V = build_V(SpinSystem.from_dimension(2))
    assert np.array_equal(V, np.array([[0, -1], [1, 0]]))


def test_build_V_spin_three_halves():
    """N=4 is antidiagonal with (-1, 1, -1, 1) reading rows top to bottom."""
    V = build_V(SpinSystem.from_dimension(4))
    antidiagonal = [V[i, 3 - i] for i in range(4)]
    assert np.array_equal(antidiagonal, [-1, 1, -1, 1])
    assert np.count_nonzero(V) == 4


def test_build_V_odd_dimension():
    """Odd N has no unitary skew-symmetric V."""
    with pytest.raises(UnsupportedDimensionError):
        build_V(SpinSystem.from_dimension(3))


@pytest.mark.parametrize("N", EVEN_N)
def test_V_unitary_and_skew(N):
    """V†V = I and V^T = -V."""
    V = build_V(SpinSystem.from_dimension(N))
    assert np.max(np.abs(V.conj().T @ V - np.eye(N))) <= 1e-12
    assert np.max(np.abs(V.T + V)) <= 1e-12


def test_theta_on_basis_kets(spin4):
    """θ|j,m> = (-1)^(j-m)|j,-m>."""
    for i in range(4):
        expected = (-1) ** i * basis_ket(4, 3 - i)
        assert np.allclose(theta_ket(spin4, basis_ket(4, i)), expected)


@pytest.mark.parametrize("N", EVEN_N)
def test_theta_squares_to_minus_one(N, random_kets):
    """θ²φ = -φ and <φ|θφ> = 0."""
    sys_ = SpinSystem.from_dimension(N)
    for phi in random_kets(N, 100):
        flipped = theta_ket(sys_, phi)
        assert np.max(np.abs(theta_ket(sys_, flipped) + phi)) <= 1e-12
        assert abs(np.vdot(phi, flipped)) <= 1e-12


def test_theta_dimension_mismatch(spin4):
    """A ket of the wrong length is rejected."""
    with pytest.raises(InvalidInputError):
        theta_ket(spin4, np.ones(3))


def test_clebsch_gordan_spin_half_singlet():
    """<½,½;½,-½|0,0> = 1/√2 and <½,-½;½,½|0,0> = -1/√2."""
    assert clebsch_gordan(1, 1, -1, 0, 0) == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert clebsch_gordan(1, -1, 1, 0, 0) == pytest.approx(-1 / np.sqrt(2), abs=1e-14)


def test_clebsch_gordan_spin_half_oracle():
    """Spin-½ coupling agrees with diagonalizing J² and Jz."""
    sys_ = SpinSystem.from_dimension(2)
    j_sq = total_spin_squared(sys_)
    jz_total = np.kron(spin_operators(sys_)[2], np.eye(2)) + np.kron(np.eye(2), spin_operators(sys_)[2])
    singlet = hermitian_eigen(j_sq).vector(0)
    assert np.real(np.vdot(singlet, j_sq @ singlet)) == pytest.approx(0.0, abs=1e-12)
    assert np.real(np.vdot(singlet, jz_total @ singlet)) == pytest.approx(0.0, abs=1e-12)
    # fix the overall phase by the |+½,-½> component
    singlet = singlet * (abs(singlet[1]) / singlet[1])
    assert singlet[1].real == pytest.approx(clebsch_gordan(1, 1, -1, 0, 0), abs=1e-12)
    assert singlet[2].real == pytest.approx(clebsch_gordan(1, -1, 1, 0, 0), abs=1e-12)


@pytest.mark.parametrize("two_j", [1, 3, 5, 7])
def test_clebsch_gordan_stretched(two_j):
    """<j,j;j,j|2j,2j> = 1."""
    assert clebsch_gordan(two_j, two_j, two_j, 2 * two_j, 2 * two_j) == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("two_j", [1, 3, 5])
def test_clebsch_gordan_normalization(two_j):
    """Σ_{m1,m2} <j,m1;j,m2|J,M>² = 1 for every (J, M)."""
    ms = range(two_j, -two_j - 1, -2)
    for J in range(0, two_j + 1):
        for two_M in range(2 * J, -2 * J - 1, -2):
            total = sum(clebsch_gordan(two_j, m1, m2, 2 * J, two_M) ** 2 for m1 in ms for m2 in ms)
            assert total == pytest.approx(1.0, abs=1e-12)


def test_clebsch_gordan_zero_off_shell():
    """M ≠ m1 + m2 gives zero."""
    assert clebsch_gordan(3, 3, 1, 2, 0) == 0.0


@pytest.mark.parametrize("args", [(1, 3, 1, 0, 0), (1, 1, -1, 4, 0), (3, 2, 1, 2, 2), (3, 1, 1, 2, 6)])
def test_clebsch_gordan_out_of_range(args):
    """Invalid quantum numbers are rejected."""
    with pytest.raises(InvalidInputError):
        clebsch_gordan(*args)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
def test_coupling_matrix_orthogonal(N):
    """The CG change of basis is a real orthogonal matrix."""
    C = coupling_matrix(SpinSystem.from_dimension(N))
    assert C.shape == (N * N, N * N)
    assert np.max(np.abs(C.T @ C - np.eye(N * N))) <= 1e-10


def test_projector_ranks_spin_half():
    """Singlet rank 1, triplet rank 3."""
    decomposition = total_spin_projectors(SpinSystem.from_dimension(2))
    ranks = [round(np.trace(p).real) for _, p in decomposition.projectors]
    assert ranks == [1, 3]


def test_projector_ranks_spin_three_halves(spin4):
    """Ranks (1, 3, 5, 7) summing to 16."""
    decomposition = total_spin_projectors(spin4)
    assert decomposition.labels == [0, 1, 2, 3]
    ranks = [np.trace(p).real for _, p in decomposition.projectors]
    assert ranks == pytest.approx([1, 3, 5, 7], abs=1e-8)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
def test_projector_decomposition_invariants(N):
    """Idempotent, Hermitian, mutually orthogonal, resolving the identity."""
    decomposition = total_spin_projectors(SpinSystem.from_dimension(N))
    total = np.zeros((N * N, N * N), dtype=complex)
    for J, p in decomposition.projectors:
        assert np.max(np.abs(p @ p - p)) <= 1e-10
        assert np.max(np.abs(p - p.conj().T)) <= 1e-10
        assert np.trace(p).real == pytest.approx(2 * J + 1, abs=1e-8)
        for K, q in decomposition.projectors:
            if K != J:
                assert np.max(np.abs(p @ q)) <= 1e-10
        total += p
    assert np.max(np.abs(total - np.eye(N * N))) <= 1e-10


@pytest.mark.parametrize("N", [2, 4, 6])
def test_projectors_match_total_spin_oracle(N):
    """P_J equals the J(J+1) eigenprojector of Ĵ²."""
    sys_ = SpinSystem.from_dimension(N)
    spectrum = hermitian_eigen(total_spin_squared(sys_))
    for J, p in total_spin_projectors(sys_).projectors:
        mask = np.abs(spectrum.eigenvalues - J * (J + 1)) < 1e-6
        vectors = spectrum.eigenvectors[:, mask]
        oracle = vectors @ vectors.conj().T
        assert vectors.shape[1] == 2 * J + 1
        assert np.max(np.abs(oracle - p)) <= 1e-9


def test_swap_exchanges_factors(spin4, random_kets):
    """F(φ⊗ψ) = ψ⊗φ."""
    F = swap_operator(spin4)
    phi, psi = random_kets(4, 2)
    assert np.allclose(F @ np.kron(phi, psi), np.kron(psi, phi))


@pytest.mark.parametrize("N", [4, 6, 8])
def test_swap_projector_expansion(N):
    """F = Σ_J (-1)^(J+1) P_J, F² = I and tr F = N."""
    sys_ = SpinSystem.from_dimension(N)
    F = swap_operator(sys_)
    decomposition = total_spin_projectors(sys_)
    expansion = decomposition.combine({J: (-1.0) ** (J + 1) for J in decomposition.labels})
    assert np.max(np.abs(F - expansion)) <= 1e-10
    assert np.allclose(F @ F, np.eye(N * N))
    assert np.trace(F).real == pytest.approx(N)


@pytest.mark.parametrize("N", [4, 6, 8])
def test_singlet_projector(N):
    """P0² = P0, tr P0 = 1, tr2 P0 = I/N and F P0 = -P0."""
    sys_ = SpinSystem.from_dimension(N)
    p0 = singlet_projector(sys_)
    assert np.allclose(p0 @ p0, p0, atol=1e-12)
    assert np.trace(p0).real == pytest.approx(1.0)
    assert np.max(np.abs(partial_trace(p0, (N, N)) - np.eye(N) / N)) <= 1e-10
    assert np.max(np.abs(swap_operator(sys_) @ p0 + p0)) <= 1e-10


def test_singlet_amplitudes(spin4):
    """The singlet is Σ_m (-1)^(j-m)|m,-m>/√N up to phase."""
    vector = hermitian_eigen(singlet_projector(spin4)).vector(-1)
    expected = np.zeros(16, dtype=complex)
    for i in range(4):
        expected[i * 4 + (3 - i)] = (-1) ** i / 2
    assert abs(abs(np.vdot(expected, vector)) - 1.0) <= 1e-10


def test_spin_operators_commutation(spin4):
    """[jx, jy] = i jz."""
    jx, jy, jz = spin_operators(spin4)
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz)
    assert np.allclose(np.diag(jz).real, [1.5, 0.5, -0.5, -1.5])
