"""
Dense complex linear algebra for bipartite operators.

Operators are plain complex numpy arrays. In every tensor flattening subsystem 1
is the major (slow) index: entry ((i, k), (j, l)) of a d1*d2 square matrix lives
at row i*d2 + k and column j*d2 + l.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence
import numpy as np
import numpy.linalg as npl
from app.config import settings
from app.exceptions import InvalidInputError, NumericalFailureError
from app.logger import logger

ComplexMatrix = np.ndarray
Ket = np.ndarray
Dims = tuple[int, int]


def as_matrix(a, name: str = "matrix") -> ComplexMatrix:
    """Validate and convert to a finite 2-D complex array."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains NaN or Inf entries")
    return arr


def as_ket(a, name: str = "ket") -> Ket:
    """Validate and convert to a finite 1-D complex array."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains NaN or Inf entries")
    return arr


def max_norm(a: np.ndarray) -> float:
    """Largest absolute entry."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def _check_bipartite(rho: ComplexMatrix, dims: Dims) -> tuple[int, int]:
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 < 1 or d2 < 1:
        raise InvalidInputError(f"Subsystem dimensions must be positive, got {dims}")
    if rho.shape != (d1 * d2, d1 * d2):
        raise InvalidInputError(
            f"Operator of shape {rho.shape} does not match dims {d1}x{d2}"
        )
    return d1, d2


@dataclass(frozen=True)
class HermitianSpectrum:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])

    def vector(self, index: int) -> Ket:
        return self.eigenvectors[:, index]

    def multiplicities(self, tol: float = 1e-9) -> list[tuple[float, int]]:
        """Group eigenvalues closer than tol into (value, multiplicity) pairs."""
        groups: list[list[float]] = []
        for value in self.eigenvalues:
            if groups and abs(value - groups[-1][-1]) <= tol:
                groups[-1].append(float(value))
            else:
                groups.append([float(value)])
        return [(float(np.mean(g)), len(g)) for g in groups]

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product with the first factor as the major index."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(rho: ComplexMatrix, dims: Dims, which: int = 2) -> ComplexMatrix:
    """Trace out subsystem `which` (1 or 2) of a d1*d2 operator."""
    rho = as_matrix(rho, "rho")
    d1, d2 = _check_bipartite(rho, dims)
    blocks = rho.reshape(d1, d2, d1, d2)
    if which == 2:
        return np.einsum("ikjk->ij", blocks)
    if which == 1:
        return np.einsum("kikj->ij", blocks)
    raise InvalidInputError(f"Subsystem tag must be 1 or 2, got {which}")


def apply_local_map(
    rho: ComplexMatrix,
    dims: Dims,
    local_map: Callable[[ComplexMatrix], ComplexMatrix],
) -> ComplexMatrix:
    """
    Apply (I ⊗ Λ) to a bipartite operator.

    The operator is viewed as a d1 x d1 grid of d2 x d2 blocks and the map is
    applied to every block.
    """
    rho = as_matrix(rho, "rho")
    d1, d2 = _check_bipartite(rho, dims)
    map_dim = getattr(local_map, "dim", d2)
    if map_dim != d2:
        raise InvalidInputError(
            f"Local map acts on dimension {map_dim} but subsystem 2 has dimension {d2}"
        )

    blocks = rho.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3)
    out = np.empty_like(blocks)
    for i in range(d1):
        for j in range(d1):
            image = np.asarray(local_map(blocks[i, j]), dtype=complex)
            if image.shape != (d2, d2):
                raise InvalidInputError(
                    f"Local map returned shape {image.shape}, expected {(d2, d2)}"
                )
            out[i, j] = image
    return out.transpose(0, 2, 1, 3).reshape(d1 * d2, d1 * d2)


def hermitian_eigen(a: ComplexMatrix, tol: Optional[float] = None) -> HermitianSpectrum:
    """Full spectrum of a Hermitian matrix, eigenvalues ascending."""
    a = as_matrix(a, "operator")
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"Operator must be square, got shape {a.shape}")
    tol = settings.HERMITIAN_TOL if tol is None else tol
    scale = max_norm(a)
    asymmetry = max_norm(a - a.conj().T)
    if asymmetry > tol * (1.0 + scale):
        raise InvalidInputError(
            f"Operator is not Hermitian (max |A - A^H| = {asymmetry:.3e})"
        )

    try:
        eigenvalues, eigenvectors = npl.eigh((a + a.conj().T) / 2)
    except npl.LinAlgError as e:
        logger.error(f"Eigendecomposition failed for {a.shape[0]}x{a.shape[0]} operator: {e}")
        raise NumericalFailureError(f"Eigendecomposition did not converge: {e}")
    return HermitianSpectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def singular_values(a: ComplexMatrix) -> np.ndarray:
    """Singular values in descending order."""
    a = as_matrix(a, "operator")
    if a.size == 0:
        return np.zeros(0)
    try:
        return npl.svd(a, compute_uv=False)
    except npl.LinAlgError as e:
        raise NumericalFailureError(f"Singular value decomposition did not converge: {e}")


def trace_norm(a: ComplexMatrix) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(a)))


def span_rank(vectors: Sequence[Ket], tol: Optional[float] = None) -> int:
    """Number of singular values of the stacked vectors above tol times the largest."""
    if len(vectors) == 0:
        return 0
    tol = settings.RANK_TOL if tol is None else tol
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise InvalidInputError("All vectors passed to span_rank must have the same dimension")
    stacked = np.vstack([as_ket(v, "vector") for v in vectors])
    sv = singular_values(stacked)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


def realign(rho: ComplexMatrix, dims: Dims) -> ComplexMatrix:
    """
    Realignment: R[(i, j), (k, l)] = rho[(i, k), (j, l)].

    Rows pair the two subsystem-1 indices (d1^2 of them), columns pair the two
    subsystem-2 indices, so R(A ⊗ B) = vec(A) vec(B)^T.
    """
    rho = as_matrix(rho, "rho")
    d1, d2 = _check_bipartite(rho, dims)
    return rho.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


def normalize(v: Ket) -> Ket:
    norm = npl.norm(v)
    if norm == 0.0:
        raise InvalidInputError("Cannot normalize the zero vector")
    return v / norm


def outer(v: Ket, w: Optional[Ket] = None) -> ComplexMatrix:
    """|v><w| (|v><v| when w is omitted)."""
    w = v if w is None else w
    return np.outer(v, np.conj(w))


def random_ket(dim: int, rng: np.random.Generator) -> Ket:
    """Normalized ket with i.i.d. standard complex Gaussian amplitudes."""
    return normalize(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


def basis_ket(dim: int, index: int) -> Ket:
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e

