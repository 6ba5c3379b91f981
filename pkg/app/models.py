from dataclasses import dataclass
from typing import Optional
import numpy as np
from app.config import settings
from app.exceptions import InvalidInputError
from app.linalg import ComplexMatrix, Dims, Ket, as_matrix, hermitian_eigen, max_norm


@dataclass(frozen=True)
class DensityState:
    """
    A bipartite operator with subsystem dimensions (d1, d2).

    Hermitian and positive semidefinite; unit trace unless built with
    normalized=False (used for the unnormalized manifold construction).
    `scale` records the trace the matrix was divided by when it was normalized.
    """
    matrix: ComplexMatrix
    dims: Dims
    normalized: bool = True
    scale: float = 1.0

    def __post_init__(self):
        matrix = as_matrix(np.array(self.matrix, dtype=complex), "state")
        d1, d2 = int(self.dims[0]), int(self.dims[1])
        if d1 < 1 or d2 < 1 or matrix.shape != (d1 * d2, d1 * d2):
            raise InvalidInputError(
                f"State of shape {matrix.shape} does not match dims ({d1}, {d2})"
            )
        if max_norm(matrix - matrix.conj().T) > settings.HERMITIAN_TOL:
            raise InvalidInputError("State is not Hermitian")
        trace = float(np.real(np.trace(matrix)))
        if self.normalized and abs(trace - 1.0) > settings.TRACE_TOL:
            raise InvalidInputError(f"State trace is {trace:.12g}, expected 1")
        lowest = hermitian_eigen(matrix).min
        if lowest < -settings.POSITIVITY_TOL:
            raise InvalidInputError(f"State is not positive semidefinite (min eigenvalue {lowest:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "dims", (d1, d2))

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


@dataclass(frozen=True)
class FamilyPoint:
    """ρ(λ) = λ P0 + (1 - λ) ρ0 for spin dimension N."""
    N: int
    lam: float
    state: DensityState


@dataclass(frozen=True)
class ManifoldTerm:
    weight: float
    first: Ket
    second: Ket


@dataclass(frozen=True)
class ManifoldSpec:
    """A PPT state detected by W plus weighted Γ_W product vectors."""
    base: DensityState
    terms: tuple[ManifoldTerm, ...] = ()
    normalize: bool = True


@dataclass(frozen=True)
class Witness:
    N: int
    matrix: ComplexMatrix


@dataclass(frozen=True)
class GammaVector:
    """
    A product vector |first> ⊗ |second>.

    `residual` is 1 - |<first|second>|^2 - |<first|θ second>|^2 on the
    normalized factors; it is None when either factor vanishes.
    """
    first: Ket
    second: Ket
    residual: Optional[float]

    @property
    def is_zero(self) -> bool:
        return self.residual is None

    def product(self) -> Ket:
        return np.kron(self.first, self.second)


@dataclass(frozen=True)
class GammaTerm:
    coefficient: complex
    vector: GammaVector


@dataclass(frozen=True)
class OptimalityResult:
    N: int
    samples: int
    rank: int
    invariance_residual: float
    theta2_invariant: bool

    @property
    def dimension(self) -> int:
        return self.N * self.N

    @property
    def confirmed(self) -> bool:
        return self.rank == self.dimension and self.theta2_invariant
