"""
Linear maps on N x N operators: transposition T, time reversal ϑ, the
reduction map Λ and Φ = Λ - ϑ.

Maps are behavioral (callables on matrices) and carry the dimension they act
on so that apply_local_map can check block sizes.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable
import numpy as np
from app.exceptions import InvalidInputError, UnsupportedDimensionError
from app.linalg import ComplexMatrix, apply_local_map, as_matrix
from app.logger import logger
from app.spin import SpinSystem, build_V


class MapName(str, Enum):
    IDENTITY = "Identity"
    TRANSPOSE = "Transpose"
    TIME_REVERSAL = "TimeReversal"
    REDUCTION = "Reduction"
    PHI = "Phi"


@dataclass(frozen=True)
class OperatorMap:
    """A named linear map acting on dim x dim matrices."""
    name: MapName
    dim: int
    action: Callable[[ComplexMatrix], ComplexMatrix] = field(repr=False, compare=False)

    def __call__(self, b: ComplexMatrix) -> ComplexMatrix:
        b = as_matrix(b, "operand")
        if b.shape != (self.dim, self.dim):
            raise InvalidInputError(
                f"{self.name.value} map acts on {self.dim}x{self.dim} matrices, got {b.shape}"
            )
        return self.action(b)

    @property
    def trivially_zero(self) -> bool:
        # Φ(|φ><φ|) = I - Π with Π = I when N = 2
        return self.name == MapName.PHI and self.dim == 2


def identity_op(N: int) -> OperatorMap:
    return OperatorMap(MapName.IDENTITY, N, lambda b: b.copy())


def transpose_op(N: int) -> OperatorMap:
    """Entrywise transpose in the m-descending basis."""
    return OperatorMap(MapName.TRANSPOSE, N, lambda b: b.T.copy())


def time_reversal_op(N: int) -> OperatorMap:
    """ϑB = θ B^† θ^-1 = V B^T V^†."""
    V = build_V(SpinSystem.from_dimension(N))
    V_dag = V.conj().T
    return OperatorMap(MapName.TIME_REVERSAL, N, lambda b: V @ b.T @ V_dag)


def reduction_op(N: int) -> OperatorMap:
    """ΛB = (tr B) I - B."""
    eye = np.eye(N, dtype=complex)
    return OperatorMap(MapName.REDUCTION, N, lambda b: np.trace(b) * eye - b)


def phi_op(N: int) -> OperatorMap:
    """ΦB = (tr B) I - B - ϑB, i.e. Φ = Λ - ϑ."""
    if N % 2 != 0:
        raise UnsupportedDimensionError(N, "even N")
    reduction = reduction_op(N)
    time_reversal = time_reversal_op(N)
    if N == 2:
        logger.warning("Phi map requested for N=2, where it is identically zero")
    return OperatorMap(
        MapName.PHI, N, lambda b: reduction.action(b) - time_reversal.action(b)
    )


MAP_FACTORIES: dict[MapName, Callable[[int], OperatorMap]] = {
    MapName.IDENTITY: identity_op,
    MapName.TRANSPOSE: transpose_op,
    MapName.TIME_REVERSAL: time_reversal_op,
    MapName.REDUCTION: reduction_op,
    MapName.PHI: phi_op,
}


def build_map(name: MapName, N: int) -> OperatorMap:
    return MAP_FACTORIES[MapName(name)](N)


def partial_time_reversal(rho: ComplexMatrix, dims: tuple[int, int]) -> ComplexMatrix:
    """ϑ2 ρ = (I ⊗ ϑ) ρ."""
    return apply_local_map(rho, dims, time_reversal_op(int(dims[1])))
