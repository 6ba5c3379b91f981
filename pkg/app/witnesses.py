"""
The witness W = N (I ⊗ Φ) P0 and the machinery around its zero set Γ_W.

A product vector |φ1, φ2> lies in Γ_W iff <φ1,φ2|W|φ1,φ2> = 0, which for
normalized factors reads 1 - |<φ1|φ2>|² - |<φ1|θφ2>|² = 0, i.e. φ1 lies in
span{φ2, θφ2}. W is optimal because Γ_W spans the whole space and ϑ2 W = W.
"""
from functools import lru_cache
from typing import Optional, Sequence
import numpy as np
import numpy.linalg as npl
from app.config import settings
from app.exceptions import InvalidInputError, NumericalFailureError
from app.linalg import Ket, apply_local_map, as_ket, max_norm, random_ket, span_rank
from app.logger import logger
from app.maps import phi_op, time_reversal_op
from app.models import DensityState, GammaTerm, GammaVector, OptimalityResult, Witness
from app.spin import SpinSystem, singlet_projector, theta_ket, total_spin_projectors


def witness_closed_form(sys: SpinSystem) -> np.ndarray:
    """-(N-2) P0 + 2 (P2 + P4 + ... + P_{2j-1})."""
    N = sys.N
    weights = {0: -(N - 2.0)}
    weights.update({J: 2.0 for J in range(2, sys.two_j + 1, 2)})
    return total_spin_projectors(sys).combine(weights)


@lru_cache(maxsize=None)
def _build_witness(N: int) -> Witness:
    sys = SpinSystem.from_dimension(N)
    sys.require_even(min_dim=4)
    p0 = singlet_projector(sys)
    matrix = N * apply_local_map(p0, (N, N), phi_op(N))
    deviation = max_norm(matrix - witness_closed_form(sys))
    if deviation > settings.CROSS_CHECK_TOL:
        raise NumericalFailureError(
            f"Witness for N={N} deviates from its closed form by {deviation:.3e}"
        )
    matrix.setflags(write=False)
    logger.info(f"Built witness for N={N} (closed-form deviation {deviation:.2e})")
    return Witness(N=N, matrix=matrix)


def build_witness(N: int) -> Witness:
    """W = N (I ⊗ Φ) P0, cross-checked against the projector expansion."""
    return _build_witness(int(N))


def witness_expectation(witness: Witness, state: DensityState) -> float:
    """tr(Wρ); negative values certify entanglement."""
    N = witness.N
    if tuple(state.dims) != (N, N):
        raise InvalidInputError(
            f"Witness acts on {N}x{N} but state has dims {tuple(state.dims)}"
        )
    return float(np.real(np.trace(witness.matrix @ state.matrix)))


def product_expectation(witness: Witness, first: Ket, second: Ket) -> float:
    """<φ1,φ2|W|φ1,φ2> evaluated directly."""
    vector = np.kron(as_ket(first, "first"), as_ket(second, "second"))
    if vector.shape[0] != witness.N ** 2:
        raise InvalidInputError("Product vector dimension does not match the witness")
    return float(np.real(np.vdot(vector, witness.matrix @ vector)))


def _gamma_residual(sys: SpinSystem, first: Ket, second: Ket) -> float:
    overlap = np.vdot(first, second)
    flipped = np.vdot(first, theta_ket(sys, second))
    return float(1.0 - abs(overlap) ** 2 - abs(flipped) ** 2)


def gamma_membership(sys: SpinSystem, first: Ket, second: Ket,
                     tol: Optional[float] = None) -> tuple[bool, float]:
    """Whether |first, second> lies in Γ_W, with the residual of the defining equation."""
    sys.require_even()
    tol = settings.GAMMA_TOL if tol is None else tol
    first = as_ket(first, "first")
    second = as_ket(second, "second")
    for name, ket in (("first", first), ("second", second)):
        if ket.shape[0] != sys.N:
            raise InvalidInputError(f"{name} factor has dimension {ket.shape[0]}, expected {sys.N}")
        norm = npl.norm(ket)
        if abs(norm - 1.0) > settings.NORMALIZATION_TOL:
            raise InvalidInputError(f"{name} factor is not normalized (norm {norm:.12g})")
    residual = _gamma_residual(sys, first, second)
    return abs(residual) <= tol, residual


def _gamma_vector(sys: SpinSystem, first: Ket, second: Ket) -> GammaVector:
    n1, n2 = npl.norm(first), npl.norm(second)
    if n1 == 0.0 or n2 == 0.0:
        return GammaVector(first=first, second=second, residual=None)
    return GammaVector(first=first, second=second,
                       residual=_gamma_residual(sys, first / n1, second / n2))


def decompose_into_gamma(sys: SpinSystem, first: Ket, second: Ket) -> list[GammaTerm]:
    """
    Write |φ1> ⊗ |φ2> as four Γ_W product vectors.

    With ϕ1 = θφ1 + φ2 and ϕ2 = iθφ1 + φ2:
        φ1⊗φ2 = -½ θϕ1⊗ϕ1 - ½i θϕ2⊗ϕ2 - ½(1+i) φ1⊗θφ1 + ½(1+i) θφ2⊗φ2
    Factors are returned unnormalized; zero factors are kept with their
    coefficient and flagged through a None residual.
    """
    sys.require_even()
    first = as_ket(first, "first")
    second = as_ket(second, "second")
    if first.shape[0] != sys.N or second.shape[0] != sys.N:
        raise InvalidInputError(f"Both factors must have dimension {sys.N}")

    theta_first = theta_ket(sys, first)
    mix1 = theta_first + second
    mix2 = 1j * theta_first + second
    pairs = [
        (-0.5, theta_ket(sys, mix1), mix1),
        (-0.5j, theta_ket(sys, mix2), mix2),
        (-0.5 * (1 + 1j), first, theta_first),
        (0.5 * (1 + 1j), theta_ket(sys, second), second),
    ]
    terms = [GammaTerm(coefficient=c, vector=_gamma_vector(sys, a, b)) for c, a, b in pairs]
    degenerate = sum(1 for t in terms if t.vector.is_zero)
    if degenerate:
        logger.warning(f"Gamma decomposition produced {degenerate} zero product vector(s)")
    return terms


def recombine(terms: Sequence[GammaTerm]) -> Ket:
    """Σ coefficient · first ⊗ second."""
    return sum(t.coefficient * t.vector.product() for t in terms)


def sample_gamma_vectors(sys: SpinSystem, count: int, rng: np.random.Generator,
                         real_amplitudes: bool = False) -> list[Ket]:
    """Alternate φ⊗θφ and θφ⊗φ over random φ."""
    vectors = []
    for index in range(count):
        if real_amplitudes:
            phi = rng.standard_normal(sys.N).astype(complex)
            phi /= npl.norm(phi)
        else:
            phi = random_ket(sys.N, rng)
        theta_phi = theta_ket(sys, phi)
        if index % 2 == 0:
            vectors.append(np.kron(phi, theta_phi))
        else:
            vectors.append(np.kron(theta_phi, phi))
    return vectors


def theta2_invariance_residual(witness: Witness) -> float:
    """‖ϑ2 W - W‖_max."""
    N = witness.N
    flipped = apply_local_map(witness.matrix, (N, N), time_reversal_op(N))
    return max_norm(flipped - witness.matrix)


def verify_optimality(sys: SpinSystem, samples: Optional[int] = None, seed: Optional[int] = None,
                      tol: Optional[float] = None, real_amplitudes: bool = False) -> OptimalityResult:
    """Span rank of sampled Γ_W vectors and the ϑ2 W = W check."""
    sys.require_even(min_dim=4)
    N = sys.N
    samples = 2 * N * N if samples is None else samples
    if samples < N * N:
        raise InvalidInputError(f"Need at least N^2={N * N} samples, got {samples}")
    seed = settings.DEFAULT_SEED if seed is None else seed
    tol = settings.CROSS_CHECK_TOL if tol is None else tol

    witness = build_witness(N)
    rng = np.random.default_rng(seed)
    vectors = sample_gamma_vectors(sys, samples, rng, real_amplitudes=real_amplitudes)
    rank = span_rank(vectors)
    residual = theta2_invariance_residual(witness)
    result = OptimalityResult(
        N=N, samples=samples, rank=rank,
        invariance_residual=residual, theta2_invariant=residual <= tol,
    )
    logger.info(
        f"Optimality N={N}: rank {rank}/{N * N}, ϑ2 residual {residual:.2e}, "
        f"confirmed={result.confirmed}"
    )
    return result
