"""
State constructors: the Werner-type state ρ0, the family ρ(λ), members of the
bound entangled manifold, random ensembles, and threshold extraction on the
family.
"""
from enum import Enum
from typing import Optional, Sequence, Union
import numpy as np
from app.config import settings
from app.criteria import ppt_check, run_criterion
from app.exceptions import InvalidInputError, NumericalFailureError
from app.linalg import Dims, basis_ket, max_norm, outer, random_ket
from app.logger import logger
from app.models import DensityState, FamilyPoint, ManifoldSpec, ManifoldTerm
from app.schemas import Criterion, ThresholdResult
from app.spin import SpinSystem, singlet_projector, swap_operator, total_spin_projectors
from app.witnesses import build_witness, gamma_membership, witness_expectation

Seed = Union[int, Sequence[int], None]


class Ensemble(str, Enum):
    GINIBRE_MIXED = "GinibreMixed"
    PURE_HAAR = "PureHaar"
    SEPARABLE_MIXTURE = "SeparableMixture"


def _even_system(N: int) -> SpinSystem:
    sys = SpinSystem.from_dimension(N)
    sys.require_even(min_dim=4)
    return sys


def symmetric_werner_state(N: int) -> DensityState:
    """ρ0 = 2/(N(N+1)) Σ_{J odd} P_J, the normalized projector onto the symmetric subspace."""
    sys = _even_system(N)
    decomposition = total_spin_projectors(sys)
    p_sym = decomposition.combine({J: 1.0 for J in range(1, sys.two_j + 1, 2)})
    via_swap = (np.eye(N * N) + swap_operator(sys)) / 2
    deviation = max_norm(p_sym - via_swap)
    if deviation > settings.CROSS_CHECK_TOL:
        raise NumericalFailureError(f"Symmetric projector mismatch {deviation:.3e} for N={N}")
    return DensityState(matrix=2.0 / (N * (N + 1)) * p_sym, dims=(N, N))


def family_state(N: int, lam: float) -> FamilyPoint:
    """ρ(λ) = λ P0 + (1 - λ) ρ0."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidInputError(f"lambda must lie in [0, 1], got {lam}")
    sys = _even_system(N)
    rho0 = symmetric_werner_state(N).matrix
    matrix = lam * singlet_projector(sys) + (1.0 - lam) * rho0
    return FamilyPoint(N=N, lam=float(lam), state=DensityState(matrix=matrix, dims=(N, N)))


def closed_form_threshold(N: int, criterion: Criterion) -> float:
    """Analytic λ^c on the family: 0 for Φ, 1/(N+2) for PPT, 1/N otherwise."""
    criterion = Criterion(criterion)
    if criterion == Criterion.PHI:
        return 0.0
    if criterion == Criterion.PPT:
        return 1.0 / (N + 2)
    return 1.0 / N


def partial_time_reversal_spectrum(N: int, lam: float) -> np.ndarray:
    """Closed-form eigenvalues of ϑ2 ρ(λ), ascending with multiplicities expanded."""
    values = [(1.0 - 2.0 * lam) / N]
    for J in range(1, N):
        sector = ((-1) ** (J + 1) * lam + (1.0 - lam) / (N + 1)) / N
        values.extend([sector] * (2 * J + 1))
    return np.sort(np.array(values))


def family_threshold(N: int, criterion: Criterion, tol: Optional[float] = None,
                     criterion_tol: Optional[float] = None) -> ThresholdResult:
    """
    Bisect the detection threshold λ^c of a criterion on ρ(λ).

    Returns 0 when the criterion already fires at the first step λ = tol, and
    1 with detected=False when it never fires on (0, 1].
    """
    criterion = Criterion(criterion)
    tol = settings.BISECTION_TOL if tol is None else tol

    def fires(lam: float) -> bool:
        return run_criterion(family_state(N, lam).state, criterion, criterion_tol).entangled

    detected = True
    if fires(tol):
        threshold = 0.0
    elif not fires(1.0):
        threshold, detected = 1.0, False
    else:
        lo, hi = tol, 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if fires(mid):
                hi = mid
            else:
                lo = mid
        threshold = 0.5 * (lo + hi)

    result = ThresholdResult(
        criterion=criterion, N=N, threshold=threshold, detected=detected,
        closed_form=closed_form_threshold(N, criterion),
    )
    logger.info(f"Threshold N={N} {criterion.value}: {threshold:.6f} (detected={detected})")
    return result


def bound_entangled_state(spec: ManifoldSpec, tol: Optional[float] = None) -> DensityState:
    """
    ρ = ρ_ppt + Σ p_α |φ1^α, φ2^α><φ1^α, φ2^α| for Γ_W product vectors.

    Every added term has zero witness expectation and a positive partial
    transpose, so ρ stays PPT and tr(Wρ) = tr(W ρ_ppt) < 0 before normalization.
    """
    base = spec.base
    d1, d2 = base.dims
    if d1 != d2:
        raise InvalidInputError(f"Manifold construction needs equal dims, got {base.dims}")
    sys = _even_system(d2)
    witness = build_witness(d2)

    if ppt_check(base, tol).entangled:
        raise InvalidInputError("Base state is not PPT")
    if witness_expectation(witness, base) >= -settings.POSITIVITY_TOL:
        raise InvalidInputError("Base state is not detected by the witness")

    matrix = np.array(base.matrix)
    for index, term in enumerate(spec.terms):
        if term.weight < 0.0:
            raise InvalidInputError(f"Weight {index} is negative ({term.weight})")
        member, residual = gamma_membership(sys, term.first, term.second)
        if not member:
            raise InvalidInputError(
                f"Term {index} is not in Gamma_W (residual {residual:.3e})"
            )
        matrix = matrix + term.weight * outer(np.kron(term.first, term.second))

    trace = float(np.real(np.trace(matrix)))
    if spec.normalize:
        state = DensityState(matrix=matrix / trace, dims=base.dims, scale=trace)
    else:
        state = DensityState(matrix=matrix, dims=base.dims, normalized=False)

    # tr(Wρ) = tr(W ρ_ppt) / trace: small for large weights, never >= 0
    value = witness_expectation(witness, state)
    if ppt_check(state, tol).entangled or value >= 0.0:
        raise NumericalFailureError(
            f"Manifold member lost its guarantee (tr(Wρ)={value:.3e})"
        )
    logger.info(
        f"Generated bound entangled state N={d2} with {len(spec.terms)} term(s), "
        f"trace factor {trace:.6g}, tr(Wρ)={value:.6g}"
    )
    return state


def standard_manifold_terms(N: int, weights: Sequence[float]) -> tuple[ManifoldTerm, ...]:
    """φ2 = |j,m>, φ1 = |j,m> (first N weights) or |j,-m> (last N weights)."""
    if len(weights) != 2 * N:
        raise InvalidInputError(f"Expected {2 * N} weights, got {len(weights)}")
    terms = []
    for i in range(N):
        terms.append(ManifoldTerm(float(weights[i]), basis_ket(N, i), basis_ket(N, i)))
    for i in range(N):
        # index N - 1 - i carries -m
        terms.append(ManifoldTerm(float(weights[N + i]), basis_ket(N, N - 1 - i), basis_ket(N, i)))
    return tuple(terms)


def standard_manifold_member(N: int, lam_base: float, weights: Sequence[float],
                             normalize: bool = True, tol: Optional[float] = None) -> DensityState:
    """A member of the 2N-dimensional manifold built on ρ(λ_base)."""
    _even_system(N)
    window = 1.0 / (N + 2)
    if not 0.0 < lam_base <= window + 1e-12:
        raise InvalidInputError(
            f"lambda_base={lam_base} lies outside the PPT window (0, {window:.6f}]"
        )
    if any(w < 0 for w in weights):
        raise InvalidInputError("Manifold weights must be nonnegative")
    spec = ManifoldSpec(
        base=family_state(N, min(lam_base, window)).state,
        terms=standard_manifold_terms(N, weights),
        normalize=normalize,
    )
    return bound_entangled_state(spec, tol)


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.real(np.trace(rho))


def random_state(dims: Dims, ensemble: Ensemble, seed: Seed = None, k: int = 10) -> DensityState:
    """
    Random bipartite state.

    GinibreMixed: GG^†/tr(GG^†). PureHaar: projector on a Gaussian ket.
    SeparableMixture: Σ p_i ρ1^i ⊗ ρ2^i with Dirichlet weights and Ginibre factors.
    """
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 < 1 or d2 < 1:
        raise InvalidInputError(f"Invalid dims {dims}")
    ensemble = Ensemble(ensemble)
    rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
    d = d1 * d2

    if ensemble == Ensemble.GINIBRE_MIXED:
        rho = _ginibre(d, rng)
    elif ensemble == Ensemble.PURE_HAAR:
        rho = outer(random_ket(d, rng))
    else:
        if k < 1:
            raise InvalidInputError(f"Separable mixtures need k >= 1, got {k}")
        probabilities = rng.dirichlet(np.ones(k))
        rho = np.zeros((d, d), dtype=complex)
        for p in probabilities:
            rho += p * np.kron(_ginibre(d1, rng), _ginibre(d2, rng))
        rho /= np.real(np.trace(rho))
    return DensityState(matrix=(rho + rho.conj().T) / 2, dims=(d1, d2))
