"""
Separability criteria producing verdicts on bipartite states.

Eigenvalue-margin criteria (PPT, reduction, Φ) report the minimum eigenvalue
of the mapped state and fire when it drops below -tol. Realignment reports
‖R(ρ)‖₁ - 1 and majorization the largest cumulative-sum violation; both fire
when the score exceeds tol.
"""
from typing import Optional
import numpy as np
from app.config import settings
from app.exceptions import UnsupportedDimensionError
from app.linalg import apply_local_map, hermitian_eigen, partial_trace, realign, trace_norm
from app.logger import logger
from app.maps import MapName, build_map
from app.models import DensityState
from app.schemas import Criterion, CriterionReport, Verdict

CRITERIA_ORDER = (
    Criterion.PPT,
    Criterion.REDUCTION1,
    Criterion.REDUCTION2,
    Criterion.PHI,
    Criterion.REALIGNMENT,
    Criterion.MAJORIZATION,
)


def _margin_report(criterion: Criterion, score: float, tol: Optional[float], detail: str) -> CriterionReport:
    tol = settings.POSITIVITY_TOL if tol is None else tol
    verdict = Verdict.ENTANGLED if score < -tol else Verdict.INCONCLUSIVE
    logger.debug(f"{criterion.value}: min eigenvalue {score:.6e} -> {verdict.value}")
    return CriterionReport(criterion=criterion, verdict=verdict, score=score, detail=detail)


def _excess_report(criterion: Criterion, score: float, tol: Optional[float], detail: str) -> CriterionReport:
    tol = settings.REALIGNMENT_TOL if tol is None else tol
    verdict = Verdict.ENTANGLED if score > tol else Verdict.INCONCLUSIVE
    logger.debug(f"{criterion.value}: excess {score:.6e} -> {verdict.value}")
    return CriterionReport(criterion=criterion, verdict=verdict, score=score, detail=detail)


def ppt_check(state: DensityState, tol: Optional[float] = None,
              via: MapName = MapName.TRANSPOSE) -> CriterionReport:
    """Minimum eigenvalue of the partial transpose (or partial time reversal)."""
    d2 = state.dims[1]
    via = MapName.TIME_REVERSAL if via == MapName.TIME_REVERSAL else MapName.TRANSPOSE
    local_map = build_map(via, d2)
    mapped = apply_local_map(state.matrix, state.dims, local_map)
    score = hermitian_eigen(mapped).min
    return _margin_report(Criterion.PPT, score, tol, f"min eig (I⊗{local_map.name.value})ρ")


def reduction_check(state: DensityState, tol: Optional[float] = None) -> tuple[CriterionReport, CriterionReport]:
    """
    Reduction criterion on both sides.

    Side 1: I ⊗ ρ2 - ρ. Side 2: (I ⊗ Λ)ρ = ρ1 ⊗ I - ρ.
    """
    d1, d2 = state.dims
    rho = state.matrix
    rho2 = partial_trace(rho, state.dims, which=1)
    side1 = np.kron(np.eye(d1), rho2) - rho
    side2 = apply_local_map(rho, state.dims, build_map(MapName.REDUCTION, d2))
    return (
        _margin_report(Criterion.REDUCTION1, hermitian_eigen(side1).min, tol, "min eig I⊗ρ2 - ρ"),
        _margin_report(Criterion.REDUCTION2, hermitian_eigen(side2).min, tol, "min eig ρ1⊗I - ρ"),
    )


def phi_check(state: DensityState, tol: Optional[float] = None) -> CriterionReport:
    """Minimum eigenvalue of (I ⊗ Φ)ρ; needs even d2 >= 4."""
    d2 = state.dims[1]
    if d2 % 2 != 0 or d2 < 4:
        raise UnsupportedDimensionError(d2, "even d2 >= 4")
    mapped = apply_local_map(state.matrix, state.dims, build_map(MapName.PHI, d2))
    return _margin_report(Criterion.PHI, hermitian_eigen(mapped).min, tol, "min eig (I⊗Φ)ρ")


def realignment_check(state: DensityState, tol: Optional[float] = None) -> CriterionReport:
    """Realignment excess ‖R(ρ)‖₁ - 1."""
    norm = trace_norm(realign(state.matrix, state.dims))
    return _excess_report(Criterion.REALIGNMENT, norm - 1.0, tol, f"‖R(ρ)‖₁ = {norm:.10g}")


def majorization_check(state: DensityState, tol: Optional[float] = None) -> CriterionReport:
    """Largest violation of λ(ρ) ≺ λ(ρ_side) over cumulative sums and both sides."""
    d = state.dim
    spectrum = np.sort(hermitian_eigen(state.matrix).eigenvalues)[::-1]
    cumulative = np.cumsum(spectrum)
    violation = -np.inf
    for which in (2, 1):
        reduced = partial_trace(state.matrix, state.dims, which=which)
        reduced_spectrum = np.zeros(d)
        values = np.sort(hermitian_eigen(reduced).eigenvalues)[::-1]
        reduced_spectrum[:values.size] = values
        violation = max(violation, float(np.max(cumulative - np.cumsum(reduced_spectrum))))
    return _excess_report(Criterion.MAJORIZATION, violation, tol, "max cumulative-sum violation")


def run_criterion(state: DensityState, criterion: Criterion, tol: Optional[float] = None) -> CriterionReport:
    """Evaluate a single criterion by name."""
    criterion = Criterion(criterion)
    if criterion == Criterion.PPT:
        return ppt_check(state, tol)
    if criterion == Criterion.REDUCTION1:
        return reduction_check(state, tol)[0]
    if criterion == Criterion.REDUCTION2:
        return reduction_check(state, tol)[1]
    if criterion == Criterion.PHI:
        return phi_check(state, tol)
    if criterion == Criterion.REALIGNMENT:
        return realignment_check(state, tol)
    return majorization_check(state, tol)


def phi_applicable(dims: tuple[int, int]) -> bool:
    return dims[1] % 2 == 0 and dims[1] >= 4


def _phi_skip_detail(d2: int) -> str:
    if d2 == 2 and build_map(MapName.PHI, d2).trivially_zero:
        return "skipped: Phi is trivially zero for d2=2"
    return "skipped: unsupported dimension"


def analyze(state: DensityState, tol: Optional[float] = None) -> list[CriterionReport]:
    """Run every applicable criterion in a fixed order."""
    reports = [ppt_check(state, tol)]
    reports.extend(reduction_check(state, tol))
    if phi_applicable(state.dims):
        reports.append(phi_check(state, tol))
    else:
        logger.debug(f"Phi criterion skipped for d2={state.dims[1]}")
        reports.append(CriterionReport(
            criterion=Criterion.PHI,
            verdict=Verdict.INCONCLUSIVE,
            score=None,
            detail=_phi_skip_detail(state.dims[1]),
            skipped=True,
        ))
    reports.append(realignment_check(state, tol))
    reports.append(majorization_check(state, tol))
    entangled = [r.criterion.value for r in reports if r.entangled]
    logger.debug(f"Analyzed {state.dims[0]}x{state.dims[1]} state: entangled by {entangled or 'none'}")
    return reports
