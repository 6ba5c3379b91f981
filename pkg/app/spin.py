"""
Spin-j basis machinery: the time-reversal unitary V, the antiunitary θ,
Clebsch-Gordan coupling, total-spin projectors, the swap and the singlet.

Half-integer quantum numbers are stored doubled (two_j = 2j, two_m = 2m) so
that all bookkeeping stays in exact integer arithmetic.
"""
from dataclasses import dataclass
from functools import lru_cache
import numpy as np
from scipy.special import gammaln
from app.exceptions import InvalidInputError, UnsupportedDimensionError
from app.linalg import ComplexMatrix, Ket, as_ket
from app.logger import logger

# Basis kets |j, m> are ordered with m descending from +j to -j:
# index i carries m = j - i.

MAX_TWO_J = 99

# _LOG_FACTORIAL[n] = log(n!)
_LOG_FACTORIAL = gammaln(np.arange(1, 2 * MAX_TWO_J + 4, dtype=float))


@dataclass(frozen=True)
class SpinSystem:
    """A single spin j with N = 2j + 1 basis states."""
    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 0:
            raise InvalidInputError(f"twoJ must be a nonnegative integer, got {self.two_j!r}")
        if self.two_j > MAX_TWO_J:
            raise InvalidInputError(f"twoJ={self.two_j} exceeds the supported maximum {MAX_TWO_J}")

    @classmethod
    def from_dimension(cls, N: int) -> "SpinSystem":
        if N < 1:
            raise InvalidInputError(f"Dimension must be positive, got {N}")
        return cls(two_j=int(N) - 1)

    @property
    def N(self) -> int:
        return self.two_j + 1

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def two_m_values(self) -> list[int]:
        """Doubled m values in basis order."""
        return [self.two_j - 2 * i for i in range(self.N)]

    def require_even(self, min_dim: int = 2) -> None:
        if self.N % 2 != 0 or self.N < min_dim:
            raise UnsupportedDimensionError(self.N, f"even N >= {min_dim}")


@dataclass(frozen=True)
class TotalSpinDecomposition:
    """Projectors P_J onto total spin J = 0, ..., 2j of two spin-j particles."""
    projectors: tuple[tuple[int, ComplexMatrix], ...]

    def projector(self, J: int) -> ComplexMatrix:
        for label, p in self.projectors:
            if label == J:
                return p
        raise InvalidInputError(f"No total-spin sector J={J}")

    @property
    def labels(self) -> list[int]:
        return [label for label, _ in self.projectors]

    def combine(self, weights: dict[int, float]) -> ComplexMatrix:
        """Σ_J weights[J] P_J (missing labels count as zero)."""
        out = np.zeros_like(self.projectors[0][1])
        for label, p in self.projectors:
            out = out + weights.get(label, 0.0) * p
        return out


def build_V(sys: SpinSystem) -> ComplexMatrix:
    """<j,m'|V|j,m> = (-1)^(j-m) δ(m', -m); unitary and skew-symmetric for even N."""
    sys.require_even()
    N = sys.N
    V = np.zeros((N, N), dtype=complex)
    for i in range(N):
        # m = j - i, so j - m = i and -m sits at index N - 1 - i
        V[N - 1 - i, i] = (-1) ** i
    return V


def theta_ket(sys: SpinSystem, phi: Ket) -> Ket:
    """Time reversal θφ = V conj(φ)."""
    phi = as_ket(phi, "phi")
    if phi.shape[0] != sys.N:
        raise InvalidInputError(f"Ket of dimension {phi.shape[0]} does not match N={sys.N}")
    return build_V(sys) @ np.conj(phi)


def spin_operators(sys: SpinSystem) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
    """(jx, jy, jz) in the m-descending basis."""
    N = sys.N
    j = sys.j
    m = np.array(sys.two_m_values, dtype=float) / 2
    jz = np.diag(m).astype(complex)
    j_plus = np.zeros((N, N), dtype=complex)
    for i in range(1, N):
        j_plus[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    j_minus = j_plus.conj().T
    jx = (j_plus + j_minus) / 2
    jy = (j_plus - j_minus) / 2j
    return jx, jy, jz


def total_spin_squared(sys: SpinSystem) -> ComplexMatrix:
    """Ĵ² = (ĵ⊗I + I⊗ĵ)² on the two-particle space."""
    eye = np.eye(sys.N)
    total = np.zeros((sys.N ** 2, sys.N ** 2), dtype=complex)
    for component in spin_operators(sys):
        big = np.kron(component, eye) + np.kron(eye, component)
        total += big @ big
    return total


def _check_projection(two_j: int, two_m: int, label: str) -> None:
    if abs(two_m) > two_j or (two_j - two_m) % 2 != 0:
        raise InvalidInputError(f"{label}={two_m}/2 is not a valid projection for j={two_j}/2")


def clebsch_gordan(two_j: int, two_m1: int, two_m2: int, two_J: int, two_M: int) -> float:
    """
    Clebsch-Gordan coefficient <j,m1; j,m2 | J,M> (Condon-Shortley phase).

    All arguments are doubled quantum numbers. Uses Racah's closed-form sum
    evaluated with tabulated log-factorials.
    """
    if two_j < 0 or two_j > MAX_TWO_J:
        raise InvalidInputError(f"twoJ={two_j} out of range [0, {MAX_TWO_J}]")
    _check_projection(two_j, two_m1, "m1")
    _check_projection(two_j, two_m2, "m2")
    if two_J % 2 != 0 or two_J < 0 or two_J > 2 * two_j:
        raise InvalidInputError(f"Total spin J={two_J}/2 must be an integer in [0, {two_j}]")
    _check_projection(two_J, two_M, "M")
    if two_M != two_m1 + two_m2:
        return 0.0

    lf = _LOG_FACTORIAL
    J = two_J // 2
    M_plus, M_minus = (two_J + two_M) // 2, (two_J - two_M) // 2
    j_minus_m1, j_plus_m1 = (two_j - two_m1) // 2, (two_j + two_m1) // 2
    j_minus_m2, j_plus_m2 = (two_j - two_m2) // 2, (two_j + two_m2) // 2
    excess = (2 * two_j - two_J) // 2           # j1 + j2 - J
    total = (2 * two_j + two_J) // 2 + 1        # j1 + j2 + J + 1
    shift1 = (two_J - two_j + two_m1) // 2      # J - j2 + m1
    shift2 = (two_J - two_j - two_m2) // 2      # J - j1 - m2

    log_prefactor = 0.5 * (
        np.log(2 * J + 1) + 2 * lf[J] + lf[excess] - lf[total]
        + lf[M_plus] + lf[M_minus]
        + lf[j_minus_m1] + lf[j_plus_m1] + lf[j_minus_m2] + lf[j_plus_m2]
    )

    k_min = max(0, -shift1, -shift2)
    k_max = min(excess, j_minus_m1, j_plus_m2)
    acc = 0.0
    for k in range(k_min, k_max + 1):
        log_term = (
            lf[k] + lf[excess - k] + lf[j_minus_m1 - k] + lf[j_plus_m2 - k]
            + lf[shift1 + k] + lf[shift2 + k]
        )
        acc += (-1) ** k * np.exp(log_prefactor - log_term)
    return float(acc)


@lru_cache(maxsize=None)
def _coupling_matrix(two_j: int) -> np.ndarray:
    sys = SpinSystem(two_j)
    N = sys.N
    two_ms = sys.two_m_values
    columns = []
    for J in range(0, two_j + 1):
        for two_M in range(2 * J, -2 * J - 1, -2):
            col = np.zeros(N * N)
            for i1, two_m1 in enumerate(two_ms):
                two_m2 = two_M - two_m1
                if abs(two_m2) > two_j:
                    continue
                i2 = (two_j - two_m2) // 2
                col[i1 * N + i2] = clebsch_gordan(two_j, two_m1, two_m2, 2 * J, two_M)
            columns.append(col)
    matrix = np.column_stack(columns)
    matrix.setflags(write=False)
    logger.debug(f"Built {N * N}x{N * N} coupling matrix for twoJ={two_j}")
    return matrix


def coupling_matrix(sys: SpinSystem) -> np.ndarray:
    """
    Real orthogonal change of basis from |m1, m2> to |J, M>.

    Rows follow the product basis (i1 * N + i2); columns run over J ascending
    and, within each J, over M descending.
    """
    return _coupling_matrix(sys.two_j)


@lru_cache(maxsize=None)
def _projectors(two_j: int) -> TotalSpinDecomposition:
    C = _coupling_matrix(two_j)
    out = []
    start = 0
    for J in range(0, two_j + 1):
        width = 2 * J + 1
        block = C[:, start:start + width]
        p = (block @ block.T).astype(complex)
        p.setflags(write=False)
        out.append((J, p))
        start += width
    return TotalSpinDecomposition(projectors=tuple(out))


def total_spin_projectors(sys: SpinSystem) -> TotalSpinDecomposition:
    """P_J = Σ_M |J,M><J,M| built from the coupled basis."""
    return _projectors(sys.two_j)


def swap_operator(sys: SpinSystem) -> ComplexMatrix:
    """F|a>⊗|b> = |b>⊗|a>."""
    N = sys.N
    F = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for k in range(N):
            F[i * N + k, k * N + i] = 1.0
    return F


def singlet_projector(sys: SpinSystem) -> ComplexMatrix:
    """Rank-1 projector onto the J = 0 singlet."""
    return total_spin_projectors(sys).projector(0)
