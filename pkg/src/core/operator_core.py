"""
Operator Algebra Module

Finite-dimensional complex operators: Hermitian and density matrices, spectral
decompositions, eigenoperator (ladder) extraction, thermal states and the
S ⊗ R tensor convention. Units: hbar = k_B = 1.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
import scipy.linalg
from src.utils.config import ConfigManager
from src.utils.errors import (
    DegenerateTemperatureError,
    HermiticityError,
    NumericalError,
    ShapeError,
    StateError,
)
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


def as_matrix(values) -> np.ndarray:
    """
    Convert input to a finite square complex matrix

    Args:
        values: Array-like of shape (dim, dim)

    Returns:
        Read-only complex ndarray
    """
    matrix = np.array(values, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise ShapeError(f"Expected a non-empty square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("Matrix contains NaN or Inf entries")
    matrix.setflags(write=False)
    return matrix


def dagger(matrix: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(matrix))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def hermiticity_residual(matrix: np.ndarray) -> float:
    """Largest entry of M - M† relative to the matrix scale"""
    scale = max(1.0, float(np.max(np.abs(matrix))))
    return float(np.max(np.abs(matrix - dagger(matrix)))) / scale


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian matrix (H_S, H_R, H_SR, A_S, A_R, N_S)"""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = as_matrix(self.matrix)
        tol = ConfigManager.get_numerics().tol_herm
        residual = hermiticity_residual(matrix)
        if residual > tol:
            raise HermiticityError(f"Operator is not Hermitian (residual {residual:.3e} > {tol:.1e})")
        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite state"""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = as_matrix(self.matrix)
        numerics = ConfigManager.get_numerics()

        residual = hermiticity_residual(matrix)
        if residual > numerics.tol_herm:
            raise StateError(f"State is not Hermitian (residual {residual:.3e})")

        trace = np.trace(matrix).real
        if abs(trace - 1.0) > numerics.tol_trace:
            raise StateError(f"State trace is {trace:.12g}, expected 1")

        smallest = float(np.min(np.linalg.eigvalsh(matrix)))
        if smallest < -numerics.tol_psd:
            raise StateError(f"State has negative eigenvalue {smallest:.3e}")

        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def from_vector(vector: Sequence[complex]) -> 'DensityMatrix':
        """Pure state |psi><psi| from a (not necessarily normalized) vector"""
        psi = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise StateError("Zero state vector")
        psi = psi / norm
        return DensityMatrix(np.outer(psi, np.conj(psi)))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (ascending) with their eigenprojectors"""

    eigenvalues: np.ndarray
    projectors: Tuple[np.ndarray, ...]
    tol_degen: float

    def multiplicity(self, index: int) -> int:
        return int(round(np.trace(self.projectors[index]).real))


@dataclass(frozen=True, eq=False)
class EigenoperatorSet:
    """Map from signed transition frequency nu to the ladder operator A(nu)"""

    frequencies: Tuple[float, ...]
    operators: Dict[float, np.ndarray] = field(repr=False)
    tol_freq: float = 0.0

    def get(self, nu: float) -> np.ndarray:
        """
        Look up A(nu) allowing for the frequency grouping tolerance

        Args:
            nu: Transition frequency

        Returns:
            Operator at the matching frequency, zero matrix when absent
        """
        for frequency in self.frequencies:
            if abs(frequency - nu) <= max(self.tol_freq, 1e-12 * max(1.0, abs(nu))):
                return self.operators[frequency]
        dim = next(iter(self.operators.values())).shape[0]
        return np.zeros((dim, dim), dtype=complex)

    def has(self, nu: float) -> bool:
        return any(abs(f - nu) <= max(self.tol_freq, 1e-12 * max(1.0, abs(nu))) for f in self.frequencies)

    def reconstruct(self) -> np.ndarray:
        return sum(self.operators[f] for f in self.frequencies)

    def nonzero_frequencies(self) -> List[float]:
        return [f for f in self.frequencies if abs(f) > self.tol_freq]


def default_degeneracy_tolerance(eigenvalues: np.ndarray) -> float:
    """tol_degen_rel times the spectral range (or the largest magnitude for flat spectra)"""
    rel = ConfigManager.get_numerics().tol_degen_rel
    spread = float(np.max(eigenvalues) - np.min(eigenvalues))
    if spread == 0.0:
        spread = max(1.0, float(np.max(np.abs(eigenvalues))))
    return rel * spread


def _hermitian_matrix(H) -> np.ndarray:
    if isinstance(H, HermitianOperator):
        return H.matrix
    return HermitianOperator(H).matrix


def spectral_decompose(H, tol_degen: Optional[float] = None) -> SpectralDecomposition:
    """
    Spectral decomposition with degenerate eigenvalues grouped

    Args:
        H: HermitianOperator or Hermitian array
        tol_degen: Eigenvalues closer than this share one eigenspace
                   (default: tol_degen_rel x spectral range)

    Returns:
        SpectralDecomposition with ascending distinct eigenvalues
    """
    matrix = _hermitian_matrix(H)
    try:
        values, vectors = scipy.linalg.eigh(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Eigensolver failed: {str(e)}") from e

    if tol_degen is None:
        tol_degen = default_degeneracy_tolerance(values)

    groups: List[List[int]] = [[0]]
    for k in range(1, len(values)):
        if values[k] - values[groups[-1][-1]] <= tol_degen:
            groups[-1].append(k)
        else:
            groups.append([k])

    eigenvalues = np.array([np.mean(values[g]) for g in groups])
    projectors = tuple(vectors[:, g] @ dagger(vectors[:, g]) for g in groups)

    logger.debug(f"Spectral decomposition: {len(values)} eigenvalues in {len(groups)} groups")
    return SpectralDecomposition(eigenvalues=eigenvalues, projectors=projectors, tol_degen=tol_degen)


def eigenoperators(A, H, tol_degen: Optional[float] = None) -> EigenoperatorSet:
    """
    Decompose an observable into eigenoperators of a Hamiltonian

    A(nu) = sum over eigenvalue pairs with eps' - eps = nu of Pi(eps) A Pi(eps'),
    so that [H, A(nu)] = -nu A(nu) and A(nu0) lowers the energy by nu0.

    Args:
        A: Observable (Hermitian)
        H: Hamiltonian (Hermitian)
        tol_degen: Grouping tolerance for eigenvalues and Bohr frequencies

    Returns:
        EigenoperatorSet with signed frequencies in ascending order
    """
    a_matrix = _hermitian_matrix(A)
    h_matrix = _hermitian_matrix(H)
    if a_matrix.shape != h_matrix.shape:
        raise ShapeError(f"Observable shape {a_matrix.shape} does not match Hamiltonian {h_matrix.shape}")

    decomposition = spectral_decompose(h_matrix, tol_degen)
    tol = decomposition.tol_degen
    numerics = ConfigManager.get_numerics()
    scale = max(1.0, float(np.max(np.abs(a_matrix))))

    blocks: List[Tuple[float, np.ndarray]] = []
    for i, p_i in enumerate(decomposition.projectors):
        for j, p_j in enumerate(decomposition.projectors):
            block = p_i @ a_matrix @ p_j
            if np.max(np.abs(block)) <= numerics.tol_herm * scale:
                continue
            blocks.append((decomposition.eigenvalues[j] - decomposition.eigenvalues[i], block))

    blocks.sort(key=lambda item: item[0])
    merged: List[Tuple[List[float], np.ndarray]] = []
    for nu, block in blocks:
        if merged and abs(nu - merged[-1][0][-1]) <= tol:
            merged[-1][0].append(nu)
            merged[-1] = (merged[-1][0], merged[-1][1] + block)
        else:
            merged.append(([nu], block))

    operators: Dict[float, np.ndarray] = {}
    for nus, block in merged:
        nu = float(np.mean(nus))
        if abs(nu) <= tol:
            nu = 0.0
        block = np.array(block)
        block.setflags(write=False)
        operators[nu] = block

    return EigenoperatorSet(
        frequencies=tuple(sorted(operators)),
        operators=operators,
        tol_freq=tol,
    )


def eigenoperator_residuals(eset: EigenoperatorSet, A, H) -> Dict[str, float]:
    """
    Invariant residuals of an eigenoperator set

    Returns:
        Dictionary with 'reconstruction', 'commutator' and 'pairing' residuals
    """
    a_matrix = _hermitian_matrix(A)
    h_matrix = _hermitian_matrix(H)
    reconstruction = float(np.max(np.abs(eset.reconstruct() - a_matrix)))
    commutator_residual = 0.0
    pairing = 0.0
    for nu in eset.frequencies:
        op = eset.operators[nu]
        commutator_residual = max(commutator_residual,
                                  float(np.max(np.abs(commutator(h_matrix, op) + nu * op))))
        pairing = max(pairing, float(np.max(np.abs(eset.get(-nu) - dagger(op)))))
    return {'reconstruction': reconstruction, 'commutator': commutator_residual, 'pairing': pairing}


def thermal_state(H, T: float) -> DensityMatrix:
    """
    Gibbs state exp(-H/T)/Z

    Args:
        H: Hamiltonian
        T: Temperature, any sign, np.inf for the maximally mixed state

    Returns:
        DensityMatrix
    """
    if T == 0:
        raise DegenerateTemperatureError("T = 0 has no Gibbs state; use ground_state()")

    matrix = _hermitian_matrix(H)
    try:
        values, vectors = scipy.linalg.eigh(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Eigensolver failed: {str(e)}") from e

    if np.isinf(T):
        weights = np.ones_like(values)
    else:
        shift = values.min() if T > 0 else values.max()
        weights = np.exp(-(values - shift) / T)
    weights = weights / weights.sum()

    rho = (vectors * weights) @ dagger(vectors)
    return DensityMatrix(0.5 * (rho + dagger(rho)))


def ground_state(H) -> DensityMatrix:
    """Normalized projector onto the lowest eigenspace"""
    decomposition = spectral_decompose(H)
    projector = decomposition.projectors[0]
    return DensityMatrix(projector / np.trace(projector).real)


def tensor(A, B) -> np.ndarray:
    """Kronecker product with the working medium S first"""
    a_matrix = A.matrix if hasattr(A, 'matrix') else np.asarray(A, dtype=complex)
    b_matrix = B.matrix if hasattr(B, 'matrix') else np.asarray(B, dtype=complex)
    return np.kron(a_matrix, b_matrix)


def partial_trace(rho, dims: Tuple[int, int], keep: int) -> np.ndarray:
    """
    Partial trace over a bipartite S ⊗ R space

    Args:
        rho: Matrix on the joint space
        dims: (dim_S, dim_R)
        keep: 0 keeps S, 1 keeps R

    Returns:
        Reduced matrix
    """
    matrix = rho.matrix if hasattr(rho, 'matrix') else np.asarray(rho)
    d_s, d_r = dims
    if matrix.shape != (d_s * d_r, d_s * d_r):
        raise ShapeError(f"Matrix shape {matrix.shape} does not match dims {dims}")
    reshaped = matrix.reshape(d_s, d_r, d_s, d_r)
    if keep == 0:
        return np.einsum('ijkj->ik', reshaped)
    if keep == 1:
        return np.einsum('ijil->jl', reshaped)
    raise ValueError(f"keep must be 0 or 1, got {keep}")


def expectation(op, rho) -> float:
    op_matrix = op.matrix if hasattr(op, 'matrix') else np.asarray(op)
    rho_matrix = rho.matrix if hasattr(rho, 'matrix') else np.asarray(rho)
    return float(np.real(np.trace(rho_matrix @ op_matrix)))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho ln rho, eigenvalues below num_floor dropped"""
    matrix = rho.matrix if hasattr(rho, 'matrix') else np.asarray(rho)
    floor = ConfigManager.get_numerics().num_floor
    values = np.linalg.eigvalsh(0.5 * (matrix + dagger(matrix)))
    values = values[values > floor]
    return float(-np.sum(values * np.log(values)))


# ---------------------------------------------------------------------------
# Standard operators (basis index 0 is the ground level)
# ---------------------------------------------------------------------------

def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def annihilation(dim: int) -> np.ndarray:
    """Truncated bosonic annihilation operator a|n> = sqrt(n)|n-1>"""
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim)).astype(complex)


def sigma_minus() -> np.ndarray:
    """|g><e| with |g> = index 0"""
    return np.array([[0, 1], [0, 0]], dtype=complex)


def sigma_plus() -> np.ndarray:
    return dagger(sigma_minus())


def sigma_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def sigma_z() -> np.ndarray:
    """Excited state at index 1 carries +1"""
    return np.array([[-1, 0], [0, 1]], dtype=complex)


def embed(local: np.ndarray, site: int, count: int) -> np.ndarray:
    """Place a single-site operator on site `site` of `count` identical subsystems"""
    dim = local.shape[0]
    result = np.eye(1, dtype=complex)
    for k in range(count):
        result = np.kron(result, local if k == site else identity(dim))
    return result


# ---------------------------------------------------------------------------
# Superoperators on row-major vectorized matrices, vec(A X B) = (A ⊗ B^T) vec(X)
# ---------------------------------------------------------------------------

def vectorize(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix, dtype=complex).reshape(-1)


def unvectorize(vector: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vector).reshape(dim, dim)


def left_multiplier(A: np.ndarray) -> np.ndarray:
    """Superoperator X -> A X"""
    return np.kron(A, identity(A.shape[0]))


def right_multiplier(B: np.ndarray) -> np.ndarray:
    """Superoperator X -> X B"""
    return np.kron(identity(B.shape[0]), np.transpose(B))


def sandwich(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Superoperator X -> A X B"""
    return np.kron(A, np.transpose(B))
