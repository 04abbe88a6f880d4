"""
Battery Models Module

Constructors for the quantum batteries R: equidistant ladders, degenerate
ladders (Λ, V and general degeneracy patterns), spin ensembles in Dicke states
and truncated harmonic oscillators in thermal or squeezed thermal states.
Every battery has a single transition frequency nu0.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence, Tuple, Union
import numpy as np
import scipy.linalg
from src.core.operator_core import (
    DensityMatrix,
    EigenoperatorSet,
    HermitianOperator,
    annihilation,
    dagger,
    eigenoperator_residuals,
    eigenoperators,
    embed,
    expectation,
    ground_state,
    number_operator,
    sigma_minus,
    sigma_x,
    thermal_state,
)
from src.utils.config import ConfigManager
from src.utils.errors import DomainError, NumericalError, ShapeError, TruncationError
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)

StateLike = Union[DensityMatrix, np.ndarray, Sequence]


class BatteryKind(str, Enum):
    LADDER = 'ladder'
    DEGENERATE_LADDER = 'degenerate_ladder'
    SPIN_ENSEMBLE = 'spin_ensemble'
    TRUNCATED_OSCILLATOR = 'truncated_oscillator'


@dataclass(frozen=True)
class BatterySpec:
    """
    Battery description

    Attributes:
        kind: Battery family
        nu0: Transition frequency shared by every level spacing
        levels: Number of levels (ladder)
        amplitudes: Transition amplitudes c_{n,n+1} (ladder, default all 1)
        degeneracies: l_n for levels n = 0..N (degenerate ladder)
        spins: Number of two-level systems (spin ensemble)
        n_cut: Fock cutoff (truncated oscillator)
    """

    kind: BatteryKind
    nu0: float
    levels: int = 2
    amplitudes: Tuple[float, ...] = ()
    degeneracies: Tuple[int, ...] = ()
    spins: int = 1
    n_cut: int = 20

    def __post_init__(self):
        object.__setattr__(self, 'kind', BatteryKind(self.kind))
        object.__setattr__(self, 'amplitudes', tuple(float(c) for c in self.amplitudes))
        object.__setattr__(self, 'degeneracies', tuple(int(l) for l in self.degeneracies))

        if not self.nu0 > 0:
            raise DomainError(f"Battery frequency nu0 must be positive, got {self.nu0}")

        if self.kind == BatteryKind.LADDER:
            if self.levels < 2:
                raise DomainError(f"Ladder needs at least 2 levels, got {self.levels}")
            if self.amplitudes and len(self.amplitudes) != self.levels - 1:
                raise ShapeError(f"Ladder with {self.levels} levels needs {self.levels - 1} amplitudes")
            if any(c == 0 for c in self.amplitudes):
                raise DomainError("Ladder transition amplitudes must be non-zero")
        elif self.kind == BatteryKind.DEGENERATE_LADDER:
            if len(self.degeneracies) < 2:
                raise DomainError("Degenerate ladder needs degeneracies for at least 2 levels")
            if any(l < 1 for l in self.degeneracies):
                raise DomainError(f"Degeneracies must be >= 1, got {list(self.degeneracies)}")
        elif self.kind == BatteryKind.SPIN_ENSEMBLE:
            if self.spins < 1:
                raise DomainError(f"Spin ensemble needs at least one spin, got {self.spins}")
        elif self.kind == BatteryKind.TRUNCATED_OSCILLATOR:
            if self.n_cut < 3:
                raise DomainError(f"Fock cutoff must be at least 3, got {self.n_cut}")

    @property
    def dim(self) -> int:
        if self.kind == BatteryKind.LADDER:
            return self.levels
        if self.kind == BatteryKind.DEGENERATE_LADDER:
            return sum(self.degeneracies)
        if self.kind == BatteryKind.SPIN_ENSEMBLE:
            return 2 ** self.spins
        return self.n_cut


@dataclass(frozen=True, eq=False)
class BatteryInstance:
    """Battery operators together with its current state"""

    spec: BatterySpec
    hamiltonian: HermitianOperator
    coupling_observable: HermitianOperator
    ladder: EigenoperatorSet = field(repr=False)
    state: DensityMatrix = field(repr=False)

    @property
    def lowering(self) -> np.ndarray:
        """A_R(nu0)"""
        return self.ladder.get(self.spec.nu0)

    def transition_weights(self, state: Optional[StateLike] = None) -> Tuple[float, float]:
        """
        Collective transition weights

        Returns:
            (<A A†>, <A† A>) with A = A_R(nu0)
        """
        rho = self.state if state is None else state
        a = self.lowering
        return expectation(a @ dagger(a), rho), expectation(dagger(a) @ a, rho)

    def energy(self, state: Optional[StateLike] = None) -> float:
        return expectation(self.hamiltonian, self.state if state is None else state)

    def with_state(self, state: StateLike) -> 'BatteryInstance':
        return replace(self, state=_as_state(state, self.spec.dim))


def _as_state(state: StateLike, dim: int) -> DensityMatrix:
    rho = state if isinstance(state, DensityMatrix) else DensityMatrix(np.asarray(state, dtype=complex))
    if rho.dim != dim:
        raise ShapeError(f"State dimension {rho.dim} does not match battery dimension {dim}")
    return rho


def _assemble(spec: BatterySpec, hamiltonian: np.ndarray, observable: np.ndarray,
              state: StateLike) -> BatteryInstance:
    h_op = HermitianOperator(hamiltonian)
    a_op = HermitianOperator(observable)
    rho = _as_state(state, spec.dim)
    ladder = eigenoperators(a_op, h_op)

    residuals = eigenoperator_residuals(ladder, a_op, h_op)
    numerics = ConfigManager.get_numerics()
    if residuals['reconstruction'] > numerics.tol_herm * max(1.0, spec.dim) or \
            residuals['commutator'] > numerics.tol_eig * max(1.0, spec.nu0 * spec.dim):
        raise NumericalError(f"Battery ladder invariants violated: {residuals}")

    logger.debug(f"Battery {spec.kind.value} built: dim={spec.dim}, frequencies={ladder.frequencies}")
    return BatteryInstance(spec=spec, hamiltonian=h_op, coupling_observable=a_op, ladder=ladder, state=rho)


def ladder_operators(spec: BatterySpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Free Hamiltonian H_R and coupling observable A_R of a battery family

    Args:
        spec: Battery description

    Returns:
        (H_R, A_R) as dense matrices
    """
    nu0 = spec.nu0

    if spec.kind == BatteryKind.LADDER:
        amplitudes = spec.amplitudes or (1.0,) * (spec.levels - 1)
        lowering = np.diag(np.asarray(amplitudes, dtype=complex), k=1)
        return nu0 * number_operator(spec.levels), lowering + dagger(lowering)

    if spec.kind == BatteryKind.DEGENERATE_LADDER:
        offsets = np.concatenate([[0], np.cumsum(spec.degeneracies)])
        dim = int(offsets[-1])
        energies = np.concatenate([np.full(l, n * nu0) for n, l in enumerate(spec.degeneracies)])
        lowering = np.zeros((dim, dim), dtype=complex)
        # uniform amplitudes <n-1,k|A_R|n,k'> = 1
        for n in range(1, len(spec.degeneracies)):
            lowering[offsets[n - 1]:offsets[n], offsets[n]:offsets[n + 1]] = 1.0
        return np.diag(energies).astype(complex), lowering + dagger(lowering)

    if spec.kind == BatteryKind.SPIN_ENSEMBLE:
        excitation = dagger(sigma_minus()) @ sigma_minus()
        h_r = sum(embed(excitation, i, spec.spins) for i in range(spec.spins))
        a_r = sum(embed(sigma_x(), i, spec.spins) for i in range(spec.spins))
        return nu0 * h_r, a_r

    a = annihilation(spec.n_cut)
    return nu0 * number_operator(spec.n_cut), a + dagger(a)


def build_battery(spec: BatterySpec, state: StateLike) -> BatteryInstance:
    """Build any battery family from its spec and a state"""
    h_r, a_r = ladder_operators(spec)
    return _assemble(spec, h_r, a_r, state)


def build_ladder(levels: int, amplitudes: Sequence[float], nu0: float, state: StateLike) -> BatteryInstance:
    spec = BatterySpec(kind=BatteryKind.LADDER, nu0=nu0, levels=levels, amplitudes=tuple(amplitudes))
    return build_battery(spec, state)


def build_degenerate_ladder(N: int, degeneracies: Sequence[int], nu0: float,
                            state: StateLike) -> BatteryInstance:
    """
    Degenerate ladder with N+1 levels and uniform transition amplitudes

    Args:
        N: Index of the top level
        degeneracies: l_n for n = 0..N
        nu0: Level spacing
        state: Battery state of dimension sum(l_n)

    Returns:
        BatteryInstance
    """
    if len(degeneracies) != N + 1:
        raise ShapeError(f"Expected {N + 1} degeneracies for N={N}, got {len(degeneracies)}")
    spec = BatterySpec(kind=BatteryKind.DEGENERATE_LADDER, nu0=nu0, degeneracies=tuple(degeneracies))
    return build_battery(spec, state)


def build_spin_ensemble(N: int, nu0: float, state: StateLike) -> BatteryInstance:
    spec = BatterySpec(kind=BatteryKind.SPIN_ENSEMBLE, nu0=nu0, spins=N)
    return build_battery(spec, state)


def build_truncated_oscillator(n_cut: int, nu0: float, state: StateLike) -> BatteryInstance:
    spec = BatterySpec(kind=BatteryKind.TRUNCATED_OSCILLATOR, nu0=nu0, n_cut=n_cut)
    return build_battery(spec, state)


def thermal_battery(spec: BatterySpec, T: float) -> BatteryInstance:
    """Battery in the Gibbs state of its own Hamiltonian"""
    h_r, a_r = ladder_operators(spec)
    if T == 0:
        rho = ground_state(h_r)
    else:
        rho = thermal_state(h_r, T)
    if spec.kind == BatteryKind.TRUNCATED_OSCILLATOR:
        check_truncation(rho.matrix)
    return _assemble(spec, h_r, a_r, rho)


def build_dicke_state(N: int, n_e: int) -> DensityMatrix:
    """
    Symmetric Dicke state |N, n_e> in the 2^N product basis

    Args:
        N: Number of two-level systems
        n_e: Number of delocalized excitations

    Returns:
        Pure DensityMatrix
    """
    if N < 1 or not 0 <= n_e <= N:
        raise DomainError(f"Dicke state needs 0 <= n_e <= N with N >= 1, got N={N}, n_e={n_e}")

    vector = np.zeros(2 ** N, dtype=complex)
    for excited in combinations(range(N), n_e):
        # spin 0 is the most significant bit, bit value 1 = excited
        index = sum(1 << (N - 1 - site) for site in excited)
        vector[index] = 1.0
    return DensityMatrix.from_vector(vector)


def check_truncation(rho: np.ndarray) -> float:
    """
    Population of the two highest Fock levels

    Raises:
        TruncationError: when above trunc_tol
    """
    populations = np.real(np.diag(rho))
    top = float(np.sum(populations[-2:]))
    tol = ConfigManager.get_numerics().trunc_tol
    if top >= tol:
        raise TruncationError(
            f"Top two Fock levels hold population {top:.3e} >= {tol:.1e}; increase N_cut (={len(populations)})"
        )
    return top


def squeeze_operator(dim: int, r: float) -> np.ndarray:
    """S(r) = exp((r/2)(a^2 - a†^2)) on a truncated Fock space"""
    a = annihilation(dim)
    return scipy.linalg.expm(0.5 * r * (a @ a - dagger(a) @ dagger(a)))


def build_squeezed_thermal(N_cut: int, nu0: float, T_R: float, r: float) -> BatteryInstance:
    """
    Truncated oscillator in the squeezed thermal state S(r) rho_th(T_R) S†(r)

    The state is built on a padded Fock space and projected onto N_cut levels.

    Args:
        N_cut: Fock cutoff of the battery
        nu0: Oscillator frequency
        T_R: Temperature of the thermal state before squeezing (0 gives the vacuum)
        r: Squeezing factor

    Returns:
        BatteryInstance
    """
    if T_R < 0 or r < 0:
        raise DomainError(f"Squeezed thermal state needs T_R >= 0 and r >= 0, got T_R={T_R}, r={r}")

    padded = 2 * N_cut + 20
    h_padded = nu0 * number_operator(padded)
    rho_th = ground_state(h_padded).matrix if T_R == 0 else thermal_state(h_padded, T_R).matrix
    squeeze = squeeze_operator(padded, r)
    rho = squeeze @ rho_th @ dagger(squeeze)

    truncated = rho[:N_cut, :N_cut]
    check_truncation(truncated)
    truncated = truncated / np.trace(truncated).real
    truncated = 0.5 * (truncated + dagger(truncated))

    spec = BatterySpec(kind=BatteryKind.TRUNCATED_OSCILLATOR, nu0=nu0, n_cut=N_cut)
    return build_battery(spec, truncated)


def squeezed_thermal_energy(T_R: float, r: float, nu0: float) -> float:
    """E_R = nu0 [sinh^2 r + (sinh^2 r + cosh^2 r) / (e^{nu0/T_R} - 1)]"""
    occupation = 0.0 if T_R == 0 else 1.0 / np.expm1(nu0 / T_R)
    return float(nu0 * (np.sinh(r) ** 2 + (np.sinh(r) ** 2 + np.cosh(r) ** 2) * occupation))


def phaseonium_state(rho_excited: float, rho_b: float, rho_c: float, coherence: complex) -> DensityMatrix:
    """
    Λ-system state in the degenerate-ladder basis (|b>, |c>, |a>)

    Args:
        rho_excited: Population of the excited state |a>
        rho_b: Population of |b>
        rho_c: Population of |c>
        coherence: <b|rho|c>

    Returns:
        DensityMatrix
    """
    return DensityMatrix(np.array([
        [rho_b, coherence, 0],
        [np.conj(coherence), rho_c, 0],
        [0, 0, rho_excited],
    ], dtype=complex))


def v_system_state(rho_ground: float, rho_1: float, rho_2: float, coherence: complex) -> DensityMatrix:
    """V-system state in the basis (|g>, |e1>, |e2>) with coherence <e1|rho|e2>"""
    return DensityMatrix(np.array([
        [rho_ground, 0, 0],
        [0, rho_1, coherence],
        [0, np.conj(coherence), rho_2],
    ], dtype=complex))
