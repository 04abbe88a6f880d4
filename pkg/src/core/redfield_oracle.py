"""
Redfield Oracle Module

Reference generator for small machines: H_SR is diagonalized exactly, A_S ⊗ I
is split into exact eigenoperators at the dressed Bohr frequencies and the
Born-Markov (Redfield) generator is assembled as a dense Liouvillian in the
Schrödinger picture. Nothing is expanded in g, so its flows validate the
second-order closed forms.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple
import numpy as np
import pandas as pd
import scipy.linalg
from src.baths.base import BathSide, BathSpec
from src.core.battery_models import ladder_operators
from src.core.machine_analytics import (
    HeatFlowReport,
    MachineConfig,
    actual_efficiency,
    classify_regime,
    cold_heat_flow,
    error_order,
    medium_operators,
    timescales,
)
from src.core.operator_core import (
    DensityMatrix,
    EigenoperatorSet,
    SpectralDecomposition,
    dagger,
    eigenoperators,
    identity,
    left_multiplier,
    partial_trace,
    right_multiplier,
    sandwich,
    spectral_decompose,
    thermal_state,
    unvectorize,
    vectorize,
)
from src.utils.config import ConfigManager
from src.utils.errors import OracleSizeError, ShapeError
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class GlobalGenerator:
    """Redfield Liouvillian of SR together with its per-bath dissipators"""

    config: MachineConfig
    dims: Tuple[int, int]
    exact_eigenbasis: SpectralDecomposition = field(repr=False)
    jump_operators: EigenoperatorSet = field(repr=False)
    redfield_tensor: np.ndarray = field(repr=False)
    bath_tensors: Dict[BathSide, np.ndarray] = field(repr=False)
    hamiltonian: np.ndarray = field(repr=False)
    medium_hamiltonian: np.ndarray = field(repr=False)
    full_secular: bool = False

    @property
    def dimension(self) -> int:
        return self.dims[0] * self.dims[1]

    def apply(self, rho, side: Optional[BathSide] = None) -> np.ndarray:
        """d rho/dt, or the dissipative contribution of one bath"""
        matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        if matrix.shape != (self.dimension, self.dimension):
            raise ShapeError(f"State shape {matrix.shape} does not match generator dimension {self.dimension}")
        tensor = self.redfield_tensor if side is None else self.bath_tensors[BathSide(side)]
        return unvectorize(tensor @ vectorize(matrix), self.dimension)


def _bath_tensor(bath: BathSpec, jumps: EigenoperatorSet, window: float, dim: int) -> np.ndarray:
    """
    sum over (W, W') with |W - W'| <= window of
    Gamma(W) [A(W) rho A†(W') - A†(W') A(W) rho] + h.c.
    """
    eye = identity(dim)
    tensor = np.zeros((dim * dim, dim * dim), dtype=complex)
    for frequency in jumps.frequencies:
        rate = bath.Gamma(frequency)
        if rate == 0:
            continue
        a = jumps.operators[frequency]
        for partner in jumps.frequencies:
            if abs(partner - frequency) > window:
                continue
            b_dag = dagger(jumps.operators[partner])
            forward = rate * sandwich(a, b_dag) - rate * sandwich(b_dag @ a, eye)
            adjoint = np.conj(rate) * sandwich(dagger(b_dag), dagger(a)) - np.conj(rate) * sandwich(eye, dagger(b_dag @ a))
            tensor += forward + adjoint
    return tensor


def build_global_generator(config: MachineConfig, full_secular: bool = False) -> GlobalGenerator:
    """
    Exact-eigenbasis Redfield generator

    Args:
        config: Machine
        full_secular: Keep only equal-frequency pairs (global Lindblad form)

    Returns:
        GlobalGenerator

    Raises:
        OracleSizeError: dim(S) dim(R) above oracle_dim_cap
    """
    numerics = ConfigManager.get_numerics()
    medium = medium_operators(config)
    h_r, a_r = ladder_operators(config.battery)
    d_s, d_r = medium.dim, h_r.shape[0]
    dim = d_s * d_r
    if dim > numerics.oracle_dim_cap:
        raise OracleSizeError(f"Joint dimension {dim} exceeds oracle_dim_cap = {numerics.oracle_dim_cap}")

    eye_s, eye_r = identity(d_s), identity(d_r)
    medium_hamiltonian = np.kron(medium.hamiltonian, eye_r)
    hamiltonian = (medium_hamiltonian + np.kron(eye_s, h_r)
                   + config.g * config.alpha * np.kron(medium.hamiltonian, a_r))

    basis = spectral_decompose(hamiltonian)
    jumps = eigenoperators(np.kron(medium.coupling, eye_r), hamiltonian)
    window = 0.0 if full_secular else numerics.secular_window_factor * config.g

    bath_tensors = {
        bath.side: _bath_tensor(bath, jumps, window, dim)
        for bath in (config.bath_C, config.bath_H)
    }
    unitary = -1j * (left_multiplier(hamiltonian) - right_multiplier(hamiltonian))
    redfield = unitary + sum(bath_tensors.values())

    logger.debug(f"Global generator built: dim={dim}, {len(jumps.frequencies)} Bohr frequencies, window={window:g}")
    return GlobalGenerator(
        config=config,
        dims=(d_s, d_r),
        exact_eigenbasis=basis,
        jump_operators=jumps,
        redfield_tensor=redfield,
        bath_tensors=bath_tensors,
        hamiltonian=hamiltonian,
        medium_hamiltonian=medium_hamiltonian,
        full_secular=full_secular,
    )


def oracle_heat_flows(gen: GlobalGenerator, rho_SR) -> HeatFlowReport:
    """
    Heat flows Tr(D_j(rho) H_SR) from the exact per-bath dissipators

    The battery rate is the dissipative change of H_SR - H_S, i.e. of the
    battery energy including its interaction dressing.
    """
    config = gen.config
    rho_dot = gen.apply(rho_SR)
    q_c = float(np.real(np.trace(gen.apply(rho_SR, BathSide.COLD) @ gen.hamiltonian)))
    q_h = float(np.real(np.trace(gen.apply(rho_SR, BathSide.HOT) @ gen.hamiltonian)))
    e_s_dot = float(np.real(np.trace(rho_dot @ gen.medium_hamiltonian)))
    e_r_dot = q_c + q_h - e_s_dot

    regime = classify_regime(q_c, e_r_dot)
    return HeatFlowReport(
        q_c=q_c,
        q_h=q_h,
        e_r_dot=e_r_dot,
        e_s_dot=e_s_dot,
        eta=actual_efficiency(config.omega0, config.nu0, regime),
        regime=regime,
        error_order=error_order(config),
    )


def _physical(rho: np.ndarray) -> np.ndarray:
    """Hermitian, unit-trace, eigenvalues clipped at zero"""
    rho = 0.5 * (rho + dagger(rho))
    values, vectors = np.linalg.eigh(rho)
    if values.min() < 0:
        logger.debug(f"Clipping oracle eigenvalue {values.min():.3e}")
        rho = (vectors * np.clip(values, 0.0, None)) @ dagger(vectors)
    return rho / np.real(np.trace(rho))


def quasi_steady_state(gen: GlobalGenerator, battery_state, t_relax: Optional[float] = None) -> np.ndarray:
    """
    Evolve rho_S^eq(T_C) ⊗ rho_R under the exact generator for t_relax

    Args:
        gen: Global generator
        battery_state: Initial battery state
        t_relax: Relaxation time (default 20 tau_es)

    Returns:
        Joint density matrix as an ndarray
    """
    config = gen.config
    d_s, d_r = gen.dims
    rho_r = battery_state.matrix if isinstance(battery_state, DensityMatrix) else np.asarray(battery_state, dtype=complex)
    if rho_r.shape != (d_r, d_r):
        raise ShapeError(f"Battery state shape {rho_r.shape} does not match battery dimension {d_r}")

    if t_relax is None:
        tau_es, _ = timescales(config)
        t_relax = 20.0 * tau_es

    rho_s = thermal_state(medium_operators(config).hamiltonian, config.T_C).matrix
    initial = vectorize(np.kron(rho_s, rho_r))
    propagator = scipy.linalg.expm(gen.redfield_tensor * t_relax)
    return _physical(unvectorize(propagator @ initial, gen.dimension))


def compare_with_perturbative(config: MachineConfig, battery_state, g_list: Sequence[float],
                              full_secular: bool = False) -> pd.DataFrame:
    """
    Oracle minus closed-form flows over a coupling sweep

    Returns:
        DataFrame with columns g, dq_c, dq_h, de_r, slope_fit where slope_fit is
        the log-log slope of dq_c against g
    """
    rows = []
    for g in g_list:
        machine = replace(config, g=float(g))
        gen = build_global_generator(machine, full_secular=full_secular)
        rho = quasi_steady_state(gen, battery_state)
        exact = oracle_heat_flows(gen, rho)
        rho_r = _physical(partial_trace(rho, gen.dims, keep=1))
        approx = cold_heat_flow(machine, rho_r)
        rows.append({
            'g': float(g),
            'dq_c': abs(exact.q_c - approx.q_c),
            'dq_h': abs(exact.q_h - approx.q_h),
            'de_r': abs(exact.e_r_dot - approx.e_r_dot),
        })
        logger.info(f"Oracle g={g:g}: q_c exact={exact.q_c:.6e}, closed form={approx.q_c:.6e}")

    frame = pd.DataFrame(rows, columns=['g', 'dq_c', 'dq_h', 'de_r'])
    frame['slope_fit'] = _log_log_slope(frame['g'].to_numpy(), frame['dq_c'].to_numpy())
    return frame


def _log_log_slope(x: np.ndarray, y: np.ndarray) -> float:
    if len(x) < 2 or np.any(y <= 0) or np.any(x <= 0):
        return float('nan')
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
