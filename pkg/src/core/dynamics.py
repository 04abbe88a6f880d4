"""
Dynamics Module

Second-order master equation for the medium-battery pair SR, written in the
interaction picture with respect to H_SR = H_S + H_R + g N_S A_R. The bath
couples to A_S, whose interaction-picture decomposition is expanded in g/nu0:
dressed medium operators at ±omega0, sideband operators at ±omega0 ± nu0 and
the t-linear corrections of the Lambda_t map.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union
import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from src.baths.base import BathSide, BathSpec
from src.core.battery_models import ladder_operators
from src.core.machine_analytics import (
    HeatFlowReport,
    MachineConfig,
    MediumKind,
    Regime,
    battery_energy_rate_from_weights,
    classify_regime,
    error_order,
    medium_operators,
    timescales,
)
from src.core.operator_core import (
    DensityMatrix,
    commutator,
    dagger,
    eigenoperators,
    expectation,
    identity,
    partial_trace,
    sandwich,
    thermal_state,
    unvectorize,
    vectorize,
    von_neumann_entropy,
)
from src.utils.config import ConfigManager
from src.utils.errors import (
    DomainError,
    PositivityError,
    ShapeError,
    StiffnessError,
    UnsupportedBatteryError,
    ValidityError,
)
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)

TimeLike = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class SecularTerm:
    """Jump operator of the secular part at Bohr frequency `frequency`"""

    frequency: float
    operator: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class LambdaTerms:
    """Bare operators A_S(omega) ⊗ I and corrections C(omega) entering the Lambda_t map"""

    frequencies: Tuple[float, ...]
    bare: Dict[float, np.ndarray] = field(repr=False)
    corrections: Dict[float, np.ndarray] = field(repr=False)


@dataclass(frozen=True, eq=False)
class DissipatorSet:
    """Operators of the second-order master equation on the joint S ⊗ R space"""

    secular_terms: Tuple[SecularTerm, ...]
    lambda_terms: LambdaTerms
    dims: Tuple[int, int]
    joint_hamiltonian: np.ndarray = field(repr=False)
    medium_hamiltonian: np.ndarray = field(repr=False)
    battery_hamiltonian: np.ndarray = field(repr=False)
    battery_lowering: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]

    def operators_at(self, frequency: float) -> List[np.ndarray]:
        return [term.operator for term in self.secular_terms if np.isclose(term.frequency, frequency)]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of the master equation"""

    config: MachineConfig
    times: np.ndarray
    joint_states: List[np.ndarray] = field(repr=False)
    battery_states: List[DensityMatrix] = field(repr=False)
    reports: List[HeatFlowReport] = field(repr=False)
    entropies: np.ndarray = field(repr=False)
    battery_energies: np.ndarray = field(repr=False)
    medium_energies: np.ndarray = field(repr=False)
    beta_app: np.ndarray = field(repr=False)
    battery_entropy_rates: np.ndarray = field(repr=False)
    joint_entropy_rates: np.ndarray = field(repr=False)
    max_trace_error: float = 0.0
    psd_clips: int = 0

    @property
    def transient(self) -> np.ndarray:
        tau_es, _ = timescales(self.config)
        return self.times < ConfigManager.get_numerics().transient_tau_es * tau_es

    @property
    def valid(self) -> np.ndarray:
        _, tau_r = timescales(self.config)
        return self.times <= ConfigManager.get_numerics().validity_tau_r * tau_r

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(report, name) for report in self.reports], dtype=float)


@dataclass(frozen=True)
class DischargeCurve:
    times: np.ndarray
    energies: np.ndarray
    beta_app: np.ndarray


def _battery_ladder(config: MachineConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """H_R, A_R and A_R(nu0) of a single-frequency battery"""
    h_r, a_r = ladder_operators(config.battery)
    ladder = eigenoperators(a_r, h_r)
    nu0 = config.nu0

    unsupported = [nu for nu in ladder.frequencies if not np.isclose(abs(nu), nu0, rtol=1e-9, atol=ladder.tol_freq)]
    if unsupported or not ladder.has(nu0):
        raise UnsupportedBatteryError(
            f"Battery must exchange energy at ±{nu0:g} only, found frequencies {list(ladder.frequencies)}"
        )
    return h_r, a_r, ladder.get(nu0)


def build_dissipators(config: MachineConfig) -> DissipatorSet:
    """
    Dressed medium operators, sideband operators and Lambda_t corrections

    Args:
        config: Machine with a single-frequency battery

    Returns:
        DissipatorSet on the S ⊗ R space
    """
    medium = medium_operators(config)
    h_r, a_r, lower_r = _battery_ladder(config)
    d_s, d_r = medium.dim, h_r.shape[0]
    eye_s, eye_r = identity(d_s), identity(d_r)

    g, alpha, nu0 = config.g, config.alpha, config.nu0
    h_s = medium.hamiltonian
    n_s = alpha * h_s
    battery_ops = {nu0: lower_r, -nu0: dagger(lower_r)}
    level_sum = sum(commutator(dagger(a), a) / nu for nu, a in battery_ops.items())

    secular, bare, corrections = [], {}, {}
    for omega in (config.omega0, -config.omega0):
        a_s = medium.lowering if omega > 0 else dagger(medium.lowering)

        bracket = eye_r.astype(complex)
        medium_part = np.zeros((d_s * d_r, d_s * d_r), dtype=complex)
        for nu, a in battery_ops.items():
            bracket = bracket - (g * alpha * omega / nu) * a
            bracket = bracket - g ** 2 * (alpha * omega / nu) ** 2 * dagger(a) @ a
        for nu1, a1 in battery_ops.items():
            for nu2, a2 in battery_ops.items():
                if np.isclose(nu1 + nu2, 0.0):
                    continue
                weight = g ** 2 / (nu1 * (nu1 + nu2))
                bracket = bracket + weight * (alpha * omega) ** 2 * a2 @ a1
                medium_part -= weight * alpha * omega * np.kron(a_s @ n_s, commutator(a2, a1))

        secular.append(SecularTerm(frequency=omega, operator=np.kron(a_s, bracket) + medium_part))
        bare[omega] = np.kron(a_s, eye_r)
        corrections[omega] = 1j * g ** 2 * alpha ** 2 * np.kron(commutator(h_s @ h_s, a_s), level_sum)

        for nu, a in battery_ops.items():
            secular.append(SecularTerm(
                frequency=omega + nu,
                operator=(g * alpha * omega / nu) * np.kron(a_s, a),
            ))

    joint_hamiltonian = np.kron(h_s, eye_r) + np.kron(eye_s, h_r) + g * np.kron(n_s, a_r)
    logger.debug(f"Dissipators built: dims=({d_s}, {d_r}), {len(secular)} secular terms")

    return DissipatorSet(
        secular_terms=tuple(secular),
        lambda_terms=LambdaTerms(frequencies=(config.omega0, -config.omega0), bare=bare, corrections=corrections),
        dims=(d_s, d_r),
        joint_hamiltonian=joint_hamiltonian,
        medium_hamiltonian=np.kron(h_s, eye_r),
        battery_hamiltonian=np.kron(eye_s, h_r),
        battery_lowering=lower_r,
    )


def _with_adjoint(pairs: Sequence[Tuple[complex, np.ndarray, np.ndarray]]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Superoperators of rho -> sum c L rho R and of its Hermitian conjugate

    Returns:
        (forward, adjoint) with adjoint(rho) = sum c* R† rho L†
    """
    forward = sum(c * sandwich(left, right) for c, left, right in pairs)
    adjoint = sum(np.conj(c) * sandwich(dagger(right), dagger(left)) for c, left, right in pairs)
    return forward, adjoint


class MasterEquation:
    """
    Time-dependent generator L(t) = L_static + t sum_k (e^{i D_k t} F_k + e^{-i D_k t} F_k†)

    Each bath keeps its own pieces so that the per-bath heat flows
    Tr(L_j(t) rho H_SR) can be evaluated.
    """

    def __init__(self, config: MachineConfig, dissipators: Optional[DissipatorSet] = None,
                 lambda_map: Optional[bool] = None):
        self.config = config
        self.dissipators = dissipators or build_dissipators(config)
        self.lambda_map = ConfigManager.get_numerics().lambda_map if lambda_map is None else lambda_map
        self._static: Dict[BathSide, np.ndarray] = {}
        self._oscillating: Dict[BathSide, List[Tuple[float, np.ndarray, np.ndarray]]] = {}

        for bath in (config.bath_C, config.bath_H):
            self._static[bath.side], self._oscillating[bath.side] = self._bath_superoperators(bath)

        self._static_total = sum(self._static.values())
        self._oscillating_total = [term for terms in self._oscillating.values() for term in terms]

    @property
    def dim(self) -> int:
        return self.dissipators.dim

    def _bath_superoperators(self, bath: BathSpec):
        dim = self.dim
        eye = identity(dim)
        static = np.zeros((dim * dim, dim * dim), dtype=complex)

        for term in self.dissipators.secular_terms:
            rate = bath.Gamma(term.frequency)
            if rate == 0:
                continue
            op = term.operator
            forward, adjoint = _with_adjoint([(rate, op, dagger(op)), (-rate, dagger(op) @ op, eye)])
            static += forward + adjoint

        oscillating = []
        if not self.lambda_map:
            return static, oscillating

        lam = self.dissipators.lambda_terms
        for omega in lam.frequencies:
            slope = -1j * bath.Gamma_prime(omega)
            if slope == 0:
                continue
            a_dag = dagger(lam.bare[omega])
            correction = lam.corrections[omega]
            forward, adjoint = _with_adjoint([(slope, a_dag @ correction, eye), (-slope, correction, a_dag)])
            static += forward + adjoint

        for omega in lam.frequencies:
            rate = bath.Gamma(omega)
            if rate == 0:
                continue
            correction = lam.corrections[omega]
            for omega_p in lam.frequencies:
                a_dag_p = dagger(lam.bare[omega_p])
                correction_dag_p = dagger(lam.corrections[omega_p])
                forward, adjoint = _with_adjoint([
                    (rate, correction, a_dag_p),
                    (-rate, a_dag_p @ correction, eye),
                    (rate, lam.bare[omega], correction_dag_p),
                    (-rate, correction_dag_p @ lam.bare[omega], eye),
                ])
                oscillating.append((omega_p - omega, forward, adjoint))

        return static, oscillating

    def generator(self, t: float, side: Optional[BathSide] = None) -> np.ndarray:
        """Superoperator L(t), or L_j(t) for one bath"""
        if side is None:
            static, oscillating = self._static_total, self._oscillating_total
        else:
            side = BathSide(side)
            static, oscillating = self._static[side], self._oscillating[side]

        if not oscillating:
            return static
        total = static.copy()
        for delta, forward, adjoint in oscillating:
            phase = np.exp(1j * delta * t)
            total += t * (phase * forward + np.conj(phase) * adjoint)
        return total

    def apply(self, t: float, rho: np.ndarray, side: Optional[BathSide] = None) -> np.ndarray:
        return unvectorize(self.generator(t, side) @ vectorize(rho), self.dim)

    def heat_flow(self, t: float, rho: np.ndarray, side: BathSide) -> float:
        """Tr(L_j(t) rho H_SR)"""
        return float(np.real(np.trace(self.apply(t, rho, side) @ self.dissipators.joint_hamiltonian)))

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.generator(t) @ y


def _enforce_positivity(rho: np.ndarray, tol: float) -> Tuple[np.ndarray, bool]:
    """Clip eigenvalues in (-tol, 0); larger negative eigenvalues abort"""
    values, vectors = np.linalg.eigh(rho)
    if values.min() >= 0:
        return rho, False
    if values.min() < -tol:
        raise PositivityError(
            f"Density matrix eigenvalue {values.min():.3e} below -{tol:.1e}; reduce output_step or check validity"
        )
    values = np.clip(values, 0.0, None)
    clipped = (vectors * values) @ dagger(vectors)
    return clipped / np.real(np.trace(clipped)), True


def _matrix_log(rho: np.ndarray, floor: float) -> np.ndarray:
    values, vectors = np.linalg.eigh(0.5 * (rho + dagger(rho)))
    return (vectors * np.log(np.clip(values, floor, None))) @ dagger(vectors)


def _entropy_rate(rho: np.ndarray, rho_dot: np.ndarray, floor: float) -> float:
    """dS/dt = -Tr(rho_dot ln rho)"""
    return float(-np.real(np.trace(rho_dot @ _matrix_log(rho, floor))))


def _initial_state(config: MachineConfig, dims: Tuple[int, int], battery, medium) -> np.ndarray:
    d_s, d_r = dims
    rho_r = battery if isinstance(battery, DensityMatrix) else DensityMatrix(np.asarray(battery, dtype=complex))
    if rho_r.dim != d_r:
        raise ShapeError(f"Battery state dimension {rho_r.dim} does not match battery dimension {d_r}")

    if medium is None:
        rho_s = thermal_state(medium_operators(config).hamiltonian, config.T_C)
    else:
        rho_s = medium if isinstance(medium, DensityMatrix) else DensityMatrix(np.asarray(medium, dtype=complex))
    if rho_s.dim != d_s:
        raise ShapeError(f"Medium state dimension {rho_s.dim} does not match medium dimension {d_s}")
    return np.kron(rho_s.matrix, rho_r.matrix)


def evolve(config: MachineConfig, initial_battery, t_end: float, output_step: float,
           initial_medium=None, equation: Optional[MasterEquation] = None) -> Trajectory:
    """
    Integrate the joint state and sample flows every output_step

    Args:
        config: Machine
        initial_battery: Battery density matrix at t = 0
        t_end: Final time
        output_step: Sampling interval
        initial_medium: Medium state at t = 0 (default: thermal at T_C)
        equation: Prebuilt MasterEquation for repeated runs

    Returns:
        Trajectory

    Raises:
        PositivityError: PSD violation beyond tol_psd_dyn
        StiffnessError: the integrator failed
    """
    if not output_step > 0 or not t_end > 0:
        raise DomainError(f"t_end and output_step must be positive, got {t_end}, {output_step}")

    numerics = ConfigManager.get_numerics()
    equation = equation or MasterEquation(config)
    dissipators = equation.dissipators
    dims, dim = dissipators.dims, dissipators.dim

    steps = int(round(t_end / output_step))
    times = output_step * np.arange(steps + 1)
    rho = _initial_state(config, dims, initial_battery, initial_medium)
    states = [rho]
    clips, trace_error = 0, 0.0

    logger.info(f"Evolving SR (dim={dim}) to t={t_end:g} in {steps} output steps with {numerics.method}")
    for k in range(1, steps + 1):
        solution = solve_ivp(
            equation.rhs,
            (times[k - 1], times[k]),
            vectorize(rho),
            method=numerics.method,
            rtol=numerics.rtol,
            atol=numerics.atol,
        )
        if not solution.success:
            raise StiffnessError(f"Integrator failed at t={times[k - 1]:g}: {solution.message}")

        rho = unvectorize(solution.y[:, -1], dim)
        rho = 0.5 * (rho + dagger(rho))
        trace = float(np.real(np.trace(rho)))
        trace_error = max(trace_error, abs(trace - 1.0))
        rho, clipped = _enforce_positivity(rho / trace, numerics.tol_psd_dyn)
        clips += int(clipped)
        states.append(rho)

    if clips:
        logger.debug(f"Clipped {clips} slightly negative spectra")
    if trace_error > 1e-8:
        logger.warning(f"Trace drift {trace_error:.2e} exceeds 1e-8; tighten rtol/atol")

    trajectory = _sample(config, equation, times, states, numerics.num_floor)
    trajectory = replace(trajectory, max_trace_error=trace_error, psd_clips=clips)

    production = entropy_production(trajectory)
    if production.min() < -numerics.tol_spohn:
        logger.warning(f"Entropy production reaches {production.min():.3e} < -{numerics.tol_spohn:.0e}")
    if not np.all(trajectory.valid):
        logger.warning(f"Trajectory extends beyond {numerics.validity_tau_r:g} tau_R; late rows are flagged invalid")
    logger.info(f"Evolution finished: {len(times)} rows")
    return trajectory


def _sample(config: MachineConfig, equation: MasterEquation, times: np.ndarray,
            states: List[np.ndarray], floor: float) -> Trajectory:
    dissipators = equation.dissipators
    dims = dissipators.dims
    h_r = dissipators.battery_hamiltonian
    lower_r = dissipators.battery_lowering
    up_op, down_op = lower_r @ dagger(lower_r), dagger(lower_r) @ lower_r
    band = error_order(config)

    battery_states, reports = [], []
    entropies, energies_r, energies_s, betas, battery_rates, joint_rates = [], [], [], [], [], []
    for t, rho in zip(times, states):
        rho_dot = equation.apply(t, rho)
        rho_r = partial_trace(rho, dims, keep=1)
        rho_r_dot = partial_trace(rho_dot, dims, keep=1)

        q_c = equation.heat_flow(t, rho, BathSide.COLD)
        q_h = equation.heat_flow(t, rho, BathSide.HOT)
        e_s_dot = float(np.real(np.trace(rho_dot @ dissipators.medium_hamiltonian)))
        weight_up, weight_down = expectation(up_op, rho_r), expectation(down_op, rho_r)
        e_r_dot = battery_energy_rate_from_weights(config, weight_up, weight_down)

        regime = classify_regime(q_c, e_r_dot)
        reports.append(HeatFlowReport(
            q_c=q_c,
            q_h=q_h,
            e_r_dot=e_r_dot,
            e_s_dot=e_s_dot,
            eta=_measured_efficiency(regime, q_c, q_h, e_r_dot),
            regime=regime,
            error_order=band,
        ))

        battery_states.append(DensityMatrix(rho_r))
        entropies.append(von_neumann_entropy(rho_r))
        energies_r.append(float(np.real(np.trace(rho @ h_r))))
        energies_s.append(float(np.real(np.trace(rho @ dissipators.medium_hamiltonian))))
        betas.append(_safe_beta(weight_up, weight_down, config.nu0, floor))
        battery_rates.append(_entropy_rate(rho_r, rho_r_dot, floor))
        joint_rates.append(_entropy_rate(rho, rho_dot, floor))

    return Trajectory(
        config=config,
        times=times,
        joint_states=states,
        battery_states=battery_states,
        reports=reports,
        entropies=np.array(entropies),
        battery_energies=np.array(energies_r),
        medium_energies=np.array(energies_s),
        beta_app=np.array(betas),
        battery_entropy_rates=np.array(battery_rates),
        joint_entropy_rates=np.array(joint_rates),
    )


def _measured_efficiency(regime: Regime, q_c: float, q_h: float, e_r_dot: float) -> float:
    if regime == Regime.REFRIGERATION and e_r_dot != 0:
        return q_c / -e_r_dot
    if regime == Regime.ENERGY_EXTRACTION and q_h != 0:
        return e_r_dot / q_h
    return float('nan')


def _safe_beta(weight_up: float, weight_down: float, nu0: float, floor: float) -> float:
    if weight_up <= floor or weight_down <= floor:
        return float('nan')
    return float(np.log(weight_up / weight_down) / nu0)


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    """Trajectory table with the transient and validity flags"""
    return pd.DataFrame({
        't': trajectory.times,
        'E_R': trajectory.battery_energies,
        'E_S': trajectory.medium_energies,
        'q_c': trajectory.column('q_c'),
        'q_h': trajectory.column('q_h'),
        'e_r_dot': trajectory.column('e_r_dot'),
        'eta': trajectory.column('eta'),
        'S_rho_R': trajectory.entropies,
        'beta_app': trajectory.beta_app,
        'regime': [report.regime.value for report in trajectory.reports],
        'transient': trajectory.transient,
        'valid': trajectory.valid,
    })


def entropy_rate(trajectory: Trajectory) -> np.ndarray:
    """dS(rho_R)/dt by central differences (one-sided at both ends)"""
    if len(trajectory.times) < 2:
        raise DomainError("Entropy rate needs at least two trajectory points")
    return np.gradient(trajectory.entropies, trajectory.times)


def entropy_production(trajectory: Trajectory) -> np.ndarray:
    """dS(rho_SR)/dt - q_c/T_C - q_h/T_H per row"""
    config = trajectory.config
    return (trajectory.joint_entropy_rates
            - trajectory.column('q_c') / config.T_C
            - trajectory.column('q_h') / config.T_H)


def _population_rates(config: MachineConfig, weight_up: float, weight_down: float) -> Tuple[float, float]:
    """
    Relaxation rate and source of the medium population

    The battery-dependent corrections are the sideband rates of the hot bath
    and the static part of the Lambda_t map, -g^2 alpha^2 omega0^2 <L> G'(±omega0)
    with <L> = sum_nu <[A_R†(nu), A_R(nu)]> / nu, taken in the same form the
    MasterEquation integrates.

    Returns:
        (lambda, r) with d<a†a>/dt = -lambda <a†a> + r, or (R, R_-) for a
        two-level medium with d rho_ee/dt = -R rho_ee + R_-
    """
    omega0, nu0, g, alpha = config.omega0, config.nu0, config.g, config.alpha
    cold, hot = config.bath_C, config.bath_H
    coupling = (g * alpha * omega0) ** 2
    level_sum = 2.0 * (weight_down - weight_up) / nu0
    slope_down = cold.G_prime(omega0) + hot.G_prime(omega0)
    slope_up = cold.G_prime(-omega0) + hot.G_prime(-omega0)

    if config.medium == MediumKind.TWO_LEVEL:
        rate_down = cold.G(omega0) + coupling * (
            hot.G(omega0 + nu0) * weight_down / nu0 ** 2 + slope_down * level_sum
        )
        rate_up = cold.G(-omega0) + coupling * (
            hot.G(-omega0 - nu0) * weight_up / nu0 ** 2 - slope_up * level_sum
        )
        total = rate_down + rate_up
        if rate_down <= 0 or rate_up <= 0:
            raise ValidityError(f"Medium rates R+={rate_down:.3e}, R-={rate_up:.3e} must be positive")
        return total, rate_up

    medium = medium_operators(config)
    rho_eq = thermal_state(medium.hamiltonian, config.T_C).matrix
    number = dagger(medium.lowering) @ medium.lowering
    eye = identity(number.shape[0])
    # moments entering the t-linear corrections, in the cold thermal state
    down_moment = expectation(number @ (2.0 * number - eye), rho_eq)
    up_moment = expectation((number + eye) @ (2.0 * number + eye), rho_eq)

    decay = cold.G(omega0) - cold.G(-omega0) + coupling / nu0 ** 2 * (
        hot.G(omega0 + nu0) * weight_down - hot.G(-omega0 - nu0) * weight_up
    )
    source = cold.G(-omega0) + coupling * (
        hot.G(-omega0 - nu0) * weight_up / nu0 ** 2
        - (slope_down * down_moment + slope_up * up_moment) * level_sum
    )
    if decay <= 0:
        raise ValidityError(f"Medium relaxation rate lambda = {decay:.3e} must be positive")
    return decay, source


def _battery_weights(config: MachineConfig, battery_state) -> Tuple[float, float]:
    _, _, lower_r = _battery_ladder(config)
    rho = battery_state.matrix if isinstance(battery_state, DensityMatrix) else np.asarray(battery_state)
    if rho.shape != lower_r.shape:
        raise ShapeError(f"Battery state shape {rho.shape} does not match battery dimension {lower_r.shape[0]}")
    return expectation(lower_r @ dagger(lower_r), rho), expectation(dagger(lower_r) @ lower_r, rho)


def quasi_steady_medium_population(config: MachineConfig, battery_state) -> float:
    """
    Medium population reached after a few tau_es with the battery frozen

    Returns:
        <a†a> = r/lambda for an oscillator medium, rho_ee = R_-/R for a two-level medium
    """
    rate, source = _population_rates(config, *_battery_weights(config, battery_state))
    return float(source / rate)


def medium_population_relaxation(config: MachineConfig, battery_state, initial_population: float,
                                 t: TimeLike) -> TimeLike:
    """Exponential approach e^{-lambda t} of the medium population to its quasi-steady value"""
    rate, source = _population_rates(config, *_battery_weights(config, battery_state))
    decay = np.exp(-rate * np.asarray(t, dtype=float))
    population = decay * initial_population + (1.0 - decay) * source / rate
    return float(population) if np.ndim(population) == 0 else population


def battery_discharge_curve(config: MachineConfig, initial_battery, t_end: float,
                            output_step: Optional[float] = None) -> DischargeCurve:
    """Battery energy and apparent temperature along a trajectory"""
    trajectory = evolve(config, initial_battery, t_end, output_step or t_end / 200.0)
    return DischargeCurve(
        times=trajectory.times,
        energies=trajectory.battery_energies,
        beta_app=trajectory.beta_app,
    )
