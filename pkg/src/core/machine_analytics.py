"""
Machine Analytics Module

Closed-form quantities of the battery-powered thermal machine: second-order
heat flows for two-level and oscillator working media, refrigeration and
extraction conditions, maximal achievable efficiencies and the Second-Law
bound. The cold bath C is resonant with the medium at omega0, the hot bath H
with the sideband omega0 + nu0.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple
import numpy as np
from src.baths.base import BathSide, BathSpec
from src.core.battery_models import BatterySpec, StateLike, build_battery
from src.core.operator_core import (
    annihilation,
    dagger,
    expectation,
    number_operator,
    sigma_minus,
    sigma_x,
    thermal_state,
)
from src.core.thermometry import ApparentTemperature, dicke_correlations, collective_oscillator_correlations
from src.utils.config import ConfigManager
from src.utils.errors import (
    BathModelError,
    DegenerateSteadyStateError,
    DomainError,
    RegimeError,
    TrivialExtractionError,
    UndefinedTemperatureError,
    WeakCouplingError,
)
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


class MediumKind(str, Enum):
    TWO_LEVEL = 'two_level'
    TRUNCATED_OSCILLATOR = 'truncated_oscillator'


class Regime(str, Enum):
    REFRIGERATION = 'Refrigeration'
    ENERGY_EXTRACTION = 'EnergyExtraction'
    IDLE = 'Idle'


@dataclass(frozen=True, eq=False)
class MediumOperators:
    """H_S, coupling observable A_S and its lowering component A_S(omega0)"""

    hamiltonian: np.ndarray
    coupling: np.ndarray
    lowering: np.ndarray

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


@dataclass(frozen=True)
class MachineConfig:
    """
    Autonomous machine: medium S, battery R, cold bath C and hot bath H

    Attributes:
        omega0: Medium frequency, resonant with the cold bath
        nu0: Battery transition frequency
        g: Dispersive coupling strength, V_SR = g N_S A_R
        alpha: N_S = alpha H_S
        medium: Two-level or truncated-oscillator working medium
        battery: Battery description, its nu0 must match
        bath_C: Cold bath
        bath_H: Hot bath
        n_cut: Fock cutoff of an oscillator medium
    """

    omega0: float
    nu0: float
    g: float
    alpha: float
    medium: MediumKind
    battery: BatterySpec
    bath_C: BathSpec
    bath_H: BathSpec
    n_cut: int = 10

    def __post_init__(self):
        object.__setattr__(self, 'medium', MediumKind(self.medium))
        validate_machine(self)

    @property
    def T_C(self) -> float:
        return self.bath_C.temperature

    @property
    def T_H(self) -> float:
        return self.bath_H.temperature

    @property
    def medium_dim(self) -> int:
        return 2 if self.medium == MediumKind.TWO_LEVEL else self.n_cut


@dataclass(frozen=True)
class HeatFlowReport:
    """Energy flows of the machine (positive q_j: heat leaving bath j)"""

    q_c: float
    q_h: float
    e_r_dot: float
    e_s_dot: float
    eta: float
    regime: Regime
    error_order: float

    def to_dict(self) -> dict:
        return {
            'q_c': self.q_c,
            'q_h': self.q_h,
            'e_r_dot': self.e_r_dot,
            'e_s_dot': self.e_s_dot,
            'eta': self.eta,
            'regime': self.regime.value,
            'error_order': self.error_order,
        }


@dataclass(frozen=True)
class ExtractionAssessment:
    condition_met: bool
    eta_e: float
    eta_e_bound: float


@dataclass(frozen=True)
class SecondLawBound:
    """Efficiency bound from the battery entropy rate, and its entropy-flow variant"""

    eta_max: float
    eta_reversible: Optional[float] = None


def medium_operators(config: MachineConfig) -> MediumOperators:
    """
    Working-medium operators with the ground level at index 0

    TLS: H_S = omega0 sigma+ sigma-, A_S = sigma_x.
    Oscillator: H_S = omega0 a†a, A_S = a + a†, truncated at n_cut.
    """
    if config.medium == MediumKind.TWO_LEVEL:
        lowering = sigma_minus()
        return MediumOperators(
            hamiltonian=config.omega0 * dagger(lowering) @ lowering,
            coupling=sigma_x(),
            lowering=lowering,
        )

    a = annihilation(config.n_cut)
    return MediumOperators(
        hamiltonian=config.omega0 * number_operator(config.n_cut),
        coupling=a + dagger(a),
        lowering=a,
    )


def _check_temperatures(T_C: float, T_H: float):
    if not (0 < T_C < T_H) or not np.isfinite(T_H):
        raise DomainError(f"Bath temperatures must satisfy T_H > T_C > 0, got T_C={T_C}, T_H={T_H}")


def _check_window(bath: BathSpec, resonance: float, forbidden: Tuple[float, ...]):
    label = bath.side.value
    if not bath.model.contains(resonance) or bath.G(resonance) <= 0:
        raise BathModelError(f"The {label} bath has no spectral weight at its resonance {resonance:g}")
    for frequency in forbidden:
        if frequency > 0 and bath.model.contains(frequency):
            raise BathModelError(
                f"The {label} bath support {bath.model.support()} contains {frequency:g} (heat leak)"
            )


def validate_machine(config: MachineConfig) -> MachineConfig:
    """
    Check temperatures, weak coupling and the bath resonance windows

    Raises:
        DomainError: non-positive parameters or T_H <= T_C
        WeakCouplingError: g / nu0 >= weak_ratio
        BathModelError: a bath misses its resonance or covers another transition
    """
    for name in ('omega0', 'nu0', 'alpha'):
        value = getattr(config, name)
        if not value > 0 or not np.isfinite(value):
            raise DomainError(f"{name} must be positive and finite, got {value}")
    if config.g < 0:
        raise DomainError(f"g must be non-negative, got {config.g}")
    if config.medium == MediumKind.TRUNCATED_OSCILLATOR and config.n_cut < 3:
        raise DomainError(f"Oscillator medium needs n_cut >= 3, got {config.n_cut}")
    if not np.isclose(config.battery.nu0, config.nu0, rtol=1e-12, atol=0.0):
        raise DomainError(f"Battery frequency {config.battery.nu0} differs from nu0 = {config.nu0}")
    if config.bath_C.side != BathSide.COLD or config.bath_H.side != BathSide.HOT:
        raise BathModelError("bath_C must be the cold bath and bath_H the hot bath")

    _check_temperatures(config.T_C, config.T_H)

    numerics = ConfigManager.get_numerics()
    ratio = config.g / config.nu0
    if ratio >= numerics.weak_ratio:
        raise WeakCouplingError(f"g/nu0 = {ratio:.4g} is not below weak_ratio = {numerics.weak_ratio}")
    if ratio > numerics.weak_warn_ratio:
        logger.warning(f"g/nu0 = {ratio:.4g} exceeds {numerics.weak_warn_ratio}; O(g^3) corrections may be visible")

    omega0, nu0 = config.omega0, config.nu0
    sideband = omega0 + nu0
    difference = abs(omega0 - nu0)
    _check_window(config.bath_C, omega0, (sideband, difference))
    _check_window(config.bath_H, sideband, (omega0, difference))

    c_low, c_high = config.bath_C.model.support()
    h_low, h_high = config.bath_H.model.support()
    if c_low < h_high and h_low < c_high:
        raise BathModelError(f"Cold support {(c_low, c_high)} overlaps hot support {(h_low, h_high)}")

    return config


def classify_regime(q_c: float, e_r_dot: float, idle_tol: Optional[float] = None) -> Regime:
    """Refrigeration when heat leaves C, extraction when R charges, Idle inside the dead-band"""
    if idle_tol is None:
        idle_tol = ConfigManager.get_numerics().idle_tol
    if q_c > idle_tol:
        return Regime.REFRIGERATION
    if e_r_dot > idle_tol:
        return Regime.ENERGY_EXTRACTION
    return Regime.IDLE


def actual_efficiency(omega0: float, nu0: float, regime: Regime) -> float:
    """omega0/nu0 when refrigerating, nu0/(omega0 + nu0) when extracting, nan when idle"""
    regime = Regime(regime)
    if regime == Regime.REFRIGERATION:
        return omega0 / nu0
    if regime == Regime.ENERGY_EXTRACTION:
        return nu0 / (omega0 + nu0)
    return float('nan')


def timescales(config: MachineConfig) -> Tuple[float, float]:
    """
    Medium equilibration and battery evolution timescales

    Returns:
        (tau_es, tau_R) = (1/G_C(omega0), nu0^2 / (G_C(omega0) g^2)), tau_R infinite for g = 0
    """
    rate = config.bath_C.G(config.omega0)
    tau_es = 1.0 / rate
    tau_r = np.inf if config.g == 0 else config.nu0 ** 2 / (rate * config.g ** 2)
    return tau_es, float(tau_r)


def error_order(config: MachineConfig) -> float:
    """(g/nu0)^3 omega0 G_C(omega0)"""
    return float((config.g / config.nu0) ** 3 * config.omega0 * config.bath_C.G(config.omega0))


def _sideband_prefactor(config: MachineConfig) -> float:
    return (config.g * config.alpha * config.omega0 / config.nu0) ** 2


def heat_flow_from_weights(config: MachineConfig, weight_up: float, weight_down: float) -> HeatFlowReport:
    """
    Second-order flows for given battery transition weights

    Args:
        config: Machine
        weight_up: <A A†> of the battery
        weight_down: <A† A> of the battery

    Returns:
        HeatFlowReport with e_s_dot = 0
    """
    omega0, nu0 = config.omega0, config.nu0
    g_cold, g_cold_neg = config.bath_C.G(omega0), config.bath_C.G(-omega0)
    g_hot = config.bath_H.G(omega0 + nu0)

    sign = -1.0 if config.medium == MediumKind.TRUNCATED_OSCILLATOR else 1.0
    denominator = g_cold + sign * g_cold_neg
    if denominator <= 0:
        raise BathModelError(f"Cold-bath rate denominator {denominator:.3e} is not positive (KMS violated)")

    bracket = (np.exp(-omega0 / config.T_C) * weight_down
               - np.exp(-(omega0 + nu0) / config.T_H) * weight_up)
    q_c = float(omega0 * _sideband_prefactor(config) * g_cold * g_hot / denominator * bracket)
    q_h = -(omega0 + nu0) / omega0 * q_c
    e_r_dot = -(nu0 / omega0) * q_c

    regime = classify_regime(q_c, e_r_dot)
    return HeatFlowReport(
        q_c=q_c,
        q_h=float(q_h),
        e_r_dot=float(e_r_dot),
        e_s_dot=0.0,
        eta=actual_efficiency(omega0, nu0, regime),
        regime=regime,
        error_order=error_order(config),
    )


def cold_heat_flow(config: MachineConfig, battery_state: StateLike) -> HeatFlowReport:
    """
    Heat flow from the cold bath at quasi-steady state of the medium

    Args:
        config: Machine
        battery_state: Battery density matrix

    Returns:
        HeatFlowReport
    """
    battery = build_battery(config.battery, battery_state)
    weight_up, weight_down = battery.transition_weights()
    report = heat_flow_from_weights(config, weight_up, weight_down)
    logger.debug(f"Cold heat flow: q_c={report.q_c:.6e}, regime={report.regime.value}")
    return report


def battery_energy_rate_from_weights(config: MachineConfig, weight_up: float, weight_down: float) -> float:
    """
    Battery energy rate with the medium thermalized by the cold bath

    E_R_dot = -sum_{omega, nu} nu G_H(omega + nu) (g alpha omega / nu)^2
              <A_S†(omega) A_S(omega)>_eq <A_R†(nu) A_R(nu)>

    over omega in {±omega0} and nu in {±nu0}, where <A_R†(nu0) A_R(nu0)> is
    weight_down and <A_R†(-nu0) A_R(-nu0)> is weight_up.
    """
    medium = medium_operators(config)
    rho_eq = thermal_state(medium.hamiltonian, config.T_C)
    battery_weights = {config.nu0: weight_down, -config.nu0: weight_up}

    rate = 0.0
    for omega in (config.omega0, -config.omega0):
        a_s = medium.lowering if omega > 0 else dagger(medium.lowering)
        medium_weight = expectation(dagger(a_s) @ a_s, rho_eq)
        for nu, battery_weight in battery_weights.items():
            rate -= (nu * config.bath_H.G(omega + nu) * (config.g * config.alpha * omega / nu) ** 2
                     * medium_weight * battery_weight)
    return float(rate)


def battery_energy_rate(config: MachineConfig, battery_state: StateLike) -> float:
    battery = build_battery(config.battery, battery_state)
    weight_up, weight_down = battery.transition_weights()
    return battery_energy_rate_from_weights(config, weight_up, weight_down)


def refrigeration_threshold(T_C: float, T_H: float, nu0: float, beta_app: float) -> float:
    """Largest omega0 that still refrigerates: nu0 T_C/(T_H - T_C) (1 - T_H beta_app)"""
    _check_temperatures(T_C, T_H)
    return float(nu0 * T_C / (T_H - T_C) * (1.0 - T_H * beta_app))


def carnot_refrigeration_bound(T_C: float, T_H: float) -> float:
    _check_temperatures(T_C, T_H)
    return T_C / (T_H - T_C)


def carnot_extraction_bound(T_C: float, T_H: float) -> float:
    _check_temperatures(T_C, T_H)
    return 1.0 - T_C / T_H


def max_achievable_efficiency_refrigeration(T_C: float, T_H: float, beta_app: float) -> float:
    """eta_ac = T_C/(T_H - T_C) (1 - T_H beta_app)"""
    return carnot_refrigeration_bound(T_C, T_H) * (1.0 - T_H * beta_app)


def _log_ratio_correction(ratio_minus: float, ratio_plus: float) -> float:
    if not (1.0 + ratio_minus > 0 and 1.0 + ratio_plus > 0):
        raise DomainError(
            f"Log argument must be positive, got 1 + {ratio_minus:.6g} and 1 + {ratio_plus:.6g}"
        )
    return float(np.log1p(ratio_minus) - np.log1p(ratio_plus))


def max_achievable_efficiency_coherence(T_C: float, T_H: float, nu0: float, T0_beta: float,
                                        C_plus: float, C_minus: float,
                                        rho_plus: float, rho_minus: float) -> float:
    """
    Maximal achievable efficiency split into populations and coherences

    Args:
        T_C, T_H: Bath temperatures
        nu0: Battery frequency
        T0_beta: Inverse of the coherence-free apparent temperature, ln(rho-/rho+)/nu0
        C_plus, C_minus: Weighted coherence sums
        rho_plus, rho_minus: Weighted population sums

    Returns:
        T_C/(T_H - T_C) [1 - T_H T0_beta - (T_H/nu0) ln((1 + C-/rho-)/(1 + C+/rho+))]
    """
    if not (rho_plus > 0 and rho_minus > 0):
        raise DomainError(f"Population sums must be positive, got rho+={rho_plus}, rho-={rho_minus}")
    correction = _log_ratio_correction(C_minus / rho_minus, C_plus / rho_plus)
    return carnot_refrigeration_bound(T_C, T_H) * (1.0 - T_H * T0_beta - T_H / nu0 * correction)


def coherence_benefit(C_plus: float, C_minus: float, nu0: float, T0_beta: float) -> bool:
    """Coherences raise eta_ac iff C+ >= C- e^{-nu0 T0_beta}"""
    return bool(C_plus >= C_minus * np.exp(-nu0 * T0_beta))


def max_achievable_efficiency_correlation(T_C: float, T_H: float, nu0: float, T0_beta: float,
                                          c: float, n_plus: float, n_minus: float) -> float:
    """T_C/(T_H - T_C) [1 - T_H T0_beta - (T_H/nu0) ln((1 + c/n-)/(1 + c/n+))]"""
    if not (n_plus > 0 and n_minus > 0):
        raise DomainError(f"Local weights must be positive, got n+={n_plus}, n-={n_minus}")
    correction = _log_ratio_correction(c / n_minus, c / n_plus)
    return carnot_refrigeration_bound(T_C, T_H) * (1.0 - T_H * T0_beta - T_H / nu0 * correction)


def correlation_benefit(c: float, nu0: float, T0_beta: float) -> bool:
    """Correlations raise eta_ac iff c (e^{nu0 T0_beta} - 1) >= 0"""
    return bool(c * np.expm1(nu0 * T0_beta) >= 0)


def _correlated_efficiency(n_plus: float, n_minus: float, c: float,
                           T_C: float, T_H: float, nu0: float) -> float:
    if n_plus <= 0 or n_minus <= 0:
        raise UndefinedTemperatureError(
            f"Coherence-free apparent temperature undefined for n+={n_plus}, n-={n_minus}"
        )
    T0_beta = float(np.log(n_minus / n_plus) / nu0)
    return max_achievable_efficiency_correlation(T_C, T_H, nu0, T0_beta, c, n_plus, n_minus)


def dicke_max_efficiency(N: int, n_e: int, T_C: float, T_H: float, nu0: float) -> float:
    """Maximal achievable efficiency of N two-level systems in the Dicke state |N, n_e>"""
    if not 0 < n_e < N:
        raise UndefinedTemperatureError(f"Dicke state needs 0 < n_e < N, got N={N}, n_e={n_e}")
    n_plus, n_minus, c = dicke_correlations(N, n_e)
    return _correlated_efficiency(n_plus, n_minus, c, T_C, T_H, nu0)


def collective_oscillator_max_efficiency(N: int, n_e: int, T_C: float, T_H: float, nu0: float) -> float:
    """Maximal achievable efficiency of N oscillators sharing n_e >= 1 collective excitations"""
    if n_e < 1:
        raise UndefinedTemperatureError(f"Collective oscillator state needs n_e >= 1, got {n_e}")
    n_plus, n_minus, c = collective_oscillator_correlations(N, n_e)
    return _correlated_efficiency(n_plus, n_minus, c, T_C, T_H, nu0)


def extraction_condition_and_efficiency(T_C: float, T_H: float, omega0: float, nu0: float,
                                        beta_app: float) -> ExtractionAssessment:
    """
    Energy-extraction condition, actual efficiency and its upper bound

    The bound is (1 - T_C/T_H) / (1 - T_C beta_app), which equals
    (1 - T_C/T_H) T_R/(T_R - T_C) for a positive apparent temperature T_R.

    Raises:
        TrivialExtractionError: 0 < T_R <= T_C
    """
    _check_temperatures(T_C, T_H)
    if T_C * beta_app >= 1.0:
        raise TrivialExtractionError(
            f"Apparent temperature {1.0 / beta_app:.6g} does not exceed T_C = {T_C}; extraction is trivial"
        )
    threshold = refrigeration_threshold(T_C, T_H, nu0, beta_app)
    return ExtractionAssessment(
        condition_met=bool(omega0 >= threshold),
        eta_e=nu0 / (omega0 + nu0),
        eta_e_bound=float(carnot_extraction_bound(T_C, T_H) / (1.0 - T_C * beta_app)),
    )


def steady_state_apparent_temperature(omega0: float, nu0: float, T_C: float, T_H: float) -> ApparentTemperature:
    """Apparent temperature at which the battery stops exchanging energy, beta = [(omega0+nu0)/T_H - omega0/T_C]/nu0"""
    _check_temperatures(T_C, T_H)
    if not nu0 > 0 or not np.isfinite(nu0):
        raise DegenerateSteadyStateError(f"Steady state needs a finite positive nu0, got {nu0}")
    beta = ((omega0 + nu0) / T_H - omega0 / T_C) / nu0
    return ApparentTemperature(beta_app=float(beta), nu0=nu0)


def second_law_bound(T_C: float, T_H: float, entropy_rate: float, e_r_dot: float,
                     entropy_production: Optional[float] = None) -> SecondLawBound:
    """
    Efficiency bound from the battery entropy rate while discharging

    Args:
        T_C, T_H: Bath temperatures
        entropy_rate: dS(rho_R)/dt
        e_r_dot: Battery energy rate, must be negative
        entropy_production: Optional irreversible part; the entropy flow
            dS/dt - entropy_production then gives the reversible bound

    Returns:
        SecondLawBound
    """
    _check_temperatures(T_C, T_H)
    if e_r_dot >= 0:
        raise RegimeError(f"Second-Law bound needs a discharging battery, got E_R_dot = {e_r_dot:.6g}")

    carnot = carnot_refrigeration_bound(T_C, T_H)
    eta_max = carnot * (1.0 + T_H * entropy_rate / (-e_r_dot))
    eta_reversible = None
    if entropy_production is not None:
        entropy_flow = entropy_rate - entropy_production
        eta_reversible = carnot * (1.0 + T_H * entropy_flow / (-e_r_dot))
    return SecondLawBound(eta_max=float(eta_max),
                          eta_reversible=None if eta_reversible is None else float(eta_reversible))
