"""
Thermometry Module

Apparent temperature of a battery, beta = ln(<A A†>/<A† A>) / nu0 with
A = A_R(nu0), and its closed forms for coherent, correlated, non-thermal,
squeezed and energy-constrained batteries. The inverse temperature beta is the
canonical representation: beta = 0 is an infinite apparent temperature.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple
import numpy as np
from scipy.optimize import brentq
from src.core.battery_models import BatteryInstance, BatteryKind
from src.utils.config import ConfigManager
from src.utils.errors import DomainError, UndefinedTemperatureError
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


@dataclass(frozen=True)
class ApparentTemperature:
    """Inverse apparent temperature of a battery with transition frequency nu0"""

    beta_app: float
    nu0: float

    def __post_init__(self):
        if not np.isfinite(self.beta_app):
            raise UndefinedTemperatureError(
                f"Apparent temperature is zero (beta = {self.beta_app}); it is not representable"
            )

    @property
    def temperature(self) -> float:
        """Apparent temperature, +inf when beta_app == 0"""
        if self.beta_app == 0:
            return np.inf
        return 1.0 / self.beta_app

    @property
    def is_negative(self) -> bool:
        return self.beta_app < 0


@dataclass(frozen=True)
class InvertedRegimeMarker(ApparentTemperature):
    """Maximal apparent temperature lies on the negative branch (E_R > nu0)"""

    energy: float = 0.0


@dataclass(frozen=True)
class CoherenceDecomposition:
    """Level populations and coherence sums of a degenerate-ladder state"""

    populations: Tuple[float, ...]
    coherence_sums: Tuple[float, ...]
    degeneracies: Tuple[int, ...]
    c_plus: float
    c_minus: float
    rho_plus: float
    rho_minus: float


def _log_ratio(numerator: float, denominator: float, nu0: float) -> float:
    floor = ConfigManager.get_numerics().num_floor
    if numerator <= floor or denominator <= floor:
        raise UndefinedTemperatureError(
            f"Transition weights must exceed {floor:.0e}, got {numerator:.6g} and {denominator:.6g}"
        )
    return (np.log(numerator) - np.log(denominator)) / nu0


def apparent_temperature(battery: BatteryInstance) -> ApparentTemperature:
    """
    Apparent temperature from the general definition

    Args:
        battery: Battery with its current state

    Returns:
        ApparentTemperature with beta = ln(<A A†>/<A† A>) / nu0
    """
    up, down = battery.transition_weights()
    beta = _log_ratio(up, down, battery.spec.nu0)
    logger.debug(f"Apparent temperature: <AA†>={up:.6g}, <A†A>={down:.6g}, beta={beta:.6g}")
    return ApparentTemperature(beta_app=float(beta), nu0=battery.spec.nu0)


def coherence_decomposition(battery: BatteryInstance) -> CoherenceDecomposition:
    """
    Populations rho_n, coherence sums c_n and the weighted sums C±, rho± of a degenerate ladder

    c_n is the sum of the off-diagonal elements inside the degenerate level n.
    """
    if battery.spec.kind == BatteryKind.DEGENERATE_LADDER:
        degeneracies = battery.spec.degeneracies
    elif battery.spec.kind == BatteryKind.LADDER:
        degeneracies = (1,) * battery.spec.levels
    else:
        raise DomainError(f"Coherence decomposition needs a ladder battery, got {battery.spec.kind.value}")

    rho = battery.state.matrix
    offsets = np.concatenate([[0], np.cumsum(degeneracies)])
    populations, coherences = [], []
    for n in range(len(degeneracies)):
        block = rho[offsets[n]:offsets[n + 1], offsets[n]:offsets[n + 1]]
        diagonal = float(np.real(np.trace(block)))
        populations.append(diagonal)
        coherences.append(float(np.real(np.sum(block))) - diagonal)

    levels = range(1, len(degeneracies))
    c_plus = sum(degeneracies[n - 1] * coherences[n] for n in levels)
    rho_plus = sum(degeneracies[n - 1] * populations[n] for n in levels)
    c_minus = sum(degeneracies[n] * coherences[n - 1] for n in levels)
    rho_minus = sum(degeneracies[n] * populations[n - 1] for n in levels)

    return CoherenceDecomposition(
        populations=tuple(populations),
        coherence_sums=tuple(coherences),
        degeneracies=tuple(degeneracies),
        c_plus=c_plus,
        c_minus=c_minus,
        rho_plus=rho_plus,
        rho_minus=rho_minus,
    )


def apparent_temperature_coherence_form(populations: Sequence[float], coherence_sums: Sequence[float],
                                        degeneracies: Sequence[int], nu0: float) -> ApparentTemperature:
    """
    Apparent temperature of a degenerate ladder in terms of populations and coherences

    beta = ln[sum_n l_n (rho_{n-1} + c_{n-1}) / sum_n l_{n-1} (rho_n + c_n)] / nu0, n = 1..N

    Args:
        populations: rho_n, total population of level n
        coherence_sums: c_n, sum of the coherences inside level n
        degeneracies: l_n
        nu0: Level spacing

    Returns:
        ApparentTemperature
    """
    if not len(populations) == len(coherence_sums) == len(degeneracies):
        raise DomainError("populations, coherence_sums and degeneracies must have equal length")

    levels = range(1, len(degeneracies))
    up = sum(degeneracies[n] * (populations[n - 1] + coherence_sums[n - 1]) for n in levels)
    down = sum(degeneracies[n - 1] * (populations[n] + coherence_sums[n]) for n in levels)
    return ApparentTemperature(beta_app=float(_log_ratio(up, down, nu0)), nu0=nu0)


def population_only_temperature(rho_minus: float, rho_plus: float, nu0: float) -> ApparentTemperature:
    """Coherence-free apparent temperature T0 = nu0 / ln(rho-/rho+)"""
    return ApparentTemperature(beta_app=float(_log_ratio(rho_minus, rho_plus, nu0)), nu0=nu0)


def apparent_temperature_correlation_form(n_plus: float, n_minus: float, c: float,
                                          nu0: float) -> ApparentTemperature:
    """
    Apparent temperature of an ensemble with inter-site correlations

    beta = ln((n- + c)/(n+ + c)) / nu0 with n± the summed local weights
    and c the correlation term.
    """
    return ApparentTemperature(beta_app=float(_log_ratio(n_minus + c, n_plus + c, nu0)), nu0=nu0)


def dicke_correlations(N: int, n_e: int) -> Tuple[float, float, float]:
    """
    Local weights and correlation term of the Dicke state |N, n_e>

    Returns:
        (n_plus, n_minus, c) = (n_e, n_g, n_e n_g)
    """
    if not 0 <= n_e <= N:
        raise DomainError(f"Dicke state needs 0 <= n_e <= N, got N={N}, n_e={n_e}")
    n_g = N - n_e
    return float(n_e), float(n_g), float(n_e * n_g)


def collective_oscillator_correlations(N: int, n_e: int) -> Tuple[float, float, float]:
    """
    Local weights and correlation term of N oscillators sharing n_e collective excitations

    Returns:
        (n_plus, n_minus, c) = (n_e, n_e + N, (N - 1) n_e)
    """
    if N < 1 or n_e < 0:
        raise DomainError(f"Collective oscillator state needs N >= 1 and n_e >= 0, got N={N}, n_e={n_e}")
    return float(n_e), float(n_e + N), float((N - 1) * n_e)


def apparent_temperature_nondegenerate_ladder(rho_0: float, rho_N: float, nu0: float) -> ApparentTemperature:
    """
    Apparent temperature of an equidistant ladder with uniform amplitudes

    beta = ln((1 - rho_N)/(1 - rho_0)) / nu0, rho_0 ground and rho_N top population
    """
    if not (0 <= rho_0 <= 1 and 0 <= rho_N <= 1) or rho_0 + rho_N > 1 + 1e-12:
        raise DomainError(f"Populations must lie in [0, 1] and sum to at most 1, got {rho_0}, {rho_N}")
    if rho_0 >= 1 or rho_N >= 1:
        raise UndefinedTemperatureError("A fully populated end level has no apparent temperature")
    return ApparentTemperature(beta_app=float(_log_ratio(1.0 - rho_N, 1.0 - rho_0, nu0)), nu0=nu0)


def apparent_temperature_squeezed(T_R: float, r: float, nu0: float) -> ApparentTemperature:
    """
    Apparent temperature of a squeezed thermal oscillator

    beta = ln[(tanh^2 r + e^{nu0/T_R}) / (tanh^2 r e^{nu0/T_R} + 1)] / nu0
    """
    if not T_R > 0 or r < 0:
        raise DomainError(f"Squeezed form needs T_R > 0 and r >= 0, got T_R={T_R}, r={r}")
    if r == 0:
        return ApparentTemperature(beta_app=1.0 / T_R, nu0=nu0)

    t2 = np.tanh(r) ** 2
    x = nu0 / T_R
    # ln(t2 + e^x) - ln(t2 e^x + 1), written to stay finite for large x
    numerator = x + np.log1p(t2 * np.exp(-x))
    denominator = np.log1p(t2 * np.exp(x)) if x < 700 else np.log(t2) + x
    return ApparentTemperature(beta_app=float((numerator - denominator) / nu0), nu0=nu0)


def oscillator_apparent_temperature(E_R: float, nu0: float) -> ApparentTemperature:
    """Harmonic-oscillator battery: beta = ln(1 + nu0/E_R) / nu0 depends on the energy only"""
    if not E_R > 0:
        raise UndefinedTemperatureError(f"Oscillator energy must be positive, got {E_R}")
    return ApparentTemperature(beta_app=float(np.log1p(nu0 / E_R) / nu0), nu0=nu0)


def _minimal_energy_inverted(x: float, N_levels: int) -> float:
    """
    Lowest energy (in units of nu0) compatible with e^{nu0 beta} = x in (0, 1]

    The ground population is pushed to its largest allowed value x/(1+x)
    while (N-2) x < 1, and to zero otherwise; the remainder sits on level 1.
    """
    slope = (N_levels - 2) * x - 1.0
    rho_ground = x / (1.0 + x) if slope < 0 else 0.0
    return x + (N_levels - 1) * (1.0 - x) + rho_ground * slope


def max_apparent_temperature(E_R: float, nu0: float, N_levels: int) -> ApparentTemperature:
    """
    Largest apparent temperature reachable by an N-level ladder at fixed mean energy

    Args:
        E_R: Mean battery energy (ground energy zero)
        nu0: Level spacing
        N_levels: Number of levels (>= 3)

    Returns:
        ApparentTemperature with beta = ln(nu0/E_R)/nu0 for E_R <= nu0,
        InvertedRegimeMarker carrying the negative-branch beta for E_R > nu0
    """
    if N_levels < 3:
        raise DomainError(f"Maximal apparent temperature needs N_levels >= 3, got {N_levels}")
    top = (N_levels - 1) * nu0
    if not 0 < E_R <= top:
        raise DomainError(f"E_R must lie in (0, {top}], got {E_R}")

    if E_R <= nu0:
        return ApparentTemperature(beta_app=float(np.log(nu0 / E_R) / nu0), nu0=nu0)

    if E_R >= top:
        raise UndefinedTemperatureError("Fully inverted battery: maximal apparent temperature is 0-")

    target = E_R / nu0
    x = brentq(lambda y: _minimal_energy_inverted(y, N_levels) - target, 1e-300, 1.0, xtol=1e-300, rtol=1e-14)
    beta = float(np.log(x) / nu0)
    logger.debug(f"Inverted maximal apparent temperature: E_R={E_R}, beta={beta:.6g}")
    return InvertedRegimeMarker(beta_app=beta, nu0=nu0, energy=E_R)


def thermal_ladder_energy(T_R: float, nu0: float, N_levels: int) -> float:
    """E_th = nu0 [(e^{nu0/T} - 1)^-1 - N (e^{N nu0/T} - 1)^-1] for an N-level ladder"""
    if np.isinf(T_R):
        return nu0 * (N_levels - 1) / 2.0
    return float(nu0 * (1.0 / np.expm1(nu0 / T_R) - N_levels / np.expm1(N_levels * nu0 / T_R)))


def max_apparent_temperature_ratio(T_R: float, nu0: float, N_levels: int) -> float:
    """T_max(E_th(T_R)) / T_R, +inf when the thermal energy reaches nu0"""
    reachable = max_apparent_temperature(thermal_ladder_energy(T_R, nu0, N_levels), nu0, N_levels)
    if isinstance(reachable, InvertedRegimeMarker) or reachable.beta_app <= 0:
        return np.inf
    return float(reachable.temperature / T_R)

