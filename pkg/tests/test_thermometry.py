"""
Apparent temperature tests: closed forms against the general definition
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from src.core.battery_models import (
    BatteryKind,
    BatterySpec,
    build_degenerate_ladder,
    build_dicke_state,
    build_ladder,
    build_spin_ensemble,
    build_squeezed_thermal,
    squeezed_thermal_energy,
    thermal_battery,
)
from src.core.operator_core import dagger
from src.core.thermometry import (
    ApparentTemperature,
    InvertedRegimeMarker,
    apparent_temperature,
    apparent_temperature_coherence_form,
    apparent_temperature_correlation_form,
    apparent_temperature_nondegenerate_ladder,
    apparent_temperature_squeezed,
    coherence_decomposition,
    collective_oscillator_correlations,
    dicke_correlations,
    max_apparent_temperature,
    max_apparent_temperature_ratio,
    oscillator_apparent_temperature,
    population_only_temperature,
    thermal_ladder_energy,
)
from src.utils.errors import DomainError, UndefinedTemperatureError


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ dagger(m) + 0.05 * np.eye(dim)
    return rho / np.trace(rho).real


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
log_temperatures = np.logspace(-1, 1, 9)


class TestThermalStates:

    @pytest.mark.parametrize('T', log_temperatures)
    @pytest.mark.parametrize('spec', [
        BatterySpec(kind=BatteryKind.LADDER, nu0=1.0, levels=4, amplitudes=(1.0, 0.5, 2.0)),
        BatterySpec(kind=BatteryKind.DEGENERATE_LADDER, nu0=0.7, degeneracies=(1, 3, 2)),
        BatterySpec(kind=BatteryKind.SPIN_ENSEMBLE, nu0=1.0, spins=3),
    ])
    def test_apparent_equals_thermal_temperature(self, spec, T):
        beta = apparent_temperature(thermal_battery(spec, T))
        assert abs(beta.beta_app - 1.0 / T) < 1e-9

    @pytest.mark.parametrize('T', np.logspace(-1, np.log10(2.0), 6))
    def test_truncated_oscillator(self, T):
        spec = BatterySpec(kind=BatteryKind.TRUNCATED_OSCILLATOR, nu0=1.0, n_cut=40)
        beta = apparent_temperature(thermal_battery(spec, T))
        assert abs(beta.beta_app - 1.0 / T) < 1e-9

    def test_ground_state_has_no_apparent_temperature(self):
        with pytest.raises(UndefinedTemperatureError):
            apparent_temperature(build_ladder(2, [1.0], 1.0, np.diag([1.0, 0.0])))

    def test_infinite_temperature_representation(self):
        beta = ApparentTemperature(beta_app=0.0, nu0=1.0)
        assert np.isinf(beta.temperature)
        with pytest.raises(UndefinedTemperatureError):
            ApparentTemperature(beta_app=np.inf, nu0=1.0)


class TestClosedForms:

    @given(seed=seeds, degeneracies=st.lists(st.integers(1, 3), min_size=2, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_coherence_form_matches_definition(self, seed, degeneracies):
        rng = np.random.default_rng(seed)
        rho = random_state(rng, sum(degeneracies))
        battery = build_degenerate_ladder(len(degeneracies) - 1, degeneracies, 1.3, rho)
        decomposition = coherence_decomposition(battery)

        closed = apparent_temperature_coherence_form(
            decomposition.populations, decomposition.coherence_sums, decomposition.degeneracies, 1.3
        )
        assert abs(closed.beta_app - apparent_temperature(battery).beta_app) < 1e-9

    @given(seed=seeds, levels=st.integers(2, 6))
    @settings(max_examples=60, deadline=None)
    def test_nondegenerate_ladder_form(self, seed, levels):
        rng = np.random.default_rng(seed)
        rho = random_state(rng, levels)
        battery = build_ladder(levels, [1.0] * (levels - 1), 1.0, rho)
        populations = np.real(np.diag(rho))

        closed = apparent_temperature_nondegenerate_ladder(populations[0], populations[-1], 1.0)
        assert abs(closed.beta_app - apparent_temperature(battery).beta_app) < 1e-9

    @pytest.mark.parametrize('N, n_e', [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (5, 3), (6, 2)])
    def test_dicke_correlation_form(self, N, n_e):
        battery = build_spin_ensemble(N, 1.0, build_dicke_state(N, n_e))
        n_plus, n_minus, c = dicke_correlations(N, n_e)
        closed = apparent_temperature_correlation_form(n_plus, n_minus, c, 1.0)
        assert abs(closed.beta_app - apparent_temperature(battery).beta_app) < 1e-9

    @pytest.mark.parametrize('T_R, r', [(0.5, 0.2), (1.0, 0.5), (0.3, 0.8), (2.0, 0.1)])
    def test_squeezed_form(self, T_R, r):
        battery = build_squeezed_thermal(80, 1.0, T_R, r)
        closed = apparent_temperature_squeezed(T_R, r, 1.0)
        assert abs(closed.beta_app - apparent_temperature(battery).beta_app) < 1e-5

    def test_squeezing_heats_the_battery(self):
        assert apparent_temperature_squeezed(1.0, 0.5, 1.0).temperature > 1.0
        assert apparent_temperature_squeezed(1.0, 0.0, 1.0).beta_app == 1.0

    @pytest.mark.parametrize('T_R, r', [(0.5, 0.2), (1.0, 0.5)])
    def test_oscillator_temperature_depends_on_energy_only(self, T_R, r):
        energy = squeezed_thermal_energy(T_R, r, 1.0)
        assert np.isclose(oscillator_apparent_temperature(energy, 1.0).beta_app,
                          apparent_temperature_squeezed(T_R, r, 1.0).beta_app, rtol=1e-10)

    def test_phaseonium_coherence_sign(self):
        """A negative ground coherence raises the apparent temperature of a Λ system"""
        populations = (0.8, 0.2)
        base = apparent_temperature_coherence_form(populations, (0.0, 0.0), (2, 1), 1.0)
        negative = apparent_temperature_coherence_form(populations, (-0.3, 0.0), (2, 1), 1.0)
        positive = apparent_temperature_coherence_form(populations, (0.3, 0.0), (2, 1), 1.0)
        assert negative.beta_app < base.beta_app < positive.beta_app

    def test_population_only_temperature(self):
        assert np.isclose(population_only_temperature(np.e, 1.0, 1.0).beta_app, 1.0)

    def test_collective_oscillator_correlations(self):
        assert collective_oscillator_correlations(3, 2) == (2.0, 5.0, 4.0)
        with pytest.raises(DomainError):
            collective_oscillator_correlations(0, 1)


class TestMaximalApparentTemperature:

    def test_below_one_quantum(self):
        beta = max_apparent_temperature(0.5, 1.0, 4)
        assert not isinstance(beta, InvertedRegimeMarker)
        assert np.isclose(beta.beta_app, np.log(2.0))

    def test_inverted_branch(self):
        beta = max_apparent_temperature(1.5, 1.0, 4)
        assert isinstance(beta, InvertedRegimeMarker)
        assert beta.is_negative

    @given(seed=seeds, levels=st.integers(3, 5))
    @settings(max_examples=40, deadline=None)
    def test_bounds_every_state_of_equal_energy(self, seed, levels):
        rng = np.random.default_rng(seed)
        populations = rng.dirichlet(np.ones(levels))
        energy = float(np.dot(np.arange(levels), populations))
        battery = build_ladder(levels, [1.0] * (levels - 1), 1.0, np.diag(populations))
        beta = apparent_temperature(battery).beta_app
        bound = max_apparent_temperature(energy, 1.0, levels).beta_app
        # a larger apparent temperature means a smaller beta on either branch
        assert bound <= beta + 1e-9

    def test_three_level_ratio_approaches_three_halves(self):
        temperatures = np.logspace(-1, 3, 200)
        ratios = [max_apparent_temperature_ratio(T, 1.0, 3) for T in temperatures]
        assert abs(max(ratios) - 1.5) < 0.01

    def test_thermal_ladder_energy_limits(self):
        assert np.isclose(thermal_ladder_energy(np.inf, 1.0, 3), 1.0)
        assert thermal_ladder_energy(0.05, 1.0, 3) < 1e-8
