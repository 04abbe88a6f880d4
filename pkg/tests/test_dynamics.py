"""
Master equation and trajectory tests
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from src.baths.base import BathSide
from src.core.battery_models import BatteryKind, BatterySpec, thermal_battery
from src.core.dynamics import (
    MasterEquation,
    battery_discharge_curve,
    build_dissipators,
    entropy_production,
    entropy_rate,
    evolve,
    medium_population_relaxation,
    quasi_steady_medium_population,
    trajectory_frame,
)
from src.core.machine_analytics import (
    MediumKind,
    Regime,
    error_order,
    medium_operators,
    second_law_bound,
    steady_state_apparent_temperature,
)
from src.core.operator_core import dagger, sigma_minus, thermal_state
from src.utils.config import ConfigManager
from src.utils.errors import DomainError, ShapeError


def battery_state(T_R: float, levels: int = 2) -> np.ndarray:
    spec = BatterySpec(kind=BatteryKind.LADDER, nu0=1.0, levels=levels)
    return thermal_battery(spec, T_R).state.matrix


def random_joint_state(seed: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ dagger(m) + 0.1 * np.eye(dim)
    return rho / np.trace(rho).real


class TestDissipators:

    def test_uncoupled_operators_are_bare(self, machine_factory):
        dissipators = build_dissipators(machine_factory(g=0.0))
        [dressed] = dissipators.operators_at(0.3)
        assert np.allclose(dressed, np.kron(sigma_minus(), np.eye(2)))
        for sideband in dissipators.operators_at(1.3):
            assert np.allclose(sideband, 0.0)

    def test_sideband_operators_scale_with_coupling(self, machine_factory):
        dissipators = build_dissipators(machine_factory(g=0.02))
        [sideband] = dissipators.operators_at(1.3)
        expected = 0.02 * 0.3 * np.kron(sigma_minus(), sigma_minus())
        assert np.allclose(sideband, expected)

    @given(seed=st.integers(0, 2 ** 32 - 1), t=st.floats(min_value=0.0, max_value=50.0))
    @settings(max_examples=25, deadline=None)
    def test_generator_preserves_trace_and_hermiticity(self, machine_factory, seed, t):
        equation = MasterEquation(machine_factory(g=0.03))
        rho = random_joint_state(seed, equation.dim)
        rho_dot = equation.apply(t, rho)
        assert abs(np.trace(rho_dot)) < 1e-12
        assert np.allclose(rho_dot, dagger(rho_dot), atol=1e-12)

    def test_thermal_medium_is_stationary_without_coupling(self, machine_factory):
        config = machine_factory(g=0.0)
        equation = MasterEquation(config)
        rho_s = thermal_state(medium_operators(config).hamiltonian, config.T_C).matrix
        rho = np.kron(rho_s, battery_state(3.0))
        assert np.allclose(equation.apply(0.0, rho), 0.0, atol=1e-14)

    def test_per_bath_generators_sum_to_total(self, machine_factory):
        equation = MasterEquation(machine_factory(g=0.03))
        total = equation.generator(2.0)
        parts = equation.generator(2.0, BathSide.COLD) + equation.generator(2.0, BathSide.HOT)
        assert np.allclose(total, parts)


class TestMediumPopulation:

    def test_two_level_quasi_steady_state_is_thermal_without_coupling(self, machine_factory):
        config = machine_factory(g=0.0)
        population = quasi_steady_medium_population(config, battery_state(5.0))
        assert np.isclose(population, 1.0 / (1.0 + np.exp(0.3)))

    def test_oscillator_quasi_steady_state_is_bose_without_coupling(self, machine_factory):
        config = machine_factory(g=0.0, omega0=1.0, medium=MediumKind.TRUNCATED_OSCILLATOR, n_cut=30)
        population = quasi_steady_medium_population(config, battery_state(5.0))
        assert np.isclose(population, 1.0 / np.expm1(1.0))

    def test_relaxation_interpolates(self, machine_factory):
        config = machine_factory(g=0.02)
        state = battery_state(5.0)
        steady = quasi_steady_medium_population(config, state)
        assert medium_population_relaxation(config, state, 0.9, 0.0) == pytest.approx(0.9)
        assert medium_population_relaxation(config, state, 0.9, 1e4) == pytest.approx(steady)
        curve = medium_population_relaxation(config, state, 0.9, np.array([0.0, 10.0, 100.0]))
        assert np.all(np.diff(curve) < 0)

    def test_wrong_battery_shape(self, machine_factory):
        with pytest.raises(ShapeError):
            quasi_steady_medium_population(machine_factory(), battery_state(5.0, levels=3))


class TestTrajectories:

    def test_uncoupled_battery_is_frozen(self, machine_factory):
        config = machine_factory(g=0.0)
        trajectory = evolve(config, battery_state(3.0), t_end=40.0, output_step=10.0)

        assert np.allclose(trajectory.times, [0.0, 10.0, 20.0, 30.0, 40.0])
        assert np.allclose(trajectory.battery_energies, trajectory.battery_energies[0], atol=1e-9)
        assert np.allclose(entropy_rate(trajectory), 0.0, atol=1e-8)
        assert all(report.regime == Regime.IDLE for report in trajectory.reports)
        assert trajectory.psd_clips == 0

    def test_frame_columns_and_flags(self, machine_factory):
        trajectory = evolve(machine_factory(g=0.0), battery_state(3.0), t_end=20.0, output_step=10.0)
        frame = trajectory_frame(trajectory)

        assert list(frame.columns) == [
            't', 'E_R', 'E_S', 'q_c', 'q_h', 'e_r_dot', 'eta', 'S_rho_R', 'beta_app', 'regime', 'transient', 'valid'
        ]
        # tau_es = 1/G_C(omega0) = 20
        assert frame['transient'].all()
        assert frame['valid'].all()
        assert np.allclose(frame['beta_app'], 1.0 / 3.0)

    def test_discharge_curve_sampling(self, machine_factory):
        curve = battery_discharge_curve(machine_factory(g=0.0), battery_state(3.0), t_end=10.0)
        assert len(curve.times) == 201
        assert np.allclose(curve.beta_app, 1.0 / 3.0)

    def test_invalid_times(self, machine_factory):
        with pytest.raises(DomainError):
            evolve(machine_factory(), battery_state(3.0), t_end=0.0, output_step=1.0)

    def test_battery_dimension_checked(self, machine_factory):
        with pytest.raises(ShapeError):
            evolve(machine_factory(), battery_state(3.0, levels=3), t_end=1.0, output_step=1.0)

    @pytest.mark.slow
    def test_hot_battery_discharges_while_refrigerating(self, machine_factory):
        config = machine_factory(g=0.04)
        equation = MasterEquation(config, lambda_map=False)
        trajectory = evolve(config, battery_state(20.0), t_end=400.0, output_step=20.0, equation=equation)

        settled = ~trajectory.transient
        assert settled.any()
        assert trajectory.battery_energies[-1] < trajectory.battery_energies[0] - 1e-5
        assert np.all(np.diff(trajectory.beta_app) > 0)
        assert np.all(trajectory.column('e_r_dot') < 0)
        assert np.all(trajectory.column('q_c')[settled] > 0)
        assert trajectory.valid.all()


@pytest.fixture
def tight_numerics(monkeypatch):
    """Integrator tolerances fine enough to resolve fourth-order residuals"""
    monkeypatch.setenv('QTM_RTOL', '1e-13')
    monkeypatch.setenv('QTM_ATOL', '1e-15')
    monkeypatch.setenv('QTM_METHOD', 'DOP853')
    ConfigManager.reset()


def quasi_steady_medium(config, battery) -> np.ndarray:
    population = quasi_steady_medium_population(config, battery)
    return np.diag([1.0 - population, population]).astype(complex)


def run_with_lambda_map(config, battery, t_end: float, output_step: float):
    equation = MasterEquation(config, lambda_map=True)
    return evolve(config, battery, t_end=t_end, output_step=output_step,
                  initial_medium=quasi_steady_medium(config, battery), equation=equation)


@pytest.mark.slow
class TestCoupledTrajectories:

    G_LIST = [0.02, 0.01, 0.005, 0.0025]

    def test_flow_ratios_and_medium_steady_state(self, machine_factory, tight_numerics):
        ratio_residuals, rate_residuals = [], []
        for g in self.G_LIST:
            config = machine_factory(omega0=1.0, nu0=1.0, g=g)
            trajectory = run_with_lambda_map(config, battery_state(0.5), t_end=300.0, output_step=25.0)
            q_c, q_h = trajectory.column('q_c'), trajectory.column('q_h')
            e_r_dot, e_s_dot = trajectory.column('e_r_dot'), trajectory.column('e_s_dot')

            settled = ~trajectory.transient
            assert settled.sum() >= 8
            # battery colder than the steady value: charged from the gradient
            assert np.all(q_c[settled] < 0)
            assert np.all(e_r_dot[settled] > 0)
            assert np.all(np.abs(e_s_dot[settled]) < error_order(config))

            ratio_residuals.append(abs(q_c[-1] / config.omega0 + q_h[-1] / (config.omega0 + config.nu0)))
            rate_residuals.append(abs(q_c[-1] / config.omega0 + e_r_dot[-1] / config.nu0))

        log_g = np.log(self.G_LIST)
        assert np.polyfit(log_g, np.log(ratio_residuals), 1)[0] >= 2.7
        assert np.polyfit(log_g, np.log(rate_residuals), 1)[0] >= 2.7

    def test_efficiency_is_frequency_ratio_for_random_batteries(self, machine_factory):
        rng = np.random.default_rng(11)
        for k in range(50):
            levels = 2 + k % 2
            config = machine_factory(g=0.01, battery=BatterySpec(kind=BatteryKind.LADDER, nu0=1.0, levels=levels))
            battery = np.diag(rng.dirichlet(np.ones(levels))).astype(complex)
            trajectory = evolve(config, battery, t_end=150.0, output_step=50.0)

            assert not trajectory.transient[-1]
            q_c, e_r_dot = trajectory.column('q_c')[-1], trajectory.column('e_r_dot')[-1]
            assert abs(q_c + config.omega0 / config.nu0 * e_r_dot) <= error_order(config)

    def test_second_law_along_refrigeration(self, machine_factory, tight_numerics):
        config = machine_factory(g=0.02)
        trajectory = run_with_lambda_map(config, battery_state(20.0), t_end=400.0, output_step=25.0)
        e_r_dot = trajectory.column('e_r_dot')
        settled = ~trajectory.transient

        assert np.all(trajectory.column('q_c')[settled] > 0)
        assert np.all(entropy_production(trajectory)[settled] >= -1e-9)
        for k in np.flatnonzero(settled & (e_r_dot < 0)):
            bound = second_law_bound(config.T_C, config.T_H, trajectory.battery_entropy_rates[k], e_r_dot[k])
            assert bound.eta_max >= config.omega0 / config.nu0 - error_order(config) / abs(e_r_dot[k])

    def test_first_law(self, machine_factory, tight_numerics):
        config = machine_factory(g=0.02)
        trajectory = run_with_lambda_map(config, battery_state(20.0), t_end=400.0, output_step=10.0)
        h_sr = build_dissipators(config).joint_hamiltonian
        energy = np.array([np.real(np.trace(rho @ h_sr)) for rho in trajectory.joint_states])
        flows = trajectory.column('q_c') + trajectory.column('q_h')

        # correlations with the medium settle on the tau_es scale
        interior = (trajectory.times >= 200.0) & (trajectory.times < trajectory.times[-1])
        rate = np.gradient(energy, trajectory.times)
        assert np.allclose(rate[interior], flows[interior], rtol=1e-3, atol=1e-12)

    def test_quasi_steady_population_matches_long_time_average(self, machine_factory, monkeypatch):
        monkeypatch.setenv('QTM_RTOL', '1e-10')
        monkeypatch.setenv('QTM_ATOL', '1e-12')
        ConfigManager.reset()
        config = machine_factory(omega0=1.0, nu0=1.0, g=0.01)
        thermal = quasi_steady_medium_population(machine_factory(omega0=1.0, nu0=1.0, g=0.0), battery_state(5.0))
        trajectory = evolve(config, battery_state(5.0), t_end=300.0, output_step=50.0,
                            equation=MasterEquation(config, lambda_map=True))

        late = trajectory.times >= 200.0
        observed = trajectory.medium_energies[late] / config.omega0
        predicted = [quasi_steady_medium_population(config, rho) for rho, keep
                     in zip(trajectory.battery_states, late) if keep]
        assert abs(predicted[0] - thermal) > 2e-6
        assert np.allclose(observed, predicted, rtol=0.0, atol=(config.g / config.nu0) ** 3)

    def test_discharge_curve_settles_at_steady_temperature(self, machine_factory):
        config = machine_factory(omega0=1.0, nu0=1.0, g=0.04, hot_height=0.5)
        curve = battery_discharge_curve(config, battery_state(0.5), t_end=30000.0)
        target = steady_state_apparent_temperature(config.omega0, config.nu0, config.T_C, config.T_H)

        assert target.beta_app == 0.0
        assert np.all(np.diff(curve.energies[:100]) > 0)
        assert np.all(np.diff(curve.beta_app[:100]) < 0)
        assert abs(curve.beta_app[-1] - target.beta_app) < 0.01 * abs(curve.beta_app[0] - target.beta_app)
