"""
Scenario loading, sweeps and table output tests
"""

import os
from pathlib import Path
import numpy as np
import pytest
import yaml
from src.core.battery_models import build_ladder
from src.scenarios.loader import ScenarioLoader
from src.scenarios.runner import ANALYTICS_COLUMNS, REGIME_MAP_COLUMNS, ScenarioRunner, analytics_row
from src.scenarios.schema import ExplicitState, PhaseoniumLikeState, SweepRun
from src.scenarios.sweeps import SweepExecutor
from src.utils.errors import DomainError, ScenarioSchemaError, UndefinedTemperatureError
from src.utils.file_operations import FileOperations


SCENARIOS = Path(__file__).resolve().parents[1] / 'scenarios'


def scenario_path(name: str) -> str:
    return str(SCENARIOS / f"{name}.yaml")


def write_yaml(tmp_path, data: dict, name: str = 'scenario') -> str:
    path = tmp_path / f"{name}.yaml"
    path.write_text(yaml.safe_dump(data))
    return str(path)


@pytest.fixture
def tls_data() -> dict:
    with open(scenario_path('analytics_tls'), 'r') as f:
        return yaml.safe_load(f)


class TestLoader:

    @pytest.mark.parametrize('name', sorted(p.stem for p in SCENARIOS.glob('*.yaml')))
    def test_shipped_scenarios_validate(self, name):
        scenario = ScenarioLoader.load(scenario_path(name))
        assert scenario.name == name
        scenario.build_machine()

    def test_dump_round_trip(self):
        scenario = ScenarioLoader.load(scenario_path('phaseonium_analytics'))
        text = ScenarioLoader.dump(scenario)
        reloaded = ScenarioLoader.validate(yaml.safe_load(text))
        assert reloaded == scenario
        assert ScenarioLoader.dump(reloaded) == text

    def test_name_defaults_to_file_stem(self, tmp_path, tls_data):
        del tls_data['name']
        scenario = ScenarioLoader.load(write_yaml(tmp_path, tls_data, 'my_machine'))
        assert scenario.name == 'my_machine'

    def test_overrides(self):
        scenario = ScenarioLoader.load(scenario_path('analytics_tls'),
                                       ['machine.g=0.02', 'battery_state.temperature=4'])
        assert scenario.machine.g == 0.02
        assert scenario.battery_state.temperature == 4.0

    def test_override_into_list(self):
        scenario = ScenarioLoader.load(scenario_path('sweep_omega0'), ['run.values.1=0.35'])
        assert isinstance(scenario.run, SweepRun)
        assert scenario.run.values[1] == 0.35

    @pytest.mark.parametrize('item, expected', [
        ('machine.g=0.02', ('machine.g', 0.02)),
        ('run.values=[1, 2]', ('run.values', [1, 2])),
        (' name = trial ', ('name', 'trial')),
    ])
    def test_parse_override(self, item, expected):
        assert ScenarioLoader.parse_override(item) == expected

    @pytest.mark.parametrize('item', ['machine.g', '=1'])
    def test_malformed_override(self, item):
        with pytest.raises(ScenarioSchemaError):
            ScenarioLoader.parse_override(item)

    def test_override_cannot_descend_into_scalar(self, tls_data):
        with pytest.raises(ScenarioSchemaError):
            ScenarioLoader.apply_override(tls_data, 'machine.g.value', 1.0)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioSchemaError):
            ScenarioLoader.load(str(tmp_path / 'absent.yaml'))

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text('machine: [unclosed\n')
        with pytest.raises(ScenarioSchemaError):
            ScenarioLoader.load(str(path))


class TestSchema:

    @pytest.mark.parametrize('key, value, field_path', [
        ('machine.omega0', -1.0, 'machine.omega0'),
        ('machine.alpha', -1.0, 'machine.alpha'),
        ('machine.alpha', 0.0, 'machine.alpha'),
        ('machine.colour', 'red', 'machine.colour'),
        ('battery.kind', 'flywheel', 'battery.kind'),
        ('machine.medium.n_cut', 2, 'machine.medium.n_cut'),
    ])
    def test_field_paths(self, tls_data, key, value, field_path):
        ScenarioLoader.apply_override(tls_data, key, value)
        with pytest.raises(ScenarioSchemaError) as info:
            ScenarioLoader.validate(tls_data)
        assert info.value.field_path == field_path
        assert info.value.exit_code == 2

    def test_dicke_state_needs_spin_ensemble(self, tls_data):
        tls_data['battery_state'] = {'kind': 'dicke', 'n_excitations': 1}
        with pytest.raises(ScenarioSchemaError):
            ScenarioLoader.validate(tls_data)

    def test_squeezed_state_needs_oscillator(self, tls_data):
        tls_data['battery_state'] = {'kind': 'squeezed_thermal', 'temperature': 1.0, 'squeezing': 0.2}
        with pytest.raises(ScenarioSchemaError):
            ScenarioLoader.validate(tls_data)

    def test_explicit_matrix_accepts_complex_pairs(self):
        state = ExplicitState(matrix=[[0.5, [0.0, 0.1]], [[0.0, -0.1], 0.5]])
        assert np.allclose(state.to_array(), [[0.5, 0.1j], [-0.1j, 0.5]])

    def test_explicit_matrix_must_be_square(self):
        with pytest.raises(ValueError):
            ExplicitState(matrix=[[1.0, 0.0]])

    def test_phaseonium_coherence_adds_conjugate(self):
        state = PhaseoniumLikeState(populations=[0.4, 0.4, 0.2],
                                    coherences=[{'row': 0, 'col': 1, 'value': [0.1, 0.2]}])
        rho = state.to_array()
        assert rho[0, 1] == complex(0.1, 0.2)
        assert rho[1, 0] == complex(0.1, -0.2)

    def test_temperature_order_is_a_physics_error(self, tls_data):
        tls_data['machine']['T_C'] = 3.0
        scenario = ScenarioLoader.validate(tls_data)
        with pytest.raises(DomainError):
            scenario.build_machine()


class TestAnalytics:

    def test_two_level_row(self):
        scenario = ScenarioLoader.load(scenario_path('analytics_tls'))
        row = analytics_row(scenario.build_machine(), scenario.build_battery())

        assert list(row) == ANALYTICS_COLUMNS
        assert row['beta_app'] == pytest.approx(0.1)
        assert row['threshold_omega0'] == pytest.approx(0.8)
        assert row['regime'] == 'Refrigeration'
        assert row['eta'] == pytest.approx(0.3)
        assert row['eta_ac'] == pytest.approx(0.8)

    def test_phaseonium_has_negative_apparent_temperature(self):
        scenario = ScenarioLoader.load(scenario_path('phaseonium_analytics'))
        row = analytics_row(scenario.build_machine(), scenario.build_battery())
        assert row['beta_app'] == pytest.approx(np.log(0.5))
        assert row['regime'] == 'Refrigeration'
        # negative apparent temperatures beat the Carnot bound T_C/(T_H - T_C) = 1
        assert row['eta_ac'] > 1.0

    def test_undefined_temperature(self):
        scenario = ScenarioLoader.load(scenario_path('analytics_tls'))
        battery = build_ladder(2, [1.0], 1.0, np.diag([1.0, 0.0]))
        with pytest.raises(UndefinedTemperatureError):
            analytics_row(scenario.build_machine(), battery)
        row = analytics_row(scenario.build_machine(), battery, strict=False)
        assert np.isnan(row['beta_app'])
        assert np.isnan(row['eta_ac'])


class TestSweepExecutor:

    def test_results_in_grid_order(self):
        executor = SweepExecutor(max_workers=3)
        assert executor.map(lambda x: x * x, list(range(10))) == [x * x for x in range(10)]
        assert executor.get_statistics() == {'completed': 10, 'failed': 0}

    def test_lowest_index_error_raised(self):
        def evaluate(x):
            if x in (3, 7):
                raise ValueError(f"point {x}")
            return x

        executor = SweepExecutor(max_workers=4)
        with pytest.raises(ValueError, match='point 3'):
            executor.map(evaluate, list(range(10)))
        assert executor.get_statistics()['failed'] == 2


class TestRunner:

    def test_analytics_table(self, tmp_path):
        scenario = ScenarioLoader.load(scenario_path('analytics_tls'))
        [path] = ScenarioRunner(scenario, str(tmp_path)).run()

        assert os.path.basename(path) == 'analytics_tls_analytics.csv'
        header, frame = FileOperations.read_csv(path)
        assert header['schema'] == '1'
        assert header['scenario'] == 'analytics_tls'
        assert len(header['hash']) == 12
        assert list(frame.columns) == ANALYTICS_COLUMNS
        assert frame.loc[0, 'regime'] == 'Refrigeration'

    def test_output_is_deterministic(self, tmp_path):
        scenario = ScenarioLoader.load(scenario_path('sweep_omega0'))
        first = ScenarioRunner(scenario, str(tmp_path / 'a')).run()[0]
        second = ScenarioRunner(scenario, str(tmp_path / 'b'), executor=SweepExecutor(max_workers=1)).run()[0]
        assert Path(first).read_bytes() == Path(second).read_bytes()

    def test_hash_follows_overrides(self, tmp_path):
        base = ScenarioLoader.load(scenario_path('analytics_tls'))
        changed = ScenarioLoader.with_overrides(base, {'machine.g': 0.02})
        assert ScenarioRunner(base, str(tmp_path)).scenario_hash != ScenarioRunner(changed, str(tmp_path)).scenario_hash

    def test_sweep_table(self, tmp_path):
        scenario = ScenarioLoader.load(scenario_path('sweep_omega0'))
        [path] = ScenarioRunner(scenario, str(tmp_path)).run()

        header, frame = FileOperations.read_csv(path)
        assert header['parameter'] == 'machine.omega0'
        assert list(frame.columns) == ['machine.omega0'] + ANALYTICS_COLUMNS
        assert np.allclose(frame['machine.omega0'], frame['omega0'])
        assert np.allclose(frame['omega0'], scenario.run.values)

    def test_regime_map_table(self, tmp_path):
        scenario = ScenarioLoader.load(scenario_path('regime_map'))
        [path] = ScenarioRunner(scenario, str(tmp_path)).run()

        header, frame = FileOperations.read_csv(path)
        assert header['param_x'] == 'machine.omega0'
        assert header['param_y'] == 'battery_state.temperature'
        assert list(frame.columns) == REGIME_MAP_COLUMNS
        assert len(frame) == len(scenario.run.values_x) * len(scenario.run.values_y)
        assert set(frame['regime']) <= {'Refrigeration', 'EnergyExtraction', 'Idle'}
        # hot batteries at small omega0 refrigerate
        corner = frame[(frame['param_x'] == 0.2) & (frame['param_y'] == 50.0)]
        assert corner['regime'].iloc[0] == 'Refrigeration'

    def test_oracle_flag_skipped_without_coupling(self, tmp_path):
        scenario = ScenarioLoader.with_overrides(ScenarioLoader.load(scenario_path('analytics_tls')),
                                                 {'machine.g': 0.0})
        assert len(ScenarioRunner(scenario, str(tmp_path), oracle=True).run()) == 1

    @pytest.mark.slow
    def test_trajectory_table(self, tmp_path):
        scenario = ScenarioLoader.load(scenario_path('trajectory_tls'))
        [path] = ScenarioRunner(scenario, str(tmp_path)).run()
        _, frame = FileOperations.read_csv(path)
        assert len(frame) == 21
        assert frame['t'].iloc[-1] == pytest.approx(200.0)

    @pytest.mark.slow
    def test_oracle_table(self, tmp_path):
        scenario = ScenarioLoader.load(scenario_path('oracle_compare'))
        [path] = ScenarioRunner(scenario, str(tmp_path)).run()
        _, frame = FileOperations.read_csv(path)
        assert list(frame.columns) == ['g', 'dq_c', 'dq_h', 'de_r', 'slope_fit']
        assert len(frame) == 3
