"""
Scenario Runner
"""

from itertools import product
from typing import Any, Dict, List, Optional
import numpy as np
import pandas as pd
from src.core.battery_models import BatteryInstance
from src.core.dynamics import evolve, trajectory_frame
from src.core.machine_analytics import (
    MachineConfig,
    Regime,
    cold_heat_flow,
    extraction_condition_and_efficiency,
    max_achievable_efficiency_refrigeration,
    refrigeration_threshold,
)
from src.core.redfield_oracle import compare_with_perturbative
from src.core.thermometry import apparent_temperature
from src.scenarios.loader import ScenarioLoader
from src.scenarios.schema import (
    AnalyticsRun,
    OracleCompareRun,
    RegimeMapRun,
    ScenarioFile,
    SweepRun,
    TrajectoryRun,
)
from src.scenarios.sweeps import SweepExecutor
from src.utils.errors import TrivialExtractionError, UndefinedTemperatureError
from src.utils.file_operations import FileOperations
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)

ANALYTICS_COLUMNS = [
    'omega0', 'nu0', 'g', 'T_C', 'T_H', 'beta_app', 'apparent_temperature', 'threshold_omega0',
    'eta', 'eta_ac', 'q_c', 'q_h', 'e_r_dot', 'regime', 'error_order',
]
REGIME_MAP_COLUMNS = ['param_x', 'param_y', 'regime', 'q_c', 'eta_ac']
ORACLE_COLUMNS = ['g', 'dq_c', 'dq_h', 'de_r', 'slope_fit']


def achievable_efficiency(machine: MachineConfig, regime: Regime, beta_app: float) -> float:
    """Maximal achievable efficiency for the regime the machine operates in, nan when not defined"""
    if np.isnan(beta_app):
        return float('nan')
    if regime == Regime.REFRIGERATION:
        return max_achievable_efficiency_refrigeration(machine.T_C, machine.T_H, beta_app)
    if regime == Regime.ENERGY_EXTRACTION:
        try:
            return extraction_condition_and_efficiency(
                machine.T_C, machine.T_H, machine.omega0, machine.nu0, beta_app
            ).eta_e_bound
        except TrivialExtractionError as e:
            logger.debug(f"No extraction bound: {str(e)}")
    return float('nan')


def analytics_row(machine: MachineConfig, battery: BatteryInstance, strict: bool = True) -> Dict[str, Any]:
    """
    Closed-form quantities of one machine and battery state

    Args:
        machine: Machine
        battery: Battery with its state
        strict: Raise when the apparent temperature is undefined instead of reporting nan

    Returns:
        Row keyed by ANALYTICS_COLUMNS
    """
    report = cold_heat_flow(machine, battery.state)
    try:
        beta = apparent_temperature(battery)
        beta_app, temperature = beta.beta_app, beta.temperature
        threshold = refrigeration_threshold(machine.T_C, machine.T_H, machine.nu0, beta_app)
    except UndefinedTemperatureError as e:
        if strict:
            raise
        logger.debug(f"Apparent temperature undefined: {str(e)}")
        beta_app = temperature = threshold = float('nan')

    return {
        'omega0': machine.omega0,
        'nu0': machine.nu0,
        'g': machine.g,
        'T_C': machine.T_C,
        'T_H': machine.T_H,
        'beta_app': beta_app,
        'apparent_temperature': temperature,
        'threshold_omega0': threshold,
        'eta': report.eta,
        'eta_ac': achievable_efficiency(machine, report.regime, beta_app),
        'q_c': report.q_c,
        'q_h': report.q_h,
        'e_r_dot': report.e_r_dot,
        'regime': report.regime.value,
        'error_order': report.error_order,
    }


class ScenarioRunner:
    """Execute one scenario and write its tables"""

    def __init__(self, scenario: ScenarioFile, out_dir: str, oracle: bool = False,
                 executor: Optional[SweepExecutor] = None):
        self.scenario = scenario
        self.out_dir = out_dir
        self.oracle = oracle
        self.executor = executor or SweepExecutor()
        self.scenario_hash = FileOperations.compute_text_hash(ScenarioLoader.dump(scenario))

    def run(self) -> List[str]:
        """
        Dispatch on the run kind

        Returns:
            Paths of the tables written
        """
        run = self.scenario.run
        logger.info(f"Run started: {self.scenario.name} ({run.kind}, hash {self.scenario_hash})")
        FileOperations.ensure_dir(self.out_dir)

        if isinstance(run, AnalyticsRun):
            written = [self._run_analytics()]
        elif isinstance(run, TrajectoryRun):
            written = [self._run_trajectory(run)]
        elif isinstance(run, SweepRun):
            written = [self._run_sweep(run)]
        elif isinstance(run, RegimeMapRun):
            written = [self._run_regime_map(run)]
        elif isinstance(run, OracleCompareRun):
            written = [self._run_oracle(run.g_list, run.full_secular)]
        else:
            raise TypeError(f"Unknown run kind: {run!r}")

        if self.oracle and isinstance(run, (AnalyticsRun, SweepRun)):
            g = self.scenario.machine.g
            if g > 0:
                written.append(self._run_oracle([g, g / 2, g / 4], full_secular=False))
            else:
                logger.warning("--oracle ignored: the scenario has g = 0")

        logger.info(f"Run finished: {self.scenario.name}, {len(written)} tables")
        return written

    def _write(self, frame: pd.DataFrame, table: str, **header) -> str:
        path = FileOperations.table_path(self.out_dir, self.scenario.name, table)
        fields = {'scenario': self.scenario.name, 'hash': self.scenario_hash}
        fields.update(header)
        return FileOperations.write_csv(frame, path, fields)

    def _run_analytics(self) -> str:
        row = analytics_row(self.scenario.build_machine(), self.scenario.build_battery())
        logger.info(f"Regime {row['regime']}: q_c={row['q_c']:.6e}, eta_ac={row['eta_ac']:.6g}")
        return self._write(pd.DataFrame([row], columns=ANALYTICS_COLUMNS), 'analytics')

    def _run_trajectory(self, run: TrajectoryRun) -> str:
        trajectory = evolve(self.scenario.build_machine(), self.scenario.build_battery().state, run.t_end, run.step)
        return self._write(trajectory_frame(trajectory), 'trajectory')

    def _run_sweep(self, run: SweepRun) -> str:
        def evaluate(value: float) -> Dict[str, Any]:
            point = ScenarioLoader.with_overrides(self.scenario, {run.parameter: value})
            return {run.parameter: value, **analytics_row(point.build_machine(), point.build_battery())}

        rows = self.executor.map(evaluate, run.values)
        frame = pd.DataFrame(rows, columns=[run.parameter] + ANALYTICS_COLUMNS)
        return self._write(frame, 'sweep', parameter=run.parameter)

    def _run_regime_map(self, run: RegimeMapRun) -> str:
        def evaluate(point: tuple) -> Dict[str, Any]:
            x, y = point
            scenario = ScenarioLoader.with_overrides(self.scenario, {run.param_x: x, run.param_y: y})
            row = analytics_row(scenario.build_machine(), scenario.build_battery(), strict=False)
            return {'param_x': x, 'param_y': y, 'regime': row['regime'], 'q_c': row['q_c'], 'eta_ac': row['eta_ac']}

        rows = self.executor.map(evaluate, list(product(run.values_x, run.values_y)))
        frame = pd.DataFrame(rows, columns=REGIME_MAP_COLUMNS)
        return self._write(frame, 'regime_map', param_x=run.param_x, param_y=run.param_y)

    def _run_oracle(self, g_list: List[float], full_secular: bool) -> str:
        machine = self.scenario.build_machine()
        frame = compare_with_perturbative(machine, self.scenario.build_battery().state, g_list,
                                          full_secular=full_secular)
        slope = frame['slope_fit'].iloc[0]
        logger.info(f"Oracle comparison: log-log slope of |dq_c| = {slope:.4g}")
        return self._write(frame[ORACLE_COLUMNS], 'oracle')
