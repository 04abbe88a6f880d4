"""
Scenario Schema Module

pydantic models for scenario files: the machine, the battery family, the
initial battery state and the kind of run to perform.
"""

from typing import Annotated, List, Literal, Optional, Tuple, Union
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat, model_validator
from src.baths.factory import BathFactory
from src.core.battery_models import (
    BatteryInstance,
    BatteryKind,
    BatterySpec,
    build_battery,
    build_dicke_state,
    build_squeezed_thermal,
    thermal_battery,
)
from src.core.machine_analytics import MachineConfig, MediumKind


ComplexEntry = Union[float, Tuple[float, float]]


def _complex(entry: ComplexEntry) -> complex:
    if isinstance(entry, (tuple, list)):
        return complex(entry[0], entry[1])
    return complex(entry)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra='forbid')


# ---------------------------------------------------------------------------
# Machine
# ---------------------------------------------------------------------------

class BathBlock(StrictModel):
    """Spectral density settings; omitted keys come from config.yaml"""

    model: Optional[Literal['flat_band', 'lorentzian']] = None
    center: Optional[PositiveFloat] = None
    width: Optional[PositiveFloat] = None
    height: Optional[NonNegativeFloat] = None
    lamb_shift: Optional[float] = None
    cutoff: Optional[PositiveFloat] = None


class BathsBlock(StrictModel):
    cold: BathBlock = Field(default_factory=BathBlock)
    hot: BathBlock = Field(default_factory=BathBlock)


class MediumBlock(StrictModel):
    kind: MediumKind = MediumKind.TWO_LEVEL
    n_cut: int = Field(10, ge=3)


class MachineBlock(StrictModel):
    omega0: PositiveFloat
    nu0: PositiveFloat
    g: NonNegativeFloat
    alpha: PositiveFloat = 1.0
    T_C: PositiveFloat
    T_H: PositiveFloat
    medium: MediumBlock = Field(default_factory=MediumBlock)
    baths: BathsBlock = Field(default_factory=BathsBlock)


class BatteryBlock(StrictModel):
    kind: BatteryKind
    levels: int = Field(2, ge=2)
    amplitudes: List[float] = Field(default_factory=list)
    degeneracies: List[int] = Field(default_factory=list)
    spins: int = Field(1, ge=1)
    n_cut: int = Field(20, ge=3)


# ---------------------------------------------------------------------------
# Battery states
# ---------------------------------------------------------------------------

class ThermalState(StrictModel):
    kind: Literal['thermal'] = 'thermal'
    temperature: NonNegativeFloat


class DickeState(StrictModel):
    kind: Literal['dicke'] = 'dicke'
    n_excitations: int = Field(ge=0)


class SqueezedThermalState(StrictModel):
    kind: Literal['squeezed_thermal'] = 'squeezed_thermal'
    temperature: NonNegativeFloat
    squeezing: NonNegativeFloat


class ExplicitState(StrictModel):
    """Density matrix literal, entries either reals or [re, im] pairs"""

    kind: Literal['explicit'] = 'explicit'
    matrix: List[List[ComplexEntry]] = Field(min_length=1)

    @model_validator(mode='after')
    def _check_square(self) -> 'ExplicitState':
        size = len(self.matrix)
        if any(len(row) != size for row in self.matrix):
            raise ValueError(f"Matrix must be square, got {size} rows of lengths {[len(r) for r in self.matrix]}")
        return self

    def to_array(self) -> np.ndarray:
        return np.array([[_complex(entry) for entry in row] for row in self.matrix], dtype=complex)


class CoherenceEntry(StrictModel):
    row: int = Field(ge=0)
    col: int = Field(ge=0)
    value: ComplexEntry


class PhaseoniumLikeState(StrictModel):
    """Diagonal populations plus listed coherences <row|rho|col>; the conjugate entry is implied"""

    kind: Literal['phaseonium_like'] = 'phaseonium_like'
    populations: List[NonNegativeFloat] = Field(min_length=1)
    coherences: List[CoherenceEntry] = Field(default_factory=list)

    @model_validator(mode='after')
    def _check_indices(self) -> 'PhaseoniumLikeState':
        size = len(self.populations)
        for entry in self.coherences:
            if entry.row >= size or entry.col >= size or entry.row == entry.col:
                raise ValueError(f"Coherence ({entry.row}, {entry.col}) is not an off-diagonal entry of a {size}x{size} matrix")
        return self

    def to_array(self) -> np.ndarray:
        rho = np.diag(np.asarray(self.populations, dtype=complex))
        for entry in self.coherences:
            value = _complex(entry.value)
            rho[entry.row, entry.col] = value
            rho[entry.col, entry.row] = np.conj(value)
        return rho


BatteryState = Annotated[
    Union[ThermalState, DickeState, SqueezedThermalState, ExplicitState, PhaseoniumLikeState],
    Field(discriminator='kind'),
]


# ---------------------------------------------------------------------------
# Runs
# ---------------------------------------------------------------------------

class AnalyticsRun(StrictModel):
    kind: Literal['analytics'] = 'analytics'


class TrajectoryRun(StrictModel):
    kind: Literal['trajectory'] = 'trajectory'
    t_end: PositiveFloat
    step: PositiveFloat


class SweepRun(StrictModel):
    kind: Literal['sweep'] = 'sweep'
    parameter: str = Field(min_length=1)
    values: List[float] = Field(min_length=1)


class RegimeMapRun(StrictModel):
    kind: Literal['regime_map'] = 'regime_map'
    param_x: str = Field(min_length=1)
    values_x: List[float] = Field(min_length=1)
    param_y: str = Field(min_length=1)
    values_y: List[float] = Field(min_length=1)


class OracleCompareRun(StrictModel):
    kind: Literal['oracle_compare'] = 'oracle_compare'
    g_list: List[PositiveFloat] = Field(min_length=1)
    full_secular: bool = False


RunSpec = Annotated[
    Union[AnalyticsRun, TrajectoryRun, SweepRun, RegimeMapRun, OracleCompareRun],
    Field(discriminator='kind'),
]


# ---------------------------------------------------------------------------
# Scenario file
# ---------------------------------------------------------------------------

class ScenarioFile(StrictModel):
    """A complete scenario: one machine, one battery state, one run"""

    name: str = Field(min_length=1)
    machine: MachineBlock
    battery: BatteryBlock
    battery_state: BatteryState
    run: RunSpec = Field(default_factory=AnalyticsRun)

    @model_validator(mode='after')
    def _check_state_family(self) -> 'ScenarioFile':
        state, kind = self.battery_state, self.battery.kind
        if isinstance(state, DickeState):
            if kind != BatteryKind.SPIN_ENSEMBLE:
                raise ValueError(f"Dicke states need a spin_ensemble battery, got {kind.value}")
            if state.n_excitations > self.battery.spins:
                raise ValueError(f"n_excitations={state.n_excitations} exceeds spins={self.battery.spins}")
        if isinstance(state, SqueezedThermalState) and kind != BatteryKind.TRUNCATED_OSCILLATOR:
            raise ValueError(f"Squeezed thermal states need a truncated_oscillator battery, got {kind.value}")
        return self

    def battery_spec(self) -> BatterySpec:
        block = self.battery
        return BatterySpec(
            kind=block.kind,
            nu0=self.machine.nu0,
            levels=block.levels,
            amplitudes=tuple(block.amplitudes),
            degeneracies=tuple(block.degeneracies),
            spins=block.spins,
            n_cut=block.n_cut,
        )

    def build_machine(self) -> MachineConfig:
        """MachineConfig with baths centred on omega0 and omega0 + nu0 unless a center is given"""
        m = self.machine
        bath_C = BathFactory.create_bath('cold', m.T_C, m.omega0, m.baths.cold.model_dump(exclude_none=True))
        bath_H = BathFactory.create_bath('hot', m.T_H, m.omega0 + m.nu0, m.baths.hot.model_dump(exclude_none=True))
        return MachineConfig(
            omega0=m.omega0,
            nu0=m.nu0,
            g=m.g,
            alpha=m.alpha,
            medium=m.medium.kind,
            battery=self.battery_spec(),
            bath_C=bath_C,
            bath_H=bath_H,
            n_cut=m.medium.n_cut,
        )

    def build_battery(self) -> BatteryInstance:
        """Battery in the initial state, re-validated as a density matrix"""
        spec = self.battery_spec()
        state = self.battery_state
        if isinstance(state, ThermalState):
            return thermal_battery(spec, state.temperature)
        if isinstance(state, DickeState):
            return build_battery(spec, build_dicke_state(spec.spins, state.n_excitations))
        if isinstance(state, SqueezedThermalState):
            return build_squeezed_thermal(spec.n_cut, spec.nu0, state.temperature, state.squeezing)
        return build_battery(spec, state.to_array())
