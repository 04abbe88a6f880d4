"""
Shared fixtures
"""

import pytest
from hypothesis import HealthCheck, settings
from src.baths.base import BathSide, BathSpec
from src.baths.flat_band import FlatBandDensity
from src.core.battery_models import BatteryKind, BatterySpec
from src.core.machine_analytics import MachineConfig, MediumKind
from src.utils.config import ConfigManager


# reset_config and machine_factory hold no per-example state
settings.register_profile('qtm', suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('qtm')


@pytest.fixture(autouse=True)
def reset_config():
    """Every test starts from the built-in numerics"""
    ConfigManager.reset()
    yield
    ConfigManager.reset()


@pytest.fixture
def machine_factory():
    """Build a machine with flat-band baths centred on omega0 and omega0 + nu0"""

    def build(omega0: float = 0.3, nu0: float = 1.0, g: float = 0.01, T_C: float = 1.0, T_H: float = 2.0,
              medium: MediumKind = MediumKind.TWO_LEVEL, battery: BatterySpec = None,
              width: float = 0.2, height: float = 0.05, hot_height: float = None,
              alpha: float = 1.0, n_cut: int = 10) -> MachineConfig:
        battery = battery or BatterySpec(kind=BatteryKind.LADDER, nu0=nu0, levels=2)
        bath_C = BathSpec(T_C, FlatBandDensity(center=omega0, width=width, height=height), BathSide.COLD)
        bath_H = BathSpec(T_H, FlatBandDensity(center=omega0 + nu0, width=width,
                                               height=height if hot_height is None else hot_height), BathSide.HOT)
        return MachineConfig(omega0=omega0, nu0=nu0, g=g, alpha=alpha, medium=medium, battery=battery,
                             bath_C=bath_C, bath_H=bath_H, n_cut=n_cut)

    return build
