"""
Flat-Band Spectral Density
"""

from typing import Tuple
from src.baths.base import SpectralDensityModel


class FlatBandDensity(SpectralDensityModel):
    """Constant G = height on [center - width/2, center + width/2], zero elsewhere"""

    @property
    def name(self) -> str:
        return 'flat_band'

    def support(self) -> Tuple[float, float]:
        return max(0.0, self.center - 0.5 * self.width), self.center + 0.5 * self.width

    def density(self, omega: float) -> float:
        return self.height if self.contains(omega) else 0.0

    def density_derivative(self, omega: float) -> float:
        return 0.0
