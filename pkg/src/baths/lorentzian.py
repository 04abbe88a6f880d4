"""
Truncated Lorentzian Spectral Density
"""

from typing import Tuple
from src.baths.base import SpectralDensityModel
from src.utils.errors import BathModelError


class LorentzianDensity(SpectralDensityModel):
    """
    Lorentzian peak of half-width width/2 centred on `center`

    The tails are cut at |omega - center| > cutoff (default: width) so that
    the cold and hot windows stay disjoint.
    """

    def __init__(self, center: float, width: float, height: float, lamb_shift: float = 0.0,
                 cutoff: float = None):
        super().__init__(center, width, height, lamb_shift)
        self.cutoff = float(width if cutoff is None else cutoff)
        if not self.cutoff > 0:
            raise BathModelError(f"Lorentzian cutoff must be positive, got {self.cutoff}")

    @property
    def name(self) -> str:
        return 'lorentzian'

    def support(self) -> Tuple[float, float]:
        return max(0.0, self.center - self.cutoff), self.center + self.cutoff

    def density(self, omega: float) -> float:
        if not self.contains(omega):
            return 0.0
        half = 0.5 * self.width
        detuning = omega - self.center
        return self.height * half ** 2 / (detuning ** 2 + half ** 2)

    def density_derivative(self, omega: float) -> float:
        if not self.contains(omega):
            return 0.0
        half = 0.5 * self.width
        detuning = omega - self.center
        return -2.0 * self.height * half ** 2 * detuning / (detuning ** 2 + half ** 2) ** 2

    def describe(self) -> dict:
        description = super().describe()
        description['cutoff'] = self.cutoff
        return description
