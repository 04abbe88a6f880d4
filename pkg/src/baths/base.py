"""
Bath Spectral Density Module - Base Interface
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Tuple
import numpy as np
from src.utils.errors import BathModelError


class BathSide(str, Enum):
    COLD = 'cold'
    HOT = 'hot'


class SpectralDensityModel(ABC):
    """
    Abstract base class for the positive-frequency part of a bath spectral density

    Negative frequencies are never evaluated by a model directly; BathSpec
    extends the model to omega < 0 with the KMS relation.
    """

    def __init__(self, center: float, width: float, height: float, lamb_shift: float = 0.0):
        if not center > 0:
            raise BathModelError(f"Bath center frequency must be positive, got {center}")
        if not width > 0:
            raise BathModelError(f"Bath width must be positive, got {width}")
        if height < 0:
            raise BathModelError(f"Bath height must be non-negative, got {height}")

        self.center = float(center)
        self.width = float(width)
        self.height = float(height)
        self.lamb_shift = float(lamb_shift)

    @property
    @abstractmethod
    def name(self) -> str:
        """Registry name of the model"""
        pass

    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """
        Positive-frequency interval outside which the density vanishes

        Returns:
            (lower, upper) with 0 < lower < upper
        """
        pass

    @abstractmethod
    def density(self, omega: float) -> float:
        """
        G(omega) for omega >= 0

        Args:
            omega: Non-negative frequency

        Returns:
            Non-negative spectral density
        """
        pass

    @abstractmethod
    def density_derivative(self, omega: float) -> float:
        """dG/domega for omega >= 0"""
        pass

    def contains(self, omega: float) -> bool:
        lower, upper = self.support()
        return lower <= abs(omega) <= upper

    def describe(self) -> dict:
        return {
            'model': self.name,
            'center': self.center,
            'width': self.width,
            'height': self.height,
            'lamb_shift': self.lamb_shift,
        }


@dataclass(frozen=True)
class BathSpec:
    """
    Thermal bath: a spectral density model at a temperature

    Attributes:
        temperature: Bath temperature (> 0)
        model: Positive-frequency spectral density
        side: Cold or hot bath
    """

    temperature: float
    model: SpectralDensityModel
    side: BathSide

    def __post_init__(self):
        object.__setattr__(self, 'side', BathSide(self.side))
        if not self.temperature > 0 or not np.isfinite(self.temperature):
            raise BathModelError(f"Bath temperature must be positive and finite, got {self.temperature}")

    def G(self, omega: float) -> float:
        """Spectral density with the KMS extension G(-w) = e^{-w/T} G(w)"""
        if omega >= 0:
            return float(self.model.density(omega))
        return float(np.exp(omega / self.temperature) * self.model.density(-omega))

    def G_prime(self, omega: float) -> float:
        """Derivative, with G'(-w) = e^{-w/T} [G(w)/T - G'(w)] for w > 0"""
        if omega >= 0:
            return float(self.model.density_derivative(omega))
        w = -omega
        return float(np.exp(-w / self.temperature)
                     * (self.model.density(w) / self.temperature - self.model.density_derivative(w)))

    def Gamma(self, omega: float) -> complex:
        """One-sided rate G/2 plus the optional constant imaginary shift inside the support, for omega > 0 only"""
        shift = self.model.lamb_shift if omega > 0 and self.model.contains(omega) else 0.0
        return complex(0.5 * self.G(omega), shift)

    def Gamma_prime(self, omega: float) -> complex:
        return complex(0.5 * self.G_prime(omega), 0.0)

    def kms_residual(self, omega: float) -> float:
        """|G(-w) - e^{-w/T} G(w)| for w = |omega|"""
        w = abs(omega)
        return abs(self.G(-w) - np.exp(-w / self.temperature) * self.G(w))
