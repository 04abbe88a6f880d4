"""
Bath Model Factory
"""

from typing import Any, Dict, Optional
from src.baths.base import BathSide, BathSpec, SpectralDensityModel
from src.baths.flat_band import FlatBandDensity
from src.baths.lorentzian import LorentzianDensity
from src.utils.config import ConfigManager
from src.utils.errors import BathModelError
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


class BathFactory:
    """Factory for creating bath spectral densities from configuration"""

    MODELS = {
        'flat_band': FlatBandDensity,
        'lorentzian': LorentzianDensity,
    }

    @staticmethod
    def create_model(model_type: str, **params) -> SpectralDensityModel:
        """
        Create a spectral density model by registry name

        Args:
            model_type: 'flat_band' or 'lorentzian'
            **params: center, width, height and model-specific options

        Returns:
            SpectralDensityModel instance
        """
        model_cls = BathFactory.MODELS.get(str(model_type).lower())
        if model_cls is None:
            raise BathModelError(
                f"Unsupported bath model: {model_type}. Available: {sorted(BathFactory.MODELS)}"
            )
        try:
            return model_cls(**params)
        except TypeError as e:
            raise BathModelError(f"Invalid parameters for {model_type}: {str(e)}") from e

    @staticmethod
    def create_bath(side: str, temperature: float, resonance: float,
                    settings: Optional[Dict[str, Any]] = None) -> BathSpec:
        """
        Create a bath centred on its resonance

        Args:
            side: 'cold' or 'hot'
            temperature: Bath temperature
            resonance: Default center (omega0 for cold, omega0 + nu0 for hot)
            settings: Model block from a scenario; missing keys fall back to the
                `baths.<side>` section of config.yaml

        Returns:
            BathSpec
        """
        bath_side = BathSide(side)
        params = dict(ConfigManager.get(f'baths.{bath_side.value}', {}) or {})
        params.update({k: v for k, v in (settings or {}).items() if v is not None})

        model_type = params.pop('model', 'flat_band')
        params.setdefault('center', resonance)
        params.setdefault('width', 0.5)
        params.setdefault('height', 0.05)

        model = BathFactory.create_model(model_type, **params)
        logger.debug(f"Bath created: side={bath_side.value}, T={temperature}, {model.describe()}")
        return BathSpec(temperature=temperature, model=model, side=bath_side)
