"""
Configuration Module
"""

import os
import yaml
from typing import Any, Dict, Optional
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsSettings(BaseSettings):
    """Tolerances and integrator settings shared by every physics module.

    Environment variables (prefix ``QTM_``) and ``.env`` entries win over the
    ``numerics`` section of config.yaml, which wins over the defaults below.
    """

    model_config = SettingsConfigDict(
        env_prefix='QTM_',
        env_file='.env',
        extra='ignore',
        frozen=True,
    )

    tol_herm: float = Field(1e-10, gt=0)
    tol_trace: float = Field(1e-10, gt=0)
    tol_psd: float = Field(1e-9, gt=0)
    tol_eig: float = Field(1e-8, gt=0)
    tol_kms: float = Field(1e-8, gt=0)
    tol_degen_rel: float = Field(1e-9, gt=0)
    trunc_tol: float = Field(1e-6, gt=0)
    num_floor: float = Field(1e-300, gt=0)
    tol_psd_dyn: float = Field(1e-7, gt=0)
    weak_ratio: float = Field(0.1, gt=0)
    weak_warn_ratio: float = Field(0.05, gt=0)
    oracle_dim_cap: int = Field(64, ge=1)
    rtol: float = Field(1e-8, gt=0)
    atol: float = Field(1e-10, gt=0)
    method: str = Field('RK45', pattern='^(RK45|DOP853|RK23)$')
    idle_tol: float = Field(1e-12, ge=0)
    tol_spohn: float = Field(1e-9, ge=0)
    transient_tau_es: float = Field(5.0, ge=0)
    validity_tau_r: float = Field(3.0, gt=0)
    secular_window_factor: float = Field(10.0, ge=0)
    lambda_map: bool = True

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings,
                                   dotenv_settings, file_secret_settings):
        return env_settings, dotenv_settings, init_settings, file_secret_settings


class ConfigManager:
    """Manage application configuration"""

    _instance = None
    _config = None
    _numerics = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
        return cls._instance

    @staticmethod
    def load_config(config_path: str) -> Dict[str, Any]:
        """
        Load configuration from YAML file

        Args:
            config_path: Path to config.yaml

        Returns:
            Configuration dictionary
        """
        if ConfigManager._config is not None:
            return ConfigManager._config

        base_path = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}

        config_str = yaml.dump(config)
        config_str = config_str.replace('${BASE_PATH}', base_path)
        config = yaml.safe_load(config_str)

        ConfigManager._config = config
        ConfigManager._numerics = None
        return config

    @staticmethod
    def get_config() -> Dict[str, Any]:
        """Get loaded configuration"""
        if ConfigManager._config is None:
            raise RuntimeError("Configuration not loaded. Call load_config() first.")
        return ConfigManager._config

    @staticmethod
    def get(key_path: str, default: Any = None) -> Any:
        """
        Get configuration value by path

        Args:
            key_path: Path to config key (e.g., 'sweeps.max_workers')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        if ConfigManager._config is None:
            return default

        keys = key_path.split('.')
        value = ConfigManager._config

        for key in keys:
            if isinstance(value, dict):
                value = value.get(key)
                if value is None:
                    return default
            else:
                return default

        return value if value is not None else default

    @staticmethod
    def get_numerics(overrides: Optional[Dict[str, Any]] = None) -> NumericsSettings:
        """
        Get numerical settings

        Args:
            overrides: Values taking precedence over config.yaml for this call only

        Returns:
            NumericsSettings instance
        """
        if overrides:
            section = dict(ConfigManager.get('numerics', {}) or {})
            section.update(overrides)
            return NumericsSettings(**section)

        if ConfigManager._numerics is None:
            ConfigManager._numerics = NumericsSettings(**(ConfigManager.get('numerics', {}) or {}))
        return ConfigManager._numerics

    @staticmethod
    def reset():
        """Reset configuration (useful for testing)"""
        ConfigManager._config = None
        ConfigManager._numerics = None
