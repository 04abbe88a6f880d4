"""
Scenario Loader Module
"""

import os
from typing import Any, Dict, Iterable, Tuple
import yaml
from pydantic import ValidationError
from src.scenarios.schema import ScenarioFile
from src.utils.errors import ScenarioSchemaError
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


class ScenarioLoader:
    """Read scenario YAML files, apply dotted overrides and validate"""

    @staticmethod
    def load(path: str, overrides: Iterable[str] = ()) -> ScenarioFile:
        """
        Load and validate a scenario file

        Args:
            path: Path to the YAML scenario
            overrides: 'key=value' strings with dotted keys, e.g. 'machine.g=0.01'

        Returns:
            ScenarioFile

        Raises:
            ScenarioSchemaError: unreadable file, invalid YAML or schema violation
        """
        if not os.path.isfile(path):
            raise ScenarioSchemaError(f"Scenario file not found: {path}")

        try:
            with open(path, 'r') as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ScenarioSchemaError(f"Invalid YAML in {path}: {str(e)}") from e

        if not isinstance(data, dict):
            raise ScenarioSchemaError(f"Scenario {path} must be a mapping at the top level")

        data.setdefault('name', os.path.splitext(os.path.basename(path))[0])
        for item in overrides:
            key, value = ScenarioLoader.parse_override(item)
            ScenarioLoader.apply_override(data, key, value)
            logger.info(f"Override applied: {key}={value!r}")

        scenario = ScenarioLoader.validate(data)
        logger.info(f"Scenario loaded: {scenario.name} ({scenario.run.kind})")
        return scenario

    @staticmethod
    def parse_override(item: str) -> Tuple[str, Any]:
        """Split 'a.b=value', parsing the value as a YAML scalar"""
        key, sep, raw = item.partition('=')
        if not sep or not key.strip():
            raise ScenarioSchemaError(f"Override must look like key=value, got {item!r}")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ScenarioSchemaError(f"Cannot parse override value {raw!r}", key.strip()) from e
        return key.strip(), value

    @staticmethod
    def apply_override(data: Dict[str, Any], key: str, value: Any) -> Dict[str, Any]:
        """
        Set a dotted path in nested dictionaries and lists, creating mappings as needed

        Numeric path segments index into lists.
        """
        parts = key.split('.')
        node: Any = data
        for depth, part in enumerate(parts):
            last = depth == len(parts) - 1
            if isinstance(node, list):
                if not part.isdigit() or int(part) >= len(node):
                    raise ScenarioSchemaError(f"Invalid list index {part!r}", key)
                if last:
                    node[int(part)] = value
                else:
                    node = node[int(part)]
            elif isinstance(node, dict):
                if last:
                    node[part] = value
                else:
                    if node.get(part) is None:
                        node[part] = {}
                    node = node[part]
            else:
                raise ScenarioSchemaError(f"Cannot descend into a scalar at {part!r}", key)
        return data

    @staticmethod
    def validate(data: Dict[str, Any]) -> ScenarioFile:
        try:
            return ScenarioFile.model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            field_path = '.'.join(str(part) for part in error['loc'])
            raise ScenarioSchemaError(error['msg'], field_path or None) from e

    @staticmethod
    def with_overrides(scenario: ScenarioFile, values: Dict[str, Any]) -> ScenarioFile:
        """Copy of a scenario with dotted-path values replaced and re-validated"""
        data = scenario.model_dump(mode='json')
        for key, value in values.items():
            ScenarioLoader.apply_override(data, key, value)
        return ScenarioLoader.validate(data)

    @staticmethod
    def dump(scenario: ScenarioFile) -> str:
        """YAML text whose reload validates to the same scenario"""
        return yaml.safe_dump(scenario.model_dump(mode='json'), sort_keys=True)

