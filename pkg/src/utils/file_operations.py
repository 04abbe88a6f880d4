"""
File Operations Utility Module
"""

import os
import hashlib
from typing import Dict, Optional, Tuple
import pandas as pd
from src.utils.config import ConfigManager
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)


class FileOperations:
    """Output directory handling and versioned CSV tables"""

    @staticmethod
    def compute_text_hash(text: str, algorithm: str = 'sha256', length: int = 12) -> str:
        """
        Short digest of a text, used to tag tables with the scenario that produced them

        Args:
            text: Text to hash
            algorithm: Hash algorithm ('md5', 'sha256')
            length: Number of hex characters kept

        Returns:
            Hash string
        """
        hasher = hashlib.new(algorithm)
        hasher.update(text.encode('utf-8'))
        return hasher.hexdigest()[:length]

    @staticmethod
    def ensure_dir(directory: str) -> str:
        """Create a directory (and parents) if missing"""
        os.makedirs(directory, exist_ok=True)
        return directory

    @staticmethod
    def table_path(out_dir: str, scenario_name: str, table: str) -> str:
        """<out_dir>/<scenario>_<table>.csv"""
        return os.path.join(out_dir, f"{scenario_name}_{table}.csv")

    @staticmethod
    def write_csv(frame: pd.DataFrame, path: str, header: Optional[Dict[str, str]] = None) -> str:
        """
        Write a table preceded by a '# schema=N key=value ...' comment line

        Args:
            frame: Table with its final column order
            path: Destination file
            header: Extra key/value pairs for the comment line

        Returns:
            Path written
        """
        schema_version = ConfigManager.get('output.schema_version', 1)
        float_format = ConfigManager.get('output.float_format', '%.12g')

        fields = [f"schema={schema_version}"]
        fields.extend(f"{key}={value}" for key, value in (header or {}).items())

        FileOperations.ensure_dir(os.path.dirname(os.path.abspath(path)))
        try:
            with open(path, 'w', newline='') as f:
                f.write('# ' + ' '.join(fields) + '\n')
                frame.to_csv(f, index=False, float_format=float_format, na_rep='nan', lineterminator='\n')
        except OSError as e:
            logger.error(f"Error writing table {path}: {str(e)}")
            raise

        logger.info(f"Table written: {path} ({len(frame)} rows)")
        return path

    @staticmethod
    def read_csv(path: str) -> Tuple[Dict[str, str], pd.DataFrame]:
        """
        Read a table written by write_csv

        Returns:
            (header fields, DataFrame)
        """
        with open(path, 'r') as f:
            first = f.readline()
        if not first.startswith('#'):
            raise ValueError(f"{path} has no schema header")
        header = dict(field.split('=', 1) for field in first[1:].split() if '=' in field)
        return header, pd.read_csv(path, skiprows=1)
