"""
Main Application Entry Point
"""

import os
import sys
import argparse
from typing import List, Optional
from dotenv import load_dotenv
from src.utils.logger import LoggerConfig
from src.utils.config import ConfigManager
from src.utils.errors import MachineSimulationError
from src.scenarios.loader import ScenarioLoader
from src.scenarios.runner import ScenarioRunner


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qtm',
        description='Simulate quantum thermal machines powered by a finite quantum battery'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help='Run a scenario file')
    run.add_argument('scenario', help='Path to the scenario YAML file')
    run.add_argument(
        '--out', default=None,
        help='Output directory for CSV tables (default: folders.output in config.yaml)'
    )
    run.add_argument(
        '--oracle', action='store_true',
        help='Also compare the closed-form flows with the Redfield oracle'
    )
    run.add_argument(
        '--quiet', action='store_true',
        help='Only log warnings and errors to the console'
    )
    run.add_argument(
        '--override', action='append', default=[], metavar='KEY=VALUE',
        help='Replace a scenario value by dotted path, e.g. machine.g=0.01 (repeatable)'
    )
    return parser


def setup_application(quiet: bool = False):
    """Setup application configuration and logging"""
    load_dotenv()
    base_path = os.path.dirname(os.path.abspath(__file__))

    config_path = os.environ.get('QTM_CONFIG_PATH') or os.path.join(base_path, 'config', 'config.yaml')
    config = ConfigManager.load_config(config_path)
    log_dir = ConfigManager.get('folders.logs', os.path.join(base_path, 'logs'))

    logger = LoggerConfig.setup_logging(config_path, log_dir, quiet=quiet)

    logger.info("=" * 70)
    logger.info("QUANTUM THERMAL MACHINE SIMULATOR")
    logger.info("=" * 70)
    logger.info(f"Base Path: {base_path}")
    logger.info(f"Config Path: {config_path}")
    logger.info(f"Log Directory: {log_dir}")

    return logger, config, base_path


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point, returns the process exit code"""
    args = build_parser().parse_args(argv)

    try:
        logger, config, base_path = setup_application(quiet=args.quiet)
    except Exception as e:
        print(f"Error setting up application: {str(e)}", file=sys.stderr)
        return 1

    try:
        scenario = ScenarioLoader.load(args.scenario, args.override)
        out_dir = args.out or ConfigManager.get('folders.output', os.path.join(base_path, 'output'))
        written = ScenarioRunner(scenario, out_dir, oracle=args.oracle).run()
        for path in written:
            logger.info(f"  {path}")
        return 0

    except MachineSimulationError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        print(f"{type(e).__name__}: {str(e)}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Application error: {str(e)}", exc_info=True)
        print(f"{type(e).__name__}: {str(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
