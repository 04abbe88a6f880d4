"""
Sweep Executor
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, List, Optional, Sequence, TypeVar
from src.utils.config import ConfigManager
from src.utils.logger import LoggerConfig


logger = LoggerConfig.get_logger(__name__)

T = TypeVar('T')
R = TypeVar('R')


class SweepExecutor:
    """Evaluate grid points concurrently and return results in grid order"""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or int(ConfigManager.get('sweeps.max_workers', 4))
        self.completed_count = 0
        self.failed_count = 0

    def map(self, func: Callable[[T], R], points: Sequence[T]) -> List[R]:
        """
        Apply func to every point

        Args:
            func: Point evaluator, must not share mutable state between calls
            points: Grid points in output order

        Returns:
            Results ordered by grid index

        Raises:
            The exception of the lowest-index failing point
        """
        results: Dict[int, R] = {}
        errors: Dict[int, Exception] = {}

        logger.info(f"Sweep started: {len(points)} points on {self.max_workers} workers")
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = {executor.submit(func, point): index for index, point in enumerate(points)}
            for future in as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                    self.completed_count += 1
                except Exception as e:
                    errors[index] = e
                    self.failed_count += 1
                    logger.error(f"Sweep point {index} failed: {type(e).__name__}: {str(e)}")

        if errors:
            raise errors[min(errors)]

        logger.info(f"Sweep finished: {self.completed_count} points")
        return [results[index] for index in range(len(points))]

    def get_statistics(self) -> Dict[str, int]:
        return {
            'completed': self.completed_count,
            'failed': self.failed_count,
        }
