# agents.py
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Optional

from tqdm import tqdm

logger = logging.getLogger(__name__)


class BaseAgent:
    def __init__(self, max_workers=4):
        self.max_workers = max_workers
        self.executor = ThreadPoolExecutor(max_workers=max_workers)

    def submit_task(self, func, *args, **kwargs):
        return self.executor.submit(func, *args, **kwargs)

    def shutdown(self):
        self.executor.shutdown(wait=True)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.shutdown()
        return False


class SweepAgent(BaseAgent):
    """Evaluates sweep grid points on a thread pool and hands results back in submission order."""

    def __init__(self, max_workers=4, progress=False):
        super().__init__(max_workers=max_workers)
        self.progress = progress

    def map(self, func: Callable[[Any], Any], items: Iterable[Any], description: Optional[str] = None) -> List[Any]:
        items = list(items)
        futures = [self.submit_task(func, item) for item in items]
        results = []
        for future in tqdm(futures, total=len(futures), desc=description, disable=not self.progress):
            results.append(future.result())
        logger.debug(f"SweepAgent finished {len(results)} tasks on {self.max_workers} workers")
        return results
