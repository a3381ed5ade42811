"""
Decorators for suite functions.
"""
import functools
import time
from typing import Any, Callable

from config import get_logger
from fibcat.exceptions import FibcatError
from fibcat.models.report import CheckReport

logger = get_logger(__name__)

SuiteFunction = Callable[..., CheckReport]


def log_execution(func: Callable[..., Any]) -> Callable[..., Any]:
    """
    Decorator to log execution time.

    Args:
        func: Function to wrap

    Returns:
        Wrapped function
    """

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start_time = time.perf_counter()
        logger.debug(f"{func.__name__} started")
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            execution_time = time.perf_counter() - start_time
            logger.error(f"{func.__name__} failed after {execution_time:.2f}s: {e}")
            raise
        execution_time = time.perf_counter() - start_time
        logger.info(f"{func.__name__} completed in {execution_time:.2f}s")
        return result

    return wrapper


def suite_guard(suite: str) -> Callable[[SuiteFunction], SuiteFunction]:
    """
    Decorator turning engine errors raised inside a suite into a failing report.

    Args:
        suite: Suite name given to the replacement report

    Returns:
        Decorator function
    """

    def decorator(func: SuiteFunction) -> SuiteFunction:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> CheckReport:
            try:
                return func(*args, **kwargs)
            except FibcatError as e:
                logger.warning(f"Suite {suite} aborted: {type(e).__name__}: {e}")
                report = CheckReport(suite=suite)
                report.add("error", [type(e).__name__], str(e))
                return report

        return wrapper

    return decorator
