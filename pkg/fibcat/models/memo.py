"""
Per-object memo tables for derived data of bases and fibered categories.

Results live in the owner's ``memo`` dict and are dropped with the owner.
"""
import functools
from typing import Any, Callable, Dict, Hashable, Protocol, TypeVar, cast

R = TypeVar("R")


class HasMemo(Protocol):
    @property
    def memo(self) -> Dict[Hashable, Any]: ...


def memoized(func: Callable[..., R]) -> Callable[..., R]:
    """
    Decorator caching func(owner, *keys) in owner.memo.

    Keys must be hashable; raised exceptions are not cached.

    Args:
        func: Function whose first argument carries a memo dict

    Returns:
        Wrapped function
    """
    tag = f"{func.__module__}.{func.__qualname__}"

    @functools.wraps(func)
    def wrapper(owner: HasMemo, *keys: Hashable) -> R:
        key = (tag, keys)
        try:
            return cast(R, owner.memo[key])
        except KeyError:
            pass
        result = func(owner, *keys)
        owner.memo[key] = result
        return result

    return wrapper
