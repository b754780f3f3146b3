from abc import ABC, abstractmethod
from typing import Dict, List, Type

from config import DEFAULT_SETTINGS, Settings
from stirling_types import BoundBracket, Index, Method


class BoundMethod(ABC):
    """
    Abstract base for every certified bracket the dispatcher can evaluate.

    Subclasses declare their ``method`` tag and implement evaluate(); the
    class decorator ``register`` makes them visible to regime_dispatch.
    """

    method: Method

    def __init__(self, settings: Settings = DEFAULT_SETTINGS):
        self.settings = settings

    @abstractmethod
    def evaluate(self, idx: Index) -> BoundBracket:
        """
        Bracket for S(idx). Must not raise for a precondition failure: return a
        bracket with ``preconditions_ok`` false and the reason in ``report``.
        """

    @abstractmethod
    def get_description(self) -> str:
        """One-line description of the bound, shown by ``compare``."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.method.value})"


_REGISTRY: Dict[Method, Type[BoundMethod]] = {}


def register(cls: Type[BoundMethod]) -> Type[BoundMethod]:
    if getattr(cls, "__abstractmethods__", None):
        raise TypeError(f"{cls.__name__} is abstract and cannot be registered")
    _REGISTRY[cls.method] = cls
    return cls


def registered_methods(settings: Settings = DEFAULT_SETTINGS) -> List[BoundMethod]:
    """Fresh instances of every registered method, in registration order."""
    return [cls(settings) for cls in _REGISTRY.values()]


def get_method(method: Method, settings: Settings = DEFAULT_SETTINGS) -> BoundMethod:
    try:
        return _REGISTRY[method](settings)
    except KeyError:
        raise ValueError(f"No bound method registered for {method.value}") from None
