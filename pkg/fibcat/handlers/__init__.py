"""Command handlers package."""
from fibcat.handlers.check import CheckHandlers
from fibcat.handlers.extend import ExtendHandlers
from fibcat.handlers.generate import GenerateHandlers

__all__ = ["CheckHandlers", "ExtendHandlers", "GenerateHandlers"]
