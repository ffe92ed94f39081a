from .core import AnnealingGadgetSearch

__all__ = ["AnnealingGadgetSearch"]
