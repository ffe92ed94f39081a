from .core import ExhaustiveGadgetSearch

__all__ = ["ExhaustiveGadgetSearch"]
