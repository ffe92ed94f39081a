"""
errors.py
─────────
Exception hierarchy shared by every modrep module.

All errors derive from ``ModrepError`` which is itself a ``ValueError``, so
callers that only care about "bad argument" can keep catching ``ValueError``.
Search exhaustion and infeasibility are *not* errors; they come back as
``SearchOutcome`` values (see base_search.py).
"""


class ModrepError(ValueError):
    """Base class for all modrep failures."""


class InvalidModulusError(ModrepError):
    """Modulus below 2, or a prime/prime-power where a composite is required."""


class DimensionMismatchError(ModrepError):
    """Operands do not conform (shape, arity or modulus mismatch)."""


class UnsupportedRingError(ModrepError):
    """Field-only algorithm requested over Z_{p^e} with e > 1."""


class ArityMismatchError(ModrepError):
    """Polynomials compared over different variable sets or moduli."""


class NonLinearEntryError(ModrepError):
    """Matrix-representation candidate has an entry of the wrong degree."""


class InvalidTargetError(ModrepError):
    """Matrix violates the gadget-target invariants (unit diagonal, classed off-diagonal)."""


class InvalidInputError(ModrepError):
    """Input fails a representation precondition; ``witness`` names the offending monomial."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SearchSpaceError(ModrepError):
    """Exhaustive enumeration requested beyond its guard."""


class GadgetFormatError(ModrepError):
    """Gadget JSON file is malformed or inconsistent."""


class MatrixFormatError(ModrepError):
    """Matrix text file is malformed."""
