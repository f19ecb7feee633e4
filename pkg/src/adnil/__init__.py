"""Exact F_p computations for ad-nilpotent Lie algebras and their envelopes."""

from .errors import (
    AdnilError,
    BudgetError,
    ContractError,
    ModulusError,
    ParseError,
    PreconditionError,
    StructuralError,
)
from .exactlin import FpMatrix, FpScalar, Subspace
from .liecore import LieAlgebra
from .grassenv import Envelope, EnvelopeElement, GrassmannIndex

__version__ = "0.1.0"
