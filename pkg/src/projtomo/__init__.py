"""Simulation toolkit for learning projector states.

Exact combinatorics for weak Schur sampling and the pretty good
measurement, Jordan-block geometry of projector pairs, and a simulated
bootstrapping pipeline from trace-distance to Bures-distance learners.
"""

from .errors import (
    CapacityError,
    DegenerateRestrictionError,
    DomainError,
    ProjTomoError,
    ProtocolViolationError,
    ValidityError,
)
from .rng import SeededRng

__all__ = [
    "CapacityError",
    "DegenerateRestrictionError",
    "DomainError",
    "ProjTomoError",
    "ProtocolViolationError",
    "SeededRng",
    "ValidityError",
]

__version__ = "0.1.0"
