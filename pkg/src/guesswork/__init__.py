"""Optimal oracle questions for guessing with a noisy answer, in exact arithmetic."""

from .core import (
    BinaryAsymmetric, BinarySymmetric, Distribution, MaryAdditive, MomentFunction, MPartition,
    Partition, PosteriorSystem, PosteriorTerm, build_posterior_system, guesswork_moment,
    parse_distribution, posterior_sets, unconstrained_minimum,
)
from .errors import (
    ArityError, CapExceededError, ConditionError, GuessworkError, InputError, TiesPresentError,
)

__version__ = "0.1.0"
