"""Graph-transduction domain adaptation.

Thin Python face over the C++ engine: build the shared similarity graph from
source and target features, then propagate the source labels to the target
rows with evolutionary game dynamics or one of the classical reference
propagators.
"""

from gtda._gtda import (
    EngineError,
    PriorModel,
    adapt,
    standardize,
    synthetic_shift,
    train_prior,
)

__all__ = [
    "EngineError",
    "PriorModel",
    "adapt",
    "standardize",
    "synthetic_shift",
    "train_prior",
]
