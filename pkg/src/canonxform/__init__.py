"""Canonical cosine and sine transforms, their convolutions, and Boehmian extensions."""
from .params import CanonicalParams, compose, inverse, preset, validate
from .functions import QuadratureConfig, SampledField, evaluate, integrate, l1_norm, sample

__version__ = "0.1.0"

__all__ = ["CanonicalParams", "compose", "inverse", "preset", "validate", "QuadratureConfig",
           "SampledField", "evaluate", "integrate", "l1_norm", "sample"]
