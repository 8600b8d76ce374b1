"""Fractional s-perimeters, nonlocal interactions and their s -> 0 limits."""

from fracperim.errors import (
    DivergentInteractionError,
    DomainError,
    ExponentOverflowError,
    FracPerimError,
    HalfMeasureError,
    RankDeficiencyError,
    RegimeError,
    SchemaError,
    SingularPairError,
    UnboundedMeasureError,
    UnsupportedSceneError,
)
from fracperim.set_model import (
    Annulus,
    Ball,
    Box,
    Complement,
    IntervalUnion,
    RadialProfileSet,
    Scene,
    SetUnion,
    SphereConstant,
    lebesgue_measure,
    normalized_measure,
    sphere_measure,
)

__version__ = "0.1.0"

__all__ = [
    "Annulus",
    "Ball",
    "Box",
    "Complement",
    "DivergentInteractionError",
    "DomainError",
    "ExponentOverflowError",
    "FracPerimError",
    "HalfMeasureError",
    "IntervalUnion",
    "RadialProfileSet",
    "RankDeficiencyError",
    "RegimeError",
    "Scene",
    "SchemaError",
    "SetUnion",
    "SingularPairError",
    "SphereConstant",
    "UnboundedMeasureError",
    "UnsupportedSceneError",
    "lebesgue_measure",
    "normalized_measure",
    "sphere_measure",
]
