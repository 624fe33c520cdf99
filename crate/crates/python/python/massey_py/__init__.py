"""Triple Massey products and Kummer formations on finite groups."""

from ._native import (
    Axioms,
    Formation,
    GuardExceededError,
    Group,
    InconsistencyError,
    InvalidInputError,
    MasseyProduct,
    Pipeline,
    StepFailedError,
    cocycle_check,
    massey_product,
)

__all__ = [
    "Axioms",
    "Formation",
    "GuardExceededError",
    "Group",
    "InconsistencyError",
    "InvalidInputError",
    "MasseyProduct",
    "Pipeline",
    "StepFailedError",
    "cocycle_check",
    "massey_product",
]
