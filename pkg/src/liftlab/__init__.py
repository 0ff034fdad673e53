"""Quasi-isometric liftings of operators similar to contractions, at desk scale.

Construct the structured liftings, certify or refute every checkable condition
on concrete instances, and search operator classes with deterministic seeds.
"""

__version__ = "0.1.0"

from .errors import (
    HypothesesFailed,
    KernelConditionFailed,
    LiftlabError,
    NotQuasicontractionError,
    NotQuasiIsometryError,
    RangeNotIncludedError,
)
from .graded import GradedVector, LiftedSpaceShape
from .hosts import ShiftedHostOperator
from .liftings import (
    Certificate,
    LiftingOperator,
    build_expansive_host_certificate,
    build_left_invertible_lifting,
    build_natural_lifting,
    build_quasi_isometric_lifting,
    build_quasicontraction_lifting,
    check_certificate_conditions,
)

__all__ = [
    "Certificate",
    "GradedVector",
    "HypothesesFailed",
    "KernelConditionFailed",
    "LiftedSpaceShape",
    "LiftingOperator",
    "LiftlabError",
    "NotQuasiIsometryError",
    "NotQuasicontractionError",
    "RangeNotIncludedError",
    "ShiftedHostOperator",
    "build_expansive_host_certificate",
    "build_left_invertible_lifting",
    "build_natural_lifting",
    "build_quasi_isometric_lifting",
    "build_quasicontraction_lifting",
    "check_certificate_conditions",
    "__version__",
]
