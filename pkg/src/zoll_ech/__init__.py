"""ECH capacities of disk cotangent bundles of the sphere and projective plane."""

from .exact import PI, ExactQuantity

__all__ = ["PI", "ExactQuantity"]
__version__ = "0.1.0"
