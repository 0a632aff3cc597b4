"""Finite-model workbench for rough mereology, granular operator spaces and rough contact."""

from .approximation import ApproximationSpace, lower_approx, regions, rough_equal, rough_inclusion, upper_approx
from .model import GranularSpaceModel, SetModel, TableModel, to_table_model
from .universe import BinaryRelation, Cover, Partition, SubsetValue, Universe

__version__ = "0.1.0"

__all__ = [
    "ApproximationSpace",
    "BinaryRelation",
    "Cover",
    "GranularSpaceModel",
    "Partition",
    "SetModel",
    "SubsetValue",
    "TableModel",
    "Universe",
    "lower_approx",
    "regions",
    "rough_equal",
    "rough_inclusion",
    "to_table_model",
    "upper_approx",
]
