"""Constructions and checkers for fair representation by independent sets
and perfect matchings."""

from .core import (ColorMatrix, FairnessReport, FairRepError, Kind, VertexPartition, color_matrix,
                   cycle, fairness_report, hamming_distance, instance_from_json, instance_to_json,
                   path, power_cycle, sim, subset_matrix)

__version__ = "0.1.0"

__all__ = [
    "ColorMatrix", "FairnessReport", "FairRepError", "Kind", "VertexPartition", "color_matrix",
    "cycle", "fairness_report", "hamming_distance", "instance_from_json", "instance_to_json",
    "path", "power_cycle", "sim", "subset_matrix",
]
