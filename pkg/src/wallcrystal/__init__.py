"""Polyhedral-realization inequalities for affine crystals via Young walls."""

from wallcrystal.affine_data import (
    AffineType,
    Family,
    HalfInt,
    cartan_matrix,
    index_class,
    langlands_dual,
    parse_type,
    periodic_map,
    thresholds,
)

__all__ = [
    "AffineType",
    "Family",
    "HalfInt",
    "cartan_matrix",
    "index_class",
    "langlands_dual",
    "parse_type",
    "periodic_map",
    "thresholds",
]
