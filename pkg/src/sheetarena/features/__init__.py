"""Programmatic workbook features used as rating covariates."""

from .extract import (
    FEATURE_NAMES,
    FeatureVector,
    color_family,
    extract_features,
    finance_color_score,
    has_free_numeric_literal,
    standardize_features,
)
from .tables import MIN_TABLE_CELLS, MIN_TABLE_SPAN, TableRegion, detect_tables

__all__ = [
    "FEATURE_NAMES",
    "FeatureVector",
    "color_family",
    "extract_features",
    "finance_color_score",
    "has_free_numeric_literal",
    "standardize_features",
    "MIN_TABLE_CELLS",
    "MIN_TABLE_SPAN",
    "TableRegion",
    "detect_tables",
]
