"""Separable NMF column extraction (C++ core)."""

from ._core import (
    ConvergenceFailure,
    RankDeficiency,
    __version__,
    extract,
    extract_with_outliers,
    generate,
    ppi,
    simplex_project,
    singular_values,
    sivm,
    theorem_bound,
    vca,
)

__all__ = [
    "ConvergenceFailure",
    "RankDeficiency",
    "__version__",
    "extract",
    "extract_with_outliers",
    "generate",
    "ppi",
    "simplex_project",
    "singular_values",
    "sivm",
    "theorem_bound",
    "vca",
]
