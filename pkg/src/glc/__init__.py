"""Lossless line-coordinate classification workbench.

Core pipeline: load a labeled n-D dataset, min-max normalize it, fit a
linear (or kernel-expanded) discriminant, render every point as a lossless
2-D polyline, and explain or stress the model with interval rules and
worst-case validation splits.
"""

from glc.data import (
    BinarizationSpec,
    DataError,
    Dataset,
    PcaAugmentation,
    binarize,
    load_csv,
    normalize_minmax,
    pca_augment,
)
from glc.linear import (
    EvaluationReport,
    GlcModel,
    evaluate,
    fit_glc,
    fit_lda,
    make_glc_model,
    project,
)

__all__ = [
    "BinarizationSpec",
    "DataError",
    "Dataset",
    "PcaAugmentation",
    "binarize",
    "load_csv",
    "normalize_minmax",
    "pca_augment",
    "EvaluationReport",
    "GlcModel",
    "evaluate",
    "fit_glc",
    "fit_lda",
    "make_glc_model",
    "project",
]
