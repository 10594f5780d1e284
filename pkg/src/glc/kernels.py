"""Kernel feature expansion: SMO-trained support vectors, per-point kernel
features against those vectors, and a linear model fit in the expanded space.

Pipeline: train a soft-margin SVM (simplified SMO), keep the support
vectors, map every point x to p = (K(x, y_1), ..., K(x, y_m)), min-max
normalize the new columns, and fit the usual discriminant there. The
decision for an unseen point goes through the identical expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from glc.data import DataError, Dataset, apply_norm_params, normalize_minmax
from glc.linear import GlcModel, fit_lda, make_glc_model

ALPHA_TOL = 1e-8


@dataclass
class KernelConfig:
    """SVM and kernel hyperparameters; gamma defaults to 1/n at use time."""

    kind: str = "rbf"  # "rbf" or "poly"
    gamma: float | None = None
    degree: int = 3
    coef: float = 1.0
    svm_c: float = 1.0
    tol: float = 1e-3
    seed: int = 0
    max_nonimproving_passes: int = 200
    max_total_passes: int = 2000

    def resolved_gamma(self, n_attributes: int) -> float:
        g = self.gamma if self.gamma is not None else 1.0 / n_attributes
        if g <= 0:
            raise DataError("gamma must be positive")
        return g


@dataclass
class SupportVectorSet:
    """Support vectors with their multipliers and kernel parameters."""

    vectors: np.ndarray  # (m, n)
    alphas: np.ndarray  # (m,), all > ALPHA_TOL
    sv_labels: np.ndarray  # (m,), +-1
    kernel_kind: str
    gamma: float
    poly_degree: int = 3
    poly_coef: float = 1.0
    bias: float = 0.0
    converged: bool = True
    source_indices: list[int] = field(default_factory=list)

    def __post_init__(self):
        if len(self.vectors) < 1:
            raise DataError("support vector set is empty")
        if np.any(self.alphas <= ALPHA_TOL):
            raise DataError("support vector multipliers must exceed tolerance")
        if self.gamma <= 0:
            raise DataError("gamma must be positive")

    @property
    def m(self) -> int:
        return len(self.vectors)


@dataclass
class ExpandedDataset:
    """m-D kernel-feature rows for a base dataset, labels copied."""

    base: Dataset
    features: np.ndarray  # (n_points, m)
    labels: list[str]

    def as_dataset(self, name: str | None = None) -> Dataset:
        attrs = [f"sv{i + 1}" for i in range(self.features.shape[1])]
        return Dataset(name=name or f"{self.base.name}_expanded",
                       attributes=attrs, points=self.features.copy(),
                       labels=list(self.labels))


def _kernel_matrix(x: np.ndarray, y: np.ndarray, kind: str, gamma: float,
                   degree: int, coef: float) -> np.ndarray:
    if kind == "poly":
        return (gamma * (x @ y.T) + coef) ** degree
    if kind == "rbf":
        sq = (np.sum(x * x, axis=1)[:, None] + np.sum(y * y, axis=1)[None, :]
              - 2.0 * (x @ y.T))
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise DataError(f"unknown kernel kind {kind!r}")


def kernel_eval(x, y, cfg: KernelConfig) -> float:
    """K(x, y): polynomial (gamma x.y + coef)^degree or RBF exp(-gamma |x-y|^2)."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise DataError(f"kernel arguments disagree: {xv.shape} vs {yv.shape}")
    g = cfg.resolved_gamma(len(xv))
    return float(_kernel_matrix(xv[None, :], yv[None, :], cfg.kind, g,
                                cfg.degree, cfg.coef)[0, 0])


def fit_svm(d: Dataset, cfg: KernelConfig) -> SupportVectorSet:
    """Simplified SMO with box constraint svm_c and seeded pair selection.

    Labels map to +1 for the first class in sorted label order. Training
    stops after max_nonimproving_passes consecutive passes without a
    multiplier update; hitting max_total_passes first returns the current
    support vectors with converged=False.
    """
    classes = sorted(set(d.labels))
    if len(classes) != 2:
        raise DataError(f"SVM needs a binary dataset, got classes {classes}")
    x = d.points
    y = np.array([1.0 if lab == classes[0] else -1.0 for lab in d.labels])
    n = len(y)
    gamma = cfg.resolved_gamma(d.n_attributes)
    kmat = _kernel_matrix(x, x, cfg.kind, gamma, cfg.degree, cfg.coef)

    rng = np.random.default_rng(cfg.seed)
    alphas = np.zeros(n)
    b = 0.0
    c_box = cfg.svm_c
    quiet_passes = 0
    total_passes = 0
    while quiet_passes < cfg.max_nonimproving_passes \
            and total_passes < cfg.max_total_passes:
        changed = 0
        for i in range(n):
            ei = float((alphas * y) @ kmat[:, i]) + b - y[i]
            if not ((y[i] * ei < -cfg.tol and alphas[i] < c_box)
                    or (y[i] * ei > cfg.tol and alphas[i] > 0)):
                continue
            j = int(rng.integers(0, n - 1))
            if j >= i:
                j += 1
            ej = float((alphas * y) @ kmat[:, j]) + b - y[j]
            ai_old, aj_old = alphas[i], alphas[j]
            if y[i] != y[j]:
                lo = max(0.0, aj_old - ai_old)
                hi = min(c_box, c_box + aj_old - ai_old)
            else:
                lo = max(0.0, ai_old + aj_old - c_box)
                hi = min(c_box, ai_old + aj_old)
            if lo == hi:
                continue
            eta = 2.0 * kmat[i, j] - kmat[i, i] - kmat[j, j]
            if eta >= 0:
                continue
            aj = np.clip(aj_old - y[j] * (ei - ej) / eta, lo, hi)
            if abs(aj - aj_old) < 1e-5:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            alphas[i], alphas[j] = ai, aj
            b1 = (b - ei - y[i] * (ai - ai_old) * kmat[i, i]
                  - y[j] * (aj - aj_old) * kmat[i, j])
            b2 = (b - ej - y[i] * (ai - ai_old) * kmat[i, j]
                  - y[j] * (aj - aj_old) * kmat[j, j])
            if 0 < ai < c_box:
                b = b1
            elif 0 < aj < c_box:
                b = b2
            else:
                b = (b1 + b2) / 2
            changed += 1
        quiet_passes = quiet_passes + 1 if changed == 0 else 0
        total_passes += 1

    keep = np.nonzero(alphas > ALPHA_TOL)[0]
    if keep.size == 0:
        raise DataError("SMO produced no support vectors")
    return SupportVectorSet(
        vectors=x[keep].copy(), alphas=alphas[keep].copy(),
        sv_labels=y[keep].copy(), kernel_kind=cfg.kind, gamma=gamma,
        poly_degree=cfg.degree, poly_coef=cfg.coef, bias=b,
        converged=quiet_passes >= cfg.max_nonimproving_passes,
        source_indices=[int(i) for i in keep])


def load_sv_file(source, n_attributes: int, cfg: KernelConfig) -> SupportVectorSet:
    """Import support vectors from a CSV of m rows with a trailing alpha
    column, bypassing SMO training entirely."""
    from glc.data import load_csv

    d = load_csv(source, "alpha")
    if d.n_attributes != n_attributes:
        raise DataError(f"support vector file has {d.n_attributes} attribute "
                        f"columns, dataset has {n_attributes}")
    alphas = np.array([float(lab) for lab in d.labels])
    signs = np.where(alphas < 0, -1.0, 1.0)
    return SupportVectorSet(
        vectors=d.points.copy(), alphas=np.abs(alphas), sv_labels=signs,
        kernel_kind=cfg.kind, gamma=cfg.resolved_gamma(n_attributes),
        poly_degree=cfg.degree, poly_coef=cfg.coef)


def expand_points(points: np.ndarray, svs: SupportVectorSet) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != svs.vectors.shape[1]:
        raise DataError("point dimensionality does not match support vectors")
    return _kernel_matrix(pts, svs.vectors, svs.kernel_kind, svs.gamma,
                          svs.poly_degree, svs.poly_coef)


def expand_dataset(d: Dataset, svs: SupportVectorSet) -> ExpandedDataset:
    """Feature j of each row is the kernel of that row with support vector j."""
    return ExpandedDataset(base=d, features=expand_points(d.points, svs),
                           labels=list(d.labels))


@dataclass
class GlcNlResult:
    """Everything needed to apply a kernel-expanded discriminant."""

    svs: SupportVectorSet
    expanded: ExpandedDataset
    model: GlcModel
    norm_params: list[tuple[float, float]]

    def project_points(self, points: np.ndarray) -> np.ndarray:
        feats = expand_points(points, self.svs)
        return apply_norm_params(feats, self.norm_params) @ self.model.k

    def predict(self, points: np.ndarray) -> list[str]:
        u = self.project_points(points)
        c1, c2 = self.model.class_roles
        return [c1 if v < self.model.threshold else c2 for v in u]


def glc_nl_fit(d: Dataset, cfg: KernelConfig,
               roles: tuple[str, str] | None = None,
               svs: SupportVectorSet | None = None) -> GlcNlResult:
    """SVM support vectors -> kernel expansion -> normalized linear fit.

    A pre-loaded SupportVectorSet (file import) skips training.
    """
    if roles is None:
        cls = d.classes()
        if len(cls) != 2:
            raise DataError(f"dataset has {len(cls)} classes; binarize first")
        roles = (cls[0], cls[1])
    if svs is None:
        svs = fit_svm(d, cfg)
    expanded = expand_dataset(d, svs)
    eds = normalize_minmax(expanded.as_dataset())
    model = make_glc_model(fit_lda(eds, roles), eds, roles)
    return GlcNlResult(svs=svs, expanded=expanded, model=model,
                       norm_params=eds.norm_params)
