"""Linear discriminant fitting, coefficient normalization, angle derivation,
threshold optimization, and evaluation.

The discriminant F(x) = sum c_i x_i is normalized to G(x) = sum k_i x_i with
k_i = c_i / |c_max|, so every k_i lies in [-1, 1] and the segment angles
Q_i = arccos|k_i| are well defined. Class 1 is predicted when the projection
falls strictly below the threshold; the decision is identical under (F, T)
and (G, T / |c_max|).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from glc.data import DataError, Dataset

LDA_RIDGE = 1e-6


@dataclass
class GlcModel:
    """One linear discriminant in normalized line-coordinate form.

    coefficients: raw per-attribute reals c_i (nonzero vector).
    k: c_i / |c_max|, max absolute value 1 for fitted models.
    c_max_abs: max_i |c_i|.
    angles: arccos|k_i| in radians, in [0, pi/2].
    signs: sign of k_i as +-1 (+1 when k_i == 0).
    threshold: T on the normalized projection axis; class 1 iff u < T.
    class_roles: (class-1 label, class-2 label).
    """

    coefficients: np.ndarray
    k: np.ndarray
    c_max_abs: float
    angles: np.ndarray
    signs: np.ndarray
    threshold: float
    class_roles: tuple[str, str]

    @property
    def n_attributes(self) -> int:
        return len(self.k)

    def with_threshold(self, t: float) -> "GlcModel":
        return GlcModel(self.coefficients.copy(), self.k.copy(), self.c_max_abs,
                        self.angles.copy(), self.signs.copy(), float(t),
                        self.class_roles)

    def with_angle(self, index: int, radians: float) -> "GlcModel":
        """Interactive angle override: recompute k_i = cos(Q_i) * sign_i.

        The coefficient is kept consistent as c_i = k_i * c_max_abs; the
        max-|k| = 1 property can be lost by edits.
        """
        if not 0 <= index < self.n_attributes:
            raise DataError(f"angle index {index} out of range")
        if not 0 <= radians <= np.pi / 2 + 1e-12:
            raise DataError("angle must lie in [0, 90] degrees")
        angles = self.angles.copy()
        k = self.k.copy()
        coeffs = self.coefficients.copy()
        angles[index] = radians
        k[index] = np.cos(radians) * self.signs[index]
        coeffs[index] = k[index] * self.c_max_abs
        return GlcModel(coeffs, k, self.c_max_abs, angles, self.signs.copy(),
                        self.threshold, self.class_roles)

    def to_json_dict(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "k": [float(v) for v in self.k],
            "c_max_abs": float(self.c_max_abs),
            "angles_deg": [float(np.degrees(a)) for a in self.angles],
            "signs": [int(s) for s in self.signs],
            "threshold": float(self.threshold),
            "class_roles": list(self.class_roles),
        }


@dataclass
class EvaluationReport:
    """Confusion grid and per-point projections for one model on one dataset."""

    confusion: list[list[int]]  # rows real (class1, class2), cols predicted
    accuracy: float
    misclassified_indices: list[int]
    projections: np.ndarray
    predictions: list[str]
    class_roles: tuple[str, str]
    data_used: float = 1.0

    def to_json_dict(self) -> dict:
        # *_display strings exist so clients can show analytics verbatim
        # without doing any arithmetic of their own
        return {
            "confusion": [[int(v) for v in row] for row in self.confusion],
            "accuracy": float(self.accuracy),
            "accuracy_display": f"{self.accuracy * 100:.2f}%",
            "misclassified_indices": [int(i) for i in self.misclassified_indices],
            "class_roles": list(self.class_roles),
            "data_used": float(self.data_used),
            "data_used_display": f"{self.data_used * 100:.2f}%",
        }


def fit_lda(d: Dataset, roles: tuple[str, str]) -> np.ndarray:
    """Regularized LDA coefficients oriented so class 1 projects below T.

    C solves (pooled within-class covariance + 1e-6 I) C = mean2 - mean1,
    where mean1/mean2 are the class-role means. The mean difference is taken
    class2-minus-class1 so the strict "u < T means class 1" rule can reach
    the training optimum.
    """
    c1, c2 = roles
    present = set(d.labels)
    if c1 not in present or c2 not in present:
        raise DataError(f"class roles {roles} not both present in dataset")
    x1 = d.points[[i for i, lab in enumerate(d.labels) if lab == c1]]
    x2 = d.points[[i for i, lab in enumerate(d.labels) if lab == c2]]
    if len(x1) < 2 or len(x2) < 2:
        raise DataError("each class needs at least 2 points to fit LDA")
    n1, n2 = len(x1), len(x2)
    s1 = (x1 - x1.mean(axis=0)).T @ (x1 - x1.mean(axis=0))
    s2 = (x2 - x2.mean(axis=0)).T @ (x2 - x2.mean(axis=0))
    pooled = (s1 + s2) / (n1 + n2 - 2)
    n = d.n_attributes
    coeffs = np.linalg.solve(pooled + LDA_RIDGE * np.eye(n),
                             x2.mean(axis=0) - x1.mean(axis=0))
    if not np.all(np.isfinite(coeffs)) or np.max(np.abs(coeffs)) == 0:
        raise DataError("LDA produced a zero or non-finite coefficient vector")
    return coeffs


def sweep_threshold(projections: np.ndarray, labels, roles: tuple[str, str]) -> float:
    """Accuracy-maximizing threshold for the rule "u < T means class 1".

    Candidates are every midpoint between adjacent distinct projections plus
    one point beyond each extreme. Ties break toward the midpoint of the
    full projection range, then toward the smaller T.
    """
    u = np.asarray(projections, dtype=float)
    is1 = np.array([lab == roles[0] for lab in labels])
    umin, umax = float(u.min()), float(u.max())
    spread = max(umax - umin, 1.0)
    distinct = np.unique(u)
    candidates = [umin - 0.5 * spread]
    candidates.extend(((distinct[:-1] + distinct[1:]) / 2).tolist())
    candidates.append(umax + 0.5 * spread)

    mid = (umin + umax) / 2
    n = len(u)
    best_t, best_acc, best_dist = None, -1.0, np.inf
    for t in candidates:
        below = u < t
        acc = (np.count_nonzero(below & is1)
               + np.count_nonzero(~below & ~is1)) / n
        dist = abs(t - mid)
        if (acc > best_acc
                or (acc == best_acc
                    and (dist < best_dist or (dist == best_dist and t < best_t)))):
            best_t, best_acc, best_dist = float(t), acc, dist
    return best_t


def make_glc_model(coefficients, d: Dataset, roles: tuple[str, str]) -> GlcModel:
    """Normalize coefficients, derive angles and signs, and sweep a threshold."""
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 1 or len(c) != d.n_attributes:
        raise DataError(f"expected {d.n_attributes} coefficients, got {c.shape}")
    c_max_abs = float(np.max(np.abs(c)))
    if c_max_abs == 0:
        raise DataError("coefficient vector is all zeros")
    k = c / c_max_abs
    signs = np.where(k < 0, -1, 1).astype(int)
    angles = np.arccos(np.abs(k))
    u = d.points @ k
    threshold = sweep_threshold(u, d.labels, roles)
    return GlcModel(coefficients=c.copy(), k=k, c_max_abs=c_max_abs,
                    angles=angles, signs=signs, threshold=threshold,
                    class_roles=roles)


def fit_glc(d: Dataset, roles: tuple[str, str] | None = None) -> GlcModel:
    """fit_lda followed by make_glc_model; roles default to label order."""
    if roles is None:
        cls = d.classes()
        if len(cls) != 2:
            raise DataError(f"dataset has {len(cls)} classes; binarize first")
        roles = (cls[0], cls[1])
    return make_glc_model(fit_lda(d, roles), d, roles)


def project(x, m: GlcModel) -> float:
    """Normalized projection G(x) = sum k_i x_i in stored attribute order."""
    xv = np.asarray(x, dtype=float)
    if xv.shape != (m.n_attributes,):
        raise DataError(f"point has shape {xv.shape}, model expects ({m.n_attributes},)")
    return float(np.dot(m.k, xv))


def evaluate(m: GlcModel, d: Dataset) -> EvaluationReport:
    """Confusion counts, accuracy, and projections under the strict < rule."""
    c1, c2 = m.class_roles
    for lab in d.labels:
        if lab not in (c1, c2):
            raise DataError(f"label {lab!r} not covered by model roles {m.class_roles}")
    u = d.points @ m.k
    pred_is1 = u < m.threshold
    predictions = [c1 if p else c2 for p in pred_is1]
    confusion = [[0, 0], [0, 0]]
    miscl = []
    for i, (lab, pred) in enumerate(zip(d.labels, predictions)):
        r = 0 if lab == c1 else 1
        p = 0 if pred == c1 else 1
        confusion[r][p] += 1
        if r != p:
            miscl.append(i)
    acc = (confusion[0][0] + confusion[1][1]) / d.n_points
    return EvaluationReport(confusion=confusion, accuracy=acc,
                            misclassified_indices=miscl, projections=u,
                            predictions=predictions, class_roles=m.class_roles)
