"""Dataset ingestion, min-max normalization, super-class binarization, and
PCA attribute augmentation.

A Dataset is the substrate of every other module: a named table of finite
real-valued rows with one text label per row. Values are immutable after
construction; every operation returns a new Dataset.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12


class DataError(ValueError):
    """Malformed input file or dataset value."""


@dataclass
class Dataset:
    """Labeled n-D point set.

    Attributes:
        name: dataset identifier (file stem for CSV loads).
        attributes: ordered attribute names, one per column.
        points: (n_points, n_attributes) float64 array, all finite.
        labels: one class label string per row.
        norm_params: per-attribute (min, max) recorded by normalize_minmax,
            or None for raw data. When present every value lies in [0, 1].
    """

    name: str
    attributes: list[str]
    points: np.ndarray
    labels: list[str]
    norm_params: list[tuple[float, float]] | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2:
            raise DataError("points must be a 2-D array")
        n_pts, n_attr = self.points.shape
        if n_pts < 1 or n_attr < 1:
            raise DataError("dataset needs at least 1 point and 1 attribute")
        if n_attr != len(self.attributes):
            raise DataError(
                f"{n_attr} columns but {len(self.attributes)} attribute names")
        if n_pts != len(self.labels):
            raise DataError(f"{n_pts} points but {len(self.labels)} labels")
        if not np.all(np.isfinite(self.points)):
            raise DataError("dataset contains non-finite values")
        if self.norm_params is not None:
            if len(self.norm_params) != n_attr:
                raise DataError("norm_params length mismatch")
            if self.points.min() < -NORM_TOL or self.points.max() > 1 + NORM_TOL:
                raise DataError("normalized dataset has values outside [0, 1]")

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.points.shape[1]

    def classes(self) -> list[str]:
        """Distinct labels in first-appearance order."""
        seen = []
        for lab in self.labels:
            if lab not in seen:
                seen.append(lab)
        return seen

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for lab in self.labels:
            counts[lab] = counts.get(lab, 0) + 1
        return counts

    def subset(self, indices) -> "Dataset":
        """New Dataset restricted to the given row indices (order kept)."""
        idx = list(indices)
        if not idx:
            raise DataError("subset needs at least one index")
        return Dataset(
            name=self.name,
            attributes=list(self.attributes),
            points=self.points[idx].copy(),
            labels=[self.labels[i] for i in idx],
            norm_params=list(self.norm_params) if self.norm_params else None,
        )

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "attributes": list(self.attributes),
            "points": [[float(v) for v in row] for row in self.points],
            "labels": list(self.labels),
            "norm_params": [[float(a), float(b)] for a, b in self.norm_params]
            if self.norm_params is not None else None,
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "Dataset":
        return Dataset(
            name=obj["name"],
            attributes=list(obj["attributes"]),
            points=np.array(obj["points"], dtype=float),
            labels=list(obj["labels"]),
            norm_params=[tuple(p) for p in obj["norm_params"]]
            if obj.get("norm_params") is not None else None,
        )


@dataclass
class BinarizationSpec:
    """One class kept verbatim, all others merged into a named super class."""

    positive_class: str
    super_class_name: str = "combined"


@dataclass
class PcaAugmentation:
    """Config and fitted state for PCA attribute augmentation.

    components and means are filled in by pca_augment; component rows are
    mutually orthonormal and ordered by non-increasing eigenvalue.
    """

    n_components: int = 2
    component_scale: float = 1.5
    other_scale: float = 0.05
    components: np.ndarray | None = None
    means: np.ndarray | None = None
    eigenvalues: np.ndarray | None = None


def load_csv(source, label_column) -> Dataset:
    """Parse a UTF-8 CSV with a header row into a Dataset.

    Args:
        source: file path, bytes, or text/binary file-like object.
        label_column: label column selected by header name or 0-based index.

    Raises:
        DataError: malformed CSV, unknown label column, non-numeric cell
            (reported with row and column), or an empty table.
    """
    name = "dataset"
    if isinstance(source, (str,)) and "\n" not in source:
        name = source.rsplit("/", 1)[-1].rsplit(".", 1)[0]
        with open(source, "rb") as fh:
            raw = fh.read()
    elif isinstance(source, bytes):
        raw = source
    elif hasattr(source, "read"):
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode("utf-8")
        name = getattr(source, "name", name) or name
        if isinstance(name, str) and "/" in name:
            name = name.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    else:
        raw = str(source).encode("utf-8")

    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"CSV is not valid UTF-8: {exc}") from exc

    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise DataError("empty CSV")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")

    if isinstance(label_column, int) or (
            isinstance(label_column, str) and label_column.lstrip("-").isdigit()
            and label_column not in header):
        li = int(label_column)
        if not 0 <= li < len(header):
            raise DataError(f"label column index {li} out of range")
    else:
        if label_column not in header:
            raise DataError(f"label column {label_column!r} not in header")
        li = header.index(label_column)

    attributes = [h for i, h in enumerate(header) if i != li]
    points, labels = [], []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"row {r}: expected {len(header)} cells, got {len(row)}")
        vals = []
        for ci, cell in enumerate(row):
            if ci == li:
                labels.append(cell.strip())
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DataError(
                    f"row {r}, column {header[ci]!r}: non-numeric value {cell!r}")
            if not np.isfinite(v):
                raise DataError(f"row {r}, column {header[ci]!r}: non-finite value")
            vals.append(v)
        points.append(vals)
    if not points:
        raise DataError("CSV has a header but no data rows")
    return Dataset(name=name, attributes=attributes,
                   points=np.array(points, dtype=float), labels=labels)


def normalize_minmax(d: Dataset) -> Dataset:
    """Map every attribute to [0, 1] by (v - min) / (max - min).

    Constant attributes map to 0.0. The per-attribute (min, max) pairs are
    recorded in norm_params so unseen points can be mapped the same way.
    """
    lo = d.points.min(axis=0)
    hi = d.points.max(axis=0)
    span = hi - lo
    out = np.zeros_like(d.points)
    nonconst = span > 0
    out[:, nonconst] = (d.points[:, nonconst] - lo[nonconst]) / span[nonconst]
    return Dataset(
        name=d.name,
        attributes=list(d.attributes),
        points=out,
        labels=list(d.labels),
        norm_params=[(float(a), float(b)) for a, b in zip(lo, hi)],
    )


def apply_norm_params(points: np.ndarray, norm_params) -> np.ndarray:
    """Apply recorded (min, max) pairs to new rows (no clipping)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    lo = np.array([p[0] for p in norm_params])
    hi = np.array([p[1] for p in norm_params])
    span = hi - lo
    out = np.zeros_like(pts)
    nonconst = span > 0
    out[:, nonconst] = (pts[:, nonconst] - lo[nonconst]) / span[nonconst]
    return out


def invert_norm_params(points: np.ndarray, norm_params) -> np.ndarray:
    """Map normalized rows back to original units via stored (min, max)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    lo = np.array([p[0] for p in norm_params])
    hi = np.array([p[1] for p in norm_params])
    return pts * (hi - lo) + lo


def binarize(d: Dataset, spec: BinarizationSpec) -> Dataset:
    """Combine every class except spec.positive_class into one super class.

    Points and their order are untouched; only labels change.
    """
    if spec.positive_class not in d.labels:
        raise DataError(f"class {spec.positive_class!r} not present in dataset")
    if spec.super_class_name == spec.positive_class:
        raise DataError("super class name collides with the positive class")
    labels = [lab if lab == spec.positive_class else spec.super_class_name
              for lab in d.labels]
    return Dataset(name=d.name, attributes=list(d.attributes),
                   points=d.points.copy(), labels=labels,
                   norm_params=list(d.norm_params) if d.norm_params else None)


def pca_augment(d: Dataset, cfg: PcaAugmentation) -> Dataset:
    """Prepend scaled principal-component attributes to a normalized dataset.

    The covariance of the centered data is eigendecomposed exactly; the top
    cfg.n_components directions (non-increasing eigenvalue, sign fixed so
    each component's first nonzero coordinate is positive) become new leading
    attributes. PCA columns are min-max normalized then multiplied by
    cfg.component_scale; the original columns are multiplied by
    cfg.other_scale. cfg.components / cfg.means / cfg.eigenvalues are filled
    in as a side effect.
    """
    n = d.n_attributes
    if cfg.n_components > n:
        raise DataError(f"n_components {cfg.n_components} exceeds {n} attributes")
    if cfg.n_components < 1:
        raise DataError("n_components must be at least 1")
    if d.n_points < 2:
        raise DataError("PCA needs at least 2 points")

    means = d.points.mean(axis=0)
    centered = d.points - means
    cov = centered.T @ centered / (d.n_points - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    comps = eigvecs[:, order].T  # rows are components
    for r in range(comps.shape[0]):
        nz = np.nonzero(np.abs(comps[r]) > 1e-12)[0]
        if nz.size and comps[r, nz[0]] < 0:
            comps[r] = -comps[r]

    cfg.components = comps[: cfg.n_components].copy()
    cfg.means = means
    cfg.eigenvalues = eigvals.copy()

    scores = centered @ cfg.components.T
    lo = scores.min(axis=0)
    span = scores.max(axis=0) - lo
    norm_scores = np.zeros_like(scores)
    nonconst = span > 0
    norm_scores[:, nonconst] = (scores[:, nonconst] - lo[nonconst]) / span[nonconst]

    new_points = np.hstack([
        norm_scores * cfg.component_scale,
        d.points * cfg.other_scale,
    ])
    new_attrs = [f"pc{i + 1}" for i in range(cfg.n_components)] + list(d.attributes)
    return Dataset(name=f"{d.name}_pca", attributes=new_attrs,
                   points=new_points, labels=list(d.labels))
