"""k-fold cross-validation harness, minimal built-in baseline classifiers,
and model comparison on worst-case splits.

Baselines are deliberately small and deterministic: KNN (Euclidean,
distance ties to the lower index), Gaussian naive Bayes with a variance
floor, the thresholded linear discriminant, and the kernel-expanded
variant. External per-point predictions can be imported from CSV to fill
comparison tables for models trained elsewhere.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from glc.data import DataError, Dataset
from glc.kernels import KernelConfig, glc_nl_fit
from glc.linear import evaluate, fit_glc


@dataclass
class FoldPlan:
    k: int
    seed: int
    stratified: bool
    assignments: list[int]

    def fold_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f != fold]


def make_fold_plan(d: Dataset, k: int, seed: int = 0,
                   stratified: bool = True) -> FoldPlan:
    """Partition rows into k folds, re-runnable from the seed.

    Stratified dealing walks a rolling fold offset across classes so both
    the overall and the per-class fold sizes differ by at most one.
    """
    if k < 2:
        raise DataError("need at least 2 folds")
    if k > d.n_points:
        raise DataError("more folds than points")
    rng = np.random.default_rng(seed)
    assignments = [0] * d.n_points
    if stratified:
        offset = 0
        for cls in d.classes():
            idx = np.array([i for i, lab in enumerate(d.labels) if lab == cls])
            rng.shuffle(idx)
            for j, i in enumerate(idx):
                assignments[int(i)] = (offset + j) % k
            offset = (offset + len(idx)) % k
    else:
        idx = np.arange(d.n_points)
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            assignments[int(i)] = j % k
    return FoldPlan(k=k, seed=seed, stratified=stratified,
                    assignments=assignments)


@dataclass
class ClassifierSpec:
    """Named classifier with parameters.

    kinds: "lda" (thresholded discriminant), "knn" {k}, "gnb",
    "glc_nl" {kernel, gamma, seed}, "external" {path or mapping}.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def display_name(self) -> str:
        if self.kind == "knn":
            return f"KNN(k={self.params.get('k', 5)})"
        if self.kind == "glc_nl":
            return f"GLC-nL({self.params.get('kernel', 'rbf')})"
        return {"lda": "LDA", "gnb": "GaussianNB",
                "external": self.params.get("name", "external")}.get(
                    self.kind, self.kind)


class _Knn:
    def __init__(self, k):
        self.k = k

    def fit(self, d: Dataset):
        self.points = d.points
        self.labels = list(d.labels)
        return self

    def predict(self, pts) -> list[str]:
        pts = np.atleast_2d(pts)
        out = []
        for row in pts:
            dist = np.sqrt(np.sum((self.points - row) ** 2, axis=1))
            order = sorted(range(len(dist)), key=lambda i: (dist[i], i))
            nearest = order[: self.k]
            counts: dict[str, int] = {}
            for i in nearest:
                counts[self.labels[i]] = counts.get(self.labels[i], 0) + 1
            top = max(counts.values())
            # vote tie: the tied class seen earliest in distance order wins
            winner = next(self.labels[i] for i in nearest
                          if counts[self.labels[i]] == top)
            out.append(winner)
        return out


class _GaussianNb:
    VAR_FLOOR = 1e-9

    def fit(self, d: Dataset):
        self.classes = d.classes()
        self.stats = {}
        n = d.n_points
        for cls in self.classes:
            rows = d.points[[i for i, lab in enumerate(d.labels) if lab == cls]]
            self.stats[cls] = (
                np.log(len(rows) / n),
                rows.mean(axis=0),
                np.maximum(rows.var(axis=0), self.VAR_FLOOR),
            )
        return self

    def predict(self, pts) -> list[str]:
        pts = np.atleast_2d(pts)
        out = []
        for row in pts:
            best_cls, best_ll = None, -np.inf
            for cls in self.classes:
                prior, mean, var = self.stats[cls]
                ll = prior - 0.5 * float(np.sum(
                    np.log(2 * np.pi * var) + (row - mean) ** 2 / var))
                if ll > best_ll:
                    best_cls, best_ll = cls, ll
            out.append(best_cls)
        return out


class _LdaThreshold:
    def fit(self, d: Dataset):
        self.model = fit_glc(d)
        return self

    def predict(self, pts) -> list[str]:
        pts = np.atleast_2d(pts)
        u = pts @ self.model.k
        c1, c2 = self.model.class_roles
        return [c1 if v < self.model.threshold else c2 for v in u]


class _GlcNl:
    def __init__(self, params):
        self.cfg = KernelConfig(kind=params.get("kernel", "rbf"),
                                gamma=params.get("gamma"),
                                svm_c=params.get("svm_c", 1.0),
                                seed=params.get("seed", 0))

    def fit(self, d: Dataset):
        self.result = glc_nl_fit(d, self.cfg)
        return self

    def predict(self, pts) -> list[str]:
        return self.result.predict(np.atleast_2d(pts))


class _External:
    """Fixed per-point predictions read from a (point_index, label) CSV."""

    def __init__(self, params):
        if "mapping" in params:
            self.mapping = {int(k): str(v) for k, v in params["mapping"].items()}
        else:
            self.mapping = load_external_predictions(params["path"])

    def fit(self, d: Dataset):
        return self

    def predict_indices(self, indices) -> list[str]:
        missing = [i for i in indices if i not in self.mapping]
        if missing:
            raise DataError(f"external predictions missing indices {missing[:5]}")
        return [self.mapping[i] for i in indices]


def load_external_predictions(source) -> dict[int, str]:
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if rows and rows[0] and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]  # optional header
    out = {}
    for r in rows:
        if len(r) < 2:
            continue
        out[int(r[0])] = r[1].strip()
    return out


def _build(spec: ClassifierSpec):
    if spec.kind == "lda":
        return _LdaThreshold()
    if spec.kind == "knn":
        return _Knn(int(spec.params.get("k", 5)))
    if spec.kind == "gnb":
        return _GaussianNb()
    if spec.kind == "glc_nl":
        return _GlcNl(spec.params)
    if spec.kind == "external":
        return _External(spec.params)
    raise DataError(f"unknown classifier kind {spec.kind!r}")


def baseline_predict(spec: ClassifierSpec, train: Dataset, x) -> str:
    """Train the named baseline and classify one point."""
    if train.n_points == 0:
        raise DataError("empty training set")
    clf = _build(spec).fit(train)
    return clf.predict(np.atleast_2d(x))[0]


def _subset_accuracy(spec: ClassifierSpec, train: Dataset, d: Dataset,
                     eval_indices) -> float:
    clf = _build(spec).fit(train)
    truth = [d.labels[i] for i in eval_indices]
    if isinstance(clf, _External):
        preds = clf.predict_indices(list(eval_indices))
    else:
        preds = clf.predict(d.points[list(eval_indices)])
    return sum(p == t for p, t in zip(preds, truth)) / len(truth)


@dataclass
class CvResult:
    spec: ClassifierSpec
    fold_accuracies: list[float | None]  # None marks an unfittable fold
    mean: float
    stdev: float
    warnings: list[str]


def cross_validate(d: Dataset, spec: ClassifierSpec, plan: FoldPlan) -> CvResult:
    """Train on each fold complement, score on the fold.

    A fold whose training complement holds a single class is marked
    unfittable, excluded from the mean, and reported as a warning.
    The stdev is the population form over the scored folds.
    """
    accs: list[float | None] = []
    warnings = []
    for fold in range(plan.k):
        train_idx = plan.train_indices(fold)
        test_idx = plan.fold_indices(fold)
        if not test_idx:
            accs.append(None)
            warnings.append(f"fold {fold}: empty")
            continue
        train = d.subset(train_idx)
        counts = train.class_counts()
        if len(counts) < 2 or min(counts.values()) < 2:
            accs.append(None)
            warnings.append(f"fold {fold}: single-class or tiny training split")
            continue
        try:
            accs.append(_subset_accuracy(spec, train, d, test_idx))
        except DataError as exc:
            accs.append(None)
            warnings.append(f"fold {fold}: {exc}")
    scored = [a for a in accs if a is not None]
    if not scored:
        raise DataError("no fold could be scored")
    mean = float(np.mean(scored))
    stdev = float(np.std(scored))
    return CvResult(spec=spec, fold_accuracies=accs, mean=mean, stdev=stdev,
                    warnings=warnings)


@dataclass
class CvTable:
    k: int
    rows: list[CvResult]

    def to_json_dict(self) -> dict:
        fold_avgs = []
        fold_stds = []
        for f in range(self.k):
            col = [r.fold_accuracies[f] for r in self.rows
                   if r.fold_accuracies[f] is not None]
            fold_avgs.append(float(np.mean(col)) if col else None)
            fold_stds.append(float(np.std(col)) if col else None)
        return {
            "folds": self.k,
            "models": [{
                "model": r.spec.display_name(),
                "fold_accuracies": r.fold_accuracies,
                "avg": r.mean,
                "stdev": r.stdev,
                "warnings": r.warnings,
            } for r in self.rows],
            "metrics": {"fold_avg": fold_avgs, "fold_stdev": fold_stds,
                        "overall_avg": float(np.mean([r.mean for r in self.rows]))},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["Model"] + [f"Fold {i + 1}" for i in range(self.k)]
                   + ["Avg.", "St. Dev."])
        for r in self.rows:
            cells = ["" if a is None else f"{a * 100:.2f}%"
                     for a in r.fold_accuracies]
            w.writerow([r.spec.display_name()] + cells
                       + [f"{r.mean * 100:.2f}%", f"{r.stdev * 100:.2f}%"])
        obj = self.to_json_dict()["metrics"]
        w.writerow(["Metrics Avg."]
                   + ["" if a is None else f"{a * 100:.2f}%"
                      for a in obj["fold_avg"]]
                   + [f"{obj['overall_avg'] * 100:.2f}%", ""])
        return buf.getvalue()


def cv_table(d: Dataset, specs: list[ClassifierSpec], plan: FoldPlan) -> CvTable:
    return CvTable(k=plan.k, rows=[cross_validate(d, s, plan) for s in specs])


@dataclass
class SplitComparison:
    rows: list[tuple[str, float]]
    average: float

    def to_json_dict(self) -> dict:
        return {"models": [{"model": name, "accuracy": acc}
                           for name, acc in self.rows],
                "average": self.average}


def compare_on_split(split, d: Dataset,
                     specs: list[ClassifierSpec]) -> SplitComparison:
    """Train every classifier on the split complement and score it on the
    split members."""
    members = list(split.member_indices)
    if not members:
        raise DataError("empty split")
    complement = [i for i in range(d.n_points) if i not in set(members)]
    if not complement:
        raise DataError("split complement is empty")
    train = d.subset(complement)
    rows = []
    for spec in specs:
        rows.append((spec.display_name(),
                     _subset_accuracy(spec, train, d, members)))
    return SplitComparison(rows=rows,
                           average=float(np.mean([a for _, a in rows])))
