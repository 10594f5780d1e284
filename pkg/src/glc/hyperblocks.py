"""Interval-rule machinery: axis-aligned boxes acting as conjunctive rules.

A hyperblock stores per-attribute closed interval bounds [lower_i, upper_i]
plus a class label; a point satisfies the rule when every coordinate falls
inside its interval. Blocks come from a per-case envelope with purity
repair, an interactive rectangle selection on the scene, interval growth
(ihyper), envelope merging (mhyper), their combination, or the
discriminant-consistent variant (hbrl) whose blocks agree with the linear
model on every covered training point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from glc.data import DataError, Dataset
from glc.linear import GlcModel, evaluate


@dataclass
class Hyperblock:
    lower: np.ndarray
    upper: np.ndarray
    class_label: str
    seed_attribute: int | None
    member_indices: list[int]
    algorithm_tag: str  # CASE | IRL | IHYPER | MHYPER | HBRL

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if np.any(self.lower > self.upper):
            raise DataError("hyperblock has lower bound above upper bound")

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.all((pts >= self.lower) & (pts <= self.upper), axis=1)

    def recomputed_members(self, d: Dataset) -> list[int]:
        return [int(i) for i in np.nonzero(self.contains(d.points))[0]]

    def rule_text(self, attributes) -> str:
        parts = [f"{self.lower[i]:.6g} <= {attributes[i]} <= {self.upper[i]:.6g}"
                 for i in range(len(attributes))]
        return "if " + " and ".join(parts) + f" then {self.class_label}"

    def to_json_dict(self) -> dict:
        return {
            "class": self.class_label,
            "bounds": [[float(a), float(b)]
                       for a, b in zip(self.lower, self.upper)],
            "seed_attribute": None if self.seed_attribute is None
            else int(self.seed_attribute),
            "algorithm": self.algorithm_tag,
            "member_indices": [int(i) for i in self.member_indices],
        }


@dataclass
class HbAnalytics:
    block_index: int
    block_total: int
    class_label: str
    seed_attribute: int | None
    datapoints: int
    misclassified: int
    accuracy: float

    def to_json_dict(self) -> dict:
        return {
            "block": f"{self.block_index}/{self.block_total}",
            "class": self.class_label,
            "seed_attribute": None if self.seed_attribute is None
            else int(self.seed_attribute),
            "datapoints": int(self.datapoints),
            "misclassified": int(self.misclassified),
            "datapoints_display":
                f"{self.datapoints} ({self.misclassified} misclassified)",
            "accuracy": float(self.accuracy),
            "accuracy_display": f"{self.accuracy * 100:.2f}%",
        }


def _make_block(d: Dataset, lower, upper, class_label, seed_attribute, tag):
    hb = Hyperblock(lower=np.array(lower, dtype=float),
                    upper=np.array(upper, dtype=float),
                    class_label=class_label, seed_attribute=seed_attribute,
                    member_indices=[], algorithm_tag=tag)
    hb.member_indices = hb.recomputed_members(d)
    return hb


def case_rule(x, d: Dataset, m: GlcModel) -> Hyperblock:
    """Pure interval rule around one training point.

    Starts from the envelope of all same-class points; while any
    opposite-class point sits inside, tightens the single bound whose move
    (just past the counterexample nearest to x) sacrifices the fewest
    same-class members. Attribute ties follow the coefficient order,
    negatives first ascending.
    """
    xv = np.asarray(x, dtype=float)
    matches = np.nonzero(np.all(d.points == xv, axis=1))[0]
    if matches.size == 0:
        raise DataError("point is not part of the dataset")
    xi = int(matches[0])
    cls = d.labels[xi]
    label_arr = np.array(d.labels)
    same = np.nonzero(label_arr == cls)[0]
    other = np.nonzero(label_arr != cls)[0]
    scan_order = np.argsort(m.k, kind="stable")

    lo = d.points[same].min(axis=0)
    hi = d.points[same].max(axis=0)
    members = set(int(i) for i in same)

    while True:
        inside_other = [int(i) for i in other
                        if np.all(d.points[i] >= lo) and np.all(d.points[i] <= hi)]
        if not inside_other:
            break
        dists = [(float(np.linalg.norm(d.points[i] - xv)), i) for i in inside_other]
        dists.sort()
        y = d.points[dists[0][1]]

        best = None  # (loss, scan_rank, side, new_bound_value, attr, kept_set)
        for rank, attr in enumerate(scan_order):
            attr = int(attr)
            if y[attr] > xv[attr]:
                kept = [i for i in members if d.points[i, attr] < y[attr]]
                if kept:
                    new_hi = max(d.points[i, attr] for i in kept)
                    cand = (len(members) - len(kept), rank, 0, new_hi, attr, kept)
                    if best is None or cand[:3] < best[:3]:
                        best = cand
            if y[attr] < xv[attr]:
                kept = [i for i in members if d.points[i, attr] > y[attr]]
                if kept:
                    new_lo = min(d.points[i, attr] for i in kept)
                    cand = (len(members) - len(kept), rank, 1, new_lo, attr, kept)
                    if best is None or cand[:3] < best[:3]:
                        best = cand
        if best is None:
            raise DataError("cannot build a pure rule: an opposite-class point "
                            "coincides with the case")
        _, _, side, bound, attr, kept = best
        if side == 0:
            hi[attr] = bound
        else:
            lo[attr] = bound
        members = set(kept)

    return _make_block(d, lo, hi, cls, None, "CASE")


def rule_from_selection(d: Dataset, m: GlcModel, rect) -> tuple[Hyperblock, HbAnalytics]:
    """Generalize the points whose polyline endpoints fall inside a scene
    rectangle into an envelope rule, scored over every point it satisfies."""
    x0, y0, x1, y1 = (float(v) for v in rect)
    x0, x1 = min(x0, x1), max(x0, x1)
    y0, y1 = min(y0, y1), max(y0, y1)
    if x0 == x1 or y0 == y1:
        raise DataError("selection rectangle has no area")

    c1, c2 = m.class_roles
    u = d.points @ m.k
    heights = d.points @ np.sin(m.angles)
    mu = np.array([-1.0 if lab == c2 else 1.0 for lab in d.labels])
    ey = heights * mu
    selected = np.nonzero((u >= x0) & (u <= x1) & (ey >= y0) & (ey <= y1))[0]
    if selected.size == 0:
        raise DataError("empty selection")

    counts: dict[str, int] = {}
    for i in selected:
        counts[d.labels[i]] = counts.get(d.labels[i], 0) + 1
    top = max(counts.values())
    winners = [lab for lab, cnt in counts.items() if cnt == top]
    cls = c1 if c1 in winners else winners[0]

    lo = d.points[selected].min(axis=0)
    hi = d.points[selected].max(axis=0)
    hb = _make_block(d, lo, hi, cls, None, "IRL")
    analytics = hb_analytics([hb], d)[0]
    return hb, analytics


def _group_by_value(values: np.ndarray, indices: np.ndarray):
    """Sorted (value, [point indices]) groups; index order inside a group is
    ascending (stable sort on value)."""
    order = np.argsort(values, kind="stable")
    groups = []
    for pos in order:
        idx = int(indices[pos])
        v = float(values[pos])
        if groups and groups[-1][0] == v:
            groups[-1][1].append(idx)
        else:
            groups.append((v, [idx]))
    return groups


def ihyper(d: Dataset, m: GlcModel | None, purity_threshold: float,
           labels=None, consistency_labels=None,
           tag: str = "IHYPER") -> list[Hyperblock]:
    """Interval-growth induction.

    Per round, every distinct value of every attribute (over the points not
    yet covered) seeds an interval that absorbs the next value groups while
    the fraction of seed-class points stays at or above purity_threshold.
    The largest saved interval (ties: lower attribute index, then lower
    start value) becomes a block whose off-attribute bounds are the envelope
    of the interval's points. Rounds repeat on uncovered points.

    consistency_labels (the hbrl guard) additionally requires every dataset
    point inside a candidate block to carry the same consistency label as
    the seed; candidates are truncated to the largest prefix that complies.
    """
    if not 0 < purity_threshold <= 1:
        raise DataError("purity threshold must be in (0, 1]")
    labs = list(labels) if labels is not None else list(d.labels)
    class_list = sorted(set(labs))
    code = {c: j for j, c in enumerate(class_list)}
    codes = np.array([code[lab] for lab in labs])
    cons = np.array([code[lab] for lab in consistency_labels]) \
        if consistency_labels is not None else None
    pts = d.points
    n = d.n_attributes

    blocks: list[Hyperblock] = []
    uncovered = np.arange(d.n_points)

    def candidate_record(attr, groups, seed_g, end_g):
        idxs = [i for g in range(seed_g, end_g + 1) for i in groups[g][1]]
        sub = pts[idxs]
        return {
            "size": len(idxs), "attr": attr, "start": groups[seed_g][0],
            "end": groups[end_g][0], "indices": idxs,
            "lo": sub.min(axis=0), "hi": sub.max(axis=0),
            "class_code": codes[groups[seed_g][1][0]],
        }

    def consistent(rec) -> bool:
        inside = np.all((pts >= rec["lo"]) & (pts <= rec["hi"]), axis=1)
        return bool(np.all(cons[inside] == rec["class_code"]))

    while uncovered.size:
        candidates = []
        for attr in range(n):
            groups = _group_by_value(pts[uncovered, attr], uncovered)
            v = len(groups)
            sizes = np.array([len(g[1]) for g in groups])
            per_class = np.zeros((v, len(class_list)), dtype=int)
            for gi, (_, idxs) in enumerate(groups):
                for i in idxs:
                    per_class[gi, codes[i]] += 1
            size_cum = np.cumsum(sizes)
            class_cum = np.cumsum(per_class, axis=0)
            for seed_g in range(v):
                seed_class = codes[groups[seed_g][1][0]]
                base_n = size_cum[seed_g - 1] if seed_g else 0
                base_c = class_cum[seed_g - 1, seed_class] if seed_g else 0
                totals = size_cum[seed_g:] - base_n
                sames = class_cum[seed_g:, seed_class] - base_c
                ok = sames >= purity_threshold * totals - 1e-12
                if not ok[0]:
                    continue
                bad = np.nonzero(~ok)[0]
                end_g = seed_g + (int(bad[0]) - 1 if bad.size else len(ok) - 1)
                candidates.append((int(totals[end_g - seed_g]), attr,
                                   groups[seed_g][0], groups, seed_g, end_g))
        if not candidates:
            break
        candidates.sort(key=lambda c: (-c[0], c[1], c[2]))

        best = None
        for size, attr, start, groups, seed_g, end_g in candidates:
            if best is not None and size < best["size"]:
                break
            rec = candidate_record(attr, groups, seed_g, end_g)
            if cons is not None and not consistent(rec):
                # truncation is valid because growing an interval only widens
                # the block, so consistency is antitone in the interval end
                lo_g, hi_g, found = seed_g, end_g - 1, None
                while lo_g <= hi_g:
                    mid = (lo_g + hi_g) // 2
                    trial = candidate_record(attr, groups, seed_g, mid)
                    if consistent(trial):
                        found, lo_g = trial, mid + 1
                    else:
                        hi_g = mid - 1
                if found is None:
                    continue
                rec = found
            if best is None or (rec["size"], -rec["attr"], -rec["start"]) > \
                    (best["size"], -best["attr"], -best["start"]):
                best = rec
        if best is None:
            break

        seed_label = class_list[best["class_code"]]
        hb = _make_block(d, best["lo"], best["hi"], seed_label,
                         best["attr"], tag)
        blocks.append(hb)
        uncovered = np.setdiff1d(uncovered, np.array(hb.member_indices),
                                 assume_unique=False)
    return blocks


def mhyper(d: Dataset, impurity_threshold: float,
           seed_blocks: list[Hyperblock] | None = None,
           restrict_to=None, labels=None,
           tag: str = "MHYPER") -> list[Hyperblock]:
    """Envelope-merge induction.

    Phase 1 repeatedly merges same-class blocks whose joint envelope
    contains no point of another class (checked over the whole dataset).
    Phase 2, enabled by a positive impurity threshold, performs the
    lowest-impurity merge while that impurity stays below the threshold.
    Scan order is block creation order; ties go to the earliest pair.
    """
    if not 0 <= impurity_threshold < 1:
        raise DataError("impurity threshold must be in [0, 1)")
    labs = list(labels) if labels is not None else list(d.labels)
    label_arr = np.array(labs)
    pts = d.points

    blocks = [Hyperblock(b.lower.copy(), b.upper.copy(), b.class_label,
                         b.seed_attribute, list(b.member_indices), tag)
              for b in (seed_blocks or [])]
    pool = range(d.n_points) if restrict_to is None else restrict_to
    for i in pool:
        blocks.append(_make_block(d, pts[i], pts[i], labs[i], None, tag))

    def joint(bi, bj):
        lo = np.minimum(bi.lower, bj.lower)
        hi = np.maximum(bi.upper, bj.upper)
        inside = np.all((pts >= lo) & (pts <= hi), axis=1)
        return lo, hi, inside

    # phase 1: pure merges to fixpoint. Each block greedily absorbs every
    # later same-class block whose joint envelope stays pure; full sweeps
    # repeat until one passes without a merge.
    swept = True
    while swept:
        swept = False
        i = 0
        while i < len(blocks):
            absorbed = True
            while absorbed:
                absorbed = False
                j = i + 1
                while j < len(blocks):
                    if blocks[i].class_label != blocks[j].class_label:
                        j += 1
                        continue
                    lo, hi, inside = joint(blocks[i], blocks[j])
                    if np.all(label_arr[inside] == blocks[i].class_label):
                        blocks[i] = _make_block(d, lo, hi,
                                                blocks[i].class_label,
                                                blocks[i].seed_attribute, tag)
                        del blocks[j]
                        absorbed = True
                        swept = True
                    else:
                        j += 1
            i += 1

    # phase 2: dominant-class merges below the impurity threshold
    if impurity_threshold > 0:
        while True:
            best = None  # (impurity, i, j, lo, hi, dominant)
            for i in range(len(blocks)):
                for j in range(i + 1, len(blocks)):
                    lo, hi, inside = joint(blocks[i], blocks[j])
                    members = label_arr[inside]
                    classes, counts = np.unique(members, return_counts=True)
                    top = counts.max()
                    winners = [c for c, n in zip(classes, counts) if n == top]
                    dominant = blocks[i].class_label \
                        if blocks[i].class_label in winners else winners[0]
                    impurity = 1.0 - np.count_nonzero(members == dominant) \
                        / len(members)
                    if impurity < impurity_threshold and \
                            (best is None or impurity < best[0]):
                        best = (impurity, i, j, lo, hi, dominant)
            if best is None:
                break
            _, i, j, lo, hi, dominant = best
            blocks[i] = _make_block(d, lo, hi, dominant,
                                    blocks[i].seed_attribute, tag)
            del blocks[j]
    return blocks


def imhyper(d: Dataset, m: GlcModel | None, purity_threshold: float,
            impurity_threshold: float) -> list[Hyperblock]:
    """ihyper, then mhyper over the uncovered residue with the interval
    blocks injected into the pure pool. Covers every training point."""
    interval_blocks = ihyper(d, m, purity_threshold)
    covered = set()
    for b in interval_blocks:
        covered.update(b.member_indices)
    residue = [i for i in range(d.n_points) if i not in covered]
    return mhyper(d, impurity_threshold, seed_blocks=interval_blocks,
                  restrict_to=residue)


def hbrl(d: Dataset, m: GlcModel, purity_threshold: float = 1.0,
         impurity_threshold: float = 0.0) -> list[Hyperblock]:
    """Discriminant-consistent rule set.

    Runs the interval/merge induction on the model's predicted labels with
    the block-level consistency guard, so the class of every returned block
    equals the model's prediction for each training point the block covers
    (misclassified points land in blocks labeled with the wrong, predicted
    class, or in their own singleton blocks). An impurity threshold above 0
    relaxes exact reproduction and is passed through to the merge phase.
    """
    preds = evaluate(m, d).predictions
    interval_blocks = ihyper(d, m, 1.0, labels=preds,
                             consistency_labels=preds, tag="HBRL")
    covered = set()
    for b in interval_blocks:
        covered.update(b.member_indices)
    residue = [i for i in range(d.n_points) if i not in covered]
    return mhyper(d, impurity_threshold, seed_blocks=interval_blocks,
                  restrict_to=residue, labels=preds, tag="HBRL")


def predict_with_blocks(blocks: list[Hyperblock], m: GlcModel | None,
                        points: np.ndarray) -> list[str]:
    """First containing block in emission order wins; uncovered points fall
    back to the discriminant."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = []
    for row in pts:
        hit = None
        for b in blocks:
            if bool(b.contains(row[None, :])[0]):
                hit = b.class_label
                break
        if hit is None and m is not None:
            u = float(row @ m.k)
            hit = m.class_roles[0] if u < m.threshold else m.class_roles[1]
        out.append(hit)
    return out


def hb_analytics(blocks: list[Hyperblock], d: Dataset,
                 m: GlcModel | None = None) -> list[HbAnalytics]:
    """Per-block coverage stats against the true labels."""
    total = len(blocks)
    out = []
    for bi, b in enumerate(blocks, start=1):
        n_pts = len(b.member_indices)
        if n_pts == 0:
            raise DataError("analytics on an empty block")
        mis = sum(1 for i in b.member_indices if d.labels[i] != b.class_label)
        out.append(HbAnalytics(
            block_index=bi, block_total=total, class_label=b.class_label,
            seed_attribute=b.seed_attribute, datapoints=n_pts,
            misclassified=mis, accuracy=(n_pts - mis) / n_pts))
    return out


def export_rules(blocks: list[Hyperblock], d: Dataset,
                 m: GlcModel | None = None) -> list[dict]:
    analytics = hb_analytics(blocks, d, m)
    return [{**b.to_json_dict(), "rule": b.rule_text(d.attributes),
             "analytics": a.to_json_dict()}
            for b, a in zip(blocks, analytics)]
