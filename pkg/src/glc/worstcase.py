"""Worst-case validation splits and the four-way analytics report.

The split is the projection band between the leftmost and rightmost
misclassified points (falling back to the threshold when the model is
perfect), optionally capped to a fraction of the full projection range by
trimming the misclassified extreme farther from the threshold. The report
refits the discriminant on the complement and on the band and scores the
complement model on the band: the hardest realistic held-out evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from glc.data import DataError, Dataset
from glc.linear import EvaluationReport, GlcModel, evaluate, fit_glc


@dataclass
class WorstCaseSplit:
    lower: float
    upper: float
    member_indices: list[int]
    capped: bool = False
    cap_fraction: float = 0.9
    manual: bool = False

    def to_json_dict(self) -> dict:
        return {
            "lower": float(self.lower),
            "upper": float(self.upper),
            "indices": [int(i) for i in self.member_indices],
            "capped": bool(self.capped),
            "cap_fraction": float(self.cap_fraction),
            "manual": bool(self.manual),
        }


@dataclass
class WorstCaseReport:
    all_data: EvaluationReport
    without_overlap: EvaluationReport | None
    overlap_only: EvaluationReport | None
    worst_case: EvaluationReport | None
    no_overlap: bool = False
    unfittable: list[str] | None = None

    def to_json_dict(self) -> dict:
        def sub(rep):
            return rep.to_json_dict() if rep is not None else None

        return {
            "all_data": sub(self.all_data),
            "without_overlap": sub(self.without_overlap),
            "overlap_only": sub(self.overlap_only),
            "worst_case": sub(self.worst_case),
            "no_overlap": bool(self.no_overlap),
            "unfittable": list(self.unfittable or []),
        }


def wcl_split(d: Dataset, m: GlcModel, cap_fraction: float = 0.9) -> WorstCaseSplit:
    """Projection band covering every misclassified point, capped if needed.

    With no misclassification both bounds sit at the threshold and the split
    is empty. When the band exceeds cap_fraction of the full projection
    range, the misclassified projection farther from the threshold is
    dropped repeatedly until the band complies.
    """
    if not 0 < cap_fraction <= 1:
        raise DataError("cap fraction must be in (0, 1]")
    rep = evaluate(m, d)
    u = rep.projections
    full_range = float(u.max() - u.min())
    mis = sorted(rep.misclassified_indices, key=lambda i: u[i])
    if not mis:
        return WorstCaseSplit(lower=float(m.threshold), upper=float(m.threshold),
                              member_indices=[], capped=False,
                              cap_fraction=cap_fraction)

    capped = False
    lo_i, hi_i = 0, len(mis) - 1
    while lo_i < hi_i and \
            u[mis[hi_i]] - u[mis[lo_i]] > cap_fraction * full_range:
        capped = True
        if abs(u[mis[lo_i]] - m.threshold) >= abs(u[mis[hi_i]] - m.threshold):
            lo_i += 1
        else:
            hi_i -= 1
    lower = float(u[mis[lo_i]])
    upper = float(u[mis[hi_i]])
    members = [int(i) for i in np.nonzero((u >= lower) & (u <= upper))[0]]
    return WorstCaseSplit(lower=lower, upper=upper, member_indices=members,
                          capped=capped, cap_fraction=cap_fraction)


def manual_split(d: Dataset, m: GlcModel, indices) -> WorstCaseSplit:
    """Interactively selected member set; bounds are the selection's
    projection extremes. Non-members may project inside the band."""
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise DataError("manual split needs at least one index")
    if idx[0] < 0 or idx[-1] >= d.n_points:
        raise DataError("manual split index out of range")
    u = d.points @ m.k
    sel = u[idx]
    return WorstCaseSplit(lower=float(sel.min()), upper=float(sel.max()),
                          member_indices=idx, capped=False, manual=True)


def worst_case_report(d: Dataset, m: GlcModel,
                      split: WorstCaseSplit) -> WorstCaseReport:
    """Four analytics grids: all data, complement refit on itself, band
    refit on itself, and the complement model applied to the band."""
    all_rep = evaluate(m, d)
    all_rep.data_used = 1.0
    n = d.n_points
    members = list(split.member_indices)
    if not members:
        return WorstCaseReport(all_data=all_rep, without_overlap=None,
                               overlap_only=None, worst_case=None,
                               no_overlap=True)
    complement = [i for i in range(n) if i not in set(members)]
    unfittable = []

    def refit(indices, tag):
        sub = d.subset(indices)
        if len(set(sub.labels)) < 2 or min(
                sum(1 for lab in sub.labels if lab == c)
                for c in set(sub.labels)) < 2:
            unfittable.append(tag)
            return None, sub
        return fit_glc(sub, m.class_roles), sub

    without_model, comp_ds = (None, None)
    if complement:
        without_model, comp_ds = refit(complement, "without_overlap")
    else:
        unfittable.append("without_overlap")
    overlap_model, band_ds = refit(members, "overlap_only")

    without_rep = None
    if without_model is not None:
        without_rep = evaluate(without_model, comp_ds)
        without_rep.data_used = len(complement) / n
    overlap_rep = None
    if overlap_model is not None:
        overlap_rep = evaluate(overlap_model, band_ds)
        overlap_rep.data_used = len(members) / n
    worst_rep = None
    if without_model is not None:
        worst_rep = evaluate(without_model, d.subset(members))
        worst_rep.data_used = len(members) / n

    return WorstCaseReport(all_data=all_rep, without_overlap=without_rep,
                           overlap_only=overlap_rep, worst_case=worst_rep,
                           unfittable=unfittable or None)
