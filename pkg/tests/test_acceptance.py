"""Acceptance gate: one test per release criterion, each printing a
[PASS]/[FAIL] line with the measured values.

Dataset-dependent criteria name the fixture actually used ("real" when a
UCI file is present under tests/data/real/, "surrogate" otherwise).
Run with `pytest tests/test_acceptance.py -v -s` to see every line.
"""

import time

import numpy as np
import pytest

from glc.data import Dataset, normalize_minmax
from glc.geometry import build_polyline, reconstruct_point, separate_hyperblocks
from glc.hyperblocks import Hyperblock, hbrl, ihyper, mhyper
from glc.kernels import KernelConfig, glc_nl_fit
from glc.linear import evaluate, fit_glc, make_glc_model, project
from glc.validation import ClassifierSpec, cross_validate, make_fold_plan, compare_on_split
from glc.worstcase import wcl_split, worst_case_report
from oracles import brute_force_best_interval, exists_pure_merge


def report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def random_model(rng, n):
    c = rng.normal(0, 2, n)
    if np.max(np.abs(c)) < 1e-9:
        c[0] = 1.0
    pts = np.zeros((2, n))
    d = Dataset("r", [f"x{i}" for i in range(n)], pts, ["a", "b"])
    return make_glc_model(c, d, ("a", "b"))


def test_acceptance_losslessness():
    rng = np.random.default_rng(2024)
    t0 = time.monotonic()
    max_coord_err = 0.0
    max_proj_err = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 16))
        m = random_model(rng, n)
        x = rng.uniform(0, 1, n)
        mirrored = bool(rng.random() < 0.5)
        p = build_polyline(x, m, mirrored=mirrored)
        max_coord_err = max(max_coord_err,
                            float(np.max(np.abs(reconstruct_point(p, m) - x))))
        max_proj_err = max(max_proj_err,
                           abs(p.endpoint_projection - float(m.k @ x)))
    dt = time.monotonic() - t0
    ok = max_coord_err <= 1e-9 and max_proj_err <= 1e-12 and dt < 5.0
    report("losslessness (1000 random pairs)", ok,
           f"coord_err={max_coord_err:.2e} proj_err={max_proj_err:.2e} "
           f"runtime={dt:.2f}s")


def test_acceptance_equivalence_f_g():
    rng = np.random.default_rng(2025)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(1, 12))
        c = rng.normal(0, 3, n)
        if np.max(np.abs(c)) == 0:
            c[0] = 1.0
        x = rng.uniform(0, 1, n)
        t = rng.normal(0, 2)
        cmax = float(np.max(np.abs(c)))
        f_decision = float(c @ x) < t
        g_decision = float((c / cmax) @ x) < t / cmax
        mismatches += f_decision != g_decision
    report("decision equivalence of F and G (1000 random triples)",
           mismatches == 0, f"mismatches={mismatches}")


def test_acceptance_wbc_linear(wbc_norm, capsys):
    from glc.cli import main
    from tests_paths import data_path

    t0 = time.monotonic()
    code = main(["fit", data_path("wbc"), "--label-col", "class"])
    out = capsys.readouterr().out
    dt = time.monotonic() - t0
    acc = float(out.split("accuracy: ")[1].split()[0])
    ok = code == 0 and acc >= 0.96 and dt < 10.0
    with capsys.disabled():
        report(f"wbc linear fit ({wbc_norm.fixture_kind} fixture)", ok,
               f"training accuracy={acc:.4f} runtime={dt:.2f}s")


def test_acceptance_iris_nonlinearity_gap(iris_binary):
    plan = make_fold_plan(iris_binary, 10, seed=0)
    linear = cross_validate(iris_binary, ClassifierSpec("lda"), plan)
    res = glc_nl_fit(iris_binary, KernelConfig(kind="rbf", seed=0),
                     roles=("versicolor", "combined"))
    eds = normalize_minmax(res.expanded.as_dataset())
    nl_acc = evaluate(res.model, eds).accuracy
    gap = nl_acc - linear.mean
    ok = 0.60 <= linear.mean <= 0.80 and nl_acc >= 0.93 and gap >= 0.10
    report("iris nonlinearity gap (rbf)", ok,
           f"lda 10-fold mean={linear.mean:.4f} nl train={nl_acc:.4f} "
           f"gap={gap:.4f}")


def test_acceptance_ionosphere_nonlinearity_gap(ionosphere_norm):
    m = fit_glc(ionosphere_norm)
    lin_acc = evaluate(m, ionosphere_norm).accuracy
    res = glc_nl_fit(ionosphere_norm, KernelConfig(kind="poly", seed=0))
    eds = normalize_minmax(res.expanded.as_dataset())
    nl_acc = evaluate(res.model, eds).accuracy
    ok = 0.85 <= lin_acc <= 0.95 and nl_acc >= 0.92
    report(f"ionosphere nonlinearity gap (poly, "
           f"{ionosphere_norm.fixture_kind} fixture)", ok,
           f"linear train={lin_acc:.4f} nl train={nl_acc:.4f}")


def test_acceptance_hbrl_consistency(wbc_norm, ionosphere_norm):
    details = []
    all_ok = True
    for d in (wbc_norm, ionosphere_norm):
        m = fit_glc(d)
        preds = evaluate(m, d).predictions
        blocks = hbrl(d, m)
        violations = sum(1 for b in blocks for i in b.member_indices
                         if preds[i] != b.class_label)
        covered = set(i for b in blocks for i in b.member_indices)
        ok = violations == 0 and covered == set(range(d.n_points))
        all_ok = all_ok and ok
        details.append(f"{d.name}({d.fixture_kind}): {violations} violations "
                       f"over {d.n_points} points, {len(blocks)} blocks")
    report("hbrl = discriminant on every covered point", all_ok,
           "; ".join(details))


def test_acceptance_ihyper_oracle():
    rng = np.random.default_rng(77)
    t0 = time.monotonic()
    checked_rounds = 0
    for trial in range(20):
        n_pts = int(rng.integers(8, 51))
        n_attr = int(rng.integers(1, 5))
        pts = np.round(rng.uniform(0, 1, (n_pts, n_attr)), 2)
        labels = [("A", "B")[int(v)] for v in rng.integers(0, 2, n_pts)]
        if len(set(labels)) < 2:
            labels[0] = "B" if labels[0] == "A" else "A"
        d = Dataset("t", [f"x{i}" for i in range(n_attr)], pts, labels)
        threshold = float(rng.choice([0.7, 0.85, 1.0]))
        blocks = ihyper(d, None, threshold)
        uncovered = set(range(n_pts))
        for b in blocks:
            oracle = brute_force_best_interval(pts, labels, threshold,
                                               sorted(uncovered))
            assert oracle is not None
            size, attr, start, end = oracle
            match = (b.seed_attribute == attr
                     and np.isclose(b.lower[attr], start)
                     and np.isclose(b.upper[attr], end))
            if not match:
                report("ihyper round winner equals brute-force maximum", False,
                       f"trial {trial}: got attr {b.seed_attribute} "
                       f"[{b.lower[b.seed_attribute]}, "
                       f"{b.upper[b.seed_attribute]}], oracle {oracle}")
            checked_rounds += 1
            uncovered -= set(b.member_indices)
    dt = time.monotonic() - t0
    report("ihyper round winner equals brute-force maximum",
           dt < 30.0, f"20 datasets, {checked_rounds} rounds, runtime={dt:.2f}s")


def test_acceptance_mhyper_oracle():
    rng = np.random.default_rng(88)
    impure = 0
    mergeable = 0
    for trial in range(20):
        n_pts = int(rng.integers(6, 31))
        n_attr = int(rng.integers(1, 4))
        pts = np.unique(np.round(rng.uniform(0, 1, (n_pts, n_attr)), 2), axis=0)
        labels = [("A", "B")[int(v)] for v in rng.integers(0, 2, len(pts))]
        d = Dataset("t", [f"x{i}" for i in range(n_attr)], pts, labels)
        blocks = mhyper(d, 0.0)
        for b in blocks:
            if any(labels[i] != b.class_label for i in b.member_indices):
                impure += 1
        if exists_pure_merge(blocks, pts, labels):
            mergeable += 1
    report("mhyper phase-1 purity and maximality (20 datasets)",
           impure == 0 and mergeable == 0,
           f"impure_blocks={impure} remaining_pure_merges={mergeable}")


def test_acceptance_wcl_wbc(wbc_norm):
    m = fit_glc(wbc_norm)
    rep_all = evaluate(m, wbc_norm)
    split = wcl_split(wbc_norm, m)
    u = rep_all.projections
    inside = all(split.lower <= u[i] <= split.upper
                 for i in rep_all.misclassified_indices)
    rep = worst_case_report(wbc_norm, m, split)
    used = rep.worst_case.data_used
    ok = (len(split.member_indices) > 0
          and (inside or split.capped)
          and 0.10 <= used <= 0.40
          and rep.worst_case.accuracy <= rep.all_data.accuracy - 0.05
          and rep.without_overlap.accuracy >= 0.99)
    report(f"worst-case split on wbc ({wbc_norm.fixture_kind} fixture)", ok,
           f"all={rep.all_data.accuracy:.4f} "
           f"without={rep.without_overlap.accuracy:.4f} "
           f"worst={rep.worst_case.accuracy:.4f} data_used={used:.4f} "
           f"errors_inside={inside}")


def test_acceptance_wcl_ionosphere(ionosphere_norm):
    m = fit_glc(ionosphere_norm)
    split = wcl_split(ionosphere_norm, m)
    rep = worst_case_report(ionosphere_norm, m, split)
    ok = (rep.worst_case.accuracy <= rep.all_data.accuracy
          and rep.without_overlap.accuracy >= 0.97)
    report(f"worst-case split on ionosphere "
           f"({ionosphere_norm.fixture_kind} fixture)", ok,
           f"all={rep.all_data.accuracy:.4f} "
           f"without={rep.without_overlap.accuracy:.4f} "
           f"worst={rep.worst_case.accuracy:.4f} "
           f"data_used={rep.worst_case.data_used:.4f}")


def test_acceptance_worst_case_comparison(wbc_norm):
    m = fit_glc(wbc_norm)
    split = wcl_split(wbc_norm, m)
    comp = compare_on_split(split, wbc_norm, [
        ClassifierSpec("lda"),
        ClassifierSpec("knn", {"k": 5}),
        ClassifierSpec("gnb"),
    ])
    rows = ", ".join(f"{name}={acc:.3f}" for name, acc in comp.rows)
    report(f"built-in classifiers on the wbc worst-case split "
           f"({wbc_norm.fixture_kind} fixture)", comp.average <= 0.90,
           f"{rows}, average={comp.average:.4f}")


def test_acceptance_hyperblock_separation():
    pts = np.array([
        [0.8, 0.3, 0.6], [1.0, 0.7, 0.2],
        [0.0, 0.3, 0.6], [0.2, 0.7, 0.2],
    ])
    d = Dataset("sep", ["x0", "x1", "x2"], pts, ["a", "a", "b", "b"])
    m = make_glc_model([1.0, 0.4, 0.3], d, ("a", "b"))
    hb_a = Hyperblock(pts[:2].min(axis=0), pts[:2].max(axis=0), "a",
                      None, [0, 1], "IHYPER")
    hb_b = Hyperblock(pts[2:].min(axis=0), pts[2:].max(axis=0), "b",
                      None, [2, 3], "IHYPER")
    transform, scene = separate_hyperblocks(hb_a, hb_b, m, d)
    max_proj_err = max(
        abs(p.endpoint_projection - project(pts[p.source_index], m))
        for p in scene.polylines)
    lead = len(transform.separating_attributes)
    lifted_min = min(v[1] for p in scene.polylines if p.source_index in (0, 1)
                     for v in p.vertices[lead + 1:])
    plain_max = max(v[1] for p in scene.polylines if p.source_index in (2, 3)
                    for v in p.vertices[1:])
    ok = lifted_min > plain_max and max_proj_err <= 1e-12
    report("hyperblock separation fixture", ok,
           f"band gap={lifted_min - plain_max:.4f} "
           f"proj_err={max_proj_err:.2e}")


def test_acceptance_determinism(tmp_path, capsys):
    from glc.cli import main
    from tests_paths import data_path

    outputs = []
    for run_dir in ("r1", "r2"):
        base = tmp_path / run_dir
        base.mkdir()
        rc = 0
        rc |= main(["rules", data_path("wbc"), "--algo", "hbrl",
                    "--seed", "7", "-o", str(base / "rules.json")])
        rc |= main(["viz", data_path("wbc"), "--mode", "glcl",
                    "--seed", "7", "-o", str(base / "scene.svg"),
                    "--scene-json", str(base / "scene.json")])
        rc |= main(["worstcase", data_path("wbc"), "--seed", "7",
                    "-o", str(base / "split.json"),
                    "--report", str(base / "report.json")])
        assert rc == 0
        outputs.append({name: (base / name).read_bytes()
                        for name in ("rules.json", "scene.svg",
                                     "scene.json", "split.json",
                                     "report.json")})
    capsys.readouterr()
    identical = [name for name in outputs[0]
                 if outputs[0][name] == outputs[1][name]]
    ok = len(identical) == len(outputs[0])
    with capsys.disabled():
        report("byte-identical exports across two seeded runs", ok,
               f"{len(identical)}/{len(outputs[0])} files identical")
