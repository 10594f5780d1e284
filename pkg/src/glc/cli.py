"""Batch command-line interface.

Subcommands cover every pipeline: fit, viz, nl, rules, worstcase, cv,
separate, and serve. Outputs are deterministic for a fixed --seed (or the
GLC_SEED environment variable) so interactive studies replay in CI. Exit
codes: 0 success, 1 flag/validation error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from glc.data import (
    BinarizationSpec,
    DataError,
    binarize,
    load_csv,
    normalize_minmax,
)
from glc.geometry import DscConfig, build_scene, build_scene_dsc, render_svg
from glc.hyperblocks import (
    Hyperblock,
    case_rule,
    export_rules,
    hbrl,
    ihyper,
    imhyper,
    mhyper,
    rule_from_selection,
)
from glc.jsonio import canonical_json
from glc.kernels import KernelConfig, glc_nl_fit, load_sv_file
from glc.linear import evaluate, fit_glc
from glc.validation import ClassifierSpec, cv_table, make_fold_plan
from glc.worstcase import wcl_split, worst_case_report


class CliError(Exception):
    """Flag or argument validation failure (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("GLC_SEED", "0"))


def _load(args):
    """Dataset plus class roles; --positive becomes the class-1 role."""
    d = load_csv(args.dataset, args.label_col)
    classes = d.classes()
    roles = None
    if len(classes) > 2 and not args.positive:
        raise DataError(
            f"{d.name} has classes {classes}; pass --positive to binarize")
    if args.positive:
        d = binarize(d, BinarizationSpec(args.positive, args.super_name))
        roles = (args.positive, args.super_name)
    return normalize_minmax(d), roles


def _write(path, content: str):
    if path in (None, "-"):
        sys.stdout.write(content)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)


def cmd_fit(args):
    d, roles = _load(args)
    m = fit_glc(d, roles)
    rep = evaluate(m, d)
    print(f"dataset: {d.name} ({d.n_points} points, {d.n_attributes} attributes)")
    print(f"classes: {m.class_roles[0]} vs {m.class_roles[1]}")
    print("coefficients:", " ".join(f"{c:.6g}" for c in m.coefficients))
    print("angles_deg:", " ".join(f"{np.degrees(a):.2f}" for a in m.angles))
    print(f"threshold: {m.threshold:.6g}")
    print(f"accuracy: {rep.accuracy:.4f} "
          f"({len(rep.misclassified_indices)} misclassified)")
    if args.out:
        _write(args.out, canonical_json(m.to_json_dict()))
    return 0


def cmd_viz(args):
    d, roles = _load(args)
    if args.mode == "glcl":
        m = fit_glc(d, roles)
        bounds = None
        if args.bounds:
            lo, hi = (float(v) for v in args.bounds.split(","))
            bounds = (lo, hi)
        scene = build_scene(d, m, bounds=bounds)
    else:
        scene = build_scene_dsc(d, DscConfig(mode=args.mode))
    _write(args.out, render_svg(scene, args.width, args.height))
    if args.scene_json:
        _write(args.scene_json, canonical_json(scene.to_json_dict()))
    print(f"wrote {args.out} ({len(scene.polylines)} polylines)")
    return 0


def cmd_nl(args):
    d, roles = _load(args)
    cfg = KernelConfig(kind=args.kernel, gamma=args.gamma, svm_c=args.svm_c,
                       seed=_seed(args))
    svs = None
    if args.sv_file:
        svs = load_sv_file(args.sv_file, d.n_attributes, cfg)
    res = glc_nl_fit(d, cfg, roles=roles, svs=svs)
    eds = normalize_minmax(res.expanded.as_dataset())
    rep = evaluate(res.model, eds)
    print(f"kernel: {args.kernel} gamma={res.svs.gamma:.6g} "
          f"support_vectors={res.svs.m} converged={res.svs.converged}")
    print(f"expanded accuracy: {rep.accuracy:.4f}")
    if args.out:
        _write(args.out, canonical_json({
            "model": res.model.to_json_dict(),
            "support_vectors": [[float(v) for v in row]
                                for row in res.svs.vectors],
            "alphas": [float(a) for a in res.svs.alphas],
            "evaluation": rep.to_json_dict(),
        }))
    return 0


def cmd_rules(args):
    d, roles = _load(args)
    m = fit_glc(d, roles)
    algo = args.algo
    if algo == "irl":
        if not args.rect:
            raise DataError("--algo irl needs at least one --rect x0,y0,x1,y1")
        blocks = []
        for rect in args.rect:
            vals = [float(v) for v in rect.split(",")]
            if len(vals) != 4:
                raise DataError(f"bad --rect {rect!r}: need x0,y0,x1,y1")
            hb, _ = rule_from_selection(d, m, tuple(vals))
            blocks.append(hb)
    elif algo == "case":
        idx = args.point_index if args.point_index is not None else 0
        if not 0 <= idx < d.n_points:
            raise DataError(f"--point-index {idx} out of range")
        blocks = [case_rule(d.points[idx], d, m)]
    elif algo == "ihyper":
        blocks = ihyper(d, m, args.purity)
    elif algo == "mhyper":
        blocks = mhyper(d, args.impurity)
    elif algo == "imhyper":
        blocks = imhyper(d, m, args.purity, args.impurity)
    elif algo == "hbrl":
        blocks = hbrl(d, m, args.purity, args.impurity)
    else:  # pragma: no cover - argparse choices guard this
        raise CliError(f"unknown algo {algo}")
    rules = export_rules(blocks, d, m)
    _write(args.out, canonical_json(rules))
    covered = set(i for b in blocks for i in b.member_indices)
    print(f"{len(blocks)} rules, covering {len(covered)}/{d.n_points} points")
    return 0


def cmd_worstcase(args):
    d, roles = _load(args)
    m = fit_glc(d, roles)
    split = wcl_split(d, m, args.cap)
    rep = worst_case_report(d, m, split)
    _write(args.out, canonical_json(split.to_json_dict()))
    if args.report:
        _write(args.report, canonical_json(rep.to_json_dict()))
    frac = len(split.member_indices) / d.n_points
    print(f"split: [{split.lower:.6g}, {split.upper:.6g}] "
          f"{len(split.member_indices)} points ({frac * 100:.2f}% of data)"
          f"{' capped' if split.capped else ''}")
    print(f"all data accuracy: {rep.all_data.accuracy:.4f}")
    if rep.worst_case is not None:
        print(f"worst case accuracy: {rep.worst_case.accuracy:.4f}")
    return 0


def cmd_cv(args):
    d, _roles = _load(args)
    specs = []
    for name in args.model:
        if name == "lda":
            specs.append(ClassifierSpec("lda"))
        elif name == "knn":
            specs.append(ClassifierSpec("knn", {"k": args.knn_k}))
        elif name == "gnb":
            specs.append(ClassifierSpec("gnb"))
        elif name == "glc_nl":
            specs.append(ClassifierSpec("glc_nl", {"kernel": args.kernel,
                                                   "seed": _seed(args)}))
        else:  # pragma: no cover
            raise CliError(f"unknown model {name}")
    if args.external:
        for path in args.external:
            specs.append(ClassifierSpec(
                "external", {"path": path,
                             "name": os.path.basename(path)}))
    plan = make_fold_plan(d, args.k, _seed(args))
    table = cv_table(d, specs, plan)
    if args.format == "csv":
        _write(args.out, table.to_csv())
    else:
        _write(args.out, canonical_json(table.to_json_dict()))
    for row in table.rows:
        print(f"{row.spec.display_name()}: avg={row.mean * 100:.2f}% "
              f"stdev={row.stdev * 100:.2f}%")
    return 0


def _load_rule_file(path) -> Hyperblock:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if isinstance(obj, list):
        if not obj:
            raise DataError(f"{path} holds no rules")
        obj = obj[0]
    bounds = obj["bounds"]
    return Hyperblock(
        lower=np.array([b[0] for b in bounds]),
        upper=np.array([b[1] for b in bounds]),
        class_label=obj["class"], seed_attribute=obj.get("seed_attribute"),
        member_indices=list(obj.get("member_indices", [])),
        algorithm_tag=obj.get("algorithm", "IHYPER"))


def cmd_separate(args):
    from glc.geometry import separate_hyperblocks

    d, roles = _load(args)
    m = fit_glc(d, roles)
    hb1 = _load_rule_file(args.rules_a)
    hb2 = _load_rule_file(args.rules_b)
    for hb in (hb1, hb2):
        if not hb.member_indices:
            hb.member_indices = hb.recomputed_members(d)
    transform, scene = separate_hyperblocks(hb1, hb2, m, d)
    _write(args.out, render_svg(scene, args.width, args.height))
    if args.transform_json:
        _write(args.transform_json, canonical_json(transform.to_json_dict()))
    print(f"separating attributes: {transform.separating_attributes} "
          f"scaling={transform.scaling_value:.6g}")
    return 0


def cmd_serve(args):
    import uvicorn

    from glc.service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="glc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("dataset", help="CSV file with a header row")
        sp.add_argument("--label-col", default="class",
                        help="label column name or 0-based index")
        sp.add_argument("--positive", default=None,
                        help="positive class for super-class binarization")
        sp.add_argument("--super-name", default="combined",
                        help="name for the combined super class")
        sp.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: GLC_SEED or 0)")

    sp = sub.add_parser("fit", help="fit the linear discriminant")
    common(sp)
    sp.add_argument("-o", "--out", default=None, help="model JSON path")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("viz", help="render a scene SVG")
    common(sp)
    sp.add_argument("--mode", choices=("glcl", "dsc1", "dsc2"), default="glcl")
    sp.add_argument("-o", "--out", default="scene.svg")
    sp.add_argument("--scene-json", default=None)
    sp.add_argument("--bounds", default=None, help="lo,hi vertical markers")
    sp.add_argument("--width", type=int, default=960)
    sp.add_argument("--height", type=int, default=540)
    sp.set_defaults(func=cmd_viz)

    sp = sub.add_parser("nl", help="kernel-expanded pipeline")
    common(sp)
    sp.add_argument("--kernel", choices=("rbf", "poly"), default="rbf")
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--svm-c", type=float, default=1.0)
    sp.add_argument("--sv-file", default=None,
                    help="CSV of support vectors with an alpha column")
    sp.add_argument("-o", "--out", default=None)
    sp.set_defaults(func=cmd_nl)

    sp = sub.add_parser("rules", help="induce interval rules")
    common(sp)
    sp.add_argument("--algo", choices=("case", "irl", "ihyper", "mhyper",
                                       "imhyper", "hbrl"), default="hbrl")
    sp.add_argument("--rect", action="append", default=None,
                    help="x0,y0,x1,y1 scene rectangle (repeatable, irl)")
    sp.add_argument("--point-index", type=int, default=None,
                    help="case rule anchor point")
    sp.add_argument("--purity", type=float, default=1.0)
    sp.add_argument("--impurity", type=float, default=0.0)
    sp.add_argument("-o", "--out", default="-")
    sp.set_defaults(func=cmd_rules)

    sp = sub.add_parser("worstcase", help="worst-case validation split")
    common(sp)
    sp.add_argument("--cap", type=float, default=0.9)
    sp.add_argument("-o", "--out", default="-")
    sp.add_argument("--report", default=None)
    sp.set_defaults(func=cmd_worstcase)

    sp = sub.add_parser("cv", help="k-fold cross validation table")
    common(sp)
    sp.add_argument("--model", action="append", required=True,
                    choices=("lda", "knn", "gnb", "glc_nl"))
    sp.add_argument("--k", type=int, default=10)
    sp.add_argument("--knn-k", type=int, default=5)
    sp.add_argument("--kernel", choices=("rbf", "poly"), default="rbf")
    sp.add_argument("--external", action="append", default=None,
                    help="CSV of (point_index,predicted_label) rows")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("-o", "--out", default="-")
    sp.set_defaults(func=cmd_cv)

    sp = sub.add_parser("separate", help="disproportional-scaling separation")
    common(sp)
    sp.add_argument("--rules-a", required=True)
    sp.add_argument("--rules-b", required=True)
    sp.add_argument("-o", "--out", default="separated.svg")
    sp.add_argument("--transform-json", default=None)
    sp.add_argument("--width", type=int, default=960)
    sp.add_argument("--height", type=int, default=540)
    sp.set_defaults(func=cmd_separate)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
