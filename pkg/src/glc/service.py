"""HTTP/JSON facade over the core pipeline.

Sessions own a dataset plus the current model, rules, blocks, and splits.
Every mutating route appends to a replayable log; replaying the log from
the raw upload reproduces the session's exports byte for byte. All geometry
and analytics are computed here, server side; clients only render.
"""

from __future__ import annotations

import os
import secrets
import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from glc.data import (
    BinarizationSpec,
    DataError,
    Dataset,
    binarize,
    load_csv,
    normalize_minmax,
)
from glc.geometry import DscConfig, build_scene, build_scene_dsc, render_svg
from glc.hyperblocks import (
    export_rules,
    hb_analytics,
    hbrl,
    ihyper,
    imhyper,
    mhyper,
    rule_from_selection,
)
from glc.jsonio import canonical_json
from glc.kernels import KernelConfig, glc_nl_fit
from glc.linear import evaluate, fit_glc
from glc.validation import ClassifierSpec, cross_validate, make_fold_plan
from glc.worstcase import manual_split, wcl_split, worst_case_report


@dataclass
class Session:
    id: str
    raw_csv: bytes
    label_col: str
    base: Dataset  # normalized upload
    working: Dataset | None = None  # model space (base or expanded)
    model: object | None = None
    nl_result: object | None = None
    rules: list = field(default_factory=list)
    blocks: list = field(default_factory=list)
    split: object | None = None
    log: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class FitBody(BaseModel):
    method: str = "lda"
    kernel: str | None = None
    gamma: float | None = None
    svm_c: float = 1.0
    seed: int = 0
    positive_class: str | None = None
    super_class_name: str = "combined"


class ThresholdBody(BaseModel):
    t: float


class AngleBody(BaseModel):
    index: int
    degrees: float


class RectBody(BaseModel):
    rect: dict


class BlocksBody(BaseModel):
    algo: str
    purity: float = 1.0
    impurity: float = 0.0


class WorstCaseBody(BaseModel):
    cap: float = 0.9


class ManualSplitBody(BaseModel):
    indices: list[int]


class CrossValBody(BaseModel):
    model: str = "lda"
    k: int = 10
    seed: int = 0
    knn_k: int = 5
    kernel: str = "rbf"


def _err(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(status_code=status, content={
        "code": code, "message": message, "detail": detail})


def _session_summary(s: Session) -> dict:
    return {
        "id": s.id,
        "dataset": {
            "name": s.base.name,
            "n_points": s.base.n_points,
            "n_attributes": s.base.n_attributes,
            "attributes": s.base.attributes,
            "classes": s.base.class_counts(),
        },
        "has_model": s.model is not None,
        "n_rules": len(s.rules),
        "n_blocks": len(s.blocks),
        "has_split": s.split is not None,
        "log_length": len(s.log),
    }


def _apply_fit(s: Session, body: FitBody) -> dict:
    d = s.base
    classes = d.classes()
    roles = None
    if len(classes) > 2 and not body.positive_class:
        raise DataError("multiclass dataset: positive_class is required")
    if len(classes) < 2:
        raise DataError("dataset has a single class")
    if body.positive_class:
        d = binarize(d, BinarizationSpec(body.positive_class,
                                         body.super_class_name))
        roles = (body.positive_class, body.super_class_name)
    if body.method == "lda":
        s.working = d
        s.model = fit_glc(d, roles)
        s.nl_result = None
    elif body.method == "glc_nl":
        cfg = KernelConfig(kind=body.kernel or "rbf", gamma=body.gamma,
                           svm_c=body.svm_c, seed=body.seed)
        res = glc_nl_fit(d, cfg, roles=roles)
        s.nl_result = res
        s.working = normalize_minmax(res.expanded.as_dataset())
        s.model = res.model
    else:
        raise DataError(f"unknown fit method {body.method!r}")
    s.rules = []
    s.blocks = []
    s.split = None
    rep = evaluate(s.model, s.working)
    return {"model": s.model.to_json_dict(), "evaluation": rep.to_json_dict()}


def _apply_threshold(s: Session, t: float) -> dict:
    _require_model(s)
    s.model = s.model.with_threshold(t)
    s.split = None
    return {"model": s.model.to_json_dict(),
            "evaluation": evaluate(s.model, s.working).to_json_dict()}


def _apply_angle(s: Session, index: int, degrees: float) -> dict:
    _require_model(s)
    s.model = s.model.with_angle(index, float(np.radians(degrees)))
    s.split = None
    return {"model": s.model.to_json_dict(),
            "evaluation": evaluate(s.model, s.working).to_json_dict()}


def _apply_selection(s: Session, rect: dict) -> dict:
    _require_model(s)
    try:
        r = (rect["x0"], rect["y0"], rect["x1"], rect["y1"])
    except KeyError as exc:
        raise DataError(f"rect needs x0,y0,x1,y1 (missing {exc})")
    hb, analytics = rule_from_selection(s.working, s.model, r)
    s.rules.append(hb)
    return {"rule": export_rules([hb], s.working, s.model)[0]}


def _apply_blocks(s: Session, body: BlocksBody) -> dict:
    _require_model(s)
    algo = body.algo.lower()
    if algo == "ihyper":
        blocks = ihyper(s.working, s.model, body.purity)
    elif algo == "mhyper":
        blocks = mhyper(s.working, body.impurity)
    elif algo == "imhyper":
        blocks = imhyper(s.working, s.model, body.purity, body.impurity)
    elif algo == "hbrl":
        blocks = hbrl(s.working, s.model, body.purity, body.impurity)
    else:
        raise DataError(f"unknown block algorithm {body.algo!r}")
    s.blocks = blocks
    return {"blocks": export_rules(blocks, s.working, s.model)}


def _apply_worstcase(s: Session, cap: float) -> dict:
    _require_model(s)
    s.split = wcl_split(s.working, s.model, cap)
    return {"split": s.split.to_json_dict()}


def _apply_manual_split(s: Session, indices: list[int]) -> dict:
    _require_model(s)
    s.split = manual_split(s.working, s.model, indices)
    return {"split": s.split.to_json_dict()}


REPLAYED_OPS = {
    "fit": lambda s, p: _apply_fit(s, FitBody(**p)),
    "threshold": lambda s, p: _apply_threshold(s, p["t"]),
    "angles": lambda s, p: _apply_angle(s, p["index"], p["degrees"]),
    "selection": lambda s, p: _apply_selection(s, p["rect"]),
    "blocks": lambda s, p: _apply_blocks(s, BlocksBody(**p)),
    "worstcase": lambda s, p: _apply_worstcase(s, p["cap"]),
    "worstcase_manual": lambda s, p: _apply_manual_split(s, p["indices"]),
}


def _require_model(s: Session):
    if s.model is None or s.working is None:
        raise DataError("no model fitted yet")


def _state_exports(s: Session) -> str:
    """Canonical serialization of everything the log is meant to rebuild."""
    obj = {
        "model": s.model.to_json_dict() if s.model else None,
        "rules": export_rules(s.rules, s.working, s.model) if s.rules else [],
        "blocks": export_rules(s.blocks, s.working, s.model) if s.blocks else [],
        "split": s.split.to_json_dict() if s.split else None,
    }
    return canonical_json(obj)


def replay_log(s: Session) -> Session:
    """Rebuild a fresh session from the raw upload by re-running the log."""
    base = normalize_minmax(load_csv(s.raw_csv, s.label_col))
    fresh = Session(id=s.id, raw_csv=s.raw_csv, label_col=s.label_col,
                    base=base)
    for entry in s.log:
        op, params = entry["op"], entry["params"]
        if op not in REPLAYED_OPS:
            raise DataError(f"corrupt log: unknown op {op!r}")
        REPLAYED_OPS[op](fresh, params)
    fresh.log = list(s.log)
    return fresh


def create_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="line-coordinate workbench", docs_url=None,
                  redoc_url=None)
    sessions: dict[str, Session] = {}
    app.state.sessions = sessions

    ui_dir = ui_dir or os.environ.get("GLC_UI_DIR") or os.path.join(
        os.path.dirname(os.path.dirname(os.path.dirname(
            os.path.abspath(__file__)))), "frontend", "dist")
    if os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc):
        return _err(400, "validation", "request body failed validation",
                    str(exc))

    @app.exception_handler(DataError)
    async def data_error_handler(request: Request, exc):
        return _err(409, "precondition", str(exc))

    @app.exception_handler(Exception)
    async def core_error_handler(request: Request, exc):
        return _err(500, "core", "internal error", str(exc))

    def get_session(sid: str) -> Session:
        if sid not in sessions:
            raise LookupError(sid)
        return sessions[sid]

    @app.exception_handler(LookupError)
    async def lookup_handler(request: Request, exc):
        return _err(404, "not_found", f"unknown session {exc}")

    def logged(s: Session, op: str, params: dict, result: dict) -> dict:
        s.log.append({"op": op, "params": params})
        return result

    @app.post("/sessions")
    async def create_session(request: Request,
                             label_col: str = Query("class")):
        body = await request.body()
        if not body:
            return _err(400, "validation", "empty CSV body")
        try:
            raw = load_csv(body, label_col)
        except DataError as exc:
            return _err(400, "validation", str(exc))
        sid = secrets.token_hex(8)
        sessions[sid] = Session(id=sid, raw_csv=body, label_col=label_col,
                                base=normalize_minmax(raw))
        return _session_summary(sessions[sid])

    @app.get("/sessions/{sid}")
    def session_info(sid: str):
        return _session_summary(get_session(sid))

    @app.post("/sessions/{sid}/model/fit")
    def fit_model(sid: str, body: FitBody):
        s = get_session(sid)
        with s.lock:
            return logged(s, "fit", body.model_dump(), _apply_fit(s, body))

    @app.patch("/sessions/{sid}/model/threshold")
    def patch_threshold(sid: str, body: ThresholdBody):
        s = get_session(sid)
        with s.lock:
            return logged(s, "threshold", {"t": body.t},
                          _apply_threshold(s, body.t))

    @app.patch("/sessions/{sid}/model/angles")
    def patch_angle(sid: str, body: AngleBody):
        s = get_session(sid)
        with s.lock:
            return logged(s, "angles",
                          {"index": body.index, "degrees": body.degrees},
                          _apply_angle(s, body.index, body.degrees))

    @app.get("/sessions/{sid}/scene")
    def scene(sid: str, mode: str = Query("glcl")):
        s = get_session(sid)
        return _scene_dict(s, mode)

    @app.post("/sessions/{sid}/rules/selection")
    def selection(sid: str, body: RectBody):
        s = get_session(sid)
        with s.lock:
            return logged(s, "selection", {"rect": body.rect},
                          _apply_selection(s, body.rect))

    @app.post("/sessions/{sid}/blocks")
    def blocks(sid: str, body: BlocksBody):
        s = get_session(sid)
        with s.lock:
            return logged(s, "blocks", body.model_dump(),
                          _apply_blocks(s, body))

    @app.post("/sessions/{sid}/worstcase")
    def worstcase(sid: str, body: WorstCaseBody = WorstCaseBody()):
        s = get_session(sid)
        with s.lock:
            return logged(s, "worstcase", {"cap": body.cap},
                          _apply_worstcase(s, body.cap))

    @app.post("/sessions/{sid}/worstcase/manual")
    def worstcase_manual(sid: str, body: ManualSplitBody):
        s = get_session(sid)
        with s.lock:
            return logged(s, "worstcase_manual", {"indices": body.indices},
                          _apply_manual_split(s, body.indices))

    @app.get("/sessions/{sid}/report/worstcase")
    def report(sid: str):
        s = get_session(sid)
        _require_model(s)
        if s.split is None:
            raise DataError("no worst-case split computed yet")
        rep = worst_case_report(s.working, s.model, s.split)
        return rep.to_json_dict()

    @app.post("/sessions/{sid}/crossval")
    def crossval(sid: str, body: CrossValBody):
        s = get_session(sid)
        d = s.working if s.working is not None else s.base
        if len(set(d.labels)) != 2:
            raise DataError("cross-validation needs a binary dataset; fit first")
        spec = {"lda": ClassifierSpec("lda"),
                "knn": ClassifierSpec("knn", {"k": body.knn_k}),
                "gnb": ClassifierSpec("gnb"),
                "glc_nl": ClassifierSpec("glc_nl", {"kernel": body.kernel,
                                                    "seed": body.seed})}
        if body.model not in spec:
            raise DataError(f"unknown model {body.model!r}")
        plan = make_fold_plan(d, body.k, body.seed)
        res = cross_validate(d, spec[body.model], plan)
        return {"model": res.spec.display_name(),
                "fold_accuracies": res.fold_accuracies,
                "avg": res.mean, "stdev": res.stdev,
                "warnings": res.warnings}

    @app.get("/sessions/{sid}/export/svg")
    def export_svg(sid: str, mode: str = Query("glcl"),
                   width: int = Query(960), height: int = Query(540)):
        s = get_session(sid)
        scene_obj = _scene_for(s, mode)
        return Response(content=render_svg(scene_obj, width, height),
                        media_type="image/svg+xml")

    @app.get("/sessions/{sid}/export/rules")
    def export_rules_route(sid: str):
        s = get_session(sid)
        _require_model(s)
        rules = export_rules(s.rules + s.blocks, s.working, s.model)
        return Response(content=canonical_json(rules),
                        media_type="application/json")

    @app.get("/sessions/{sid}/export/report")
    def export_report(sid: str):
        s = get_session(sid)
        _require_model(s)
        if s.split is None:
            raise DataError("no worst-case split computed yet")
        rep = worst_case_report(s.working, s.model, s.split)
        return Response(content=canonical_json(rep.to_json_dict()),
                        media_type="application/json")

    @app.get("/sessions/{sid}/log")
    def get_log(sid: str):
        return {"log": get_session(sid).log}

    @app.post("/sessions/{sid}/replay")
    def replay(sid: str):
        s = get_session(sid)
        with s.lock:
            fresh = replay_log(s)
            consistent = _state_exports(fresh) == _state_exports(s)
        return {"consistent": consistent, "ops": len(s.log)}

    def _scene_for(s: Session, mode: str):
        _require_model(s)
        if mode == "glcl":
            bounds = (s.split.lower, s.split.upper) if s.split else None
            return build_scene(s.working, s.model, bounds=bounds)
        if mode in ("dsc1", "dsc2"):
            return build_scene_dsc(s.working, DscConfig(mode=mode))
        raise DataError(f"unknown scene mode {mode!r}")

    def _scene_dict(s: Session, mode: str) -> dict:
        return _scene_for(s, mode).to_json_dict()

    return app
