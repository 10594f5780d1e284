import json

import pytest
from fastapi.testclient import TestClient

from glc.service import create_app

CSV = (b"a,b,class\n"
       b"0.1,0.2,p\n0.2,0.1,p\n0.15,0.3,p\n0.3,0.25,p\n"
       b"0.8,0.9,q\n0.9,0.8,q\n0.85,0.7,q\n0.7,0.85,q\n")


@pytest.fixture()
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


@pytest.fixture()
def session(client):
    r = client.post("/sessions?label_col=class", content=CSV)
    assert r.status_code == 200, r.text
    return r.json()["id"]


def fit(client, sid, **kw):
    return client.post(f"/sessions/{sid}/model/fit", json=kw or {"method": "lda"})


def test_create_session_summary(client):
    r = client.post("/sessions?label_col=class", content=CSV)
    obj = r.json()
    assert obj["dataset"]["n_points"] == 8
    assert obj["dataset"]["classes"] == {"p": 4, "q": 4}


def test_create_session_bad_csv(client):
    r = client.post("/sessions?label_col=class", content=b"a,b\n1,x\n")
    assert r.status_code == 400
    assert r.json()["code"] == "validation"


def test_unknown_session_404(client):
    assert client.get("/sessions/nope").status_code == 404


def test_fit_and_threshold_roundtrip(client, session):
    r = fit(client, session)
    assert r.status_code == 200
    body = r.json()
    assert body["evaluation"]["accuracy"] == 1.0
    t0 = body["model"]["threshold"]

    r2 = client.patch(f"/sessions/{session}/model/threshold", json={"t": -99})
    assert r2.status_code == 200
    assert r2.json()["evaluation"]["accuracy"] == 0.5  # everything class 2

    r3 = client.patch(f"/sessions/{session}/model/threshold", json={"t": t0})
    assert r3.json()["evaluation"]["accuracy"] == 1.0


def test_angle_patch_reevaluates(client, session):
    fit(client, session)
    r = client.patch(f"/sessions/{session}/model/angles",
                     json={"index": 0, "degrees": 90.0})
    assert r.status_code == 200
    assert r.json()["model"]["k"][0] == pytest.approx(0.0, abs=1e-12)


def test_scene_modes(client, session):
    fit(client, session)
    for mode in ("glcl", "dsc1", "dsc2"):
        r = client.get(f"/sessions/{session}/scene?mode={mode}")
        assert r.status_code == 200
        scene = r.json()
        assert len(scene["polylines"]) == 8
    assert client.get(f"/sessions/{session}/scene?mode=xyz").status_code == 409


def test_scene_before_fit_409(client, session):
    assert client.get(f"/sessions/{session}/scene").status_code == 409


def test_selection_rule(client, session):
    fit(client, session)
    r = client.post(f"/sessions/{session}/rules/selection",
                    json={"rect": {"x0": -10, "y0": -10, "x1": 10, "y1": 10}})
    assert r.status_code == 200
    rule = r.json()["rule"]
    assert rule["analytics"]["datapoints"] == 8


def test_selection_empty_409(client, session):
    fit(client, session)
    r = client.post(f"/sessions/{session}/rules/selection",
                    json={"rect": {"x0": 90, "y0": 90, "x1": 99, "y1": 99}})
    assert r.status_code == 409
    assert "empty selection" in r.json()["message"]


def test_blocks_algos(client, session):
    fit(client, session)
    for algo in ("ihyper", "imhyper", "hbrl"):
        r = client.post(f"/sessions/{session}/blocks", json={"algo": algo})
        assert r.status_code == 200, r.text
        assert r.json()["blocks"]


def test_worstcase_and_report(client, session):
    fit(client, session)
    r = client.post(f"/sessions/{session}/worstcase", json={"cap": 0.9})
    assert r.status_code == 200
    split = r.json()["split"]
    assert split["indices"] == []  # separable toy
    rep = client.get(f"/sessions/{session}/report/worstcase").json()
    assert rep["no_overlap"] is True
    assert rep["all_data"]["accuracy"] == 1.0


def test_manual_split(client, session):
    fit(client, session)
    r = client.post(f"/sessions/{session}/worstcase/manual",
                    json={"indices": [0, 5, 6]})
    split = r.json()["split"]
    assert split["manual"] is True
    assert split["indices"] == [0, 5, 6]


def test_crossval_route(client, session):
    fit(client, session)
    r = client.post(f"/sessions/{session}/crossval",
                    json={"model": "knn", "k": 4, "seed": 0})
    assert r.status_code == 200
    assert r.json()["avg"] == 1.0


def test_export_svg(client, session):
    fit(client, session)
    r = client.get(f"/sessions/{session}/export/svg?width=640&height=480")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("image/svg+xml")
    assert r.text.count("<path") == 8


def test_replay_reproduces_state(client, session):
    fit(client, session)
    client.patch(f"/sessions/{session}/model/threshold", json={"t": 0.5})
    client.post(f"/sessions/{session}/rules/selection",
                json={"rect": {"x0": -10, "y0": -10, "x1": 10, "y1": 10}})
    client.post(f"/sessions/{session}/blocks", json={"algo": "hbrl"})
    client.post(f"/sessions/{session}/worstcase", json={"cap": 0.9})
    r = client.post(f"/sessions/{session}/replay")
    assert r.status_code == 200
    assert r.json() == {"consistent": True, "ops": 5}


def test_replay_empty_log(client, session):
    r = client.post(f"/sessions/{session}/replay")
    assert r.json()["consistent"] is True


def test_threshold_edits_last_wins(client, session):
    fit(client, session)
    for t in (0.1, 0.9, 0.4):
        client.patch(f"/sessions/{session}/model/threshold", json={"t": t})
    log = client.get(f"/sessions/{session}/log").json()["log"]
    assert [e["params"]["t"] for e in log if e["op"] == "threshold"] == [0.1, 0.9, 0.4]
    r = client.post(f"/sessions/{session}/replay")
    assert r.json()["consistent"] is True


def test_sessions_isolated(client):
    s1 = client.post("/sessions?label_col=class", content=CSV).json()["id"]
    s2 = client.post("/sessions?label_col=class", content=CSV).json()["id"]
    fit(client, s1)
    client.patch(f"/sessions/{s1}/model/threshold", json={"t": 0.123})
    fit(client, s2)
    m1 = client.get(f"/sessions/{s1}").json()
    m2 = client.get(f"/sessions/{s2}").json()
    assert m1["log_length"] == 2 and m2["log_length"] == 1


def test_validation_error_400(client, session):
    fit(client, session)
    r = client.patch(f"/sessions/{session}/model/threshold",
                     json={"t": "not-a-number"})
    assert r.status_code == 400
    assert r.json()["code"] == "validation"


def test_multiclass_requires_positive(client):
    csv = b"a,class\n" + b"".join(
        f"{i / 10},c{i % 3}\n".encode() for i in range(12))
    sid = client.post("/sessions?label_col=class", content=csv).json()["id"]
    r = client.post(f"/sessions/{sid}/model/fit", json={"method": "lda"})
    assert r.status_code == 409
    r2 = client.post(f"/sessions/{sid}/model/fit",
                     json={"method": "lda", "positive_class": "c0"})
    assert r2.status_code == 200
