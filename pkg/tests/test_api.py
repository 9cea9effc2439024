"""Service-level contract tests: auth, idempotency, privacy, error shape."""
import json

import pytest
from fastapi.testclient import TestClient

from biasgame.service.api import create_app
from biasgame.service.clock import VirtualClock
from biasgame.service.platform import Platform

from conftest import add_pool

CURATOR = {"Authorization": "Bearer test-curator"}

VALID_PROFILE = {
    "gender": "woman",
    "age": 28,
    "education": "Bachelor's degree",
    "english": "proficient",
    "leaning": -2,
    "news_frequency": "Every day",
}


@pytest.fixture
def service():
    clock = VirtualClock()
    platform = Platform(clock=clock, seed=11)
    add_pool(platform, "politics", 24, baseline=True)
    add_pool(platform, "fresh", 10, baseline=False)
    app = create_app(platform, curator_token="test-curator", session_ttl_hours=24)
    return TestClient(app), platform, clock


def register(client, body=None):
    resp = client.post("/players", json=body or VALID_PROFILE)
    assert resp.status_code == 201, resp.text
    data = resp.json()
    return data["token"], data["player"]


def auth(token):
    return {"Authorization": f"Bearer {token}"}


def run_tutorial(client, token):
    for level in range(1, 5):
        lv = client.get(f"/tutorial/{level}", headers=auth(token)).json()
        answers = [{"ref": s["ref"], "label": "biased", "marked_tokens": []} for s in lv["sentences"]]
        resp = client.post(f"/tutorial/{level}", json={"answers": answers}, headers=auth(token))
        assert resp.status_code == 200, resp.text
    return resp.json()


def test_register_returns_token_and_level_one(service):
    client, _p, _c = service
    token, player = register(client)
    assert token
    assert player["tutorial_level"] == 1
    assert player["demographics"]["leaning_reported"] == 8  # -2 on the 0..20 scale


def test_register_validation_errors(service):
    client, _p, _c = service
    for field, value in (("leaning", 15), ("education", "MBA"), ("gender", "robot"),
                         ("news_frequency", "sometimes"), ("age", 0)):
        body = dict(VALID_PROFILE, **{field: value})
        resp = client.post("/players", json=body)
        assert resp.status_code == 400
        err = resp.json()
        assert err["code"] == "validation_failed"
        assert set(err) == {"code", "message", "retryable"}


def test_expired_token_rejected(service):
    client, _p, clock = service
    token, _ = register(client)
    clock.tick(25 * 3600)
    resp = client.get("/players/me", headers=auth(token))
    assert resp.status_code == 401
    assert resp.json()["code"] == "unauthorized"


def test_idempotent_state_change(service):
    client, platform, _c = service
    token, _ = register(client)
    run_tutorial(client, token)
    body = {"mode": "publish", "topic": "politics", "request_id": "round-1"}
    first = client.post("/rounds", json=body, headers=auth(token))
    second = client.post("/rounds", json=body, headers=auth(token))
    assert first.status_code == second.status_code == 201
    assert first.json() == second.json()
    assert len(platform.rounds) == 1

    rid = first.json()["id"]
    sid = first.json()["sentences"][0]["id"]
    sub = {"sentence_id": sid, "label": "biased", "request_id": "sub-1"}
    r1 = client.post(f"/rounds/{rid}/sentence", json=sub, headers=auth(token))
    r2 = client.post(f"/rounds/{rid}/sentence", json=sub, headers=auth(token))
    assert r1.json() == r2.json()
    assert platform.rounds[rid].cursor == 1  # applied once


def test_round_ownership_enforced(service):
    client, _p, _c = service
    token_a, _ = register(client)
    run_tutorial(client, token_a)
    token_b, _ = register(client)
    run_tutorial(client, token_b)
    round_a = client.post("/rounds", json={"mode": "context", "topic": "politics"},
                          headers=auth(token_a)).json()
    resp = client.post(
        f"/rounds/{round_a['id']}/sentence",
        json={"sentence_id": round_a["sentences"][0]["id"], "label": "biased"},
        headers=auth(token_b),
    )
    assert resp.status_code == 401


def test_error_shape_for_module_errors(service):
    client, _p, _c = service
    token, _ = register(client)
    resp = client.post("/rounds", json={"mode": "publish", "topic": "politics"}, headers=auth(token))
    assert resp.status_code == 403
    err = resp.json()
    assert err["code"] == "tutorial_incomplete"
    assert err["retryable"] is False

    run_tutorial(client, token)
    resp = client.post("/rounds", json={"mode": "quickwords", "topic": "politics"}, headers=auth(token))
    assert resp.json()["code"] == "mode_locked"
    resp = client.post("/rounds", json={"mode": "publish", "topic": "nope"}, headers=auth(token))
    assert resp.json()["code"] == "unknown_topic"


def test_paper_flow_with_new_feedback_flag(service):
    client, platform, _c = service
    tokens = []
    for _ in range(5):
        t, _ = register(client)
        run_tutorial(client, t)
        tokens.append(t)
    for t in tokens:
        rd = client.post("/rounds", json={"mode": "publish", "topic": "fresh"}, headers=auth(t)).json()
        for s in rd["sentences"]:
            client.post(f"/rounds/{rd['id']}/sentence",
                        json={"sentence_id": s["id"], "label": "biased"}, headers=auth(t))
    paper = client.get("/players/me/paper", headers=auth(tokens[0])).json()
    assert paper["new_feedback"] is True
    unresolved = client.get("/players/me/paper?unresolved=true", headers=auth(tokens[0])).json()
    assert len(unresolved["entries"]) == 10
    sid = unresolved["entries"][0]["sentence_id"]
    collected = client.post(f"/players/me/paper/{sid}/collect", json={}, headers=auth(tokens[0])).json()
    assert len(collected["collected"]) == 1
    assert collected["collected"][0]["sentence_id"] == sid
    # delayed multiplier doubles the $10 sentence hit (no word marks here)
    assert collected["collected"][0]["reward_currency"] == 20
    again = client.post(f"/players/me/paper/{sid}/collect", json={}, headers=auth(tokens[0])).json()
    assert again["collected"] == []


def test_no_endpoint_exposes_other_players_demographics(service):
    client, platform, _c = service
    # player A carries a distinctive age marker
    token_a, player_a = register(client, dict(VALID_PROFILE, age=97, leaning=9))
    run_tutorial(client, token_a)
    token_b, _ = register(client)
    run_tutorial(client, token_b)
    # drive A's annotations through the system so B's views could reference them
    rd = client.post("/rounds", json={"mode": "publish", "topic": "politics"}, headers=auth(token_a)).json()
    for s in rd["sentences"]:
        client.post(f"/rounds/{rd['id']}/sentence",
                    json={"sentence_id": s["id"], "label": "biased"}, headers=auth(token_a))
    probes = [
        client.get("/topics", headers=auth(token_b)),
        client.get("/players/me/paper", headers=auth(token_b)),
        client.get("/players/me", headers=auth(token_b)),
        client.get("/export/dataset", headers=CURATOR),
    ]
    for resp in probes:
        assert '"age": 97' not in resp.text and '"age":97' not in resp.text
    # own demographics remain visible to the owner
    me_a = client.get("/players/me", headers=auth(token_a)).json()
    assert me_a["demographics"]["age"] == 97


def test_curator_endpoints_and_export(service):
    client, platform, _c = service
    token, _ = register(client)
    # player token is not a curator credential
    assert client.get("/export/dataset", headers=auth(token)).status_code == 401
    assert client.post("/content/sentences", headers=auth(token),
                       json={"text": "x y z", "topic": "politics"}).status_code == 401

    resp = client.post("/content/sentences", headers=CURATOR, json={
        "text": "A fresh curated sentence arrives for the pool today.",
        "topic": "politics", "article_url": "u", "outlet": "O", "outlet_leaning": "left",
    })
    assert resp.status_code == 201

    csv_text = (
        "text,label,biased_words,outlet,outlet_leaning,topic,article_url\n"
        "\"Extra baseline sentence one arrives.\",biased,,O,left,politics,u\n"
        "\"Row with zzz unresolved word.\",biased,qqq,O,left,politics,u\n"
    )
    resp = client.post("/content/import", headers=CURATOR, json={"csv_text": csv_text})
    body = resp.json()
    assert body["imported"] == 1
    assert body["rejected"][0]["error"] == "UnresolvedWord"

    # annotate so the export has content
    run_tutorial(client, token)
    rd = client.post("/rounds", json={"mode": "publish", "topic": "fresh"}, headers=auth(token)).json()
    for s in rd["sentences"]:
        client.post(f"/rounds/{rd['id']}/sentence",
                    json={"sentence_id": s["id"], "label": "biased"}, headers=auth(token))

    ds = client.get("/export/dataset", headers=CURATOR)
    lines = [json.loads(l) for l in ds.text.strip().splitlines() if l]
    assert lines, "baseline sentences export"
    expected_keys = ["text", "label", "biased_words", "topic", "article_url",
                     "outlet", "outlet_leaning", "annotator_count", "label_support", "origin"]
    assert all(list(rec) == expected_keys for rec in lines)

    metrics = client.get("/export/metrics", headers=CURATOR).json()
    assert "alpha" in metrics and "bootstrap_b" in metrics


def test_submit_response_schema_stable_for_clients(service):
    """The browser client renders these fields verbatim; pin the shape."""
    client, _p, _c = service
    token, _ = register(client)
    run_tutorial(client, token)
    rd = client.post("/rounds", json={"mode": "publish", "topic": "politics"}, headers=auth(token)).json()
    assert set(rd) == {"id", "mode", "topic", "breaking", "cursor", "completed",
                       "timer_remaining", "sentences"}
    assert set(rd["sentences"][0]) == {"id", "text", "tokens"}
    assert set(rd["sentences"][0]["tokens"][0]) == {"index", "surface", "is_stopword"}
    resp = client.post(
        f"/rounds/{rd['id']}/sentence",
        json={"sentence_id": rd["sentences"][0]["id"], "label": "biased", "marked_tokens": []},
        headers=auth(token),
    ).json()
    assert set(resp) == {"feedback_kind", "sentence_verdict", "token_verdicts",
                         "combined_accuracy", "word_hits", "reward_currency",
                         "reward_xp", "round_completed", "round_bonus"}
    paper = client.get("/players/me/paper", headers=auth(token)).json()
    assert set(paper) == {"new_feedback", "entries"}
    if paper["entries"]:
        assert set(paper["entries"][0]) == {"sentence_id", "mode", "status", "collected",
                                            "reward_currency", "reward_xp"}


def test_request_cap(service):
    client, platform, clock = service
    app = create_app(platform, curator_token="x", request_cap=3)
    capped = TestClient(app)
    resp = capped.post("/players", json=VALID_PROFILE)
    token = resp.json()["token"]
    for _ in range(3):
        assert capped.get("/players/me", headers=auth(token)).status_code == 200
    resp = capped.get("/players/me", headers=auth(token))
    assert resp.status_code == 429
    assert resp.json()["retryable"] is True
