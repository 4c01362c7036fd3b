import json
import threading
import urllib.request

import pytest

from explaincp.service import ProblemService, serve


@pytest.fixture()
def service(conference):
    return ProblemService(conference)


def create_session(service, view="michael-code", policy="all"):
    code, body = service.handle_request(
        "POST", "/api/sessions", {"view": view, "policy": policy}
    )
    assert code == 200
    return body["session_id"]


def test_problem_endpoint(service):
    code, body = service.handle_request("GET", "/api/problem")
    assert code == 200
    assert body["name"] == "Conference problem"
    assert [v["name"] for v in body["variables"]] == ["Am", "Pm", "Ma", "Mp"]
    assert body["tree"]["code"] == "PB"
    assert {v["name"] for v in body["views"]} == {
        "room-manager",
        "john",
        "michael",
        "michael-code",
    }

    def count(box):
        return 1 + sum(count(child) for child in box["children"])

    assert count(body["tree"]) == 8


def test_session_lifecycle(service):
    sid = create_session(service)
    code, body = service.handle_request("GET", f"/api/sessions/{sid}")
    assert code == 200 and body["status"] == "idle"

    code, body = service.handle_request("POST", f"/api/sessions/{sid}/run")
    assert code == 200
    assert body["status"] == "conflict"
    assert 3 <= len(body["conflict"]) <= 4
    assert [c["index"] for c in body["conflict"]] == list(
        range(1, len(body["conflict"]) + 1)
    )
    assert "domains" in body and "solution" not in body


def test_two_reads_with_no_mutation_agree(service):
    sid = create_session(service)
    service.handle_request("POST", f"/api/sessions/{sid}/run")
    _, first = service.handle_request("GET", f"/api/sessions/{sid}")
    _, second = service.handle_request("GET", f"/api/sessions/{sid}")
    assert first == second


def test_decline_leaves_the_state_unchanged(service):
    sid = create_session(service)
    _, before = service.handle_request("POST", f"/api/sessions/{sid}/run")
    code, after = service.handle_request("POST", f"/api/sessions/{sid}/relax", {"index": 0})
    assert code == 200
    assert after == before


def test_relax_and_restore_flow(service):
    sid = create_session(service)
    _, body = service.handle_request("POST", f"/api/sessions/{sid}/run")
    pab = next(c["index"] for c in body["conflict"] if c["code"] == "PAB")
    code, body = service.handle_request(
        "POST", f"/api/sessions/{sid}/relax", {"index": pab}
    )
    assert code == 200 and body["status"] == "conflict"
    assert body["relaxed"] == [
        {
            "code": "PAB",
            "label": "Peter and Alan before Michael",
            "constraint_ids": ["c6", "c7", "c8", "c9"],
        }
    ]
    n4d = next(c["index"] for c in body["conflict"] if c["code"] == "N4D")
    code, body = service.handle_request(
        "POST", f"/api/sessions/{sid}/relax", {"index": n4d, "policy": "in-explanation"}
    )
    assert code == 200 and body["status"] == "solved"
    assert set(body["solution"]) == {"Am", "Pm", "Ma", "Mp"}

    code, body = service.handle_request(
        "POST", f"/api/sessions/{sid}/restore", {"code": "PAB"}
    )
    assert code == 200
    assert body["restore"]["outcome"] == "restored"
    assert body["status"] == "solved"


def test_unknown_session_is_404(service):
    code, _ = service.handle_request("GET", "/api/sessions/nope")
    assert code == 404
    code, _ = service.handle_request("POST", "/api/sessions/nope/run")
    assert code == 404


def test_wrong_status_actions_are_409(service):
    sid = create_session(service)
    code, _ = service.handle_request("POST", f"/api/sessions/{sid}/relax", {"index": 1})
    assert code == 409  # no conflict yet
    code, _ = service.handle_request("POST", f"/api/sessions/{sid}/restore", {"code": "PAB"})
    assert code == 409  # nothing relaxed


def test_malformed_bodies_are_400(service):
    sid = create_session(service)
    service.handle_request("POST", f"/api/sessions/{sid}/run")
    code, _ = service.handle_request("POST", f"/api/sessions/{sid}/relax", {})
    assert code == 400
    code, _ = service.handle_request("POST", f"/api/sessions/{sid}/relax", {"index": 99})
    assert code == 400
    code, _ = service.handle_request("POST", "/api/sessions", {"view": "nope"})
    assert code == 400
    code, _ = service.handle_request("POST", "/api/sessions", {})
    assert code == 400


def test_unknown_endpoint_is_404(service):
    code, _ = service.handle_request("GET", "/api/bogus")
    assert code == 404
    code, _ = service.handle_request("POST", "/api/sessions/x/bogus", {})
    assert code == 404


def test_live_server_round_trip(conference):
    ready = threading.Event()
    state = {}

    def on_ready(port):
        state["port"] = port
        ready.set()

    thread = threading.Thread(
        target=serve, args=(conference, 0), kwargs={"ready": on_ready}, daemon=True
    )
    thread.start()
    assert ready.wait(timeout=5)
    base = f"http://127.0.0.1:{state['port']}"

    with urllib.request.urlopen(f"{base}/api/problem", timeout=5) as response:
        assert response.status == 200
        body = json.loads(response.read())
    assert body["tree"]["code"] == "PB"

    request = urllib.request.Request(
        f"{base}/api/sessions",
        data=json.dumps({"view": "room-manager", "policy": "all"}).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with urllib.request.urlopen(request, timeout=5) as response:
        created = json.loads(response.read())
    assert created["status"] == "idle"

    request = urllib.request.Request(
        f"{base}/api/sessions/{created['session_id']}/run", data=b"", method="POST"
    )
    with urllib.request.urlopen(request, timeout=5) as response:
        ran = json.loads(response.read())
    assert ran["status"] == "conflict"
    assert [c["code"] for c in ran["conflict"]] == ["PB"]
