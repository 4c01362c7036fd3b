"""HTTP/JSON service over problems and negotiation sessions.

`handle_request` is a pure dispatcher from (method, path, body) to
(status code, response body), so the API is testable without sockets;
`serve` wraps it in a threaded stdlib HTTP server.  Mutations on one
session are serialized behind a per-session lock.
"""

from __future__ import annotations

import json
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

from .errors import InputError, SolverError, StateError
from .hierarchy import RelaxPolicy
from .problem import Problem
from .session import Conflict, Idle, Restored, Session, Solved, start_session

JsonDict = dict[str, Any]


class ProblemService:
    """All state behind the endpoints: one problem, many sessions."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # ------------------------------------------------------------- dispatcher

    def handle_request(
        self, method: str, path: str, body: JsonDict | None = None
    ) -> tuple[int, JsonDict]:
        parts = [p for p in path.split("/") if p]
        try:
            if parts == ["api", "problem"] and method == "GET":
                return 200, self._problem_payload()
            if parts == ["api", "sessions"] and method == "POST":
                return self._create_session(body or {})
            if len(parts) >= 3 and parts[:2] == ["api", "sessions"]:
                return self._session_request(method, parts[2], parts[3:], body)
            return 404, {"error": f"no such endpoint: {method} {path}"}
        except (InputError, StateError) as exc:
            # Input problems are the client's fault; state problems mean the
            # action does not fit the session's current status.
            code = 400 if isinstance(exc, InputError) else 409
            return code, {"error": str(exc)}
        except SolverError as exc:
            return 400, {"error": str(exc)}

    def _session_request(
        self, method: str, session_id: str, rest: list[str], body: JsonDict | None
    ) -> tuple[int, JsonDict]:
        session = self._sessions.get(session_id)
        if session is None:
            return 404, {"error": f"unknown session {session_id!r}"}
        lock = self._locks[session_id]
        if not rest and method == "GET":
            with lock:
                return 200, self._session_payload(session_id, session)
        if len(rest) == 1 and method == "POST":
            action = rest[0]
            body = body or {}
            with lock:
                if action == "run":
                    session.run()
                    return 200, self._session_payload(session_id, session)
                if action == "relax":
                    return self._relax(session_id, session, body)
                if action == "restore":
                    return self._restore(session_id, session, body)
        return 404, {"error": f"no such endpoint under session {session_id!r}"}

    # ---------------------------------------------------------------- actions

    def _create_session(self, body: JsonDict) -> tuple[int, JsonDict]:
        view = body.get("view")
        if not isinstance(view, str):
            return 400, {"error": "body must carry a view name"}
        try:
            policy = RelaxPolicy.parse(body.get("policy", "all"))
            session = start_session(self.problem, view, policy)
        except InputError as exc:
            return 400, {"error": str(exc)}
        session_id = uuid.uuid4().hex[:12]
        with self._registry_lock:
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
        return 200, {"session_id": session_id, "status": _status_name(session.status)}

    def _relax(self, session_id: str, session: Session, body: JsonDict) -> tuple[int, JsonDict]:
        index = body.get("index")
        if not isinstance(index, int) or isinstance(index, bool):
            return 400, {"error": "body must carry an integer conflict index"}
        policy = RelaxPolicy.parse(body["policy"]) if "policy" in body else None
        session.relax(index, policy)
        return 200, self._session_payload(session_id, session)

    def _restore(self, session_id: str, session: Session, body: JsonDict) -> tuple[int, JsonDict]:
        code = body.get("code")
        if not isinstance(code, str):
            return 400, {"error": "body must carry a box code"}
        outcome = session.restore(code)
        payload = self._session_payload(session_id, session)
        if isinstance(outcome, Restored):
            payload["restore"] = {
                "outcome": "restored",
                "extra": [
                    {"code": box, "constraint_ids": list(ids)}
                    for box, ids in outcome.extra.items()
                ],
            }
        else:
            payload["restore"] = {"outcome": "refused", "conflict": list(outcome.conflict)}
        return 200, payload

    # --------------------------------------------------------------- payloads

    def _problem_payload(self) -> JsonDict:
        tree = self.problem.tree

        def box(code: str) -> JsonDict:
            node = tree.nodes[code]
            return {
                "code": node.code,
                "label": node.label,
                "constraints": [
                    {"id": cid, "text": str(self.problem.constraints[cid])}
                    for cid in node.constraint_ids
                ],
                "children": [box(child) for child in node.children],
            }

        return {
            "name": self.problem.name,
            "variables": [
                {"name": v.name, "lower": v.lower, "upper": v.upper}
                for v in self.problem.variables
            ],
            "tree": box(tree.root),
            "views": [
                {"name": view.name, "cut": sorted(view.boxes, key=tree.preorder_index)}
                for view in self.problem.views.values()
            ],
        }

    def _session_payload(self, session_id: str, session: Session) -> JsonDict:
        status = session.status
        payload: JsonDict = {
            "session_id": session_id,
            "status": _status_name(status),
            "view": session.view.name,
            "policy": session.policy.value,
            "relaxed": [
                {
                    "code": code,
                    "label": session.tree.nodes[code].label,
                    "constraint_ids": list(ids),
                }
                for code, ids in session.relaxed.items()
            ],
        }
        if isinstance(status, Conflict):
            payload["conflict"] = [
                {"index": item.index, "code": item.code, "label": item.label}
                for item in status.items
            ]
            payload["explanation"] = sorted(
                status.explanation, key=session.solver.posting_index
            )
        if isinstance(status, Solved):
            payload["solution"] = dict(status.assignment)
        else:
            payload["domains"] = {
                var: sorted(domain) for var, domain in session.solver.domains().items()
            }
        return payload


def _status_name(status: Idle | Conflict | Solved) -> str:
    if isinstance(status, Conflict):
        return "conflict"
    if isinstance(status, Solved):
        return "solved"
    return "idle"


# ------------------------------------------------------------------- server


def serve(problem: Problem, port: int = 8080, ready=None) -> None:
    """Run the service on a threaded HTTP server until interrupted.

    `ready` is an optional callback receiving the bound port (useful with
    port 0).
    """
    service = ProblemService(problem)

    class Handler(BaseHTTPRequestHandler):
        def _dispatch(self, method: str) -> None:
            body = None
            length = int(self.headers.get("Content-Length") or 0)
            if length:
                try:
                    body = json.loads(self.rfile.read(length))
                except json.JSONDecodeError:
                    self._reply(400, {"error": "request body is not valid JSON"})
                    return
                if body is not None and not isinstance(body, dict):
                    self._reply(400, {"error": "request body must be a JSON object"})
                    return
            status, payload = service.handle_request(method, self.path, body)
            self._reply(status, payload)

        def _reply(self, status: int, payload: JsonDict) -> None:
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self._cors()
            self.end_headers()
            self.wfile.write(data)

        def _cors(self) -> None:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def do_GET(self) -> None:  # noqa: N802 (stdlib naming)
            self._dispatch("GET")

        def do_POST(self) -> None:  # noqa: N802
            self._dispatch("POST")

        def do_OPTIONS(self) -> None:  # noqa: N802
            self.send_response(204)
            self._cors()
            self.end_headers()

        def log_message(self, *args) -> None:  # keep test output clean
            pass

    server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
    if ready is not None:
        ready(server.server_address[1])
    try:
        server.serve_forever()
    finally:
        server.server_close()
