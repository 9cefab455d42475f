"""Local HTTP service exposing the session lifecycle for the web UI.

Sessions live in an in-memory store with TTL eviction; per-session operations
are serialized with a lock while different sessions run concurrently.
"""
from __future__ import annotations

import random
import threading
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .disagreement import compute_disagreements, disagreement_counts
from .session import Finalized, NextQuestion, Session, SessionConfig
from .spec_model import spec_to_dict

SESSION_TTL_SECONDS = 2 * 60 * 60


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


class SessionStore:
    def __init__(self, ttl: float = SESSION_TTL_SECONDS):
        self.ttl = ttl
        self._entries: dict[str, dict] = {}
        self._lock = threading.Lock()

    def put(self, session: Session) -> str:
        sid = uuid.uuid4().hex
        with self._lock:
            self._evict()
            self._entries[sid] = {
                "session": session,
                "created_at": time.time(),
                "lock": threading.Lock(),
            }
        return sid

    def get(self, sid: str):
        with self._lock:
            self._evict()
            return self._entries.get(sid)

    def _evict(self):
        cutoff = time.time() - self.ttl
        stale = [s for s, e in self._entries.items() if e["created_at"] < cutoff]
        for s in stale:
            del self._entries[s]


def _pool_stats(session: Session) -> dict:
    counts = (0, 0, 0)
    if len(session.pool) >= 2:
        counts = disagreement_counts(compute_disagreements(session.pool.entries()))
    return {
        "pool_size": len(session.pool),
        "disagreement_counts": list(counts),
        "rounds_used": session.rounds_used,
        "budget_k": session.config.budget_k,
        "regen_count": session.regen_count,
    }


def _outcome_body(session: Session, outcome) -> dict:
    body: dict = {"pool_stats": _pool_stats(session)}
    if isinstance(outcome, NextQuestion):
        body["next_question"] = outcome.text
        body["round"] = outcome.round
    elif isinstance(outcome, Finalized):
        body["final_spec"] = spec_to_dict(outcome.spec)
        body["flagged"] = outcome.flagged
    return body


def create_app(gateway_factory, default_config: SessionConfig | None = None,
               auto_answerer_factory=None) -> FastAPI:
    """Build the service.

    ``gateway_factory(intent, seed)`` returns a gateway for one session.
    ``auto_answerer_factory``, when set (demo rule mode), returns an answerer
    used to auto-drive each session to completion.
    """
    app = FastAPI(title="iacclarify")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()
    app.state.store = store

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "invalid_body", "request body must be JSON")
        if not isinstance(body, dict) or not body.get("intent"):
            return _error(400, "invalid_body", "missing intent")
        config = SessionConfig(
            budget_k=int(body.get("budget_k", 5)),
            pool_size=int(body.get("pool_size", 8)),
            rr_enabled=bool(body.get("rr_enabled", True)),
        )
        seed = body.get("seed", random.randrange(2**32))
        gateway = gateway_factory(body["intent"], seed)
        session = Session(body["intent"], config, gateway, task_id="live")
        try:
            outcome = session.start()
        except Exception as exc:
            return _error(503, "provider_unavailable", str(exc))
        if auto_answerer_factory is not None:
            answerer = auto_answerer_factory(body)
            while isinstance(outcome, NextQuestion):
                outcome = session.submit_answer(
                    answerer(outcome.text, outcome.axis, outcome.subject)
                )
        sid = store.put(session)
        body_out = _outcome_body(session, outcome)
        body_out["session_id"] = sid
        if "next_question" in body_out:
            body_out["first_question"] = body_out.pop("next_question")
        return JSONResponse(status_code=201, content=body_out)

    @app.post("/sessions/{sid}/answer")
    async def answer(sid: str, request: Request):
        entry = store.get(sid)
        if entry is None:
            return _error(404, "unknown_session", f"no session {sid}")
        try:
            body = await request.json()
        except Exception:
            return _error(422, "invalid_answer", "request body must be JSON")
        value = body.get("answer") if isinstance(body, dict) else None
        if value not in ("yes", "no"):
            return _error(422, "invalid_answer", 'answer must be "yes" or "no"')
        session: Session = entry["session"]
        with entry["lock"]:
            if session.status == "finalized" or session.pending_question() is None:
                return _error(409, "wrong_state", "session is not awaiting an answer")
            outcome = session.submit_answer(value)
            out = _outcome_body(session, outcome)
            if session.trace:
                out["round_record"] = session.trace[-1].to_dict()
        return out

    @app.get("/sessions/{sid}")
    async def get_session(sid: str, full: int = 0):
        entry = store.get(sid)
        if entry is None:
            return _error(404, "unknown_session", f"no session {sid}")
        session: Session = entry["session"]
        with entry["lock"]:
            pending = session.pending_question()
            body = {
                "session_id": sid,
                "status": session.status,
                "intent": session.intent,
                "budget_k": session.config.budget_k,
                "rounds_used": session.rounds_used,
                "current_question": pending.text if pending else None,
                "history": [
                    {"question": qa.question_text, "answer": qa.answer,
                     "round": qa.round}
                    for qa in session.history
                ],
                "trace": session.trace_json(),
                "pool_stats": _pool_stats(session),
                "pool_fingerprints": [
                    {
                        "resource_types": list(fp.resource_types),
                        "typed_edges": [list(e) for e in fp.typed_edges],
                    }
                    for fp in sorted(
                        session.pool.fingerprints(),
                        key=lambda f: (f.resource_types, f.typed_edges),
                    )
                ],
            }
            if session.final is not None:
                body["final_spec"] = spec_to_dict(session.final.spec)
            if full:
                body["candidates"] = [
                    {
                        "id": c.id,
                        "multiplicity": c.multiplicity,
                        "born_round": c.born_round,
                        "spec": spec_to_dict(c.spec),
                    }
                    for c in session.pool.candidates
                ]
        return body

    return app


def demo_gateway_factory(intent: str, seed):
    """Mock-provider factory for demos and UI tests: a seeded synthetic
    generator planted on a built-in reference picked by the intent text."""
    from .harness import SyntheticGateway, synthetic_tasks

    tasks = synthetic_tasks()
    idx = sum(intent.encode("utf-8")) % len(tasks)
    return SyntheticGateway(tasks[idx].reference_spec, random.Random(str(seed)))
