"""JSON-over-HTTP facade for teaching sessions.

Every response can be reproduced by calling the module operations directly;
the service adds persistence (event-log append per mutation) and per-session
write serialization, nothing else.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .core import ModelError
from .induction import InductionError, Refinement, operator_to_json
from .pddl import PddlError, emit_action
from .planner import BudgetExceeded, NoPlanFound, PlannerError
from .session import SessionError, TeachingSession, UnknownOperator
from .store import DuplicateSession, SessionStore, StoreError
from .vocabulary import vocabulary_strings
from .world import WorldConfig, WorldError, tabletop_domain

_STATUS_BY_CODE = {
    "not_found": 404,
    "unknown_operator": 404,
    "duplicate_session": 409,
    "illegal_phase": 409,
    "duplicate_literal": 409,
    "no_such_literal": 409,
    "contradiction": 409,
    "effect_conflict": 409,
    "empty_delta": 409,
    "invalid_move": 409,
    "no_failure": 409,
    "corrupt_log": 500,
}


class WorldConfigBody(BaseModel):
    positions: list[str]
    objects: list[str] = Field(default_factory=list)
    initial_placement: dict[str, str] = Field(default_factory=dict)
    static_facts: list[str] = Field(default_factory=list)
    static_predicates: list[str] = Field(default_factory=lambda: ["color"])

    def to_config(self) -> WorldConfig:
        return WorldConfig.from_json(self.model_dump())


class CreateSessionBody(BaseModel):
    config: WorldConfigBody
    mode: str = "minimal"
    id: Optional[str] = None


class DemonstrationBody(BaseModel):
    action: str
    args: list[str]
    moves: Optional[list[list[str]]] = None
    before: Optional[list[str]] = None
    after: Optional[list[str]] = None


class RefinementBody(BaseModel):
    kind: str
    literal: Optional[str] = None
    constant: Optional[str] = None
    variable: Optional[str] = None


class GoalBody(BaseModel):
    literals: list[str]


class PlanStepBody(BaseModel):
    action: str
    args: list[str]


class PlanBody(BaseModel):
    optimal: bool = False
    max_expansions: int = 100_000
    steps: Optional[list[PlanStepBody]] = None


class _Sessions:
    """In-memory cache over the store with one write lock per session."""

    def __init__(self, store: SessionStore):
        self.store = store
        self._cache: dict[str, TeachingSession] = {}
        self._watermark: dict[str, int] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def get(self, session_id: str) -> TeachingSession:
        if session_id not in self._cache:
            session, _ = self.store.load_session(session_id)
            self._cache[session_id] = session
            self._watermark[session_id] = len(session.events)
        return self._cache[session_id]

    def put(self, session: TeachingSession) -> None:
        self._cache[session.id] = session
        self._watermark[session.id] = self.store.sync(
            session, self._watermark.get(session.id, 0)
        )

    def persist(self, session: TeachingSession) -> None:
        self._watermark[session.id] = self.store.sync(
            session, self._watermark.get(session.id, 0)
        )


def _error_response(exc: Exception) -> JSONResponse:
    code = getattr(exc, "code", "internal_error")
    status = _STATUS_BY_CODE.get(code, 400)
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": str(exc)}}
    )


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="teachplan", version="0.1.0")
    sessions = _Sessions(store)

    @app.exception_handler(RequestValidationError)
    async def _schema_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "schema_violation", "message": str(exc)}},
        )

    async def _domain_error(request: Request, exc: Exception) -> JSONResponse:
        return _error_response(exc)

    for exc_type in (
        ModelError,
        WorldError,
        PddlError,
        InductionError,
        PlannerError,
        SessionError,
        StoreError,
        ValueError,
    ):
        app.add_exception_handler(exc_type, _domain_error)

    @app.get("/sessions")
    def list_sessions() -> dict:
        return {"sessions": store.list_ids()}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        if body.id is not None and store.exists(body.id):
            raise DuplicateSession(f"session {body.id} already exists")
        session = TeachingSession.create(
            body.config.to_config(), mode=body.mode, session_id=body.id
        )
        with sessions.lock(session.id):
            sessions.put(session)
        return session.to_json()

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str) -> dict:
        with sessions.lock(session_id):
            return sessions.get(session_id).to_json()

    @app.post("/sessions/{session_id}/world")
    def configure_world(session_id: str, body: WorldConfigBody) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            session.configure_world(body.to_config())
            sessions.persist(session)
            return session.to_json()

    @app.post("/sessions/{session_id}/demonstrations", status_code=201)
    def post_demonstration(session_id: str, body: DemonstrationBody) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            demo = session.record_demonstration(
                body.action, body.args, moves=body.moves,
                before=body.before, after=body.after,
            )
            sessions.persist(session)
            operator = session.domain.operator(body.action)
            return {
                "demonstration": demo.to_json(),
                "operator": _operator_payload(operator),
                "phase": session.phase,
            }

    @app.get("/sessions/{session_id}/operators/{name}")
    def get_operator(session_id: str, name: str) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            operator = session.domain.operator(name)
            if operator is None:
                raise UnknownOperator(f"no operator named {name}")
            return _operator_payload(operator)

    @app.patch("/sessions/{session_id}/operators/{name}")
    def patch_operator(session_id: str, name: str, body: RefinementBody) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            if session.domain.operator(name) is None:
                raise UnknownOperator(f"no operator named {name}")
            payload = {k: v for k, v in body.model_dump().items() if v is not None}
            Refinement.from_json(payload)  # early schema check
            updated = session.refine_operator(name, Refinement.from_json(payload))
            sessions.persist(session)
            return _operator_payload(updated)

    @app.post("/sessions/{session_id}/goal")
    def post_goal(session_id: str, body: GoalBody) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            session.set_goal(body.literals)
            sessions.persist(session)
            return {"goal": session.to_json()["goal"], "phase": session.phase}

    @app.post("/sessions/{session_id}/plan")
    def post_plan(session_id: str, body: PlanBody) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            if body.steps is not None:
                proposed = session.propose_plan([s.model_dump() for s in body.steps])
                sessions.persist(session)
                return {
                    "status": "plan",
                    "steps": proposed.to_json(),
                    "cost": proposed.cost,
                    "phase": session.phase,
                }
            try:
                result = session.run_planner(
                    optimal=body.optimal, max_expansions=body.max_expansions
                )
            except (NoPlanFound, BudgetExceeded) as exc:
                sessions.persist(session)
                return {
                    "status": "no_plan",
                    "reason": str(exc),
                    "unsatisfied": [
                        str(l) for l in getattr(exc, "unsatisfied_in_init", ())
                    ],
                    "phase": session.phase,
                }
            sessions.persist(session)
            return {
                "status": "plan",
                "steps": result.to_json(),
                "cost": result.cost,
                "phase": session.phase,
            }

    @app.post("/sessions/{session_id}/execute")
    def post_execute(session_id: str) -> dict:
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            trace = session.execute_plan()
            sessions.persist(session)
            return {**trace.to_json(), "phase": session.phase}

    @app.get("/sessions/{session_id}/diagnosis")
    def get_diagnosis(session_id: str) -> dict:
        with sessions.lock(session_id):
            return sessions.get(session_id).diagnose().to_json()

    @app.get("/sessions/{session_id}/export.pddl")
    def get_export(session_id: str) -> Response:
        with sessions.lock(session_id):
            return PlainTextResponse(sessions.get(session_id).export_pddl())

    @app.get("/vocabulary")
    def get_vocabulary(
        session_id: Optional[str] = None, operator: Optional[str] = None
    ) -> dict:
        if session_id is None:
            return {"templates": vocabulary_strings(tabletop_domain())}
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            op = session.domain.operator(operator) if operator else None
            if operator and op is None:
                raise UnknownOperator(f"no operator named {operator}")
            assert session.config is not None
            return {
                "templates": vocabulary_strings(
                    session.domain, op, session.config.color_constants()
                )
            }

    return app


def _operator_payload(operator) -> dict:
    payload = operator_to_json(operator)
    payload["pddl"] = emit_action(operator)
    return payload


def serve(store_dir: str, host: str = "127.0.0.1", port: int = 8765) -> None:
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    app = create_app(SessionStore(store_dir))
    uvicorn.run(app, host=host, port=port, log_level="warning")
