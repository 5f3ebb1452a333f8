"""The four-stage teaching protocol as an executable, headless fixture.

Stage 1 teaches a deliberately naive color-specific move; stages 2 and 3
expose its gaps through a model failure and a physics failure whose diagnosis
suggestions, once accepted, generalise it; stage 4 plans a three-step block
swap with the refined operator. Later stages build on earlier ones, so running
stage N replays stages 1..N in one session.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources

from .core import Literal, LiftedOperator, Symbol
from .induction import Refinement
from .session import TeachingSession
from .store import SessionStore

VAR_OBJ = Symbol("?obj", "object")
VAR_POS1 = Symbol("?pos1", "position")
VAR_POS2 = Symbol("?pos2", "position")

_MOVE_PARAMS = (VAR_OBJ, VAR_POS1, VAR_POS2)
_AT_SRC = Literal("at", (VAR_OBJ, VAR_POS1))
_AT_DST = Literal("at", (VAR_OBJ, VAR_POS2))
_EMPTY_SRC = Literal("empty", (VAR_POS1,))
_EMPTY_DST = Literal("empty", (VAR_POS2,))


def naive_move_operator(color: str = "red") -> LiftedOperator:
    """What a single minimal-mode demonstration produces: color baked in,
    no occupancy handling."""
    return LiftedOperator(
        "moveObject",
        _MOVE_PARAMS,
        frozenset({_AT_SRC, Literal("color", (VAR_OBJ, Symbol(color, "color")))}),
        frozenset({_AT_DST, _AT_SRC.negate()}),
    )


def generalized_move_operator() -> LiftedOperator:
    """The naive operator after the color precondition has been generalised away."""
    return LiftedOperator(
        "moveObject",
        _MOVE_PARAMS,
        frozenset({_AT_SRC}),
        frozenset({_AT_DST, _AT_SRC.negate()}),
    )


def refined_move_operator() -> LiftedOperator:
    """The fully refined move: occupancy handled, colors generalised.

    This is the operator the teaching loop converges to; it can be reached by
    accepting every diagnosis suggestion of stages 2 and 3.
    """
    return LiftedOperator(
        "moveObject",
        _MOVE_PARAMS,
        frozenset({_AT_SRC, _EMPTY_DST}),
        frozenset({_AT_DST, _AT_SRC.negate(), _EMPTY_SRC, _EMPTY_DST.negate()}),
    )


def full_delta_move_operator() -> LiftedOperator:
    """The complete delta-based generalisation of the red-block demonstration,
    including the closed-world ``not (empty ?pos1)`` precondition."""
    return LiftedOperator(
        "moveObject",
        _MOVE_PARAMS,
        frozenset({_AT_SRC, _EMPTY_SRC.negate(), _EMPTY_DST}),
        frozenset({_AT_DST, _AT_SRC.negate(), _EMPTY_SRC, _EMPTY_DST.negate()}),
    )


class ScenarioFailure(Exception):
    """A stage's expectation did not hold."""


@dataclass
class ScenarioResult:
    number: int
    title: str
    passed: bool
    detail: str = ""

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        suffix = f" ({self.detail})" if self.detail and not self.passed else ""
        return f"scenario {self.number}: {status} — {self.title}{suffix}"


def load_protocol() -> dict:
    text = resources.files("teachplan.data").joinpath("scenarios.json").read_text("utf-8")
    return json.loads(text)


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ScenarioFailure(message)


def _apply_suggestions(session: TeachingSession, operator: str) -> list[Refinement]:
    report = session.diagnose()
    for suggestion in report.suggestions:
        session.refine_operator(operator, suggestion)
    return list(report.suggestions)


def _run_stage_1(session: TeachingSession, spec: dict) -> None:
    demo = spec["demonstration"]
    session.record_demonstration(demo["action"], demo["args"], moves=demo["moves"])
    operator = session.domain.operator("moveObject")
    expected = naive_move_operator("red")
    _expect(
        operator == expected,
        f"induced operator differs from the naive model: {operator and _show(operator)}",
    )


def _run_stage_2(session: TeachingSession, spec: dict) -> None:
    from .world import WorldConfig

    session.configure_world(WorldConfig.from_json(spec["world"]))
    session.propose_plan(spec["attempt"])
    trace = session.execute_plan()
    _expect(not trace.succeeded, "applying the red-specific model to blue should fail")
    step = trace.steps[0]
    _expect(step.outcome.status == "model_failure", f"expected model failure, got {step.outcome.status}")
    _expect(
        [str(l) for l in step.outcome.literals] == ["color(blueObj,red)"],
        f"unexpected blocking literals {step.outcome.literals}",
    )
    suggestions = _apply_suggestions(session, "moveObject")
    _expect(
        [s.to_json() for s in suggestions]
        == [{"kind": "generalize_constant", "constant": "red"}],
        f"unexpected suggestions {suggestions}",
    )
    operator = session.domain.operator("moveObject")
    _expect(
        operator == generalized_move_operator(),
        f"color was not generalised away: {_show(operator)}",
    )


def _run_stage_3(session: TeachingSession, spec: dict) -> None:
    from .world import WorldConfig

    session.configure_world(WorldConfig.from_json(spec["world"]))
    session.propose_plan(spec["attempt"])
    trace = session.execute_plan()
    step = trace.steps[0]
    _expect(
        step.outcome.status == "world_failure",
        f"expected a physics failure, got {step.outcome.status}",
    )
    _expect(
        str(step.outcome.constraint) == "occupied(A)",
        f"unexpected constraint {step.outcome.constraint}",
    )
    suggestions = _apply_suggestions(session, "moveObject")
    _expect(len(suggestions) == 3, f"expected three suggestions, got {suggestions}")
    _expect(
        suggestions[0].to_json() == {"kind": "add_precondition", "literal": "empty(?pos2)"},
        f"unexpected first suggestion {suggestions[0]}",
    )
    operator = session.domain.operator("moveObject")
    _expect(
        operator == refined_move_operator(),
        f"suggestions did not yield the refined move: {_show(operator)}",
    )


def _run_stage_4(session: TeachingSession, spec: dict) -> None:
    from .world import WorldConfig

    session.configure_world(WorldConfig.from_json(spec["world"]))
    session.set_goal(spec["goal"])
    plan = session.run_planner()
    _expect(plan.cost == 3, f"expected a 3-step swap plan, got {plan.cost} steps")
    report = session.validate_last_plan()
    _expect(report.ok, f"planned swap does not validate: {report.to_json()}")
    trace = session.execute_plan()
    _expect(trace.succeeded, "executing the swap plan failed")
    assert session.goal is not None
    _expect(
        all(session.state.holds(l) for l in session.goal),
        "goal does not hold after execution",
    )


_STAGES = {1: _run_stage_1, 2: _run_stage_2, 3: _run_stage_3, 4: _run_stage_4}


def _show(op: LiftedOperator | None) -> str:
    if op is None:
        return "<missing>"
    return (
        f"pre={[str(l) for l in op.sorted_preconditions()]} "
        f"eff={[str(l) for l in op.sorted_effects()]}"
    )


def run_suite(
    upto: int = 4, store: SessionStore | None = None
) -> tuple[TeachingSession, list[ScenarioResult], float]:
    """Replay stages 1..upto in a fresh session; returns results and elapsed seconds."""
    from .world import WorldConfig

    protocol = load_protocol()
    started = time.perf_counter()
    first_world = WorldConfig.from_json(protocol["scenarios"][0]["world"])
    session = TeachingSession.create(
        first_world, mode=protocol["mode"], session_id=protocol["session_id"]
    )
    results: list[ScenarioResult] = []
    for spec in protocol["scenarios"]:
        number = spec["id"]
        if number > upto:
            break
        try:
            _STAGES[number](session, spec)
            results.append(ScenarioResult(number, spec["title"], passed=True))
        except ScenarioFailure as failure:
            results.append(
                ScenarioResult(number, spec["title"], passed=False, detail=str(failure))
            )
            break
    elapsed = time.perf_counter() - started
    if store is not None:
        store.save_session(session)
    return session, results, elapsed
