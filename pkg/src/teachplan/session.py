"""The teaching loop: demonstrate, review, refine, plan, execute, diagnose.

A session is event-sourced: every user action appends one event, and replaying
the log from the initial world configuration reproduces the same operators,
plans and traces. Robot-side results (induced operators, search results,
execution traces) are recomputed during replay rather than stored.

Phases and the transitions the API enforces::

    idle ──demonstrate──▶ reviewing ──refine──▶ reviewing
    idle/reviewing/diagnosing ──set_goal──▶ planning ──run_planner──▶ executing
    idle/reviewing/planning/diagnosing ──propose_plan──▶ executing
    executing ──execute_plan──▶ idle (success) | diagnosing (failure)
    any except executing ──configure_world──▶ idle (operators kept)
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

from .core import (
    GroundAction,
    Literal,
    LiftedOperator,
    PreconditionFailure,
    State,
    Symbol,
    apply_model_action,
    parse_literal,
    sorted_literals,
)
from .induction import Demonstration, Refinement, induce, merge_demonstrations, refine
from .planner import (
    NoPlanFound,
    Plan,
    PlanningProblem,
    SearchConfig,
    plan as plan_search,
    validate_plan,
)
from .world import (
    ConstraintViolation,
    WorldConfig,
    make_state,
    problem_from_state,
    tabletop_domain,
    world_execute,
)

PHASES = ("idle", "demonstrating", "reviewing", "planning", "executing", "diagnosing")


class SessionError(Exception):
    code = "session_error"


class IllegalPhase(SessionError):
    code = "illegal_phase"


class InvalidMove(SessionError):
    code = "invalid_move"


class NoFailure(SessionError):
    code = "no_failure"


class UnknownOperator(SessionError):
    code = "unknown_operator"


class UnknownSymbol(SessionError):
    code = "unknown_symbol"


@dataclass(frozen=True)
class StepOutcome:
    status: str  # ok | model_failure | world_failure
    literals: tuple[Literal, ...] = ()
    constraint: Literal | None = None

    def to_json(self) -> dict:
        data: dict = {"status": self.status}
        if self.literals:
            data["literals"] = [str(l) for l in self.literals]
        if self.constraint is not None:
            data["constraint"] = str(self.constraint)
        return data


@dataclass(frozen=True)
class ExecutionStep:
    action: GroundAction
    outcome: StepOutcome
    state: State

    def to_json(self) -> dict:
        return {
            **self.action.to_json(),
            "outcome": self.outcome.to_json(),
            "state": self.state.to_strings(),
        }


@dataclass(frozen=True)
class ExecutionTrace:
    steps: tuple[ExecutionStep, ...]

    @property
    def succeeded(self) -> bool:
        return all(s.outcome.status == "ok" for s in self.steps)

    @property
    def failure(self) -> ExecutionStep | None:
        for step in self.steps:
            if step.outcome.status != "ok":
                return step
        return None

    def to_json(self) -> dict:
        return {"succeeded": self.succeeded, "steps": [s.to_json() for s in self.steps]}


@dataclass(frozen=True)
class FailureReport:
    failing_step: GroundAction
    cause: str  # model_failure | world_failure
    operator: str
    suggestions: tuple[Refinement, ...]

    def to_json(self) -> dict:
        return {
            "failing_step": self.failing_step.to_json(),
            "cause": self.cause,
            "operator": self.operator,
            "suggestions": [s.to_json() for s in self.suggestions],
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class TeachingSession:
    """Single-writer session state; all mutations go through events."""

    def __init__(self) -> None:
        self.id: str = ""
        self.config: WorldConfig | None = None
        self.state: State = State(frozenset())
        self.mode: str = "minimal"
        self.domain = tabletop_domain()
        self.goal: frozenset[Literal] | None = None
        self.last_plan: Plan | None = None
        self.last_no_plan: tuple[Literal, ...] | None = None
        self.last_trace: ExecutionTrace | None = None
        self.last_demonstration: Demonstration | None = None
        self.phase: str = "idle"
        self.events: list[dict] = []

    # -- construction ------------------------------------------------------

    @classmethod
    def create(
        cls, config: WorldConfig, mode: str = "minimal", session_id: str | None = None
    ) -> "TeachingSession":
        session = cls()
        session._record(
            {
                "type": "created",
                "id": session_id or uuid.uuid4().hex[:12],
                "mode": mode,
                "config": config.to_json(),
            }
        )
        return session

    @classmethod
    def replay(cls, events: Iterable[Mapping]) -> "TeachingSession":
        """Rebuild a session by folding its event log."""
        session = cls()
        for event in events:
            session._apply(dict(event))
            session.events.append(dict(event))
        return session

    # -- event plumbing ----------------------------------------------------

    def _record(self, event: dict):
        event.setdefault("ts", _now())
        result = self._apply(event)
        self.events.append(event)
        return result

    def _apply(self, event: Mapping):
        handler = getattr(self, "_on_" + event["type"], None)
        if handler is None:
            raise SessionError(f"unknown event type {event['type']!r}")
        return handler(event)

    # -- event handlers (deterministic; used both live and on replay) ------

    def _on_created(self, event: Mapping) -> None:
        self.id = event["id"]
        if event["mode"] not in ("minimal", "full_delta"):
            raise ValueError(f"unknown induction mode {event['mode']!r}")
        self.mode = event["mode"]
        self.config = WorldConfig.from_json(event["config"])
        self.state = make_state(self.config)
        self.domain = tabletop_domain(static_predicates=self.config.static_predicates)
        self.phase = "idle"

    def _on_world_configured(self, event: Mapping) -> None:
        self.config = WorldConfig.from_json(event["config"])
        self.state = make_state(self.config)
        self.goal = None
        self.last_plan = None
        self.last_no_plan = None
        self.last_trace = None
        self.phase = "idle"

    def _on_demonstrated(self, event: Mapping) -> Demonstration:
        kinds = self._kinds()
        action = GroundAction.from_json(event, kinds)
        before = self.state
        if "moves" in event:
            after = before
            for obj, src, dst in event["moves"]:
                try:
                    after = world_execute(
                        after, GroundAction("move", self._symbols((obj, src, dst)))
                    )
                except ConstraintViolation as exc:
                    raise InvalidMove(f"demonstrated move violates physics: {exc}") from exc
        else:
            before = State.of(parse_literal(t, kinds) for t in event["before"])
            after = State.of(parse_literal(t, kinds) for t in event["after"])
        demo = Demonstration(action, before, after)
        operator = induce(demo, self.mode, self.config.static_predicates)
        existing = self.domain.operator(operator.name)
        if existing is not None:
            operator = merge_demonstrations([existing, operator])
        self.domain = self.domain.with_operator(operator)
        self.state = after
        self.last_demonstration = demo
        self.last_trace = None
        self.phase = "reviewing"
        return demo

    def _on_refined(self, event: Mapping) -> LiftedOperator:
        name = event["operator"]
        operator = self.domain.operator(name)
        if operator is None:
            raise UnknownOperator(f"no operator named {name}")
        kinds = self._kinds()
        kinds.update({p.name: p.kind for p in operator.parameters})
        updated = refine(operator, Refinement.from_json(event["refinement"], kinds))
        self.domain = self.domain.with_operator(updated)
        self.last_trace = None
        self.phase = "reviewing"
        return updated

    def _on_goal_set(self, event: Mapping) -> frozenset[Literal]:
        kinds = self._kinds()
        literals = frozenset(parse_literal(t, kinds) for t in event["literals"])
        declared = set(kinds)
        for lit in literals:
            for arg in lit.args:
                if arg.name not in declared:
                    raise UnknownSymbol(f"goal {lit} names unknown symbol {arg.name}")
            self.domain._check_literal(lit, "goal")
        self.goal = literals
        self.phase = "planning"
        return literals

    def _on_planned(self, event: Mapping) -> Plan | None:
        config = SearchConfig(
            strategy=event.get("strategy", "astar_goalcount"),
            max_expansions=event.get("max_expansions", 100_000),
        )
        problem = self.planning_problem()
        try:
            result = plan_search(problem, config)
        except NoPlanFound as exc:
            self.last_plan = None
            self.last_no_plan = exc.unsatisfied_in_init
            return None
        self.last_plan = result
        self.last_no_plan = None
        self.phase = "executing"
        return result

    def _on_plan_proposed(self, event: Mapping) -> Plan:
        kinds = self._kinds()
        steps = []
        for entry in event["steps"]:
            action = GroundAction.from_json(entry, kinds)
            operator = self.domain.operator(action.name)
            if operator is None:
                raise UnknownOperator(f"no operator named {action.name}")
            if len(action.args) != len(operator.parameters):
                raise UnknownSymbol(
                    f"{action} does not match {operator.name}/{len(operator.parameters)}"
                )
            for arg in action.args:
                if arg.name not in kinds:
                    raise UnknownSymbol(f"{action} names unknown symbol {arg.name}")
            steps.append(action)
        proposed = Plan(tuple(steps))
        self.last_plan = proposed
        self.last_no_plan = None
        self.phase = "executing"
        return proposed

    def _on_executed(self, event: Mapping) -> ExecutionTrace:
        assert self.last_plan is not None
        steps: list[ExecutionStep] = []
        state = self.state
        for action in self.last_plan.steps:
            operator = self.domain.operator(action.name)
            assert operator is not None
            try:
                apply_model_action(state, action, operator)
            except PreconditionFailure as failure:
                steps.append(
                    ExecutionStep(
                        action,
                        StepOutcome("model_failure", literals=failure.unsatisfied),
                        state,
                    )
                )
                break
            try:
                state = world_execute(state, action)
            except ConstraintViolation as violation:
                steps.append(
                    ExecutionStep(
                        action,
                        StepOutcome("world_failure", constraint=violation.constraint),
                        state,
                    )
                )
                break
            steps.append(ExecutionStep(action, StepOutcome("ok"), state))
        trace = ExecutionTrace(tuple(steps))
        self.state = state
        self.last_trace = trace
        self.phase = "idle" if trace.succeeded else "diagnosing"
        return trace

    # -- public operations ---------------------------------------------

    def configure_world(self, config: WorldConfig) -> State:
        self._require_phase("configure_world", forbidden=("executing",))
        self._record({"type": "world_configured", "config": config.to_json()})
        return self.state

    def record_demonstration(
        self,
        action: str,
        args: Sequence[str],
        moves: Sequence[Sequence[str]] | None = None,
        before: Sequence[str] | None = None,
        after: Sequence[str] | None = None,
    ) -> Demonstration:
        """Perform a demonstration, induce an operator, move to review.

        Supply either simulator ``moves`` (each ``(object, from, to)``) or a
        raw ``before``/``after`` snapshot pair.
        """
        self._require_phase(
            "record_demonstration", allowed=("idle", "reviewing", "diagnosing")
        )
        event: dict = {"type": "demonstrated", "action": action, "args": list(args)}
        if moves is not None:
            event["moves"] = [list(m) for m in moves]
        else:
            if before is None or after is None:
                raise ValueError("need either moves or before/after snapshots")
            event["before"] = list(before)
            event["after"] = list(after)
        return self._record(event)

    def refine_operator(self, name: str, refinement: Refinement) -> LiftedOperator:
        self._require_phase("refine", allowed=("idle", "reviewing", "diagnosing"))
        return self._record(
            {"type": "refined", "operator": name, "refinement": refinement.to_json()}
        )

    def set_goal(self, literals: Sequence[str]) -> frozenset[Literal]:
        self._require_phase(
            "set_goal", allowed=("idle", "reviewing", "planning", "diagnosing")
        )
        return self._record({"type": "goal_set", "literals": list(literals)})

    def run_planner(
        self, optimal: bool = False, max_expansions: int = 100_000
    ) -> Plan:
        self._require_phase("run_planner", allowed=("planning", "executing"))
        if self.goal is None:
            raise IllegalPhase("no goal set")
        result = self._record(
            {
                "type": "planned",
                "strategy": "bfs_optimal" if optimal else "astar_goalcount",
                "max_expansions": max_expansions,
            }
        )
        if result is None:
            raise NoPlanFound(
                "no plan reaches the goal; unsatisfied in the initial state: "
                + ", ".join(str(l) for l in self.last_no_plan or ()),
                unsatisfied_in_init=self.last_no_plan or (),
            )
        return result

    def propose_plan(self, steps: Sequence[Mapping]) -> Plan:
        """Directly queue an action sequence to attempt, skipping search."""
        self._require_phase(
            "propose_plan", allowed=("idle", "reviewing", "planning", "diagnosing")
        )
        return self._record({"type": "plan_proposed", "steps": [dict(s) for s in steps]})

    def execute_plan(self) -> ExecutionTrace:
        self._require_phase("execute_plan", allowed=("executing",))
        if self.last_plan is None:
            raise IllegalPhase("no plan to execute")
        return self._record({"type": "executed"})

    def diagnose(self) -> FailureReport:
        """Turn the pending failed trace into refinement suggestions."""
        if self.last_trace is None or self.last_trace.succeeded:
            raise NoFailure("the last execution did not fail")
        failed = self.last_trace.failure
        assert failed is not None
        operator = self.domain.operator(failed.action.name)
        assert operator is not None
        binding = operator.binding_for(failed.action)
        inverse = {arg: param for param, arg in reversed(list(binding.items()))}

        suggestions: list[Refinement] = []
        if failed.outcome.status == "model_failure":
            for ground_lit in failed.outcome.literals:
                lifted = self._lifted_source(operator, ground_lit, binding)
                constants = [] if lifted is None else lifted.constants()
                if constants:
                    for const in dict.fromkeys(constants):
                        suggestion = Refinement("generalize_constant", constant=const)
                        if suggestion not in suggestions:
                            suggestions.append(suggestion)
                elif lifted is not None:
                    suggestion = Refinement("remove_precondition", literal=lifted)
                    if suggestion not in suggestions:
                        suggestions.append(suggestion)
        else:
            constraint = failed.outcome.constraint
            assert constraint is not None
            if constraint.predicate == "occupied":
                src = inverse.get(failed.action.args[1], failed.action.args[1])
                dst = inverse.get(failed.action.args[2], failed.action.args[2])
                for suggestion in (
                    Refinement("add_precondition", literal=Literal("empty", (dst,))),
                    Refinement("add_effect", literal=Literal("empty", (src,))),
                    Refinement("add_effect", literal=Literal("empty", (dst,)).negate()),
                ):
                    present = (
                        suggestion.literal in operator.preconditions
                        if suggestion.kind == "add_precondition"
                        else suggestion.literal in operator.effects
                    )
                    if not present:
                        suggestions.append(suggestion)
            elif constraint.predicate == "not_at":
                obj = inverse.get(failed.action.args[0], failed.action.args[0])
                src = inverse.get(failed.action.args[1], failed.action.args[1])
                lit = Literal("at", (obj, src))
                if lit not in operator.preconditions:
                    suggestions.append(Refinement("add_precondition", literal=lit))
        return FailureReport(
            failing_step=failed.action,
            cause=failed.outcome.status,
            operator=operator.name,
            suggestions=tuple(suggestions),
        )

    @staticmethod
    def _lifted_source(
        operator: LiftedOperator, ground_lit: Literal, binding: Mapping
    ) -> Literal | None:
        for candidate in operator.sorted_preconditions():
            if candidate.substitute(binding) == ground_lit:
                return candidate
        return None

    # -- views ---------------------------------------------------------

    def planning_problem(self) -> PlanningProblem:
        assert self.config is not None
        return PlanningProblem(
            domain=self.domain,
            objects=self.config.typed_symbols(),
            init=self.state,
            goal=self.goal or frozenset(),
        )

    def export_pddl(self) -> str:
        """The session as a PDDL bundle: domain text then problem text."""
        from .pddl import emit_domain, emit_problem

        assert self.config is not None
        problem = problem_from_state(
            self.config,
            self.state,
            self.goal or frozenset(),
            name=f"{self.id}-problem",
            domain_name=self.domain.name,
        )
        return emit_domain(self.domain) + "\n" + emit_problem(problem)

    def validate_last_plan(self):
        if self.last_plan is None:
            raise IllegalPhase("no plan to validate")
        return validate_plan(self.planning_problem(), self.last_plan)

    def to_json(self) -> dict:
        assert self.config is not None
        return {
            "id": self.id,
            "phase": self.phase,
            "mode": self.mode,
            "config": self.config.to_json(),
            "state": self.state.to_strings(),
            "goal": [str(l) for l in sorted_literals(self.goal)] if self.goal is not None else None,
            "operators": [op.name for op in self.domain.operators],
            "plan": self.last_plan.to_json() if self.last_plan else None,
        }

    # -- helpers ---------------------------------------------------------

    def _kinds(self) -> dict[str, str]:
        assert self.config is not None
        return self.config.kinds()

    def _symbols(self, names: Sequence[str]) -> tuple[Symbol, ...]:
        kinds = self._kinds()
        out = []
        for name in names:
            if name not in kinds:
                raise UnknownSymbol(f"unknown symbol {name}")
            out.append(Symbol(name, kinds[name]))
        return tuple(out)

    def _require_phase(
        self,
        operation: str,
        allowed: tuple[str, ...] | None = None,
        forbidden: tuple[str, ...] = (),
    ) -> None:
        if allowed is not None and self.phase not in allowed:
            raise IllegalPhase(
                f"{operation} is not allowed in phase {self.phase!r} "
                f"(allowed: {', '.join(allowed)})"
            )
        if self.phase in forbidden:
            raise IllegalPhase(f"{operation} is not allowed in phase {self.phase!r}")
