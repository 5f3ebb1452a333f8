"""Forward state-space search over grounded operators, plus plan validation.

Two strategies: ``bfs_optimal`` guarantees a minimum-length plan and backs the
test oracles; ``astar_goalcount`` is the session default. Both are
deterministic: successors are generated in lexicographic action-text order.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    GroundAction,
    Literal,
    PreconditionFailure,
    State,
    Symbol,
)
from .pddl import DomainDef, ProblemDef, UndeclaredObject


class PlannerError(Exception):
    code = "planner_error"


class NoPlanFound(PlannerError):
    """Search space exhausted without reaching the goal (includes unreachable goals)."""

    code = "no_plan_found"

    def __init__(self, message: str, unsatisfied_in_init: tuple[Literal, ...] = ()):
        self.unsatisfied_in_init = unsatisfied_in_init
        super().__init__(message)


class BudgetExceeded(PlannerError):
    code = "budget_exceeded"

    def __init__(self, max_expansions: int):
        self.max_expansions = max_expansions
        super().__init__(f"search exceeded {max_expansions} expansions")


STRATEGIES = ("astar_goalcount", "bfs_optimal")


@dataclass(frozen=True)
class SearchConfig:
    strategy: str = "astar_goalcount"
    max_expansions: int = 100_000
    tie_break: str = "lexicographic"

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_expansions < 1:
            raise ValueError("max_expansions must be positive")


@dataclass(frozen=True)
class Plan:
    steps: tuple[GroundAction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def cost(self) -> int:
        return len(self.steps)

    def to_json(self) -> list[dict]:
        return [step.to_json() for step in self.steps]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], kinds: Mapping[str, str] | None = None) -> "Plan":
        return cls(tuple(GroundAction.from_json(entry, kinds) for entry in data))


@dataclass(frozen=True)
class GroundedOperator:
    """One type-respecting binding of an operator: a ready-to-apply action."""

    action: GroundAction
    preconditions: frozenset[Literal]
    add_effects: frozenset[Literal]
    delete_effects: frozenset[Literal]

    def applicable(self, state: State) -> bool:
        return state.holds_all(self.preconditions)

    def apply(self, state: State) -> State:
        return State.of((state.atoms - self.delete_effects) | self.add_effects)


@dataclass(frozen=True)
class PlanningProblem:
    domain: DomainDef
    objects: tuple[tuple[Symbol, str], ...]
    init: State
    goal: frozenset[Literal]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "goal", frozenset(self.goal))
        declared = {sym.name for sym, _ in self.objects}
        for lit in self.goal:
            if not lit.is_ground:
                raise ValueError(f"goal literals must be ground: {lit}")
            for arg in lit.args:
                if arg.name not in declared:
                    raise UndeclaredObject(f"goal {lit} uses undeclared object {arg.name}")
            self.domain._check_literal(lit, "goal")

    @classmethod
    def from_defs(cls, domain: DomainDef, problem: ProblemDef) -> "PlanningProblem":
        return cls(domain, problem.objects, problem.init, problem.goal)


def ground_operators(
    domain: DomainDef, objects: Iterable[tuple[Symbol, str]]
) -> list[GroundedOperator]:
    """Every type-respecting binding of every operator; bindings whose
    preconditions are self-contradictory (p and not p) are pruned."""
    by_type: dict[str, list[Symbol]] = {}
    for sym, typ in objects:
        by_type.setdefault(typ, []).append(Symbol(sym.name, typ))
    for candidates in by_type.values():
        candidates.sort(key=lambda s: s.name)

    grounded: list[GroundedOperator] = []
    for op in domain.operators:
        pools = [by_type.get(p.kind, []) for p in op.parameters]
        for combo in itertools.product(*pools):
            binding = dict(zip(op.parameters, combo))
            preconditions = frozenset(l.substitute(binding) for l in op.preconditions)
            if any(not l.positive and l.atom in preconditions for l in preconditions):
                continue
            grounded.append(
                GroundedOperator(
                    action=GroundAction(op.name, combo),
                    preconditions=preconditions,
                    add_effects=frozenset(l.substitute(binding) for l in op.add_effects),
                    delete_effects=frozenset(
                        l.atom.substitute(binding) for l in op.delete_effects
                    ),
                )
            )
    grounded.sort(key=lambda g: str(g.action))
    return grounded


def goal_count_heuristic(state: State, goal: Iterable[Literal]) -> int:
    """How many goal literals do not hold; 0 iff the goal is satisfied."""
    return sum(1 for lit in goal if not state.holds(lit))


def plan(problem: PlanningProblem, config: SearchConfig = SearchConfig()) -> Plan:
    """Search for a plan from init to goal; raises NoPlanFound/BudgetExceeded."""
    grounded = ground_operators(problem.domain, problem.objects)
    goal = sorted(problem.goal, key=lambda l: l.sort_key())
    if config.strategy == "bfs_optimal":
        return _bfs(problem.init, goal, grounded, config.max_expansions)
    return _astar(problem.init, goal, grounded, config.max_expansions)


def _goal_holds(state: State, goal: Sequence[Literal]) -> bool:
    return all(state.holds(l) for l in goal)


def _no_plan(init: State, goal: Sequence[Literal]) -> NoPlanFound:
    unsatisfied = tuple(l for l in goal if not init.holds(l))
    return NoPlanFound(
        "no plan reaches the goal; unsatisfied in the initial state: "
        + ", ".join(str(l) for l in unsatisfied),
        unsatisfied_in_init=unsatisfied,
    )


def _reconstruct(
    state: State, parents: dict[State, tuple[State, GroundAction] | None]
) -> Plan:
    steps: list[GroundAction] = []
    while parents[state] is not None:
        state, action = parents[state]  # type: ignore[misc]
        steps.append(action)
    return Plan(tuple(reversed(steps)))


def _bfs(
    init: State, goal: Sequence[Literal], grounded: list[GroundedOperator], budget: int
) -> Plan:
    parents: dict[State, tuple[State, GroundAction] | None] = {init: None}
    queue: deque[State] = deque([init])
    expansions = 0
    while queue:
        state = queue.popleft()
        if _goal_holds(state, goal):
            return _reconstruct(state, parents)
        expansions += 1
        if expansions > budget:
            raise BudgetExceeded(budget)
        for g in grounded:
            if not g.applicable(state):
                continue
            nxt = g.apply(state)
            if nxt not in parents:
                parents[nxt] = (state, g.action)
                queue.append(nxt)
    raise _no_plan(init, goal)


def _astar(
    init: State, goal: Sequence[Literal], grounded: list[GroundedOperator], budget: int
) -> Plan:
    parents: dict[State, tuple[State, GroundAction] | None] = {init: None}
    best_g: dict[State, int] = {init: 0}
    counter = itertools.count()
    frontier: list[tuple[int, int, State]] = []
    heapq.heappush(frontier, (goal_count_heuristic(init, goal), next(counter), init))
    expansions = 0
    while frontier:
        f, _, state = heapq.heappop(frontier)
        g = best_g[state]
        if f > g + goal_count_heuristic(state, goal):
            continue  # stale queue entry
        if _goal_holds(state, goal):
            return _reconstruct(state, parents)
        expansions += 1
        if expansions > budget:
            raise BudgetExceeded(budget)
        for op in grounded:
            if not op.applicable(state):
                continue
            nxt = op.apply(state)
            nxt_g = g + 1
            if nxt not in best_g or nxt_g < best_g[nxt]:
                best_g[nxt] = nxt_g
                parents[nxt] = (state, op.action)
                heapq.heappush(
                    frontier, (nxt_g + goal_count_heuristic(nxt, goal), next(counter), nxt)
                )
    raise _no_plan(init, goal)


@dataclass(frozen=True)
class ValidationReport:
    """Replay result: whether every step applied, and whether the goal holds."""

    valid: bool
    goal_satisfied: bool
    final_state: State
    failed_index: int | None = None
    failed_action: GroundAction | None = None
    unsatisfied: tuple[Literal, ...] = ()
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.valid and self.goal_satisfied

    def to_json(self) -> dict:
        data: dict = {
            "valid": self.valid,
            "goal_satisfied": self.goal_satisfied,
            "final_state": [str(a) for a in self.final_state.sorted_atoms()],
        }
        if self.failed_index is not None:
            data["failed_step"] = self.failed_index
            data["failed_action"] = str(self.failed_action)
            data["unsatisfied"] = [str(l) for l in self.unsatisfied]
        if self.message:
            data["message"] = self.message
        return data


def validate_plan(problem: PlanningProblem, candidate: Plan) -> ValidationReport:
    """Simulate the plan step by step through the model semantics."""
    from .core import apply_model_action

    state = problem.init
    for index, step in enumerate(candidate.steps):
        operator = problem.domain.operator(step.name)
        if operator is None:
            return ValidationReport(
                valid=False,
                goal_satisfied=False,
                final_state=state,
                failed_index=index,
                failed_action=step,
                message=f"unknown operator {step.name}",
            )
        try:
            state = apply_model_action(state, step, operator)
        except PreconditionFailure as failure:
            return ValidationReport(
                valid=False,
                goal_satisfied=False,
                final_state=state,
                failed_index=index,
                failed_action=step,
                unsatisfied=failure.unsatisfied,
                message=str(failure),
            )
    return ValidationReport(
        valid=True,
        goal_satisfied=_goal_holds(state, sorted(problem.goal, key=lambda l: l.sort_key())),
        final_state=state,
    )
