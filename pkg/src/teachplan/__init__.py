"""teachplan: demonstrate tabletop actions, induce lifted operators,
refine them through failures, and plan to arbitrary goals."""

from .core import (
    GroundAction,
    Literal,
    LiftedOperator,
    PreconditionFailure,
    State,
    Symbol,
    apply_model_action,
    diff_states,
    parse_literal,
)
from .induction import Demonstration, Refinement, induce, merge_demonstrations, refine
from .pddl import (
    DomainDef,
    PredicateDef,
    ProblemDef,
    emit_action,
    emit_domain,
    emit_problem,
    parse_domain,
    parse_problem,
)
from .planner import (
    Plan,
    PlanningProblem,
    SearchConfig,
    ground_operators,
    goal_count_heuristic,
    plan,
    validate_plan,
)
from .session import TeachingSession
from .store import SessionStore
from .world import WorldConfig, make_state, tabletop_domain, world_execute

__version__ = "0.1.0"

__all__ = [
    "Demonstration",
    "DomainDef",
    "GroundAction",
    "LiftedOperator",
    "Literal",
    "Plan",
    "PlanningProblem",
    "PreconditionFailure",
    "PredicateDef",
    "ProblemDef",
    "Refinement",
    "SearchConfig",
    "SessionStore",
    "State",
    "Symbol",
    "TeachingSession",
    "WorldConfig",
    "apply_model_action",
    "diff_states",
    "emit_action",
    "emit_domain",
    "emit_problem",
    "goal_count_heuristic",
    "ground_operators",
    "induce",
    "make_state",
    "merge_demonstrations",
    "parse_domain",
    "parse_literal",
    "parse_problem",
    "plan",
    "refine",
    "tabletop_domain",
    "validate_plan",
    "world_execute",
]
