"""Grounding, search, validation and the heuristic."""

from __future__ import annotations

import random

import pytest

from teachplan.core import GroundAction, Literal, State, Symbol
from teachplan.planner import (
    BudgetExceeded,
    NoPlanFound,
    Plan,
    PlanningProblem,
    SearchConfig,
    goal_count_heuristic,
    ground_operators,
    plan,
    validate_plan,
)
from teachplan.scenarios import full_delta_move_operator, refined_move_operator
from teachplan.world import WorldConfig, make_state, tabletop_domain

from bfs_oracle import optimal_plan_length
from conftest import A, BLUE_OBJ, D, M, RED_OBJ, lit
from gen import random_goal, random_world


def move(obj, src, dst) -> GroundAction:
    return GroundAction("moveObject", (obj, src, dst))


def swap_problem(config) -> PlanningProblem:
    domain = tabletop_domain(operators=[full_delta_move_operator()])
    return PlanningProblem(
        domain=domain,
        objects=config.typed_symbols(),
        init=make_state(config),
        goal=frozenset({lit("at(blueObj,D)"), lit("at(redObj,A)")}),
    )


# -- grounding -----------------------------------------------------------------


def test_grounding_prunes_contradictory_same_position_moves():
    domain = tabletop_domain(operators=[full_delta_move_operator()])
    objects = ((RED_OBJ, "object"), (A, "position"), (D, "position"))
    grounded = ground_operators(domain, objects)
    # 2x2 position bindings minus the two p1=p2 ones (empty(p) against not empty(p))
    assert [str(g.action) for g in grounded] == [
        "moveObject(redObj,A,D)",
        "moveObject(redObj,D,A)",
    ]


def test_grounding_counts_two_objects_three_positions():
    domain = tabletop_domain(operators=[full_delta_move_operator()])
    objects = (
        (RED_OBJ, "object"), (BLUE_OBJ, "object"),
        (A, "position"), (D, "position"), (M, "position"),
    )
    grounded = ground_operators(domain, objects)
    assert len(grounded) == 12  # 2 objects x 3x2 ordered position pairs


def test_grounding_empty_domain():
    assert ground_operators(tabletop_domain(), ((RED_OBJ, "object"),)) == []


# -- plan -----------------------------------------------------------------------


def test_swap_plan_bfs_exact_steps(scenario4_config):
    result = plan(swap_problem(scenario4_config), SearchConfig(strategy="bfs_optimal"))
    assert [str(s) for s in result.steps] == [
        "moveObject(blueObj,A,M)",
        "moveObject(redObj,D,A)",
        "moveObject(blueObj,M,D)",
    ]
    assert result.cost == 3


def test_swap_plan_astar_is_valid(scenario4_config):
    problem = swap_problem(scenario4_config)
    result = plan(problem, SearchConfig(strategy="astar_goalcount"))
    report = validate_plan(problem, result)
    assert report.ok
    assert result.cost == 3  # goal-count is admissible here


def test_goal_already_satisfied_gives_empty_plan(scenario4_config):
    problem = swap_problem(scenario4_config)
    satisfied = PlanningProblem(
        problem.domain, problem.objects, problem.init,
        frozenset({lit("at(blueObj,A)")}),
    )
    for strategy in ("bfs_optimal", "astar_goalcount"):
        result = plan(satisfied, SearchConfig(strategy=strategy))
        assert result.steps == ()
        assert result.cost == 0


def test_swap_without_m_is_unsolvable(scenario3_config):
    problem = swap_problem(scenario3_config)  # only positions A and D
    goal = frozenset({lit("at(blueObj,D)"), lit("at(redObj,A)")})
    problem = PlanningProblem(problem.domain, problem.objects, problem.init, goal)
    for strategy in ("bfs_optimal", "astar_goalcount"):
        with pytest.raises(NoPlanFound) as err:
            plan(problem, SearchConfig(strategy=strategy))
        assert set(err.value.unsatisfied_in_init) == goal


def test_budget_exceeded(scenario4_config):
    with pytest.raises(BudgetExceeded):
        plan(swap_problem(scenario4_config), SearchConfig(max_expansions=1))


def test_plan_is_deterministic(scenario4_config):
    problem = swap_problem(scenario4_config)
    for strategy in ("bfs_optimal", "astar_goalcount"):
        config = SearchConfig(strategy=strategy)
        assert plan(problem, config) == plan(problem, config)


def test_negative_goal_literal(scenario4_config):
    problem = swap_problem(scenario4_config)
    negative = PlanningProblem(
        problem.domain, problem.objects, problem.init,
        frozenset({lit("not at(redObj,D)")}),
    )
    result = plan(negative, SearchConfig(strategy="bfs_optimal"))
    assert result.cost == 1


# -- validate_plan -----------------------------------------------------------------


def swap_steps():
    return (move(BLUE_OBJ, A, M), move(RED_OBJ, D, A), move(BLUE_OBJ, M, D))


def test_validate_swap_plan(scenario4_config):
    report = validate_plan(swap_problem(scenario4_config), Plan(swap_steps()))
    assert report.valid and report.goal_satisfied


def test_validate_detects_swapped_steps(scenario4_config):
    steps = swap_steps()
    tampered = Plan((steps[0], steps[2], steps[1]))
    report = validate_plan(swap_problem(scenario4_config), tampered)
    assert not report.valid
    assert report.failed_index == 1
    assert lit("empty(D)") in report.unsatisfied  # D still holds the red block


def test_validate_blames_premature_step(scenario4_config):
    steps = swap_steps()
    tampered = Plan((steps[2], steps[1], steps[0]))
    report = validate_plan(swap_problem(scenario4_config), tampered)
    assert not report.valid
    assert report.failed_index == 0
    assert lit("at(blueObj,M)") in report.unsatisfied


def test_validate_empty_plan_on_satisfied_goal(scenario4_config):
    problem = swap_problem(scenario4_config)
    satisfied = PlanningProblem(
        problem.domain, problem.objects, problem.init,
        frozenset({lit("at(redObj,D)")}),
    )
    report = validate_plan(satisfied, Plan(()))
    assert report.ok


def test_validate_unknown_operator(scenario4_config):
    report = validate_plan(
        swap_problem(scenario4_config),
        Plan((GroundAction("teleport", (RED_OBJ, A)),)),
    )
    assert not report.valid
    assert "unknown operator" in report.message


# -- heuristic -----------------------------------------------------------------------


def test_goal_count_scenario4(scenario4_config):
    state = make_state(scenario4_config)
    goal = {lit("at(blueObj,D)"), lit("at(redObj,A)")}
    assert goal_count_heuristic(state, goal) == 2


def test_goal_count_empty_goal(scenario4_config):
    assert goal_count_heuristic(make_state(scenario4_config), set()) == 0


def test_goal_count_zero_iff_satisfied(scenario4_config):
    state = make_state(scenario4_config)
    goal = {lit("at(blueObj,A)"), lit("not empty(D)")}
    assert goal_count_heuristic(state, goal) == 0


# -- agreement with the independent oracle ----------------------------------------------


def _problem_for(config: WorldConfig, goal) -> PlanningProblem:
    domain = tabletop_domain(operators=[full_delta_move_operator()])
    return PlanningProblem(domain, config.typed_symbols(), make_state(config), frozenset(goal))


def _oracle_length(config: WorldConfig, goal) -> int | None:
    placement = {o.name: p.name for o, p in config.initial_placement}
    positions = [p.name for p in config.positions]
    tuples = [(l.positive, l.predicate, *[a.name for a in l.args]) for l in goal]
    return optimal_plan_length(placement, positions, tuples)


def test_bfs_matches_oracle_on_random_sample():
    rng = random.Random(23)
    for _ in range(25):
        config = random_world(rng)
        goal = random_goal(rng, config)
        problem = _problem_for(config, goal)
        expected = _oracle_length(config, goal)
        try:
            result = plan(problem, SearchConfig(strategy="bfs_optimal"))
        except NoPlanFound:
            assert expected is None
            continue
        assert expected == result.cost
        assert validate_plan(problem, result).ok


def test_astar_agrees_on_solvability_and_validates():
    rng = random.Random(29)
    for _ in range(25):
        config = random_world(rng)
        goal = random_goal(rng, config)
        problem = _problem_for(config, goal)
        expected = _oracle_length(config, goal)
        try:
            result = plan(problem, SearchConfig(strategy="astar_goalcount"))
        except NoPlanFound:
            assert expected is None
            continue
        assert expected is not None
        assert validate_plan(problem, result).ok
