"""State, literal, model-application and world-physics behavior."""

from __future__ import annotations

import random

import pytest

from teachplan.core import (
    GroundAction,
    Literal,
    NonGroundLiteral,
    PreconditionFailure,
    State,
    Symbol,
    apply_model_action,
    diff_states,
    parse_literal,
)
from teachplan.scenarios import generalized_move_operator, refined_move_operator
from teachplan.world import (
    ConstraintViolation,
    DuplicatePlacement,
    InvalidConfig,
    WorldConfig,
    make_state,
    world_execute,
)

from conftest import A, BLUE_OBJ, D, M, RED_OBJ, lit
from gen import random_walk, random_world


def move(obj, src, dst) -> GroundAction:
    return GroundAction("moveObject", (obj, src, dst))


# -- make_state -------------------------------------------------------------


def test_make_state_scenario1(scenario1_config):
    state = make_state(scenario1_config)
    assert state.atoms == {lit("at(redObj,D)"), lit("empty(A)"), lit("color(redObj,red)")}


def test_make_state_empty_world():
    config = WorldConfig(positions=(A, D, M), objects=())
    state = make_state(config)
    assert state.atoms == {lit("empty(A)"), lit("empty(D)"), lit("empty(M)")}


def test_make_state_duplicate_placement():
    with pytest.raises(DuplicatePlacement):
        WorldConfig(
            positions=(A,),
            objects=(RED_OBJ, BLUE_OBJ),
            initial_placement=((RED_OBJ, A), (BLUE_OBJ, A)),
        )


def test_unplaced_object_rejected():
    with pytest.raises(InvalidConfig):
        WorldConfig(positions=(A, D), objects=(RED_OBJ,))


# -- holds ------------------------------------------------------------------


def test_holds_membership():
    state = State.of([lit("at(redObj,D)")])
    assert state.holds(lit("at(redObj,D)"))


def test_holds_closed_world_negative():
    state = State.of([lit("at(redObj,D)")])
    assert state.holds(lit("not empty(D)"))


def test_holds_absence():
    state = State.of([lit("empty(A)")])
    assert not state.holds(lit("at(redObj,A)"))


def test_holds_rejects_non_ground():
    state = State.of([lit("empty(A)")])
    with pytest.raises(NonGroundLiteral):
        state.holds(lit("empty(?pos1)"))


# -- apply_model_action -------------------------------------------------------


def test_apply_refined_move(scenario1_config):
    state = make_state(scenario1_config)
    result = apply_model_action(state, move(RED_OBJ, D, A), refined_move_operator())
    assert result.atoms == {lit("at(redObj,A)"), lit("empty(D)"), lit("color(redObj,red)")}
    # input untouched
    assert state.atoms == {lit("at(redObj,D)"), lit("empty(A)"), lit("color(redObj,red)")}


def test_apply_wrong_source_fails(scenario1_config):
    state = make_state(scenario1_config)
    with pytest.raises(PreconditionFailure) as err:
        apply_model_action(state, move(RED_OBJ, A, D), generalized_move_operator())
    assert list(err.value.unsatisfied) == [lit("at(redObj,A)")]
    with pytest.raises(PreconditionFailure) as err:
        apply_model_action(state, move(RED_OBJ, A, D), refined_move_operator())
    assert lit("at(redObj,A)") in err.value.unsatisfied


def test_apply_naive_color_operator_blocks_blue(scenario2_config):
    from teachplan.scenarios import naive_move_operator

    state = make_state(scenario2_config)
    with pytest.raises(PreconditionFailure) as err:
        apply_model_action(state, move(BLUE_OBJ, D, A), naive_move_operator("red"))
    assert list(err.value.unsatisfied) == [lit("color(blueObj,red)")]


def test_apply_is_deterministic(scenario4_config):
    state = make_state(scenario4_config)
    op = refined_move_operator()
    first = apply_model_action(state, move(BLUE_OBJ, A, M), op)
    second = apply_model_action(state, move(BLUE_OBJ, A, M), op)
    assert first == second
    assert first.to_strings() == second.to_strings()


# -- world_execute ------------------------------------------------------------


def test_world_rejects_occupied_arrival(scenario3_config):
    state = make_state(scenario3_config)
    with pytest.raises(ConstraintViolation) as err:
        world_execute(state, move(RED_OBJ, D, A))
    assert str(err.value.constraint) == "occupied(A)"


def test_world_legal_move(scenario1_config):
    state = make_state(scenario1_config)
    result = world_execute(state, move(RED_OBJ, D, A))
    assert result.atoms == {lit("at(redObj,A)"), lit("empty(D)"), lit("color(redObj,red)")}


def test_world_rejects_wrong_source(scenario1_config):
    state = make_state(scenario1_config)
    with pytest.raises(ConstraintViolation) as err:
        world_execute(state, move(RED_OBJ, A, D))
    assert str(err.value.constraint) == "not_at(redObj,A)"


def test_world_same_position_move_is_occupied(scenario1_config):
    state = make_state(scenario1_config)
    with pytest.raises(ConstraintViolation) as err:
        world_execute(state, move(RED_OBJ, D, D))
    assert str(err.value.constraint) == "occupied(D)"


# -- diff_states ---------------------------------------------------------------


def test_diff_states_move():
    before = State.of([lit("at(redObj,D)"), lit("empty(A)")])
    after = State.of([lit("at(redObj,A)"), lit("empty(D)")])
    added, removed = diff_states(before, after)
    assert added == {lit("at(redObj,A)"), lit("empty(D)")}
    assert removed == {lit("at(redObj,D)"), lit("empty(A)")}


def test_diff_states_identity():
    state = State.of([lit("empty(A)")])
    assert diff_states(state, state) == (frozenset(), frozenset())


def test_diff_states_pure_addition():
    before = State.of([lit("empty(A)")])
    after = State.of([lit("empty(A)"), lit("empty(M)")])
    added, removed = diff_states(before, after)
    assert added == {lit("empty(M)")}
    assert removed == frozenset()


def test_diff_round_trip_random():
    rng = random.Random(7)
    for _ in range(50):
        config = random_world(rng)
        states = random_walk(rng, config, steps=6)
        for before, after in zip(states, states[1:]):
            added, removed = diff_states(before, after)
            assert (before.atoms - removed) | added == after.atoms


# -- simulator invariants -------------------------------------------------------


def _check_closed_world(state, config):
    for pos in config.positions:
        occupied = any(
            a.predicate == "at" and a.args[1] == pos for a in state.atoms
        )
        assert state.holds(Literal("empty", (pos,))) == (not occupied)


def test_world_invariants_random_walks():
    rng = random.Random(21)
    for _ in range(30):
        config = random_world(rng)
        statics = frozenset(a for a in make_state(config).atoms if a.predicate == "color")
        for state in random_walk(rng, config, steps=8):
            _check_closed_world(state, config)
            for obj in config.objects:
                assert sum(1 for a in state.atoms
                           if a.predicate == "at" and a.args[0] == obj) == 1
            for pos in config.positions:
                assert sum(1 for a in state.atoms
                           if a.predicate == "at" and a.args[1] == pos) <= 1
            assert {a for a in state.atoms if a.predicate == "color"} == statics


# -- text forms -----------------------------------------------------------------


def test_literal_text_round_trip():
    for text in ("at(redObj,D)", "not empty(A)", "color(blueObj,blue)", "handempty()"):
        assert str(parse_literal(text)) == text


def test_symbol_name_validation():
    with pytest.raises(ValueError):
        Symbol("")
    with pytest.raises(ValueError):
        Symbol("bad name")
    with pytest.raises(ValueError):
        Symbol("?")
    Symbol("?ok-name_1")


def test_ground_action_text():
    assert str(move(RED_OBJ, D, A)) == "moveObject(redObj,D,A)"
