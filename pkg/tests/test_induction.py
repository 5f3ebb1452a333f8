"""Operator induction from demonstrations, refinements and merging."""

from __future__ import annotations

import random

import pytest

from teachplan.core import (
    ContradictionError,
    GroundAction,
    Literal,
    LiftedOperator,
    Symbol,
    apply_model_action,
)
from teachplan.induction import (
    Demonstration,
    DuplicateLiteral,
    EffectConflict,
    EmptyDelta,
    NoSuchLiteral,
    Refinement,
    SignatureMismatch,
    induce,
    merge_demonstrations,
    refine,
    variablize,
)
from teachplan.scenarios import (
    full_delta_move_operator,
    generalized_move_operator,
    naive_move_operator,
    refined_move_operator,
)
from teachplan.world import make_state, world_execute

from conftest import A, BLUE_OBJ, D, RED_OBJ, lit
from gen import random_legal_move, random_world


def scenario1_demo() -> Demonstration:
    return Demonstration(
        action=GroundAction("moveObject", (RED_OBJ, D, A)),
        before=make_state_from(["at(redObj,D)", "empty(A)", "color(redObj,red)"]),
        after=make_state_from(["at(redObj,A)", "empty(D)", "color(redObj,red)"]),
    )


def make_state_from(texts):
    from teachplan.core import State

    return State.of(lit(t) for t in texts)


# -- induce --------------------------------------------------------------------


def test_minimal_induction_is_the_naive_operator():
    op = induce(scenario1_demo(), "minimal", ("color",))
    assert op == naive_move_operator("red")
    assert {str(l) for l in op.preconditions} == {"at(?obj,?pos1)", "color(?obj,red)"}
    assert {str(l) for l in op.effects} == {"at(?obj,?pos2)", "not at(?obj,?pos1)"}


def test_full_delta_induction_is_the_generalised_operator():
    op = induce(scenario1_demo(), "full_delta", ("color",))
    assert op == full_delta_move_operator()
    assert {str(l) for l in op.preconditions} == {
        "at(?obj,?pos1)",
        "not empty(?pos1)",
        "empty(?pos2)",
    }
    assert {str(l) for l in op.effects} == {
        "at(?obj,?pos2)",
        "not at(?obj,?pos1)",
        "empty(?pos1)",
        "not empty(?pos2)",
    }


def test_table_style_demo_without_statics():
    # the same generalisation holds when the snapshot carries no color facts
    init_pos = Symbol("initPos", "position")
    fin_pos = Symbol("finPos", "position")
    demo = Demonstration(
        action=GroundAction("moveObject", (RED_OBJ, init_pos, fin_pos)),
        before=make_state_from(["at(redObj,initPos)", "empty(finPos)"]),
        after=make_state_from(["at(redObj,finPos)", "empty(initPos)"]),
    )
    op = induce(demo, "full_delta", ("color",))
    assert op == full_delta_move_operator()


def test_noop_demo_raises_empty_delta():
    demo = scenario1_demo()
    noop = Demonstration(demo.action, demo.before, demo.before)
    with pytest.raises(EmptyDelta):
        induce(noop, "minimal")
    with pytest.raises(EmptyDelta):
        induce(noop, "full_delta")


def test_variablize_names_by_sort():
    params = variablize((RED_OBJ, D, A))
    assert [(p.name, p.kind) for p in params] == [
        ("?obj", "object"),
        ("?pos1", "position"),
        ("?pos2", "position"),
    ]
    single = variablize((RED_OBJ, D))
    assert [p.name for p in single] == ["?obj", "?pos"]


def test_duplicate_constant_args_get_distinct_parameters():
    demo = Demonstration(
        action=GroundAction("moveObject", (RED_OBJ, D, D)),
        before=make_state_from(["at(redObj,D)", "empty(A)"]),
        after=make_state_from(["at(redObj,A)", "empty(D)"]),
    )
    op = induce(demo, "full_delta")
    assert [p.name for p in op.parameters] == ["?obj", "?pos1", "?pos2"]
    # D lifts to its first slot, A stays constant
    assert lit("not at(?obj,?pos1)") in op.effects
    assert Literal("at", (Symbol("?obj", "object"), A)) in op.effects


# -- refine ---------------------------------------------------------------------


def test_generalize_constant_drops_color():
    refined = refine(
        naive_move_operator("red"),
        Refinement("generalize_constant", constant=Symbol("red", "color")),
    )
    assert refined == generalized_move_operator()
    assert refined.preconditions == frozenset({lit("at(?obj,?pos1)")})


def test_refinement_pipeline_reaches_refined_move():
    op = generalized_move_operator()
    op = refine(op, Refinement("add_precondition", literal=lit("empty(?pos2)")))
    op = refine(op, Refinement("add_effect", literal=lit("empty(?pos1)")))
    op = refine(op, Refinement("add_effect", literal=lit("not empty(?pos2)")))
    assert op == refined_move_operator()


def test_remove_absent_literal():
    with pytest.raises(NoSuchLiteral):
        refine(
            naive_move_operator("red"),
            Refinement("remove_precondition", literal=lit("at(?obj,?pos2)")),
        )


def test_duplicate_add_is_rejected():
    with pytest.raises(DuplicateLiteral):
        refine(
            naive_move_operator("red"),
            Refinement("add_precondition", literal=lit("at(?obj,?pos1)")),
        )


def test_contradictory_add_is_rejected():
    with pytest.raises(ContradictionError):
        refine(
            naive_move_operator("red"),
            Refinement("add_precondition", literal=lit("not at(?obj,?pos1)")),
        )


def test_generalize_missing_constant():
    with pytest.raises(NoSuchLiteral):
        refine(
            generalized_move_operator(),
            Refinement("generalize_constant", constant=Symbol("red", "color")),
        )


def test_generalize_keeps_shared_variable_as_parameter():
    # the constant appears in two literals: both survive, joined by a fresh parameter
    op = LiftedOperator(
        "paint",
        (Symbol("?obj", "object"),),
        frozenset({Literal("color", (Symbol("?obj", "object"), Symbol("red", "color")))}),
        frozenset({Literal("color", (Symbol("?obj", "object"), Symbol("red", "color"))).negate()}),
    )
    refined = refine(op, Refinement("generalize_constant", constant=Symbol("red", "color")))
    assert [p.name for p in refined.parameters] == ["?obj", "?c"]
    assert lit("color(?obj,?c)") in refined.preconditions
    assert lit("not color(?obj,?c)") in refined.effects


def test_add_then_remove_restores_operator():
    original = generalized_move_operator()
    added = refine(original, Refinement("add_precondition", literal=lit("empty(?pos2)")))
    restored = refine(added, Refinement("remove_precondition", literal=lit("empty(?pos2)")))
    assert restored == original


# -- merge ------------------------------------------------------------------------


def blue_demo() -> Demonstration:
    return Demonstration(
        action=GroundAction("moveObject", (BLUE_OBJ, D, A)),
        before=make_state_from(["at(blueObj,D)", "empty(A)", "color(blueObj,blue)"]),
        after=make_state_from(["at(blueObj,A)", "empty(D)", "color(blueObj,blue)"]),
    )


def test_merge_eliminates_color_by_intersection():
    # derived by hand from the induction rule: the two naive operators agree on
    # everything except color(?obj,red) / color(?obj,blue), which intersect away
    red_op = induce(scenario1_demo(), "minimal", ("color",))
    blue_op = induce(blue_demo(), "minimal", ("color",))
    assert red_op == naive_move_operator("red")
    assert blue_op == naive_move_operator("blue")
    merged = merge_demonstrations([red_op, blue_op])
    assert merged == generalized_move_operator()


def test_merge_single_operator_is_identity():
    op = naive_move_operator("red")
    assert merge_demonstrations([op]) == op


def test_merge_arity_mismatch():
    two_arg = LiftedOperator(
        "moveObject",
        (Symbol("?obj", "object"), Symbol("?pos", "position")),
        frozenset(),
        frozenset({Literal("at", (Symbol("?obj", "object"), Symbol("?pos", "position")))}),
    )
    with pytest.raises(SignatureMismatch):
        merge_demonstrations([naive_move_operator("red"), two_arg])


def test_merge_effect_conflict():
    base = generalized_move_operator()
    flipped = LiftedOperator(
        base.name,
        base.parameters,
        base.preconditions,
        frozenset({lit("not at(?obj,?pos2)"), lit("at(?obj,?pos1)")}),
    )
    with pytest.raises(EffectConflict) as err:
        merge_demonstrations([base, flipped])
    assert str(err.value.literal) in ("at(?obj,?pos1)", "at(?obj,?pos2)")


def test_merge_commutative_and_associative():
    rng = random.Random(3)
    ops = [naive_move_operator(c) for c in ("red", "blue", "green")]
    merged_ab = merge_demonstrations([ops[0], ops[1]])
    merged_ba = merge_demonstrations([ops[1], ops[0]])
    assert merged_ab == merged_ba
    left = merge_demonstrations([merge_demonstrations([ops[0], ops[1]]), ops[2]])
    right = merge_demonstrations([ops[0], merge_demonstrations([ops[1], ops[2]])])
    flat = merge_demonstrations(ops)
    assert left == right == flat
    rng.shuffle(ops)
    assert merge_demonstrations(ops) == flat


# -- soundness and mode properties ---------------------------------------------------


def _demo_from_world(rng) -> Demonstration | None:
    config = random_world(rng)
    state = make_state(config)
    move = random_legal_move(rng, state, config)
    if move is None:
        return None
    return Demonstration(move, state, world_execute(state, move))


def test_induced_operator_reproduces_its_demo():
    rng = random.Random(5)
    checked = 0
    while checked < 40:
        demo = _demo_from_world(rng)
        if demo is None:
            continue
        checked += 1
        handle = demo.action.args[0]

        full = induce(demo, "full_delta", ("color",))
        assert apply_model_action(demo.before, demo.action, full) == demo.after

        minimal = induce(demo, "minimal", ("color",))
        result = apply_model_action(demo.before, demo.action, minimal)
        mine = lambda s: {a for a in s.atoms if handle in a.args and a.predicate != "color"}
        assert mine(result) == mine(demo.after)


def test_full_delta_preconditions_contain_minimal_nonstatic_ones():
    rng = random.Random(9)
    checked = 0
    while checked < 40:
        demo = _demo_from_world(rng)
        if demo is None:
            continue
        checked += 1
        full = induce(demo, "full_delta", ("color",))
        minimal = induce(demo, "minimal", ("color",))
        nonstatic = {l for l in minimal.preconditions if l.predicate != "color"}
        assert nonstatic <= full.preconditions


def test_parameter_arg_bijection():
    rng = random.Random(15)
    checked = 0
    while checked < 30:
        demo = _demo_from_world(rng)
        if demo is None:
            continue
        checked += 1
        op = induce(demo, "full_delta")
        assert len(op.parameters) == len(demo.action.args)
        assert len({p.name for p in op.parameters}) == len(op.parameters)
        for param, arg in zip(op.parameters, demo.action.args):
            assert param.kind == arg.kind


# -- serialization ---------------------------------------------------------------


def test_demonstration_json_round_trip():
    demo = scenario1_demo()
    restored = Demonstration.from_json(demo.to_json())
    assert restored.action == demo.action
    assert restored.before == demo.before
    assert restored.after == demo.after
    # inferred symbol sorts still type the induced parameters correctly
    assert induce(restored, "full_delta") == full_delta_move_operator()


def test_refinement_json_round_trip():
    for refinement in (
        Refinement("add_precondition", literal=lit("empty(?pos2)")),
        Refinement("generalize_constant", constant=Symbol("red", "color")),
    ):
        assert Refinement.from_json(refinement.to_json()).to_json() == refinement.to_json()
