from __future__ import annotations

import pytest

from teachplan.core import Literal, Symbol
from teachplan.world import WorldConfig

RED_OBJ = Symbol("redObj", "object")
BLUE_OBJ = Symbol("blueObj", "object")
A = Symbol("A", "position")
D = Symbol("D", "position")
M = Symbol("M", "position")
RED = Symbol("red", "color")
BLUE = Symbol("blue", "color")


def lit(text: str) -> Literal:
    from teachplan.core import parse_literal

    kinds = {
        "redObj": "object", "blueObj": "object",
        "A": "position", "D": "position", "M": "position",
        "red": "color", "blue": "color",
        "?obj": "object", "?pos1": "position", "?pos2": "position", "?c": "color",
    }
    return parse_literal(text, kinds)


@pytest.fixture
def scenario1_config() -> WorldConfig:
    return WorldConfig(
        positions=(A, D),
        objects=(RED_OBJ,),
        initial_placement=((RED_OBJ, D),),
        static_facts=frozenset({Literal("color", (RED_OBJ, RED))}),
    )


@pytest.fixture
def scenario2_config() -> WorldConfig:
    return WorldConfig(
        positions=(A, D),
        objects=(BLUE_OBJ,),
        initial_placement=((BLUE_OBJ, D),),
        static_facts=frozenset({Literal("color", (BLUE_OBJ, BLUE))}),
    )


@pytest.fixture
def scenario3_config() -> WorldConfig:
    return WorldConfig(
        positions=(A, D),
        objects=(BLUE_OBJ, RED_OBJ),
        initial_placement=((BLUE_OBJ, A), (RED_OBJ, D)),
        static_facts=frozenset(
            {Literal("color", (BLUE_OBJ, BLUE)), Literal("color", (RED_OBJ, RED))}
        ),
    )


@pytest.fixture
def scenario4_config() -> WorldConfig:
    return WorldConfig(
        positions=(A, D, M),
        objects=(BLUE_OBJ, RED_OBJ),
        initial_placement=((BLUE_OBJ, A), (RED_OBJ, D)),
        static_facts=frozenset(
            {Literal("color", (BLUE_OBJ, BLUE)), Literal("color", (RED_OBJ, RED))}
        ),
    )
