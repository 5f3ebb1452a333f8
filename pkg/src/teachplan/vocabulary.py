"""The fixed menu of conditions users may add to an operator.

Free-text conditions are deliberately not supported; the console and the
PATCH endpoint only accept literals drawn from this closure.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .core import Literal, LiftedOperator, Symbol, sorted_literals
from .pddl import DomainDef


def condition_vocabulary(
    domain: DomainDef,
    operator: LiftedOperator | None = None,
    constants: Sequence[Symbol] = (),
) -> list[Literal]:
    """All literals (and their negations) over an operator's parameters.

    Parameter slots are filled with the operator's parameters of the matching
    type; slots of types with no parameter (e.g. color) are filled from the
    declared constants. Without an operator, generic ``?obj``/``?pos``-style
    placeholders are used.
    """
    if operator is not None:
        terms: dict[str, list[Symbol]] = {}
        for param in operator.parameters:
            terms.setdefault(param.kind, []).append(param)
    else:
        terms = {
            "object": [Symbol("?obj", "object")],
            "position": [Symbol("?pos", "position")],
        }
    for const in constants:
        terms.setdefault(const.kind, []).append(const)
    terms.setdefault("color", [Symbol("?c", "color")])

    templates: set[Literal] = set()
    for pred in domain.predicates:
        pools = [terms.get(typ, []) for _, typ in pred.params]
        for combo in itertools.product(*pools):
            lit = Literal(pred.name, combo)
            templates.add(lit)
            templates.add(lit.negate())
    return sorted_literals(templates)


def vocabulary_strings(
    domain: DomainDef,
    operator: LiftedOperator | None = None,
    constants: Iterable[Symbol] = (),
) -> list[str]:
    return [str(l) for l in condition_vocabulary(domain, operator, tuple(constants))]
