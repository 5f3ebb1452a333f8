"""Build lifted operators from before/after demonstrations and apply user edits.

The induction rule works on the state delta of a single demonstration:

* atoms that ceased to hold become positive preconditions and delete effects;
* atoms that became true become add effects, and (closed world: they must have
  been false) negative preconditions — except for atoms mentioning the
  manipulated object itself, whose "not yet there" is already implied by its
  "still here" precondition and is left out to keep operators readable.

``minimal`` restricts collection to atoms mentioning the manipulated object
(the first action argument) and then bakes in the static properties that held,
producing deliberately naive operators such as a color-specific move.
``full_delta`` collects every changed atom and skips statics.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    ContradictionError,
    GroundAction,
    Literal,
    LiftedOperator,
    State,
    Symbol,
    diff_states,
    parse_literal,
    sorted_literals,
)
from .world import infer_kinds

INDUCTION_MODES = ("minimal", "full_delta")

REFINEMENT_KINDS = (
    "add_precondition",
    "remove_precondition",
    "add_effect",
    "remove_effect",
    "generalize_constant",
)

_KIND_BASE = {"object": "?obj", "position": "?pos", "color": "?c"}


class InductionError(Exception):
    code = "induction_error"


class EmptyDelta(InductionError):
    code = "empty_delta"


class NoSuchLiteral(InductionError):
    code = "no_such_literal"


class DuplicateLiteral(InductionError):
    code = "duplicate_literal"


class SignatureMismatch(InductionError):
    code = "signature_mismatch"


class EffectConflict(InductionError):
    code = "effect_conflict"

    def __init__(self, literal: Literal):
        self.literal = literal
        super().__init__(f"one demonstration adds {literal}, another deletes it")


@dataclass(frozen=True)
class Demonstration:
    """One performed action with state snapshots around it."""

    action: GroundAction
    before: State
    after: State

    def to_json(self) -> dict:
        return {
            "action": self.action.name,
            "args": [a.name for a in self.action.args],
            "before": self.before.to_strings(),
            "after": self.after.to_strings(),
        }

    @classmethod
    def from_json(cls, data: Mapping, kinds: Mapping[str, str] | None = None) -> "Demonstration":
        if kinds is None:
            kinds = infer_kinds(list(data["before"]) + list(data["after"]))
        return cls(
            action=GroundAction.from_json(data, kinds),
            before=State.of(parse_literal(t, kinds) for t in data["before"]),
            after=State.of(parse_literal(t, kinds) for t in data["after"]),
        )


@dataclass(frozen=True)
class Refinement:
    """A single edit to an operator, as offered by the vocabulary or diagnosis."""

    kind: str
    literal: Literal | None = None
    constant: Symbol | None = None
    variable: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in REFINEMENT_KINDS:
            raise ValueError(f"unknown refinement kind {self.kind!r}")
        if self.kind == "generalize_constant":
            if self.constant is None:
                raise ValueError("generalize_constant needs a constant")
        elif self.literal is None:
            raise ValueError(f"{self.kind} needs a literal")

    def to_json(self) -> dict:
        data: dict = {"kind": self.kind}
        if self.literal is not None:
            data["literal"] = str(self.literal)
        if self.constant is not None:
            data["constant"] = self.constant.name
        if self.variable is not None:
            data["variable"] = self.variable
        return data

    @classmethod
    def from_json(cls, data: Mapping, kinds: Mapping[str, str] | None = None) -> "Refinement":
        literal = parse_literal(data["literal"], kinds) if "literal" in data else None
        constant = None
        if "constant" in data:
            kinds = kinds or {}
            constant = Symbol(data["constant"], kinds.get(data["constant"], "object"))
        return cls(data["kind"], literal, constant, data.get("variable"))


def variablize(args: Sequence[Symbol]) -> tuple[Symbol, ...]:
    """Fresh typed parameters for the action arguments, named by sort:
    a lone sort keeps its base name (?obj), repeats are numbered (?pos1, ?pos2)."""
    counts = Counter(a.kind for a in args)
    seen: Counter = Counter()
    used: set[str] = set()
    params = []
    for arg in args:
        base = _KIND_BASE.get(arg.kind, "?x")
        seen[arg.kind] += 1
        name = base if counts[arg.kind] == 1 else f"{base}{seen[arg.kind]}"
        while name in used:
            name += "x"
        used.add(name)
        params.append(Symbol(name, arg.kind))
    return tuple(params)


def induce(
    demo: Demonstration,
    mode: str = "minimal",
    static_predicates: Iterable[str] = ("color",),
) -> LiftedOperator:
    """Generalise one demonstration into a lifted operator."""
    if mode not in INDUCTION_MODES:
        raise ValueError(f"unknown induction mode {mode!r}")
    statics = set(static_predicates)
    added, removed = diff_states(demo.before, demo.after)
    args = demo.action.args
    params = variablize(args)
    binding: dict[Symbol, Symbol] = {}
    for arg, param in zip(args, params):
        binding.setdefault(arg, param)

    handle = args[0] if args else None

    def mentions_handle(atom: Literal) -> bool:
        return handle is not None and handle in atom.args

    if mode == "minimal":
        collected_removed = {a for a in removed if mentions_handle(a)}
        collected_added = {a for a in added if mentions_handle(a)}
    else:
        collected_removed = {a for a in removed if a.predicate not in statics}
        collected_added = {a for a in added if a.predicate not in statics}

    if not collected_removed and not collected_added:
        raise EmptyDelta(f"demonstration of {demo.action} changed nothing to learn from")

    preconditions = {a.substitute(binding) for a in collected_removed}
    preconditions |= {
        a.substitute(binding).negate()
        for a in collected_added
        if not mentions_handle(a)
    }
    effects = {a.substitute(binding).negate() for a in collected_removed}
    effects |= {a.substitute(binding) for a in collected_added}

    if mode == "minimal":
        for atom in sorted_literals(demo.before.atoms):
            if atom.predicate in statics and any(arg in args for arg in atom.args):
                preconditions.add(atom.substitute(binding))

    return LiftedOperator(demo.action.name, params, frozenset(preconditions), frozenset(effects))


def refine(op: LiftedOperator, refinement: Refinement) -> LiftedOperator:
    """A new operator with one edit applied; never mutates the input."""
    kind = refinement.kind
    if kind == "generalize_constant":
        return _generalize_constant(op, refinement.constant, refinement.variable)

    lit = refinement.literal
    assert lit is not None
    if kind == "add_precondition":
        if lit in op.preconditions:
            raise DuplicateLiteral(f"{lit} is already a precondition of {op.name}")
        if lit.negate() in op.preconditions:
            raise ContradictionError(f"adding {lit} contradicts an existing precondition")
        return _rebuild(op, preconditions=op.preconditions | {lit})
    if kind == "remove_precondition":
        if lit not in op.preconditions:
            raise NoSuchLiteral(f"{lit} is not a precondition of {op.name}")
        return _rebuild(op, preconditions=op.preconditions - {lit})
    if kind == "add_effect":
        if lit in op.effects:
            raise DuplicateLiteral(f"{lit} is already an effect of {op.name}")
        if lit.negate() in op.effects:
            raise ContradictionError(f"adding {lit} contradicts an existing effect")
        return _rebuild(op, effects=op.effects | {lit})
    if kind == "remove_effect":
        if lit not in op.effects:
            raise NoSuchLiteral(f"{lit} is not an effect of {op.name}")
        return _rebuild(op, effects=op.effects - {lit})
    raise ValueError(f"unknown refinement kind {kind!r}")


def _rebuild(
    op: LiftedOperator,
    parameters: tuple[Symbol, ...] | None = None,
    preconditions: frozenset[Literal] | None = None,
    effects: frozenset[Literal] | None = None,
) -> LiftedOperator:
    return LiftedOperator(
        op.name,
        op.parameters if parameters is None else parameters,
        op.preconditions if preconditions is None else frozenset(preconditions),
        op.effects if effects is None else frozenset(effects),
    )


def _generalize_constant(
    op: LiftedOperator, constant: Symbol | None, variable: str | None
) -> LiftedOperator:
    assert constant is not None
    touched_pre = {l for l in op.preconditions if constant in l.args}
    touched_eff = {l for l in op.effects if constant in l.args}
    if not touched_pre and not touched_eff:
        raise NoSuchLiteral(f"no literal of {op.name} mentions constant {constant}")

    fresh = _fresh_variable(op, constant, variable)
    binding = {constant: fresh}
    new_pre = {l.substitute(binding) if l in touched_pre else l for l in op.preconditions}
    new_eff = {l.substitute(binding) if l in touched_eff else l for l in op.effects}

    # a positive precondition left as the only mention of the fresh variable no
    # longer constrains anything and is dropped instead of growing the signature
    def mentions(lit: Literal) -> bool:
        return fresh in lit.args

    for lit in sorted_literals([l for l in new_pre if l.positive and mentions(l)]):
        others = [l for l in (new_pre | new_eff) if l != lit and mentions(l)]
        if not others:
            new_pre.discard(lit)

    params = op.parameters
    if any(mentions(l) for l in new_pre | new_eff):
        params = params + (fresh,)
    return LiftedOperator(op.name, params, frozenset(new_pre), frozenset(new_eff))


def _fresh_variable(op: LiftedOperator, constant: Symbol, requested: str | None) -> Symbol:
    taken = {p.name for p in op.parameters}
    for lit in list(op.preconditions) + list(op.effects):
        taken |= {v.name for v in lit.variables()}
    if requested:
        if requested in taken:
            raise ValueError(f"variable {requested} is already in use")
        return Symbol(requested, constant.kind)
    base = _KIND_BASE.get(constant.kind, "?x")
    name = base
    counter = 1
    while name in taken:
        counter += 1
        name = f"{base}{counter}"
    return Symbol(name, constant.kind)


def merge_demonstrations(ops: Sequence[LiftedOperator]) -> LiftedOperator:
    """Intersect operators induced for the same action signature.

    A precondition or effect survives only if every demonstration agrees on it;
    opposite effects on the same atom are a conflict the user must resolve.
    """
    if not ops:
        raise ValueError("nothing to merge")
    first = ops[0]
    renamed = [first]
    for other in ops[1:]:
        if other.name != first.name or len(other.parameters) != len(first.parameters):
            raise SignatureMismatch(f"{other} does not match {first}")
        if tuple(p.kind for p in other.parameters) != tuple(p.kind for p in first.parameters):
            raise SignatureMismatch(f"{other} parameter types do not match {first}")
        mapping = dict(zip(other.parameters, first.parameters))
        renamed.append(
            LiftedOperator(
                other.name,
                first.parameters,
                frozenset(l.substitute(mapping) for l in other.preconditions),
                frozenset(l.substitute(mapping) for l in other.effects),
            )
        )

    union_adds = set().union(*({l.atom for l in op.add_effects} for op in renamed))
    union_dels = set().union(*({l.atom for l in op.delete_effects} for op in renamed))
    conflicts = union_adds & union_dels
    if conflicts:
        raise EffectConflict(sorted_literals(conflicts)[0])

    preconditions = frozenset.intersection(*(op.preconditions for op in renamed))
    effects = frozenset.intersection(*(op.effects for op in renamed))
    return LiftedOperator(first.name, first.parameters, preconditions, effects)


def operator_to_json(op: LiftedOperator) -> dict:
    return {
        "name": op.name,
        "parameters": [{"name": p.name, "type": p.kind} for p in op.parameters],
        "preconditions": [str(l) for l in op.sorted_preconditions()],
        "effects": [str(l) for l in op.sorted_effects()],
    }
