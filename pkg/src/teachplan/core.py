"""Symbolic building blocks: symbols, literals, closed-world states and lifted operators.

Everything here is immutable; operations return new values. The canonical text
form for a literal is ``pred(a,b)`` / ``not pred(a,b)`` and is what appears in
logs, JSON payloads and traces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

_NAME_RE = re.compile(r"^[A-Za-z0-9_-]+$")
_LITERAL_RE = re.compile(
    r"^\s*(?P<neg>not\s+)?(?P<pred>[A-Za-z0-9_-]+)\s*(?:\((?P<args>[^()]*)\))?\s*$"
)


class ModelError(Exception):
    """Base class for symbolic-model errors."""

    code = "model_error"


class NonGroundLiteral(ModelError):
    code = "non_ground_literal"


class ContradictionError(ModelError):
    code = "contradiction"


class ArityMismatch(ModelError):
    code = "arity_mismatch"


class PreconditionFailure(ModelError):
    """The learned model says the action is not applicable in this state."""

    code = "precondition_failure"

    def __init__(self, unsatisfied: Iterable["Literal"]):
        self.unsatisfied: tuple[Literal, ...] = tuple(
            sorted(unsatisfied, key=lambda l: l.sort_key())
        )
        super().__init__(
            "unsatisfied preconditions: " + ", ".join(str(l) for l in self.unsatisfied)
        )


@dataclass(frozen=True)
class Symbol:
    """A named constant or variable. Variables start with ``?``.

    ``kind`` records the sort (object/position/color/...) when known; it is
    carried as metadata and deliberately excluded from equality so that symbols
    parsed from plain text compare equal to fully typed ones.
    """

    name: str
    kind: str = field(default="object", compare=False)

    def __post_init__(self) -> None:
        base = self.name[1:] if self.name.startswith("?") else self.name
        if not base or not _NAME_RE.match(base):
            raise ValueError(f"bad symbol name {self.name!r}")

    @property
    def is_variable(self) -> bool:
        return self.name.startswith("?")

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"


@dataclass(frozen=True)
class Literal:
    """A predicate applied to symbols, with a polarity."""

    predicate: str
    args: tuple[Symbol, ...] = ()
    positive: bool = True

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.predicate):
            raise ValueError(f"bad predicate name {self.predicate!r}")
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def is_ground(self) -> bool:
        return not any(a.is_variable for a in self.args)

    @property
    def atom(self) -> "Literal":
        """The positive form of this literal."""
        return self if self.positive else Literal(self.predicate, self.args)

    def negate(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.positive)

    def substitute(self, binding: Mapping[Symbol, Symbol]) -> "Literal":
        return Literal(
            self.predicate, tuple(binding.get(a, a) for a in self.args), self.positive
        )

    def variables(self) -> set[Symbol]:
        return {a for a in self.args if a.is_variable}

    def constants(self) -> tuple[Symbol, ...]:
        return tuple(a for a in self.args if not a.is_variable)

    def sort_key(self) -> tuple:
        return (self.predicate, tuple(a.name for a in self.args), not self.positive)

    def __str__(self) -> str:
        body = f"{self.predicate}({','.join(a.name for a in self.args)})"
        return body if self.positive else f"not {body}"

    def __repr__(self) -> str:
        return f"Literal({str(self)!r})"


def parse_literal(text: str, kinds: Mapping[str, str] | None = None) -> Literal:
    """Parse the canonical text form ``pred(a,b)`` / ``not pred(a,b)``.

    ``kinds`` optionally types the parsed symbols by name; untyped variables
    get kind ``variable`` and untyped constants kind ``object``.
    """
    m = _LITERAL_RE.match(text)
    if m is None:
        raise ValueError(f"bad literal text {text!r}")
    kinds = kinds or {}

    def sym(name: str) -> Symbol:
        default = "variable" if name.startswith("?") else "object"
        return Symbol(name, kinds.get(name, default))

    raw_args = m.group("args")
    args: tuple[Symbol, ...] = ()
    if raw_args and raw_args.strip():
        args = tuple(sym(part.strip()) for part in raw_args.split(","))
    return Literal(m.group("pred"), args, positive=m.group("neg") is None)


def sorted_literals(literals: Iterable[Literal]) -> list[Literal]:
    return sorted(literals, key=lambda l: l.sort_key())


@dataclass(frozen=True)
class State:
    """A closed-world state: the set of ground atoms that are true."""

    atoms: frozenset[Literal]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        for atom in self.atoms:
            if not atom.positive:
                raise ValueError(f"state atoms must be positive: {atom}")
            if not atom.is_ground:
                raise NonGroundLiteral(f"state atoms must be ground: {atom}")

    @classmethod
    def of(cls, atoms: Iterable[Literal]) -> "State":
        return cls(frozenset(atoms))

    def holds(self, literal: Literal) -> bool:
        """Closed-world truth of a ground literal."""
        if not literal.is_ground:
            raise NonGroundLiteral(f"cannot evaluate non-ground literal {literal}")
        return (literal.atom in self.atoms) == literal.positive

    def holds_all(self, literals: Iterable[Literal]) -> bool:
        return all(self.holds(l) for l in literals)

    def sorted_atoms(self) -> list[Literal]:
        return sorted_literals(self.atoms)

    def to_strings(self) -> list[str]:
        return [str(a) for a in self.sorted_atoms()]

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return "{" + ", ".join(self.to_strings()) + "}"


def diff_states(before: State, after: State) -> tuple[frozenset[Literal], frozenset[Literal]]:
    """Atoms that became true and atoms that ceased to hold, in that order."""
    added = frozenset(after.atoms - before.atoms)
    removed = frozenset(before.atoms - after.atoms)
    return added, removed


@dataclass(frozen=True)
class GroundAction:
    """An operator name applied to concrete symbols, e.g. ``moveObject(redObj,D,A)``."""

    name: str
    args: tuple[Symbol, ...] = ()

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.name):
            raise ValueError(f"bad action name {self.name!r}")
        object.__setattr__(self, "args", tuple(self.args))
        for a in self.args:
            if a.is_variable:
                raise ValueError(f"ground action may not contain variables: {a}")

    def __str__(self) -> str:
        return f"{self.name}({','.join(a.name for a in self.args)})"

    def to_json(self) -> dict:
        return {"action": self.name, "args": [a.name for a in self.args]}

    @classmethod
    def from_json(cls, data: Mapping, kinds: Mapping[str, str] | None = None) -> "GroundAction":
        kinds = kinds or {}
        return cls(
            data["action"],
            tuple(Symbol(n, kinds.get(n, "object")) for n in data["args"]),
        )


@dataclass(frozen=True, eq=False)
class LiftedOperator:
    """A parameterized action schema with preconditions and effects.

    Effects are one literal set: positive literals are added, negative
    literals deleted. Preconditions and effects may contain constants
    (e.g. a color baked in by a naive demonstration).
    """

    name: str
    parameters: tuple[Symbol, ...]
    preconditions: frozenset[Literal]
    effects: frozenset[Literal]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "preconditions", frozenset(self.preconditions))
        object.__setattr__(self, "effects", frozenset(self.effects))
        names = [p.name for p in self.parameters]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names in {self.name}: {names}")
        for p in self.parameters:
            if not p.is_variable:
                raise ValueError(f"parameter {p} of {self.name} is not a variable")
        declared = set(self.parameters)
        for lit in list(self.preconditions) + list(self.effects):
            for v in lit.variables():
                if v not in declared:
                    raise ValueError(f"undeclared variable {v} in {self.name}: {lit}")
        _reject_contradictions(self.preconditions, f"preconditions of {self.name}")
        _reject_contradictions(self.effects, f"effects of {self.name}")

    @property
    def add_effects(self) -> frozenset[Literal]:
        return frozenset(l for l in self.effects if l.positive)

    @property
    def delete_effects(self) -> frozenset[Literal]:
        return frozenset(l for l in self.effects if not l.positive)

    def binding_for(self, action: GroundAction) -> dict[Symbol, Symbol]:
        if action.name != self.name:
            raise ValueError(f"action {action} does not name operator {self.name}")
        if len(action.args) != len(self.parameters):
            raise ArityMismatch(
                f"{action} has {len(action.args)} args, operator takes {len(self.parameters)}"
            )
        return dict(zip(self.parameters, action.args))

    def signature(self) -> tuple:
        return (self.name, tuple((p.name, p.kind) for p in self.parameters))

    def sorted_preconditions(self) -> list[Literal]:
        return sorted_literals(self.preconditions)

    def sorted_effects(self) -> list[Literal]:
        return sorted_literals(self.effects)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LiftedOperator):
            return NotImplemented
        return (
            self.signature() == other.signature()
            and self.preconditions == other.preconditions
            and self.effects == other.effects
        )

    def __hash__(self) -> int:
        return hash((self.name, tuple(p.name for p in self.parameters),
                     self.preconditions, self.effects))

    def __str__(self) -> str:
        return f"{self.name}({','.join(p.name for p in self.parameters)})"


def _reject_contradictions(literals: frozenset[Literal], where: str) -> None:
    for lit in literals:
        if not lit.positive and lit.atom in literals:
            raise ContradictionError(f"{where} contain both {lit.atom} and {lit}")


def apply_model_action(state: State, action: GroundAction, operator: LiftedOperator) -> State:
    """Apply ``action`` to ``state`` as the learned model predicts.

    All grounded preconditions must hold; otherwise PreconditionFailure lists
    every unsatisfied one. The result is the input minus delete effects plus
    add effects; the input state is untouched.
    """
    binding = operator.binding_for(action)
    unsatisfied = [
        lit for lit in operator.sorted_preconditions()
        if not state.holds(lit.substitute(binding))
    ]
    if unsatisfied:
        raise PreconditionFailure(l.substitute(binding) for l in unsatisfied)
    deletes = {l.atom.substitute(binding) for l in operator.delete_effects}
    adds = {l.substitute(binding) for l in operator.add_effects}
    return State.of((state.atoms - deletes) | adds)
