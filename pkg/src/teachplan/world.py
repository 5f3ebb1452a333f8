"""Tabletop world: configuration, state materialization and ground-truth physics.

The simulator enforces single-occupancy moves and never consults the learned
model, so model/world disagreements surface as execution failures that the
teaching loop can diagnose.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import ArityMismatch, GroundAction, Literal, State, Symbol
from .pddl import DomainDef, PredicateDef, ProblemDef

TABLETOP_TYPES = ("object", "position", "color")

TABLETOP_PREDICATES = (
    PredicateDef("at", (("?obj", "object"), ("?pos", "position"))),
    PredicateDef("empty", (("?pos", "position"),)),
    PredicateDef("color", (("?obj", "object"), ("?c", "color"))),
)

# argument sorts per predicate, used to type symbols read from plain text
PREDICATE_SIGNATURES = {p.name: tuple(t for _, t in p.params) for p in TABLETOP_PREDICATES}


class WorldError(Exception):
    code = "world_error"


class DuplicatePlacement(WorldError):
    code = "duplicate_placement"


class InvalidConfig(WorldError):
    code = "invalid_config"


class UnknownSymbol(WorldError):
    code = "unknown_symbol"


class ConstraintViolation(WorldError):
    """Physical failure of a move, independent of any learned model."""

    code = "constraint_violation"

    def __init__(self, constraint: Literal):
        self.constraint = constraint
        super().__init__(str(constraint))


def occupied(position: Symbol) -> Literal:
    return Literal("occupied", (position,))


def not_at(obj: Symbol, position: Symbol) -> Literal:
    return Literal("not_at", (obj, position))


@dataclass(frozen=True)
class WorldConfig:
    """Declared positions/objects, static facts and the starting placement."""

    positions: tuple[Symbol, ...]
    objects: tuple[Symbol, ...]
    initial_placement: tuple[tuple[Symbol, Symbol], ...] = ()
    static_facts: frozenset[Literal] = frozenset()
    static_predicates: tuple[str, ...] = ("color",)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "positions", tuple(Symbol(p.name, "position") for p in self.positions)
        )
        object.__setattr__(
            self, "objects", tuple(Symbol(o.name, "object") for o in self.objects)
        )
        placement = self.initial_placement
        if isinstance(placement, Mapping):
            placement = tuple(placement.items())
        object.__setattr__(
            self,
            "initial_placement",
            tuple(sorted(placement, key=lambda pair: pair[0].name)),
        )
        object.__setattr__(self, "static_facts", frozenset(self.static_facts))
        self._validate()

    def _validate(self) -> None:
        names = [s.name for s in self.positions + self.objects]
        if len(set(names)) != len(names):
            raise InvalidConfig(f"duplicate symbol declarations: {names}")
        objects = set(self.objects)
        positions = set(self.positions)
        placed: dict[Symbol, Symbol] = {}
        used_positions: set[Symbol] = set()
        for obj, pos in self.initial_placement:
            if obj not in objects:
                raise InvalidConfig(f"placement of undeclared object {obj}")
            if pos not in positions:
                raise InvalidConfig(f"placement on undeclared position {pos}")
            if obj in placed:
                raise InvalidConfig(f"object {obj} placed twice")
            if pos in used_positions:
                raise DuplicatePlacement(f"two objects share position {pos}")
            placed[obj] = pos
            used_positions.add(pos)
        missing = objects - set(placed)
        if missing:
            raise InvalidConfig(
                "unplaced objects: " + ", ".join(sorted(s.name for s in missing))
            )
        for fact in self.static_facts:
            if not fact.positive or not fact.is_ground:
                raise InvalidConfig(f"static facts must be positive ground atoms: {fact}")
            if fact.predicate not in self.static_predicates:
                raise InvalidConfig(
                    f"static fact {fact} uses undeclared static predicate"
                )

    @property
    def placement(self) -> dict[Symbol, Symbol]:
        return dict(self.initial_placement)

    def kinds(self) -> dict[str, str]:
        """Name -> sort map for every symbol this configuration declares."""
        kinds = {p.name: "position" for p in self.positions}
        kinds.update({o.name: "object" for o in self.objects})
        for fact in self.static_facts:
            sig = PREDICATE_SIGNATURES.get(fact.predicate)
            for i, arg in enumerate(fact.args):
                if arg.name not in kinds:
                    kinds[arg.name] = sig[i] if sig and i < len(sig) else "object"
        return kinds

    def color_constants(self) -> tuple[Symbol, ...]:
        colors = {
            arg.name
            for fact in self.static_facts
            if fact.predicate == "color"
            for arg in fact.args[1:]
        }
        return tuple(Symbol(c, "color") for c in sorted(colors))

    def typed_symbols(self) -> tuple[tuple[Symbol, str], ...]:
        """All declared constants with their types, for problem files and grounding."""
        entries = [(o, "object") for o in self.objects]
        entries += [(p, "position") for p in self.positions]
        entries += [(c, "color") for c in self.color_constants()]
        return tuple(entries)

    def add_position(self, name: str) -> "WorldConfig":
        """A copy of this config with one more (empty) position declared."""
        return WorldConfig(
            self.positions + (Symbol(name, "position"),),
            self.objects,
            self.initial_placement,
            self.static_facts,
            self.static_predicates,
        )

    def to_json(self) -> dict:
        return {
            "positions": [p.name for p in self.positions],
            "objects": [o.name for o in self.objects],
            "initial_placement": {o.name: p.name for o, p in self.initial_placement},
            "static_facts": [str(f) for f in sorted(self.static_facts, key=lambda f: f.sort_key())],
            "static_predicates": list(self.static_predicates),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WorldConfig":
        from .core import parse_literal

        positions = tuple(Symbol(p, "position") for p in data["positions"])
        objects = tuple(Symbol(o, "object") for o in data["objects"])
        kinds = {p.name: "position" for p in positions}
        kinds.update({o.name: "object" for o in objects})
        static_predicates = tuple(data.get("static_predicates", ("color",)))
        facts = []
        for text in data.get("static_facts", ()):
            lit = parse_literal(text, kinds)
            sig = PREDICATE_SIGNATURES.get(lit.predicate)
            if sig is not None:
                lit = Literal(
                    lit.predicate,
                    tuple(Symbol(a.name, sig[i]) for i, a in enumerate(lit.args)),
                    lit.positive,
                )
            facts.append(lit)
        placement = tuple(
            (Symbol(o, "object"), Symbol(p, "position"))
            for o, p in data.get("initial_placement", {}).items()
        )
        return cls(positions, objects, placement, frozenset(facts), static_predicates)


def make_state(config: WorldConfig) -> State:
    """Materialize a configuration: ``at`` per placement, ``empty`` per free position."""
    atoms = set(config.static_facts)
    occupied_positions = set()
    for obj, pos in config.initial_placement:
        atoms.add(Literal("at", (obj, pos)))
        occupied_positions.add(pos)
    for pos in config.positions:
        if pos not in occupied_positions:
            atoms.add(Literal("empty", (pos,)))
    return State.of(atoms)


def _positions_of(state: State) -> set[Symbol]:
    positions = {a.args[0] for a in state.atoms if a.predicate == "empty"}
    positions |= {a.args[1] for a in state.atoms if a.predicate == "at"}
    return positions


def _objects_of(state: State) -> set[Symbol]:
    return {a.args[0] for a in state.atoms if a.predicate == "at"}


def world_execute(state: State, action: GroundAction) -> State:
    """Physically perform a move(o, from, to); succeeds iff o sits on ``from``
    and ``to`` is unoccupied. ``empty`` atoms are re-derived afterwards."""
    if len(action.args) != 3:
        raise ArityMismatch(f"world moves take (object, from, to); got {action}")
    obj, src, dst = action.args
    positions = _positions_of(state)
    if obj not in _objects_of(state):
        raise UnknownSymbol(f"unknown object {obj}")
    for pos in (src, dst):
        if pos not in positions:
            raise UnknownSymbol(f"unknown position {pos}")
    if not state.holds(Literal("at", (obj, src))):
        raise ConstraintViolation(not_at(obj, src))
    if any(a.predicate == "at" and a.args[1] == dst for a in state.atoms):
        raise ConstraintViolation(occupied(dst))

    ats = {a for a in state.atoms if a.predicate == "at" and a.args[0] != obj}
    ats.add(Literal("at", (obj, dst)))
    rest = {a for a in state.atoms if a.predicate not in ("at", "empty")}
    taken = {a.args[1] for a in ats}
    empties = {Literal("empty", (p,)) for p in positions if p not in taken}
    return State.of(ats | rest | empties)


def tabletop_domain(
    operators: Iterable = (),
    name: str = "tabletop",
    static_predicates: tuple[str, ...] = ("color",),
) -> DomainDef:
    """The standard domain shell every teaching session plans in."""
    return DomainDef(
        name=name,
        requirements=(":strips", ":typing", ":negative-preconditions"),
        types=TABLETOP_TYPES,
        predicates=TABLETOP_PREDICATES,
        operators=tuple(operators),
        static_predicates=static_predicates,
    )


def problem_from_state(
    config: WorldConfig,
    state: State,
    goal: Iterable[Literal],
    name: str,
    domain_name: str = "tabletop",
) -> ProblemDef:
    return ProblemDef(
        name=name,
        domain_name=domain_name,
        objects=config.typed_symbols(),
        init=state,
        goal=frozenset(goal),
    )


def infer_kinds(atom_strings: Iterable[str]) -> dict[str, str]:
    """Guess symbol sorts from how names are used in tabletop predicates."""
    from .core import parse_literal

    kinds: dict[str, str] = {}
    for text in atom_strings:
        lit = parse_literal(text)
        sig = PREDICATE_SIGNATURES.get(lit.predicate)
        if sig is None:
            continue
        for i, arg in enumerate(lit.args):
            if i < len(sig):
                kinds.setdefault(arg.name, sig[i])
    return kinds
