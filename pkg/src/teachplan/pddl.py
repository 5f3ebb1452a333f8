"""Parser and pretty-printer for the STRIPS-with-negative-preconditions PDDL subset.

Supported: ``define``, ``domain``, ``problem``, ``:requirements`` (:strips,
:typing, :negative-preconditions), ``:types`` (flat), ``:predicates``,
``:action`` with ``:parameters``/``:precondition``/``:effect``, ``(and ...)``,
``(not ...)``, typed parameter lists, ``:objects``, ``:init``, ``:goal``.

Negations are accepted both as canonical ``(not (empty ?pos1))`` and the loose
``not (empty ?pos1)`` spacing that shows up in hand-written action blocks; the
emitter always produces the canonical form.

Static predicates have no PDDL syntax, so they travel in a comment directive
``; :static name ...`` that the parser reads back. Files stay valid PDDL for
other tools.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import ContradictionError, Literal, LiftedOperator, State, Symbol, sorted_literals

SUPPORTED_REQUIREMENTS = (":strips", ":typing", ":negative-preconditions")

_STATIC_DIRECTIVE_RE = re.compile(r";\s*:static\s+([A-Za-z0-9_\- ]+)")


class PddlError(Exception):
    code = "pddl_error"


class ParseError(PddlError):
    code = "parse_error"

    def __init__(self, message: str, line: int = 0, column: int = 0, expected: str | None = None):
        self.line = line
        self.column = column
        self.expected = expected
        suffix = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{suffix}")


class ArityError(PddlError):
    code = "arity_error"


class UnknownPredicate(PddlError):
    code = "unknown_predicate"


class UndeclaredObject(PddlError):
    code = "undeclared_object"


class UnsupportedFeature(PddlError):
    code = "unsupported_feature"


@dataclass(frozen=True)
class PredicateDef:
    """A predicate declaration: name plus typed parameter list."""

    name: str
    params: tuple[tuple[str, str], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class DomainDef:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[str, ...] = ()
    predicates: tuple[PredicateDef, ...] = ()
    operators: tuple[LiftedOperator, ...] = ()
    static_predicates: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "requirements", tuple(self.requirements))
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "predicates", tuple(self.predicates))
        object.__setattr__(self, "operators", tuple(self.operators))
        object.__setattr__(self, "static_predicates", tuple(self.static_predicates))
        for flag in self.requirements:
            if flag not in SUPPORTED_REQUIREMENTS:
                raise UnsupportedFeature(f"requirement {flag} is not supported")
        names = [op.name for op in self.operators]
        if len(set(names)) != len(names):
            raise PddlError(f"duplicate operator names: {names}")
        arities = {p.name: p.arity for p in self.predicates}
        if len(arities) != len(self.predicates):
            raise PddlError("duplicate predicate declarations")
        for static in self.static_predicates:
            if static not in arities:
                raise UnknownPredicate(f"static predicate {static} is not declared")
        for op in self.operators:
            for lit in list(op.preconditions) + list(op.effects):
                self._check_literal(lit, f"operator {op.name}")

    def _check_literal(self, lit: Literal, where: str) -> None:
        if lit.predicate not in {p.name for p in self.predicates}:
            raise UnknownPredicate(f"{where} uses undeclared predicate {lit.predicate}")
        expected = next(p.arity for p in self.predicates if p.name == lit.predicate)
        if len(lit.args) != expected:
            raise ArityError(
                f"{where}: {lit} has {len(lit.args)} args, {lit.predicate} takes {expected}"
            )

    def operator(self, name: str) -> LiftedOperator | None:
        for op in self.operators:
            if op.name == name:
                return op
        return None

    def with_operator(self, op: LiftedOperator) -> "DomainDef":
        """A copy with ``op`` added, or replacing the operator of the same name."""
        ops = tuple(o for o in self.operators if o.name != op.name) + (op,)
        return DomainDef(self.name, self.requirements, self.types,
                         self.predicates, ops, self.static_predicates)

    def predicate(self, name: str) -> PredicateDef | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class ProblemDef:
    name: str
    domain_name: str = ""
    objects: tuple[tuple[Symbol, str], ...] = ()
    init: State = field(default_factory=lambda: State(frozenset()))
    goal: frozenset[Literal] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "goal", frozenset(self.goal))
        declared = {sym.name for sym, _ in self.objects}
        for lit in list(self.init.atoms) + list(self.goal):
            if not lit.is_ground:
                raise PddlError(f"problem literals must be ground: {lit}")
            for arg in lit.args:
                if arg.name not in declared:
                    raise UndeclaredObject(f"{lit} uses undeclared object {arg.name}")

    def kinds(self) -> dict[str, str]:
        return {sym.name: typ for sym, typ in self.objects}


# ---------------------------------------------------------------------------
# lexing / reading


@dataclass(frozen=True)
class _Node:
    """An s-expression node: either an atom (value set) or a list (items set)."""

    line: int
    column: int
    value: str | None = None
    items: tuple["_Node", ...] | None = None

    @property
    def is_atom(self) -> bool:
        return self.value is not None


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append((ch, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            tokens.append((text[start:i], line, start_col))
    return tokens


def _read(text: str) -> _Node:
    """Read one complete s-expression, or fail with a positioned ParseError."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 1, 1, expected="(")
    pos = 0

    def read_node() -> _Node:
        nonlocal pos
        tok, line, col = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while True:
                if pos >= len(tokens):
                    raise ParseError("unbalanced parentheses", line, col, expected=")")
                if tokens[pos][0] == ")":
                    pos += 1
                    return _Node(line, col, items=tuple(items))
                items.append(read_node())
        if tok == ")":
            raise ParseError("unexpected )", line, col)
        return _Node(line, col, value=tok)

    node = read_node()
    if pos != len(tokens):
        tok, line, col = tokens[pos]
        raise ParseError(f"trailing input {tok!r}", line, col)
    return node


def _expect_list(node: _Node, what: str) -> tuple[_Node, ...]:
    if node.is_atom:
        raise ParseError(f"expected {what}", node.line, node.column, expected="(")
    return node.items or ()


def _atom_value(node: _Node, what: str) -> str:
    if not node.is_atom:
        raise ParseError(f"expected {what}", node.line, node.column, expected="name")
    return node.value  # type: ignore[return-value]


def _symbol(node: _Node, kind: str = "object") -> Symbol:
    name = _atom_value(node, "a name")
    try:
        return Symbol(name, kind)
    except ValueError as exc:
        raise ParseError(str(exc), node.line, node.column, expected="identifier") from None


def _parse_typed_list(nodes: Sequence[_Node], default_type: str = "object") -> list[tuple[str, str]]:
    """Parse ``a b - t c - u`` into [(a,t),(b,t),(c,u)]; untyped tail gets the default."""
    out: list[tuple[str, str]] = []
    pending: list[_Node] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        if node.is_atom and node.value == "-":
            if i + 1 >= len(nodes):
                raise ParseError("dangling type dash", node.line, node.column, expected="type name")
            type_name = _atom_value(nodes[i + 1], "a type name")
            if not pending:
                raise ParseError("type with no names", node.line, node.column)
            out.extend((_atom_value(p, "a name"), type_name) for p in pending)
            pending = []
            i += 2
        else:
            pending.append(node)
            i += 1
    out.extend((_atom_value(p, "a name"), default_type) for p in pending)
    return out


def _parse_one_literal(node: _Node, variables: dict[str, Symbol] | None) -> Literal:
    items = _expect_list(node, "a literal")
    if not items:
        raise ParseError("empty literal", node.line, node.column, expected="predicate name")
    head = _atom_value(items[0], "a predicate name")
    if head.lower() == "not":
        if len(items) != 2:
            raise ParseError("not takes exactly one literal", node.line, node.column)
        return _parse_one_literal(items[1], variables).negate()
    if head.lower() == "and":
        raise ParseError("nested and is not a literal", node.line, node.column)
    args = []
    for item in items[1:]:
        name = _atom_value(item, "a term")
        if name.startswith("?"):
            if variables is None:
                raise ParseError(
                    f"variable {name} not allowed here", item.line, item.column
                )
            if name not in variables:
                raise ParseError(
                    f"undeclared parameter {name}", item.line, item.column,
                    expected="declared parameter",
                )
            args.append(variables[name])
        else:
            args.append(_symbol(item))
    try:
        return Literal(head, tuple(args))
    except ValueError as exc:
        raise ParseError(str(exc), node.line, node.column) from None


def _parse_literal_sequence(nodes: Sequence[_Node], variables: dict[str, Symbol] | None) -> list[Literal]:
    """Walk the body of an ``and``; tolerates a bare ``not`` before a literal."""
    literals: list[Literal] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        if node.is_atom and node.value.lower() == "not":
            if i + 1 >= len(nodes):
                raise ParseError("dangling not", node.line, node.column, expected="literal")
            literals.append(_parse_one_literal(nodes[i + 1], variables).negate())
            i += 2
        elif node.is_atom:
            raise ParseError(
                f"unexpected token {node.value!r}", node.line, node.column, expected="literal"
            )
        else:
            literals.append(_parse_one_literal(node, variables))
            i += 1
    return literals


def _parse_condition(nodes: Sequence[_Node], variables: dict[str, Symbol] | None) -> list[Literal]:
    """Parse the value of :precondition/:effect/:goal into a literal list."""
    if len(nodes) == 1 and not nodes[0].is_atom:
        items = nodes[0].items or ()
        if items and items[0].is_atom and items[0].value.lower() == "and":
            return _parse_literal_sequence(items[1:], variables)
    return _parse_literal_sequence(nodes, variables)


def _split_sections(nodes: Sequence[_Node]) -> list[tuple[_Node, list[_Node]]]:
    """Group ``:keyword value value ...`` runs inside an action body."""
    sections: list[tuple[_Node, list[_Node]]] = []
    current: tuple[_Node, list[_Node]] | None = None
    for node in nodes:
        if node.is_atom and node.value.startswith(":"):
            current = (node, [])
            sections.append(current)
        else:
            if current is None:
                raise ParseError("expected :keyword", node.line, node.column)
            current[1].append(node)
    return sections


def _parse_action(node: _Node) -> LiftedOperator:
    items = _expect_list(node, "an action")
    if len(items) < 2:
        raise ParseError("action needs a name", node.line, node.column, expected="name")
    name = _atom_value(items[1], "an action name")
    params: list[Symbol] = []
    variables: dict[str, Symbol] = {}
    preconditions: list[Literal] = []
    effects: list[Literal] = []
    for keyword, value in _split_sections(items[2:]):
        kw = keyword.value.lower()  # type: ignore[union-attr]
        if kw == ":parameters":
            if len(value) != 1 or value[0].is_atom:
                raise ParseError(
                    ":parameters takes one list", keyword.line, keyword.column, expected="("
                )
            for var_name, type_name in _parse_typed_list(value[0].items or ()):
                if not var_name.startswith("?"):
                    raise ParseError(
                        f"parameter {var_name} must start with ?", value[0].line, value[0].column
                    )
                try:
                    sym = Symbol(var_name, type_name)
                except ValueError as exc:
                    raise ParseError(str(exc), value[0].line, value[0].column) from None
                if var_name in variables:
                    raise ParseError(f"duplicate parameter {var_name}", value[0].line, value[0].column)
                variables[var_name] = sym
                params.append(sym)
        elif kw == ":precondition":
            preconditions = _parse_condition(value, variables)
        elif kw == ":effect":
            effects = _parse_condition(value, variables)
        else:
            raise ParseError(f"unknown action keyword {kw}", keyword.line, keyword.column)
    try:
        return LiftedOperator(name, tuple(params), frozenset(preconditions), frozenset(effects))
    except (ValueError, ContradictionError) as exc:
        raise ParseError(str(exc), node.line, node.column) from None


def parse_domain(text: str) -> DomainDef:
    """Parse a domain file; every failure is a positioned PddlError."""
    statics: list[str] = []
    for match in _STATIC_DIRECTIVE_RE.finditer(text):
        statics.extend(match.group(1).split())
    root = _read(text)
    items = _expect_list(root, "(define ...)")
    if not items or _atom_value(items[0], "define").lower() != "define":
        raise ParseError("expected define", root.line, root.column, expected="define")
    if len(items) < 2:
        raise ParseError("expected (domain NAME)", root.line, root.column)
    head = _expect_list(items[1], "(domain NAME)")
    if len(head) != 2 or _atom_value(head[0], "domain").lower() != "domain":
        raise ParseError("expected (domain NAME)", items[1].line, items[1].column)
    name = _atom_value(head[1], "a domain name")

    requirements: list[str] = []
    types: list[str] = []
    predicates: list[PredicateDef] = []
    operators: list[LiftedOperator] = []
    for section in items[2:]:
        body = _expect_list(section, "a domain section")
        if not body:
            raise ParseError("empty section", section.line, section.column)
        kw = _atom_value(body[0], "a section keyword").lower()
        if kw == ":requirements":
            requirements.extend(_atom_value(n, "a requirement flag") for n in body[1:])
        elif kw == ":types":
            for node in body[1:]:
                value = _atom_value(node, "a type name")
                if value == "-":
                    raise UnsupportedFeature("type hierarchies are not supported")
                types.append(value)
        elif kw == ":predicates":
            for pred_node in body[1:]:
                pred_items = _expect_list(pred_node, "a predicate declaration")
                if not pred_items:
                    raise ParseError("empty predicate", pred_node.line, pred_node.column)
                pred_name = _atom_value(pred_items[0], "a predicate name")
                if not re.match(r"^[A-Za-z0-9_-]+$", pred_name):
                    raise ParseError(
                        f"bad predicate name {pred_name!r}", pred_node.line, pred_node.column
                    )
                pred_params = tuple(_parse_typed_list(pred_items[1:]))
                predicates.append(PredicateDef(pred_name, pred_params))
        elif kw == ":action":
            operators.append(_parse_action(section))
        elif kw in (":constants", ":functions", ":derived"):
            raise UnsupportedFeature(f"{kw} is not supported")
        else:
            raise ParseError(f"unknown section {kw}", section.line, section.column)
    return DomainDef(
        name=name,
        requirements=tuple(requirements),
        types=tuple(types),
        predicates=tuple(predicates),
        operators=tuple(operators),
        static_predicates=tuple(s for s in statics),
    )


def parse_problem(text: str, domain: DomainDef | None = None) -> ProblemDef:
    """Parse a problem file; with ``domain`` given, predicates are validated too."""
    root = _read(text)
    items = _expect_list(root, "(define ...)")
    if not items or _atom_value(items[0], "define").lower() != "define":
        raise ParseError("expected define", root.line, root.column, expected="define")
    if len(items) < 2:
        raise ParseError("expected (problem NAME)", root.line, root.column)
    head = _expect_list(items[1], "(problem NAME)")
    if len(head) != 2 or _atom_value(head[0], "problem").lower() != "problem":
        raise ParseError("expected (problem NAME)", items[1].line, items[1].column)
    name = _atom_value(head[1], "a problem name")

    domain_name = ""
    objects: list[tuple[Symbol, str]] = []
    init_atoms: list[Literal] = []
    goal: list[Literal] = []
    kinds: dict[str, str] = {}
    for section in items[2:]:
        body = _expect_list(section, "a problem section")
        if not body:
            raise ParseError("empty section", section.line, section.column)
        kw = _atom_value(body[0], "a section keyword").lower()
        if kw == ":domain":
            if len(body) != 2:
                raise ParseError(":domain takes one name", section.line, section.column)
            domain_name = _atom_value(body[1], "a domain name")
        elif kw == ":objects":
            for obj_name, type_name in _parse_typed_list(body[1:]):
                if obj_name.startswith("?"):
                    raise ParseError(
                        f"objects may not be variables: {obj_name}", section.line, section.column
                    )
                try:
                    objects.append((Symbol(obj_name, type_name), type_name))
                except ValueError as exc:
                    raise ParseError(str(exc), section.line, section.column) from None
                kinds[obj_name] = type_name
        elif kw == ":init":
            for lit in _parse_literal_sequence(body[1:], variables=None):
                if not lit.positive:
                    raise ParseError(
                        "init atoms must be positive", section.line, section.column
                    )
                init_atoms.append(_retype(lit, kinds))
        elif kw == ":goal":
            goal = [_retype(l, kinds) for l in _parse_condition(body[1:], variables=None)]
        else:
            raise ParseError(f"unknown section {kw}", section.line, section.column)

    declared = {sym.name for sym, _ in objects}
    for lit in init_atoms + goal:
        for arg in lit.args:
            if arg.name not in declared:
                raise UndeclaredObject(f"{lit} uses undeclared object {arg.name}")
    if domain is not None:
        for lit in init_atoms + goal:
            domain._check_literal(lit, f"problem {name}")
    return ProblemDef(
        name=name,
        domain_name=domain_name,
        objects=tuple(objects),
        init=State.of(init_atoms),
        goal=frozenset(goal),
    )


def _retype(lit: Literal, kinds: dict[str, str]) -> Literal:
    return Literal(
        lit.predicate,
        tuple(Symbol(a.name, kinds.get(a.name, a.kind)) for a in lit.args),
        lit.positive,
    )


# ---------------------------------------------------------------------------
# emission


def _emit_literal(lit: Literal) -> str:
    parts = " ".join([lit.predicate] + [a.name for a in lit.args])
    body = f"({parts})"
    return body if lit.positive else f"(not {body})"


def _emit_literal_block(literals: Iterable[Literal], indent: str) -> str:
    lits = sorted_literals(literals)
    if not lits:
        return "(and)"
    inner = "\n".join(f"{indent}  {_emit_literal(l)}" for l in lits)
    return "(and\n" + inner + ")"


def _emit_typed(pairs: Iterable[tuple[str, str]]) -> str:
    return " ".join(f"{name} - {typ}" for name, typ in pairs)


def emit_action(op: LiftedOperator, indent: str = "") -> str:
    """Pretty-print one action block, literals in canonical order."""
    params = _emit_typed((p.name, p.kind) for p in op.parameters)
    lines = [
        f"{indent}(:action {op.name}",
        f"{indent}  :parameters ({params})",
        f"{indent}  :precondition " + _emit_literal_block(op.preconditions, indent + "  "),
        f"{indent}  :effect " + _emit_literal_block(op.effects, indent + "  ") + ")",
    ]
    return "\n".join(lines)


def emit_domain(domain: DomainDef) -> str:
    """Deterministic domain text; parse_domain(emit_domain(d)) == d."""
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append("  (:requirements " + " ".join(domain.requirements) + ")")
    if domain.types:
        lines.append("  (:types " + " ".join(domain.types) + ")")
    if domain.predicates:
        lines.append("  (:predicates")
        for pred in domain.predicates:
            decl = pred.name if not pred.params else f"{pred.name} {_emit_typed(pred.params)}"
            lines.append(f"    ({decl})")
        lines[-1] += ")"
    if domain.static_predicates:
        lines.append("  ; :static " + " ".join(domain.static_predicates))
    for op in domain.operators:
        lines.append(emit_action(op, indent="  "))
    text = "\n".join(lines)
    # the closing paren may not land on a comment line
    text += "\n)" if lines[-1].lstrip().startswith(";") else ")"
    return text + "\n"


def emit_problem(problem: ProblemDef) -> str:
    """Deterministic problem text; parse_problem(emit_problem(p)) == p."""
    lines = [f"(define (problem {problem.name})"]
    if problem.domain_name:
        lines.append(f"  (:domain {problem.domain_name})")
    if problem.objects:
        lines.append("  (:objects")
        for run in _type_runs(problem.objects):
            names = " ".join(sym.name for sym, _ in run)
            lines.append(f"    {names} - {run[0][1]}")
        lines[-1] += ")"
    if problem.init.atoms:
        lines.append("  (:init")
        for atom in problem.init.sorted_atoms():
            lines.append(f"    {_emit_literal(atom)}")
        lines[-1] += ")"
    lines.append("  (:goal " + _emit_literal_block(problem.goal, "  ") + "))")
    return "\n".join(lines) + "\n"


def _type_runs(objects: Sequence[tuple[Symbol, str]]) -> list[list[tuple[Symbol, str]]]:
    """Consecutive same-type runs, preserving declaration order."""
    runs: list[list[tuple[Symbol, str]]] = []
    for entry in objects:
        if runs and runs[-1][0][1] == entry[1]:
            runs[-1].append(entry)
        else:
            runs.append([entry])
    return runs


def normalize_whitespace(text: str) -> str:
    """Collapse all whitespace runs; used by golden-file comparisons."""
    return " ".join(text.split())
