"""First-order sentences over graphs: parser, naive evaluator, and the
relativizing rewriter that transfers a sentence from a graph to its
subdivide-once-plus-leaf embedding.

Concrete syntax:

    phi ::= "E(" var "," var ")" | var "=" var | "~" phi
          | "(" phi "&" phi ")" | "(" phi "|" phi ")" | "(" phi "->" phi ")"
          | "exists " var ". " phi | "forall " var ". " phi

Variables match [a-z][a-z0-9]*; "exists" and "forall" are reserved.  The
parser additionally accepts redundant grouping parentheses; the serializer
emits the canonical minimal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ContractError, ParseError, UnboundVariableError
from .reductions import Graph, distance_graph, hypercube_embedding


@dataclass(frozen=True)
class Adjacent:
    x: str
    y: str


@dataclass(frozen=True)
class Equal:
    x: str
    y: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


Formula = Union[Adjacent, Equal, Not, And, Or, Implies, Exists, ForAll]

_BINARY = {And: "&", Or: "|", Implies: "->"}
_KEYWORDS = ("exists", "forall")


def formula_size(phi: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(phi, (Adjacent, Equal)):
        return 1
    if isinstance(phi, Not):
        return 1 + formula_size(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return 1 + formula_size(phi.left) + formula_size(phi.right)
    return 1 + formula_size(phi.body)


def free_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Adjacent, Equal)):
        return frozenset((phi.x, phi.y))
    if isinstance(phi, Not):
        return free_variables(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_variables(phi.left) | free_variables(phi.right)
    return free_variables(phi.body) - {phi.var}


def all_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Adjacent, Equal)):
        return frozenset((phi.x, phi.y))
    if isinstance(phi, Not):
        return all_variables(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return all_variables(phi.left) | all_variables(phi.right)
    return all_variables(phi.body) | {phi.var}


def to_text(phi: Formula) -> str:
    if isinstance(phi, Adjacent):
        return f"E({phi.x},{phi.y})"
    if isinstance(phi, Equal):
        return f"{phi.x}={phi.y}"
    if isinstance(phi, Not):
        return f"~{to_text(phi.body)}"
    if isinstance(phi, (And, Or, Implies)):
        return f"({to_text(phi.left)} {_BINARY[type(phi)]} {to_text(phi.right)})"
    word = "exists" if isinstance(phi, Exists) else "forall"
    return f"{word} {phi.var}. {to_text(phi.body)}"


_TOKEN = re.compile(r"->|[()~&|=.,]|E(?![a-z0-9])|[a-z][a-z0-9]*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            match = _TOKEN.match(text, pos)
            if match is None:
                raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
            self.tokens.append((match.group(), pos))
            pos = match.end()
        self.cursor = 0

    def peek(self) -> str | None:
        if self.cursor < len(self.tokens):
            return self.tokens[self.cursor][0]
        return None

    def take(self, expected: str | None = None) -> str:
        if self.cursor >= len(self.tokens):
            raise ParseError(f"unexpected end of formula, expected {expected or 'more input'}")
        token, pos = self.tokens[self.cursor]
        if expected is not None and token != expected:
            raise ParseError(f"expected {expected!r} at position {pos}, got {token!r}")
        self.cursor += 1
        return token

    def variable(self) -> str:
        if self.cursor >= len(self.tokens):
            raise ParseError("unexpected end of formula, expected a variable")
        token, pos = self.tokens[self.cursor]
        if token in _KEYWORDS or not re.fullmatch(r"[a-z][a-z0-9]*", token):
            raise ParseError(f"expected a variable at position {pos}, got {token!r}")
        self.cursor += 1
        return token

    def formula(self) -> Formula:
        token = self.peek()
        if token is None:
            raise ParseError("empty formula")
        if token == "~":
            self.take()
            return Not(self.formula())
        if token in _KEYWORDS:
            self.take()
            var = self.variable()
            self.take(".")
            body = self.formula()
            return Exists(var, body) if token == "exists" else ForAll(var, body)
        if token == "(":
            self.take()
            left = self.formula()
            op = self.peek()
            if op == ")":
                # Redundant grouping; accepted, not part of the canonical form.
                self.take()
                return left
            if op not in ("&", "|", "->"):
                raise ParseError(f"expected a connective, got {op!r}")
            self.take()
            right = self.formula()
            self.take(")")
            if op == "&":
                return And(left, right)
            if op == "|":
                return Or(left, right)
            return Implies(left, right)
        if token == "E":
            self.take()
            self.take("(")
            x = self.variable()
            self.take(",")
            y = self.variable()
            self.take(")")
            return Adjacent(x, y)
        x = self.variable()
        self.take("=")
        y = self.variable()
        return Equal(x, y)


def parse_formula(text: str, *, require_sentence: bool = True) -> Formula:
    """Parse the concrete syntax; sentences only unless require_sentence=False."""
    parser = _Parser(text)
    phi = parser.formula()
    if parser.cursor != len(parser.tokens):
        token, pos = parser.tokens[parser.cursor]
        raise ParseError(f"trailing input {token!r} at position {pos}")
    if require_sentence:
        free = free_variables(phi)
        if free:
            raise UnboundVariableError(
                "unbound variable(s): " + ", ".join(sorted(free))
            )
    return phi


_MISSING = object()


def evaluate(graph: Graph, phi: Formula, binding: dict[str, int] | None = None) -> bool:
    """Standard semantics over the graph's symmetric irreflexive adjacency.

    Naive: quantifiers loop over all vertices, cost O(n^depth * size).
    Sentences only, unless `binding` assigns a vertex to every free variable.
    """
    env: dict[str, int] = dict(binding) if binding else {}
    unbound = free_variables(phi) - env.keys()
    if unbound:
        raise ContractError(
            "unassigned free variable(s): " + ", ".join(sorted(unbound))
        )
    adjacency = graph.adjacency()
    vertices = range(1, graph.n + 1)

    def rec(f: Formula) -> bool:
        if isinstance(f, Adjacent):
            return env[f.y] in adjacency[env[f.x]]
        if isinstance(f, Equal):
            return env[f.x] == env[f.y]
        if isinstance(f, Not):
            return not rec(f.body)
        if isinstance(f, And):
            return rec(f.left) and rec(f.right)
        if isinstance(f, Or):
            return rec(f.left) or rec(f.right)
        if isinstance(f, Implies):
            return (not rec(f.left)) or rec(f.right)
        saved = env.get(f.var, _MISSING)
        if isinstance(f, Exists):
            result = False
            for v in vertices:
                env[f.var] = v
                if rec(f.body):
                    result = True
                    break
        else:
            result = True
            for v in vertices:
                env[f.var] = v
                if not rec(f.body):
                    result = False
                    break
        if saved is _MISSING:
            env.pop(f.var, None)
        else:
            env[f.var] = saved
        return result

    return rec(phi)


def default_vertex_classifier() -> Formula:
    """The one-free-variable test the rewriter relativizes quantifiers with:
    every neighbor of x has a neighbor other than x.  Pluggable: any formula
    with exactly one free variable works in its place."""
    return ForAll(
        "y",
        Implies(
            Adjacent("x", "y"),
            Exists("z", And(Not(Equal("z", "x")), Adjacent("y", "z"))),
        ),
    )


def rewrite_sentence(phi: Formula, classifier: Formula | None = None) -> Formula:
    """Transfer a sentence to the subdivision embedding.

    Every "exists x" becomes "exists x (classifier(x) & ...)", every
    "forall x" becomes "forall x (classifier(x) -> ...)", and every adjacency
    atom E(x,y) becomes "exists s ((E(x,s) & E(s,y)) & ~(x=y))" with s fresh.
    Bound variables of classifier copies are freshened, so no capture is
    possible.  With the default classifier the output has at most 20 times
    the input's node count.
    """
    if free_variables(phi):
        raise ContractError("only sentences can be rewritten")
    classifier = default_vertex_classifier() if classifier is None else classifier
    cfree = free_variables(classifier)
    if len(cfree) != 1:
        raise ContractError(
            f"classifier must have exactly one free variable, has {len(cfree)}"
        )
    (hole,) = cfree

    used = set(all_variables(phi)) | set(all_variables(classifier))
    counter = 0

    def fresh() -> str:
        nonlocal counter
        while True:
            name = "s" if counter == 0 else f"s{counter}"
            counter += 1
            if name not in used:
                used.add(name)
                return name

    def instantiate(f: Formula, rename: dict[str, str]) -> Formula:
        if isinstance(f, Adjacent):
            return Adjacent(rename.get(f.x, f.x), rename.get(f.y, f.y))
        if isinstance(f, Equal):
            return Equal(rename.get(f.x, f.x), rename.get(f.y, f.y))
        if isinstance(f, Not):
            return Not(instantiate(f.body, rename))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(instantiate(f.left, rename), instantiate(f.right, rename))
        new = fresh()
        body = instantiate(f.body, {**rename, f.var: new})
        return type(f)(new, body)

    def classify(var: str) -> Formula:
        return instantiate(classifier, {hole: var})

    def rec(f: Formula) -> Formula:
        if isinstance(f, Adjacent):
            s = fresh()
            return Exists(
                s,
                And(And(Adjacent(f.x, s), Adjacent(s, f.y)), Not(Equal(f.x, f.y))),
            )
        if isinstance(f, Equal):
            return f
        if isinstance(f, Not):
            return Not(rec(f.body))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(rec(f.left), rec(f.right))
        if isinstance(f, Exists):
            return Exists(f.var, And(classify(f.var), rec(f.body)))
        return ForAll(f.var, Implies(classify(f.var), rec(f.body)))

    return rec(phi)


def embedding_transfer_report(
    graph: Graph, phi: Formula, classifier: Formula | None = None
) -> dict:
    """Evaluate a sentence on a graph and its rewritten form on the graph's
    subdivision embedding; agreement is recorded, never asserted."""
    rewritten = rewrite_sentence(phi, classifier)
    embedded = distance_graph(hypercube_embedding(graph), 1)
    lhs = evaluate(graph, phi)
    rhs = evaluate(embedded, rewritten)
    before = formula_size(phi)
    after = formula_size(rewritten)
    return {
        "h_vertices": graph.n,
        "h_edges": graph.m,
        "g_vertices": embedded.n,
        "formula": to_text(phi),
        "h_holds": lhs,
        "g_holds": rhs,
        "agree": lhs == rhs,
        "nodes_before": before,
        "nodes_after": after,
        "ratio": after / before,
    }
