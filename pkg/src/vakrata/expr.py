# ─────────────────────────── src/vakrata/expr.py ───────────────────────────
"""Closed-form scalar expressions for metric components and potentials.

Grammar (EBNF, see ``docs/spec-format.md``)::

    sum     = product { ("+" | "-") product } ;
    product = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = atom [ "^" unary ] ;              (* right-associative *)
    atom    = NUMBER | NAME | NAME "(" sum { "," sum } ")" | "(" sum ")" ;

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  Only smooth
primitives are admitted since the jets downstream take up to 8 derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from vakrata.errors import ArityError, ExprDomainError, ExprError, ExprSyntaxError, UnknownIdentifierError

__all__ = [
    "NodeKind",
    "ExprNode",
    "FUNCTIONS",
    "parse",
    "eval_scalar",
    "pretty",
    "bind",
    "free_parameters",
]

# name -> arity
FUNCTIONS: dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "exp": 1,
    "log": 1,
    "sqrt": 1,
    "pow": 2,
}
CONSTANTS: dict[str, float] = {"pi": math.pi}

_GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> sub

    ?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

    ?unary: power
        | "-" unary         -> neg
        | "+" unary         -> pos

    ?power: atom
        | atom "^" unary    -> pow

    ?atom: NUMBER           -> number
         | NAME             -> name
         | NAME "(" args ")" -> call
         | "(" sum ")"

    args: sum ("," sum)*

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    %import common.NUMBER
    %import common.WS
    %ignore WS
"""

_PARSER = Lark(_GRAMMAR, parser="lalr", maybe_placeholders=False)


class NodeKind(str, Enum):
    CONST = "const"
    COORD = "coord"
    PARAM = "param"
    UNARY = "unary"
    BINARY = "binary"
    CALL = "call"


@dataclass(frozen=True)
class ExprNode:
    """Immutable AST node.

    ``name`` holds the operator symbol (unary/binary), the function name
    (call), or the identifier (coordinate/parameter).
    """
    kind: NodeKind
    children: tuple["ExprNode", ...] = ()
    value: float | None = None
    index: int | None = None
    name: str | None = None

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=-1)

    def __str__(self) -> str:
        return pretty(self)


def _const(v: float) -> ExprNode:
    return ExprNode(NodeKind.CONST, value=float(v))


def _binary(op: str, a: ExprNode, b: ExprNode) -> ExprNode:
    return ExprNode(NodeKind.BINARY, (a, b), name=op)


# ──────────────────────────────────────────────────────────────────────────
# parsing
# ──────────────────────────────────────────────────────────────────────────
class _AstBuilder(Transformer):
    def __init__(self, coords: Sequence[str], params: Iterable[str]):
        super().__init__()
        self._coords = {c: i for i, c in enumerate(coords)}
        self._params = set(params)

    def number(self, items):
        return _const(float(items[0]))

    def name(self, items):
        tok: Token = items[0]
        ident = str(tok)
        if ident in self._coords:
            return ExprNode(NodeKind.COORD, index=self._coords[ident], name=ident)
        if ident in self._params:
            return ExprNode(NodeKind.PARAM, name=ident)
        if ident in CONSTANTS:
            return _const(CONSTANTS[ident])
        raise UnknownIdentifierError(ident, tok.column)

    def args(self, items):
        return tuple(items)

    def call(self, items):
        tok, args = items
        func = str(tok)
        if func not in FUNCTIONS:
            raise UnknownIdentifierError(func, tok.column)
        if len(args) != FUNCTIONS[func]:
            raise ArityError(func, FUNCTIONS[func], len(args))
        return ExprNode(NodeKind.CALL, tuple(args), name=func)

    def neg(self, items):
        return ExprNode(NodeKind.UNARY, (items[0],), name="-")

    def pos(self, items):
        return items[0]

    def add(self, items):
        return _binary("+", *items)

    def sub(self, items):
        return _binary("-", *items)

    def mul(self, items):
        return _binary("*", *items)

    def div(self, items):
        return _binary("/", *items)

    def pow(self, items):
        return _binary("^", *items)


def parse(text: str, coords: Sequence[str], params: Iterable[str] = ()) -> ExprNode:
    """Parse ``text`` into an AST over ``coords`` and the declared ``params``."""
    if not text or not text.strip():
        raise ExprSyntaxError(text, 1, ["expression"])
    try:
        tree = _PARSER.parse(text)
    except UnexpectedToken as exc:
        raise ExprSyntaxError(text, exc.column if exc.column else len(text), list(exc.expected)) from None
    except UnexpectedCharacters as exc:
        raise ExprSyntaxError(text, exc.column, list(exc.allowed or [])) from None
    except UnexpectedEOF as exc:
        raise ExprSyntaxError(text, len(text) + 1, list(exc.expected)) from None
    except UnexpectedInput as exc:  # pragma: no cover - lark keeps adding subclasses
        raise ExprSyntaxError(text, getattr(exc, "column", 0)) from None
    try:
        return _AstBuilder(coords, params).transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, ExprError):
            raise exc.orig_exc from None
        raise


# ──────────────────────────────────────────────────────────────────────────
# printing / binding
# ──────────────────────────────────────────────────────────────────────────
def pretty(node: ExprNode) -> str:
    """Fully parenthesised rendering; ``parse(pretty(e))`` rebuilds ``e``."""
    match node.kind:
        case NodeKind.CONST:
            return repr(node.value) if node.value >= 0 else f"({node.value!r})"
        case NodeKind.COORD | NodeKind.PARAM:
            return node.name
        case NodeKind.UNARY:
            return f"(-{pretty(node.children[0])})"
        case NodeKind.BINARY:
            a, b = node.children
            return f"({pretty(a)} {node.name} {pretty(b)})"
        case NodeKind.CALL:
            return f"{node.name}({', '.join(pretty(c) for c in node.children)})"
    raise ExprError(f"unknown node kind {node.kind!r}")


def free_parameters(node: ExprNode) -> set[str]:
    if node.kind is NodeKind.PARAM:
        return {node.name}
    out: set[str] = set()
    for c in node.children:
        out |= free_parameters(c)
    return out


def bind(node: ExprNode, params: Mapping[str, float]) -> ExprNode:
    """Replace parameter references by their numeric values."""
    if node.kind is NodeKind.PARAM:
        if node.name not in params:
            raise UnknownIdentifierError(node.name)
        return _const(params[node.name])
    if not node.children:
        return node
    return ExprNode(node.kind, tuple(bind(c, params) for c in node.children), node.value, node.index, node.name)


# ──────────────────────────────────────────────────────────────────────────
# evaluation
# ──────────────────────────────────────────────────────────────────────────
def _real_pow(a: float, b: float, node: ExprNode) -> float:
    if a == 0.0 and b < 0:
        raise ExprDomainError("division by zero", pretty(node))
    if a < 0 and not float(b).is_integer():
        raise ExprDomainError("non-integer power of a negative base", pretty(node))
    return a ** int(b) if float(b).is_integer() else a ** b


def eval_scalar(expr: ExprNode, point: Sequence[float], params: Mapping[str, float] | None = None) -> float:
    """IEEE double value of ``expr`` at ``point``."""
    params = params or {}

    def ev(node: ExprNode) -> float:
        match node.kind:
            case NodeKind.CONST:
                return node.value
            case NodeKind.COORD:
                if node.index >= len(point):
                    raise ExprError(f"coordinate {node.name!r} missing from a {len(point)}-dimensional point")
                return float(point[node.index])
            case NodeKind.PARAM:
                if node.name not in params:
                    raise UnknownIdentifierError(node.name)
                return float(params[node.name])
            case NodeKind.UNARY:
                return -ev(node.children[0])
        args = [ev(c) for c in node.children]
        try:
            return _apply(node, args)
        except OverflowError:
            raise ExprDomainError("overflow", pretty(node)) from None

    return ev(expr)


def _apply(node: ExprNode, args: list[float]) -> float:
    if node.kind is NodeKind.BINARY:
        a, b = args
        match node.name:
            case "+":
                return a + b
            case "-":
                return a - b
            case "*":
                return a * b
            case "/":
                if b == 0.0:
                    raise ExprDomainError("division by zero", pretty(node))
                return a / b
            case "^":
                return _real_pow(a, b, node)
    match node.name:
        case "log":
            if args[0] <= 0:
                raise ExprDomainError("log of a non-positive value", pretty(node))
            return math.log(args[0])
        case "sqrt":
            if args[0] < 0:
                raise ExprDomainError("sqrt of a negative value", pretty(node))
            return math.sqrt(args[0])
        case "pow":
            return _real_pow(args[0], args[1], node)
        case "sin" | "cos" | "tan" | "exp":
            return getattr(math, node.name)(args[0])
    raise ExprError(f"unsupported operation {node.name!r}")
