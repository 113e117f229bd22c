"""Mustache-style template engine with an expression language.

Tags `{expr}`, sections `{#expr}...{/expr}`, inverted sections
`{^expr}...{/expr}`; `{{` emits a literal brace. Expressions support
member access, indexing, arithmetic, comparison, logic, a conditional
operator and a handful of builtins.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional


class TemplateSyntaxError(Exception):
    def __init__(self, position: int, message: str):
        super().__init__(f"at offset {position}: {message}")
        self.position = position


class ExpressionTypeError(Exception):
    pass


class UnresolvedTags(Exception):
    def __init__(self, tags: list[str]):
        super().__init__("unresolved tags: " + ", ".join(tags))
        self.tags = tags


class _Null:
    def __repr__(self):
        return "null"

    def __bool__(self):
        return False


NULL = _Null()


# --- template structure -------------------------------------------------------

@dataclass
class Static:
    text: str


@dataclass
class Tag:
    raw: str
    expr: "Expr"
    position: int


@dataclass
class Section:
    raw: str
    expr: "Expr"
    inverted: bool
    body: list
    position: int


@dataclass
class TemplateDocument:
    nodes: list


def parse_template(text: str) -> TemplateDocument:
    root: list = []
    stack: list[tuple[str, Section]] = []
    current = root
    i = 0
    n = len(text)
    while i < n:
        brace = text.find("{", i)
        if brace == -1:
            current.append(Static(text[i:]))
            break
        if brace > i:
            current.append(Static(text[i:brace]))
        if text.startswith("{{", brace):
            current.append(Static("{"))
            i = brace + 2
            continue
        close = text.find("}", brace)
        if close == -1:
            raise TemplateSyntaxError(brace, "unclosed tag")
        inner = text[brace + 1 : close].strip()
        if not inner:
            raise TemplateSyntaxError(brace, "empty tag")
        if inner[0] in "#^":
            label = inner[1:].strip()
            section = Section(label, parse_expression(label, brace), inner[0] == "^", [], brace)
            current.append(section)
            stack.append((label, section))
            current = section.body
        elif inner[0] == "/":
            label = inner[1:].strip()
            if not stack:
                raise TemplateSyntaxError(brace, f"closing '{label}' with no open section")
            open_label, _ = stack.pop()
            if open_label != label:
                raise TemplateSyntaxError(brace, f"section '{open_label}' closed as '{label}'")
            current = stack[-1][1].body if stack else root
        else:
            current.append(Tag(inner, parse_expression(inner, brace), brace))
        i = close + 1
    if stack:
        raise TemplateSyntaxError(stack[-1][1].position, f"section '{stack[-1][0]}' never closed")
    return TemplateDocument(root)


# --- expressions ---------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: object


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Member:
    obj: object
    name: str


@dataclass(frozen=True)
class Index:
    obj: object
    index: object


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Conditional:
    cond: object
    then: object
    other: object


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Expr = object

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<name>[A-Za-z_@][A-Za-z0-9_]*)"
    r"|(?P<str>'(?:[^'\\]|\\.)*'|\"(?:[^\"\\]|\\.)*\")"
    r"|(?P<op>==|!=|<=|>=|&&|\|\||[-+*/%<>!?:.\[\](),]))"
)

BUILTINS = ("upper", "lower", "length", "join", "default")


class _ExprParser:
    def __init__(self, source: str, position: int):
        self.source = source
        self.position = position
        self.tokens: list[tuple[str, str]] = []
        i = 0
        while i < len(source):
            m = _TOKEN_RE.match(source, i)
            if m is None:
                if source[i:].strip():
                    raise TemplateSyntaxError(position, f"bad character {source[i:].strip()[0]!r} in expression")
                break
            i = m.end()
            for group in ("num", "name", "str", "op"):
                if m.group(group) is not None:
                    self.tokens.append((group, m.group(group)))
                    break
        self.pos = 0

    def peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def accept(self, kind: str, text: Optional[str] = None):
        tok = self.peek()
        if tok and tok[0] == kind and (text is None or tok[1] == text):
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str, text: Optional[str] = None):
        tok = self.accept(kind, text)
        if tok is None:
            raise TemplateSyntaxError(self.position, f"expected {text or kind} in expression '{self.source}'")
        return tok

    def parse(self) -> Expr:
        expr = self.ternary()
        if self.peek() is not None:
            raise TemplateSyntaxError(self.position, f"trailing tokens in expression '{self.source}'")
        return expr

    def ternary(self) -> Expr:
        cond = self.logic_or()
        if self.accept("op", "?"):
            then = self.ternary()
            self.expect("op", ":")
            other = self.ternary()
            return Conditional(cond, then, other)
        return cond

    def logic_or(self) -> Expr:
        left = self.logic_and()
        while self.accept("op", "||"):
            left = Binary("||", left, self.logic_and())
        return left

    def logic_and(self) -> Expr:
        left = self.equality()
        while self.accept("op", "&&"):
            left = Binary("&&", left, self.equality())
        return left

    def equality(self) -> Expr:
        left = self.comparison()
        while True:
            for op in ("==", "!="):
                if self.accept("op", op):
                    left = Binary(op, left, self.comparison())
                    break
            else:
                return left

    def comparison(self) -> Expr:
        left = self.additive()
        while True:
            for op in ("<=", ">=", "<", ">"):
                if self.accept("op", op):
                    left = Binary(op, left, self.additive())
                    break
            else:
                return left

    def additive(self) -> Expr:
        left = self.multiplicative()
        while True:
            for op in ("+", "-"):
                if self.accept("op", op):
                    left = Binary(op, left, self.multiplicative())
                    break
            else:
                return left

    def multiplicative(self) -> Expr:
        left = self.unary()
        while True:
            for op in ("*", "/", "%"):
                if self.accept("op", op):
                    left = Binary(op, left, self.unary())
                    break
            else:
                return left

    def unary(self) -> Expr:
        if self.accept("op", "!"):
            return Unary("!", self.unary())
        if self.accept("op", "-"):
            return Unary("-", self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        expr = self.primary()
        while True:
            if self.accept("op", "."):
                name = self.expect("name")
                expr = Member(expr, name[1])
            elif self.accept("op", "["):
                index = self.ternary()
                self.expect("op", "]")
                expr = Index(expr, index)
            else:
                return expr

    def primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise TemplateSyntaxError(self.position, f"unexpected end of expression '{self.source}'")
        kind, text = tok
        if kind == "num":
            self.pos += 1
            return Lit(float(text) if "." in text else int(text))
        if kind == "str":
            self.pos += 1
            body = text[1:-1]
            return Lit(re.sub(r"\\(.)", r"\1", body))
        if kind == "name":
            self.pos += 1
            if text == "true":
                return Lit(True)
            if text == "false":
                return Lit(False)
            if text in BUILTINS and self.accept("op", "("):
                args = []
                if not self.accept("op", ")"):
                    while True:
                        args.append(self.ternary())
                        if self.accept("op", ")"):
                            break
                        self.expect("op", ",")
                return Call(text, tuple(args))
            return Name(text)
        if kind == "op" and text == "(":
            self.pos += 1
            inner = self.ternary()
            self.expect("op", ")")
            return inner
        raise TemplateSyntaxError(self.position, f"unexpected '{text}' in expression '{self.source}'")


def parse_expression(source: str, position: int = 0) -> Expr:
    return _ExprParser(source, position).parse()


# --- evaluation ----------------------------------------------------------------

def truthy(value) -> bool:
    if value is NULL or value is None:
        return False
    if isinstance(value, (list, tuple, dict, str)):
        return len(value) > 0
    return bool(value)


def stringify(value) -> str:
    if value is NULL or value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:g}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return ", ".join(stringify(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, separators=(", ", ": "))
    return str(value)


def _number(value, op: str):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ExpressionTypeError(f"operator '{op}' needs numbers, got {stringify(value)!r}")
    return value


def evaluate(expr: Expr, scopes: list[dict]):
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Name):
        for scope in reversed(scopes):
            if expr.name in scope:
                value = scope[expr.name]
                return NULL if value is None else value
        return NULL
    if isinstance(expr, Member):
        obj = evaluate(expr.obj, scopes)
        if obj is NULL:
            return NULL
        if isinstance(obj, dict):
            value = obj.get(expr.name, NULL)
            return NULL if value is None else value
        return NULL
    if isinstance(expr, Index):
        obj = evaluate(expr.obj, scopes)
        idx = evaluate(expr.index, scopes)
        if obj is NULL or idx is NULL:
            return NULL
        try:
            value = obj[int(idx) if isinstance(obj, (list, tuple)) else idx]
        except (KeyError, IndexError, TypeError, ValueError):
            return NULL
        return NULL if value is None else value
    if isinstance(expr, Unary):
        value = evaluate(expr.operand, scopes)
        if expr.op == "!":
            return not truthy(value)
        if value is NULL:
            return NULL
        return -_number(value, "-")
    if isinstance(expr, Conditional):
        return evaluate(expr.then if truthy(evaluate(expr.cond, scopes)) else expr.other, scopes)
    if isinstance(expr, Binary):
        return _binary(expr, scopes)
    if isinstance(expr, Call):
        return _call(expr, scopes)
    raise TypeError(expr)


def _binary(expr: Binary, scopes: list[dict]):
    op = expr.op
    if op == "&&":
        left = evaluate(expr.left, scopes)
        return evaluate(expr.right, scopes) if truthy(left) else left
    if op == "||":
        left = evaluate(expr.left, scopes)
        return left if truthy(left) else evaluate(expr.right, scopes)
    left = evaluate(expr.left, scopes)
    right = evaluate(expr.right, scopes)
    if op == "==":
        return _plain(left) == _plain(right)
    if op == "!=":
        return _plain(left) != _plain(right)
    if left is NULL or right is NULL:
        return NULL
    if op in ("<", "<=", ">", ">="):
        if isinstance(left, str) and isinstance(right, str):
            pass
        else:
            left = _number(left, op)
            right = _number(right, op)
        return {"<": left < right, "<=": left <= right, ">": left > right, ">=": left >= right}[op]
    left = _number(left, op)
    right = _number(right, op)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if right == 0:
            raise ExpressionTypeError("division by zero")
        return left / right
    if op == "%":
        if right == 0:
            raise ExpressionTypeError("modulo by zero")
        return left % right
    raise TypeError(op)


def _plain(value):
    return None if value is NULL else value


def _call(expr: Call, scopes: list[dict]):
    name = expr.func
    args = [evaluate(a, scopes) for a in expr.args]

    def arity(n):
        if len(args) != n:
            raise ExpressionTypeError(f"{name}() takes {n} argument(s), got {len(args)}")

    if name == "default":
        arity(2)
        return args[1] if args[0] is NULL else args[0]
    if name == "upper":
        arity(1)
        return NULL if args[0] is NULL else stringify(args[0]).upper()
    if name == "lower":
        arity(1)
        return NULL if args[0] is NULL else stringify(args[0]).lower()
    if name == "length":
        arity(1)
        if args[0] is NULL:
            return 0
        if isinstance(args[0], (str, list, tuple, dict)):
            return len(args[0])
        raise ExpressionTypeError("length() needs a string or collection")
    if name == "join":
        arity(2)
        if args[0] is NULL:
            return ""
        if not isinstance(args[0], (list, tuple)):
            raise ExpressionTypeError("join() needs an array")
        return stringify(args[1]).join(stringify(v) for v in args[0])
    raise TypeError(name)


# --- rendering -------------------------------------------------------------------

@dataclass
class RenderResult:
    text: str
    unresolved: list = field(default_factory=list)


def render(tpl: TemplateDocument, root: dict, strict: bool = True) -> str:
    out: list[str] = []
    unresolved: list[str] = []

    def walk(nodes: list, scopes: list[dict]):
        for node in nodes:
            if isinstance(node, Static):
                out.append(node.text)
            elif isinstance(node, Tag):
                try:
                    value = evaluate(node.expr, scopes)
                except ExpressionTypeError as exc:
                    raise ExpressionTypeError(f"tag '{{{node.raw}}}' at offset {node.position}: {exc}") from None
                if value is NULL:
                    if strict:
                        unresolved.append(node.raw)
                else:
                    out.append(stringify(value))
            elif isinstance(node, Section):
                value = evaluate(node.expr, scopes)
                if node.inverted:
                    if not truthy(value):
                        walk(node.body, scopes)
                    continue
                if isinstance(value, (list, tuple)):
                    for i, item in enumerate(value):
                        scope = dict(item) if isinstance(item, dict) else {"this": item}
                        scope["@index"] = i
                        walk(node.body, scopes + [scope])
                elif truthy(value):
                    scope = dict(value) if isinstance(value, dict) else {"this": value}
                    walk(node.body, scopes + [scope])
    walk(tpl.nodes, [root])
    if unresolved:
        raise UnresolvedTags(unresolved)
    return "".join(out)
