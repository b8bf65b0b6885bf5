from __future__ import annotations

import math

from core.types import RiskExpressionError

from .functions import FUNCTIONS
from .lexer import Token, TokenType, tokenize
from .nodes import (
    Binary,
    Call,
    Covariate,
    Dist,
    ExprContext,
    Indicator,
    Negate,
    Node,
    Number,
    Param,
    RiskExpr,
    walk,
)

_PAIR_SYMBOLS = {"i", "k"}


class _Parser:
    """递归下降：expr → term → unary → power → primary。"""

    def __init__(self, text: str, context: ExprContext):
        self.text = text
        self.context = context
        self.tokens = tokenize(text)
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        if token.type is not TokenType.EOF:
            self.position += 1
        return token

    def error(self, message: str, token: Token | None = None) -> RiskExpressionError:
        token = token or self.current
        return RiskExpressionError(message, offset=token.offset, text=self.text)

    def expect(self, kind: TokenType, text: str | None = None) -> Token:
        token = self.current
        if token.type is not kind or (text is not None and token.text != text):
            wanted = text or kind.value
            found = token.text or token.type.value
            raise self.error(f"expected {wanted!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.type is not TokenType.EOF:
            raise self.error(f"unexpected {self.current.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.type is TokenType.OP and self.current.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.current.type is TokenType.OP and self.current.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.current.type is TokenType.OP and self.current.text == "-":
            self.advance()
            return Negate(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.current.type is TokenType.OP and self.current.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def comparison(self) -> Indicator:
        left = self.expr()
        if self.current.type is not TokenType.CMP:
            raise self.error("ind() needs a comparison")
        op = self.advance().text
        return Indicator(op, left, self.expr())

    def primary(self) -> Node:
        token = self.current
        if token.type is TokenType.NUMBER:
            self.advance()
            return Number(float(token.text))
        if token.type is TokenType.LPAREN:
            self.advance()
            node = self.expr()
            self.expect(TokenType.RPAREN)
            return node
        if token.type is TokenType.IDENT:
            return self.identifier()
        raise self.error(f"unexpected {token.text or token.type.value!r}")

    def identifier(self) -> Node:
        token = self.advance()
        name = token.text
        if name == "inf":
            return Number(math.inf)
        if name == "theta":
            self.expect(TokenType.LBRACKET)
            index_token = self.expect(TokenType.NUMBER)
            if not index_token.text.isdigit() or int(index_token.text) < 1:
                raise self.error("theta index must be a positive integer", index_token)
            self.expect(TokenType.RBRACKET)
            return Param(int(index_token.text))
        if name in ("risk", "risk_src"):
            if name == "risk_src":
                self.require_pair(token, "risk_src")
            self.expect(TokenType.DOT)
            column = self.expect(TokenType.IDENT)
            return Covariate(column.text, source=name == "risk_src")
        if name == "dist":
            return self.dist(token)
        if name == "ind":
            self.expect(TokenType.LPAREN)
            node = self.comparison()
            self.expect(TokenType.RPAREN)
            return node
        if self.current.type is TokenType.LPAREN:
            return self.call(token)
        raise self.error(f"unknown identifier {name!r}", token)

    def dist(self, token: Token) -> Dist:
        self.require_pair(token, "dist")
        self.expect(TokenType.LPAREN)
        first = self.expect(TokenType.IDENT)
        self.expect(TokenType.COMMA)
        second = self.expect(TokenType.IDENT)
        if {first.text, second.text} != _PAIR_SYMBOLS:
            raise self.error("dist() takes (i, k, c) or (k, i, c)", first)
        self.expect(TokenType.COMMA)
        component = self.expect(TokenType.NUMBER)
        if not component.text.isdigit() or int(component.text) < 1:
            raise self.error("distance component must be a positive integer", component)
        self.expect(TokenType.RPAREN)
        return Dist(first.text, second.text, int(component.text))

    def call(self, token: Token) -> Call:
        spec = FUNCTIONS.get(token.text)
        if spec is None:
            raise self.error(f"unknown function {token.text!r}", token)
        self.expect(TokenType.LPAREN)
        args = [self.expr()]
        while self.current.type is TokenType.COMMA:
            self.advance()
            args.append(self.expr())
        self.expect(TokenType.RPAREN)
        if not spec.accepts(len(args)):
            raise self.error(
                f"{spec.name}() takes {spec.describe_arity()} arguments, got {len(args)}",
                token,
            )
        return Call(spec.name, tuple(args))

    def require_pair(self, token: Token, name: str) -> None:
        if self.context is not ExprContext.PAIR:
            raise self.error(f"{name} is only allowed in pair context", token)


def parse_risk_expr(text: str, context: ExprContext | str = ExprContext.SINGLE) -> RiskExpr:
    context = ExprContext(context)
    if not text or not text.strip():
        raise RiskExpressionError("empty expression", offset=0, text=text)
    root = _Parser(text, context).parse()
    indices = sorted({node.index for node in walk(root) if isinstance(node, Param)})
    param_count = indices[-1] if indices else 0
    missing = sorted(set(range(1, param_count + 1)) - set(indices))
    if missing:
        raise RiskExpressionError(
            f"theta indices must be contiguous from 1; missing theta[{missing[0]}]",
            text=text,
        )
    return RiskExpr(root=root, context=context, text=text, param_count=param_count)
