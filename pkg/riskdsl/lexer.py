from __future__ import annotations

import re
from enum import Enum
from typing import NamedTuple

from core.types import RiskExpressionError


class TokenType(str, Enum):
    NUMBER = "number"
    IDENT = "identifier"
    OP = "operator"
    CMP = "comparison"
    LPAREN = "("
    RPAREN = ")"
    LBRACKET = "["
    RBRACKET = "]"
    COMMA = ","
    DOT = "."
    EOF = "end of input"


class Token(NamedTuple):
    type: TokenType
    text: str
    offset: int


_TOKEN_PATTERNS = (
    (TokenType.NUMBER, r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"),
    (TokenType.IDENT, r"[A-Za-z_][A-Za-z0-9_]*"),
    (TokenType.CMP, r"<=|>=|==|<|>"),
    (TokenType.OP, r"[-+*/^]"),
    (TokenType.LPAREN, r"\("),
    (TokenType.RPAREN, r"\)"),
    (TokenType.LBRACKET, r"\["),
    (TokenType.RBRACKET, r"\]"),
    (TokenType.COMMA, r","),
    (TokenType.DOT, r"\."),
)
_MASTER = re.compile("|".join(f"(?P<{kind.name}>{pattern})" for kind, pattern in _TOKEN_PATTERNS))
_SPACE = re.compile(r"\s+")


def byte_offset(text: str, position: int) -> int:
    return len(text[:position].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while position < len(text):
        space = _SPACE.match(text, position)
        if space:
            position = space.end()
            continue
        match = _MASTER.match(text, position)
        if not match:
            raise RiskExpressionError(
                f"unexpected character {text[position]!r}",
                offset=byte_offset(text, position),
                text=text,
            )
        kind = TokenType[match.lastgroup]
        tokens.append(Token(kind, match.group(), byte_offset(text, position)))
        position = match.end()
    tokens.append(Token(TokenType.EOF, "", byte_offset(text, len(text))))
    return tokens
