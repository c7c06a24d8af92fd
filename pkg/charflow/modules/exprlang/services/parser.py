"""Recursive-descent parser for the field expression language.

Grammar (lowest to highest precedence):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'x' | 'y' | 'pi' | NAME '(' expr (',' expr)* ')' | '(' expr ')'

so '^' is right-associative and binds tighter than unary minus.
"""

import re
from dataclasses import dataclass
from typing import List

from charflow.core.exceptions import ExprSyntaxError
from charflow.modules.exprlang.services.nodes import (
    CONSTANTS,
    FUNCTIONS,
    VARIABLES,
    BinOp,
    Call,
    Const,
    Expr,
    Neg,
    Num,
    Var,
)

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_PUNCT = {"+", "-", "*", "/", "^", "(", ")", ","}


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    offset: int


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    while i < len(source):
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(source, i)
        if m:
            tokens.append(Token("num", m.group(0), i))
            i = m.end()
            continue
        m = _NAME.match(source, i)
        if m:
            tokens.append(Token("name", m.group(0), i))
            i = m.end()
            continue
        if ch in _PUNCT:
            tokens.append(Token("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(i, f"unexpected character {ch!r}")
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _at(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise ExprSyntaxError(self.current.offset, f"expected {text!r}")
        return self._advance()

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise ExprSyntaxError(0, "empty expression")
        e = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(self.current.offset, f"unexpected {self.current.text!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self._at("+") or self._at("-"):
            op = self._advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self._at("*") or self._at("/"):
            op = self._advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self._at("-"):
            self._advance()
            return Neg(self.unary())
        if self._at("+"):
            self._advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self._at("^"):
            self._advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        tok = self.current
        if tok.kind == "num":
            self._advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self._advance()
            if self._at("("):
                return self._call(tok)
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                raise ExprSyntaxError(tok.offset, f"function {tok.text!r} needs an argument list")
            raise ExprSyntaxError(tok.offset, f"unknown identifier {tok.text!r}")
        if self._at("("):
            self._advance()
            inner = self.expr()
            self._expect(")")
            return inner
        if tok.kind == "end":
            raise ExprSyntaxError(tok.offset, "expected an operand, found end of input")
        raise ExprSyntaxError(tok.offset, f"expected an operand, found {tok.text!r}")

    def _call(self, name: Token) -> Expr:
        if name.text not in FUNCTIONS:
            raise ExprSyntaxError(name.offset, f"unknown function {name.text!r}")
        self._expect("(")
        args = [self.expr()]
        while self._at(","):
            self._advance()
            args.append(self.expr())
        self._expect(")")
        arity, _ = FUNCTIONS[name.text]
        if len(args) != arity:
            raise ExprSyntaxError(
                name.offset, f"{name.text} takes {arity} argument(s), got {len(args)}"
            )
        return Call(name.text, tuple(args))


def parse(source: str) -> Expr:
    """Parse source text into an expression tree; raises ExprSyntaxError at the first error."""
    return _Parser(source).parse()
