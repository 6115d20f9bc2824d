"""
Insertion grammar and validation.

Grammar (whitespace-insensitive)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := INT | prim ['^' INT]
    prim   := 'c' INT '[' INT ']' | 'X' '[' INT ']'

``c<i>[<j>]`` is ElemSym(i, j), ``X[<l>]`` is EulerCross(l) and ``1`` is the
empty insertion.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from hqvi.errors import InsertionParseError, InvalidInsertion
from hqvi.models import ElemSym, EulerCross, Insertion, InsertionTerm, Primitive, ProblemSpec

_TOKEN = re.compile(r"\d+|[cX\[\]\^\*\+\-]")


def _tokenize(text: str) -> List[str]:
    compact = re.sub(r"\s+", "", text)
    tokens, pos = [], 0
    while pos < len(compact):
        match = _TOKEN.match(compact, pos)
        if not match:
            raise InsertionParseError(
                f"Unexpected character {compact[pos]!r} at position {pos} in {text!r}",
                {"input": text, "position": pos},
            )
        tokens.append(match.group())
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            want = expected or "a token"
            raise InsertionParseError(
                f"Expected {want} at token {self.pos} in {self.text!r}, got {token!r}",
                {"input": self.text, "token_index": self.pos},
            )
        self.pos += 1
        return token

    def integer(self) -> int:
        token = self.take()
        if not token.isdigit():
            raise InsertionParseError(
                f"Expected an integer at token {self.pos - 1} in {self.text!r}, got {token!r}",
                {"input": self.text, "token_index": self.pos - 1},
            )
        return int(token)

    def parse(self) -> Insertion:
        if not self.tokens:
            raise InsertionParseError("Empty insertion string", {"input": self.text})
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        terms = [self.term(sign)]
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            terms.append(self.term(sign))
        if self.peek() is not None:
            raise InsertionParseError(
                f"Trailing input {self.peek()!r} in {self.text!r}",
                {"input": self.text, "token_index": self.pos},
            )
        return Insertion(tuple(terms))

    def term(self, sign: int) -> InsertionTerm:
        coefficient, prims = sign, []
        c, p = self.factor()
        coefficient *= c
        prims.extend(p)
        while self.peek() == "*":
            self.take()
            c, p = self.factor()
            coefficient *= c
            prims.extend(p)
        return InsertionTerm(coefficient, tuple(prims))

    def factor(self) -> Tuple[int, List[Primitive]]:
        token = self.peek()
        if token is not None and token.isdigit():
            return self.integer(), []
        prim: Primitive
        if token == "c":
            self.take()
            i = self.integer()
            self.take("[")
            j = self.integer()
            self.take("]")
            prim = ElemSym(i, j)
        elif token == "X":
            self.take()
            self.take("[")
            level = self.integer()
            self.take("]")
            prim = EulerCross(level)
        else:
            raise InsertionParseError(
                f"Expected c<i>[<j>], X[<l>] or an integer in {self.text!r}, got {token!r}",
                {"input": self.text, "token_index": self.pos},
            )
        power = 1
        if self.peek() == "^":
            self.take()
            power = self.integer()
        return 1, [prim] * power


def parse_insertion(text: str) -> Insertion:
    """
    Parse the insertion grammar.

    Raises:
        InsertionParseError: malformed input (code INSERTION_PARSE).
    """
    return _Parser(text).parse()


def validate_insertion(spec: ProblemSpec, insertion: Insertion) -> Optional[int]:
    """
    Check primitive indices against the rank chain and return the insertion degree.

    Raises:
        InvalidInsertion: index out of range or inhomogeneous insertion.
    """
    for prim in insertion.primitives():
        if isinstance(prim, ElemSym):
            if not 1 <= prim.j <= spec.k or not 1 <= prim.i <= spec.rank(prim.j):
                raise InvalidInsertion(
                    f"{prim.to_string()} out of range for ranks {list(spec.ranks)}",
                    {"primitive": prim.to_string()},
                )
        elif not 1 <= prim.level <= spec.k:
            raise InvalidInsertion(
                f"{prim.to_string()} out of range for k={spec.k}",
                {"primitive": prim.to_string()},
            )
    return insertion.degree(spec)
